import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specres.errors import EmptySpectrum, NonpositiveEigenvalue, ParseError, ScheduleViolation
from specres.estimator import epsilon_schedule, estimate_coefficient, weighted_partial_trace
from specres.filters import F_laplace, PoleSet, build_filter
from specres.localized import (CIRCLE_EVEN_ORACLE, CIRCLE_ODD_ORACLE, WeightedSpectrum,
                               circle_projection_heat_trace, circle_projection_weights,
                               estimate_localized, load_weighted_spectrum)
from specres.models import MODELS, circle_spectrum, fit_heat_coefficients

SQRT_PI = math.sqrt(math.pi)


@pytest.fixture(scope="module")
def k0_half():
    return build_filter(PoleSet.of([0.5, 0.0], 0))


def test_projection_entries():
    ws = circle_projection_weights(5, "even")
    assert ws.entries == [(1.0, 0.0), (1.0, 0.0), (4.0, 1.0), (4.0, 1.0)]
    assert ws.bound == 1.0


def test_projection_odd_entries():
    assert circle_projection_weights(5, "odd").entries == [(1.0, 1.0), (1.0, 1.0),
                                                          (4.0, 0.0), (4.0, 0.0)]


def test_projection_rejects():
    with pytest.raises(ValueError):
        circle_projection_weights(3.9)
    with pytest.raises(ValueError):
        circle_projection_weights(100, "both")


@pytest.mark.parametrize("keep, oracle", [("even", CIRCLE_EVEN_ORACLE), ("odd", CIRCLE_ODD_ORACLE)])
def test_projection_oracle_fit(keep, oracle):
    fit = fit_heat_coefficients(lambda t: circle_projection_heat_trace(t, keep),
                                oracle.poles, (1e-4, 1e-5))
    assert fit == pytest.approx(oracle.coefficients, abs=1e-6)


def test_projection_heat_trace_direct_sum():
    t = 0.01
    even = math.fsum(2.0 * math.exp(-t * n * n) for n in range(2, 2000, 2))
    odd = math.fsum(2.0 * math.exp(-t * n * n) for n in range(1, 2000, 2))
    assert circle_projection_heat_trace(t, "even") == pytest.approx(even, rel=1e-13)
    assert circle_projection_heat_trace(t, "odd") == pytest.approx(odd, rel=1e-13)


def test_even_projection_leading(k0_half):
    r = estimate_localized(circle_projection_weights(1e8), k0_half, 1e8)
    assert r.oracle == pytest.approx(0.5 * SQRT_PI)
    assert r.rel_error <= 0.02


def test_zero_weights(k0_half):
    ws = WeightedSpectrum.from_spectrum(circle_spectrum(1e4), 0.0)
    assert estimate_localized(ws, k0_half, 1e4).estimate == 0.0


@pytest.mark.parametrize("name", list(MODELS))
@pytest.mark.parametrize("k", [0, 1])
def test_identity_reduction_bit_exact(name, k):
    spec = MODELS[name](1e5)
    filt = build_filter(spec.oracle.pole_set(k))
    plain = estimate_coefficient(spec, filt, 1e5)
    local = estimate_localized(WeightedSpectrum.from_spectrum(spec), filt, 1e5)
    assert local.estimate == plain.estimate
    assert local.n_terms == plain.n_terms


def test_schedule_violation(k0_half):
    with pytest.raises(ScheduleViolation):
        estimate_localized(circle_projection_weights(100), k0_half, 100, m=0.0)


def test_bound_validation():
    with pytest.raises(ValueError):
        WeightedSpectrum([1.0, 2.0], [0.5, -2.0], bound=1.0)
    assert WeightedSpectrum([1.0, 2.0], [0.5, -2.0]).bound == 2.0


def test_weights_must_be_finite():
    with pytest.raises(ValueError):
        WeightedSpectrum([1.0], [math.nan])


def test_with_weights_keeps_eigenvalues():
    ws = circle_projection_weights(30).with_weights(np.arange(10.0))
    assert ws.eigenvalues.tolist() == [1, 1, 4, 4, 9, 9, 16, 16, 25, 25]
    assert ws.bound == 9.0


@st.composite
def weighted_pairs(draw, max_size=40):
    n = draw(st.integers(1, max_size))
    eig = sorted(draw(st.lists(st.floats(1e-3, 1e6), min_size=n, max_size=n)))
    w = st.lists(st.floats(-5.0, 5.0), min_size=n, max_size=n)
    return np.array(eig), np.array(draw(w)), np.array(draw(w))


@given(weighted_pairs(), st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(1e-6, 1e-2),
       st.floats(10.0, 1e6))
def test_linearity(data, alpha, beta, eps, cutoff):
    filt = build_filter(PoleSet.of([0.5, 0.0], 0))
    eig, u, v = data
    lhs = weighted_partial_trace(eig, alpha * u + beta * v, filt, cutoff, eps)
    rhs = (alpha * weighted_partial_trace(eig, u, filt, cutoff, eps)
           + beta * weighted_partial_trace(eig, v, filt, cutoff, eps))
    scale = (abs(alpha) * weighted_partial_trace(eig, np.abs(u), filt, cutoff, eps)
             + abs(beta) * weighted_partial_trace(eig, np.abs(v), filt, cutoff, eps))
    # relative to the magnitude of the summands, since lhs may cancel to ~0
    assert abs(lhs - rhs) <= 1e-12 * max(scale, abs(lhs), 1e-300)


@given(weighted_pairs(), st.floats(1.5, 1e6))
def test_boundedness(data, cutoff):
    eig, u, _ = data
    filt = build_filter(PoleSet.of([1.0, 0.0], 1))
    ws = WeightedSpectrum(eig, u)
    r = estimate_localized(ws, filt, cutoff)
    eps = epsilon_schedule(cutoff, r.m)
    kept = eig[eig <= cutoff]
    envelope = ws.bound * eps**filt.poles.target * math.fsum(np.abs(F_laplace(filt, kept * eps)))
    assert abs(r.estimate) <= envelope * (1 + 1e-12)


class TestLoadWeighted:
    def write(self, tmp_path, text):
        path = tmp_path / "weights.txt"
        path.write_text(text, encoding="utf-8")
        return path

    def test_basic(self, tmp_path):
        ws = load_weighted_spectrum(self.write(tmp_path, "1,0.5\n4,1.0\n"))
        assert ws.entries == [(1.0, 0.5), (4.0, 1.0)]
        assert ws.bound == 1.0

    def test_sorted(self, tmp_path):
        ws = load_weighted_spectrum(self.write(tmp_path, "4,1\n1,-0.25\n"))
        assert ws.entries == [(1.0, -0.25), (4.0, 1.0)]
        assert ws.bound == 1.0

    def test_repeated_eigenvalues_are_kept(self, tmp_path):
        ws = load_weighted_spectrum(self.write(tmp_path, "1,1\n1,0\n"))
        assert ws.entries == [(1.0, 1.0), (1.0, 0.0)]

    def test_zero_eigenvalue(self, tmp_path):
        with pytest.raises(NonpositiveEigenvalue):
            load_weighted_spectrum(self.write(tmp_path, "0,1\n"))

    def test_bound_header(self, tmp_path):
        ws = load_weighted_spectrum(self.write(tmp_path, "#bound=3.5\n1,0.5\n"))
        assert ws.bound == 3.5

    def test_bound_header_too_small(self, tmp_path):
        with pytest.raises(ParseError) as info:
            load_weighted_spectrum(self.write(tmp_path, "1,0.5\n#bound=0.1\n"))
        assert info.value.line == 2

    def test_empty(self, tmp_path):
        with pytest.raises(EmptySpectrum):
            load_weighted_spectrum(self.write(tmp_path, "# header only\n"))

    @pytest.mark.parametrize("text, line", [("1,x\n", 1), ("1,0.5\n2\n", 2), ("1,inf\n", 1),
                                            ("#bound=big\n1,1\n", 1)])
    def test_parse_errors(self, tmp_path, text, line):
        with pytest.raises(ParseError) as info:
            load_weighted_spectrum(self.write(tmp_path, text))
        assert info.value.line == line
