"""Regularized partial traces ``eps**s_k * sum_{lambda <= Lambda} F(lambda eps)``.

With ``eps = m log(Lambda) / Lambda`` and ``m > s_0 - s_k`` these converge to
the heat coefficient ``c_k = res_{s=s_k} Gamma(s) zeta(s)`` as the cutoff grows.
Sums run over eigenvalues in ascending order and are correctly rounded
(exact products + ``math.fsum``), so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from specres._summation import exact_dot
from specres.errors import InsufficientData, InvalidCutoff, PoleOfGamma, ScheduleViolation
from specres.filters import F_laplace, Filter
from specres.models import OracleData, Spectrum
from specres.special_functions import gamma, is_gamma_pole


@dataclass(frozen=True)
class EstimateResult:
    cutoff: float
    m: float
    epsilon: float
    estimate: float
    n_terms: int
    oracle: float | None = None
    abs_error: float | None = None
    rel_error: float | None = None

    def to_dict(self) -> dict:
        data = asdict(self)
        return {"lambda": data.pop("cutoff"), **data}


def epsilon_schedule(cutoff: float, m: float) -> float:
    if not cutoff > 1.0 or not math.isfinite(cutoff):
        raise InvalidCutoff(f"cutoff must exceed 1, got {cutoff}")
    if not m > 0.0:
        raise ScheduleViolation(f"m must be positive, got {m}")
    return m * math.log(cutoff) / cutoff


def default_m(filt: Filter) -> float:
    return filt.poles.leading - filt.poles.target + 1.0


def resolve_m(filt: Filter, m: float | None) -> float:
    if m is None:
        return default_m(filt)
    gap = filt.poles.leading - filt.poles.target
    if not m > gap:
        raise ScheduleViolation(f"m = {m} must exceed s_0 - s_k = {gap}")
    return float(m)


def weighted_partial_trace(eigenvalues: np.ndarray, weights: np.ndarray, filt: Filter,
                           cutoff: float, eps: float) -> float:
    """``eps**s_k * sum_{0 < lambda <= cutoff} weight * F(lambda eps)``.

    ``eigenvalues`` must be sorted ascending.
    """
    if not eps > 0.0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    n = np.searchsorted(eigenvalues, cutoff, side="right")
    if n == 0:
        return 0.0
    values = F_laplace(filt, eigenvalues[:n] * eps)
    return eps ** filt.poles.target * exact_dot(weights[:n], values)


def estimate_with_epsilon(spectrum: Spectrum, filt: Filter, cutoff: float, eps: float) -> float:
    return weighted_partial_trace(spectrum.eigenvalues,
                                  spectrum.multiplicities.astype(np.float64),
                                  filt, cutoff, eps)


def oracle_value(oracle: OracleData | None, filt: Filter) -> float | None:
    if oracle is None:
        return None
    k = filt.k
    if len(oracle.poles) <= k:
        return None
    if not np.allclose(oracle.poles[: k + 1], filt.poles.active, rtol=0, atol=1e-12):
        return None
    return oracle.coefficients[k]


def make_result(cutoff: float, m: float, eps: float, estimate: float, n_terms: int,
                oracle: float | None) -> EstimateResult:
    if oracle is None:
        return EstimateResult(cutoff, m, eps, estimate, n_terms)
    abs_error = abs(estimate - oracle)
    rel_error = abs_error / abs(oracle) if oracle != 0.0 else None
    return EstimateResult(cutoff, m, eps, estimate, n_terms, oracle, abs_error, rel_error)


def estimate_coefficient(spectrum: Spectrum, filt: Filter, cutoff: float,
                         m: float | None = None) -> EstimateResult:
    """Heat coefficient ``c_k`` from the spectrum truncated at ``cutoff``.

    ``m`` defaults to ``s_0 - s_k + 1``.  Oracle and error fields are filled
    when the spectrum carries oracle data for the filter's poles.
    """
    m = resolve_m(filt, m)
    eps = epsilon_schedule(cutoff, m)
    value = estimate_with_epsilon(spectrum, filt, cutoff, eps)
    return make_result(cutoff, m, eps, value, spectrum.count(cutoff),
                       oracle_value(spectrum.oracle, filt))


def to_zeta_residue(coefficient: float, s: float) -> float:
    """``res_{s} zeta = c / Gamma(s)``; undefined at nonpositive integers."""
    if is_gamma_pole(s):
        raise PoleOfGamma(
            f"s = {s} is a pole of Gamma: zeta is regular there, report c_k itself"
        )
    return coefficient / gamma(s)


def dixmier_baseline(spectrum: Spectrum, s0: float, cutoff: float) -> float:
    """Logarithmic-trace estimate of ``res_{s=s0} zeta(s)``.

    ``sum_{0 < lambda <= cutoff} mult * lambda**-s0 / log(cutoff)``; multiply by
    ``Gamma(s0)`` to compare against the heat coefficient ``c_0``.
    """
    if not cutoff > 1.0:
        raise InvalidCutoff(f"cutoff must exceed 1, got {cutoff}")
    if not s0 > 0.0:
        raise ValueError(f"s0 must be positive, got {s0}")
    n = np.searchsorted(spectrum.eigenvalues, cutoff, side="right")
    if n == 0:
        return 0.0
    powers = spectrum.eigenvalues[:n] ** (-s0)
    return exact_dot(spectrum.multiplicities[:n].astype(np.float64), powers) / math.log(cutoff)


def sweep(spectrum: Spectrum, filt: Filter, cutoffs: Sequence[float],
          m: float | None = None) -> list[EstimateResult]:
    cutoffs = [float(c) for c in cutoffs]
    if any(c <= 1.0 for c in cutoffs):
        raise InvalidCutoff(f"all cutoffs must exceed 1: {cutoffs}")
    if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
        raise InvalidCutoff(f"cutoffs must be strictly increasing: {cutoffs}")
    return [estimate_coefficient(spectrum, filt, c, m) for c in cutoffs]


def convergence_slope(results: Sequence[EstimateResult]) -> float:
    """Least-squares slope of ``log|abs_error|`` against ``log epsilon``."""
    if len(results) < 3:
        raise InsufficientData(f"need at least 3 results, got {len(results)}")
    if any(r.abs_error is None for r in results):
        raise InsufficientData("every result needs an oracle value")
    if any(r.abs_error == 0.0 for r in results):
        raise InsufficientData("zero error cannot be placed on a log scale")
    x = np.log([r.epsilon for r in results])
    y = np.log([r.abs_error for r in results])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
