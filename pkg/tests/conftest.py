import math

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st
from scipy import integrate

from specres.filters import PoleSet, f_time

settings.register_profile("specres", deadline=None, max_examples=100)
settings.load_profile("specres")


def laplace_quadrature(filt, x: float) -> float:
    """Numeric Laplace transform of ``f_time`` piece by piece (independent of F_laplace)."""
    edges = list(filt.scales) + [math.inf]
    total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        val, _ = integrate.quad(lambda t: math.exp(-x * t) * f_time(filt, t), lo, hi,
                                epsabs=1e-13, epsrel=1e-13, limit=400)
        total += val
    return total


def upper_gamma_quadrature(a: float, x: float) -> float:
    """``int_x^{x+60} t**(a-1) e**-t dt`` via t = e**u, which keeps the integrand smooth."""
    val, _ = integrate.quad(lambda u: math.exp(a * u - math.exp(u)),
                            math.log(x), math.log(x + 60.0),
                            epsabs=0.0, epsrel=1e-13, limit=400)
    return val


@st.composite
def pole_sets(draw, max_len: int = 4, min_gap: float = 0.3, bound: float = 3.0):
    """Decreasing poles in [-bound, bound] with well separated entries."""
    n = draw(st.integers(1, max_len))
    top = draw(st.floats(-bound + (n - 1) * min_gap, bound))
    poles = [top]
    for _ in range(n - 1):
        room = poles[-1] - min_gap - (-bound)
        gap = min_gap + draw(st.floats(0.0, max(0.0, min(1.5, room))))
        poles.append(poles[-1] - gap)
    k = draw(st.integers(0, n - 1))
    return PoleSet.of(poles, k)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
