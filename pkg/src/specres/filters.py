"""Moment-vanishing filters and their Laplace transforms.

A filter is a finite combination of shifted exponentials

    f(t) = sum_j w_j [t >= a_j] exp(-t / a_j),        a_j >= 1,

whose Mellin moments ``int t**(-s) f(t) dt`` vanish at the poles above the
target pole ``s_k`` and equal one at ``s_k``.  Each basis function has the
closed-form moment ``a**(1-s) Gamma(1-s, 1)`` and Laplace transform
``a exp(-1 - a x) / (1 + a x)``, so building a filter is a small linear solve.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate

from specres.errors import IllConditioned, InvalidPoles, InvalidScales, QuadratureFailure
from specres.special_functions import upper_gamma

MIN_POLE_GAP = 1e-6
COND_LIMIT = 1e12
QUAD_TOL = 1e-11


@dataclass(frozen=True)
class PoleSet:
    """Decreasing heat-spectrum prefix ``s_0 > s_1 > ...`` and a target index."""

    poles: tuple[float, ...]
    k: int

    def __post_init__(self):
        poles = tuple(float(s) for s in self.poles)
        object.__setattr__(self, "poles", poles)
        if not poles:
            raise InvalidPoles("at least one pole is required")
        if not all(math.isfinite(s) for s in poles):
            raise InvalidPoles(f"poles must be finite: {poles}")
        for hi, lo in zip(poles, poles[1:]):
            if hi - lo < MIN_POLE_GAP:
                raise InvalidPoles(
                    f"poles must be strictly decreasing with gaps >= {MIN_POLE_GAP}: {poles}"
                )
        if not 0 <= self.k < len(poles):
            raise InvalidPoles(f"k={self.k} outside 0..{len(poles) - 1}")

    @classmethod
    def of(cls, poles: Sequence[float], k: int | None = None) -> "PoleSet":
        poles = tuple(poles)
        return cls(poles, len(poles) - 1 if k is None else k)

    @property
    def leading(self) -> float:
        return self.poles[0]

    @property
    def target(self) -> float:
        return self.poles[self.k]

    @property
    def active(self) -> tuple[float, ...]:
        """Poles ``s_0 .. s_k`` that the filter constrains."""
        return self.poles[: self.k + 1]


@dataclass(frozen=True)
class Filter:
    poles: PoleSet
    scales: tuple[float, ...]
    weights: tuple[float, ...]
    # k-th moment of the filter rescaled to leading weight 1, i.e. the value
    # the classical closed-form construction divides by.
    normalization: float

    @property
    def k(self) -> int:
        return self.poles.k

    def to_dict(self) -> dict:
        return {
            "poles": list(self.poles.poles),
            "k": self.poles.k,
            "scales": list(self.scales),
            "weights": list(self.weights),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Filter":
        """Rebuild a filter from :meth:`to_dict` output.

        Stored weights are used verbatim, so a JSON round trip reproduces the
        original estimates exactly.  Without weights the filter is rebuilt.
        """
        poles = PoleSet(tuple(data["poles"]), int(data["k"]))
        scales = data.get("scales")
        if "weights" not in data:
            return build_filter(poles, scales)
        scales = _check_scales(scales, poles.k + 1)
        weights = tuple(float(w) for w in data["weights"])
        if len(weights) != len(scales):
            raise InvalidScales("weights and scales differ in length")
        return cls(poles, scales, weights, 1.0 / weights[0])


def _check_scales(scales, n: int) -> tuple[float, ...]:
    scales = tuple(float(a) for a in scales)
    if len(scales) != n:
        raise InvalidScales(f"need {n} scales for k={n - 1}, got {len(scales)}")
    if any(not math.isfinite(a) or a < 1.0 for a in scales):
        raise InvalidScales(f"scales must be finite and >= 1: {scales}")
    ordered = tuple(sorted(scales))
    if any(b == a for a, b in zip(ordered, ordered[1:])):
        raise InvalidScales(f"scales must be distinct: {scales}")
    return ordered


def default_scales(k: int) -> tuple[float, ...]:
    return tuple(2.0**j for j in range(k + 1))


def basis_moment(a: float, s: float) -> float:
    """``int_0^inf t**(-s) [t >= a] exp(-t/a) dt = a**(1-s) Gamma(1-s, 1)``."""
    if a < 1.0:
        raise InvalidScales(f"scale must be >= 1, got {a}")
    return a ** (1.0 - s) * upper_gamma(1.0 - s, 1.0)


def moment_matrix(poles: Sequence[float], scales: Sequence[float]) -> np.ndarray:
    return np.array([[basis_moment(a, s) for a in scales] for s in poles])


def build_filter(poles: PoleSet, scales: Sequence[float] | None = None,
                 cond_limit: float = COND_LIMIT) -> Filter:
    """Solve ``sum_j w_j a_j**(1-s_i) Gamma(1-s_i, 1) = delta_ik`` for the weights.

    Scales default to ``2**j``; with two poles and scales (1, 2) this is the
    classical second-pole filter.
    """
    n = poles.k + 1
    scales = default_scales(poles.k) if scales is None else _check_scales(scales, n)
    matrix = moment_matrix(poles.active, scales)
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditioned(
            f"moment matrix condition number {cond:.3e} exceeds {cond_limit:.0e}"
        )
    rhs = np.zeros(n)
    rhs[-1] = 1.0
    weights = np.linalg.solve(matrix, rhs)
    return Filter(poles, scales, tuple(float(w) for w in weights), float(1.0 / weights[0]))


def basis_laplace(a: float, x):
    """Laplace transform of ``[t >= a] exp(-t/a)`` at ``x >= 0``."""
    x = np.asarray(x, dtype=np.float64)
    ax = a * x
    return a * np.exp(-1.0 - ax) / (1.0 + ax)


def f_time(filt: Filter, t):
    t = np.asarray(t, dtype=np.float64)
    out = np.zeros_like(t)
    for a, w in zip(filt.scales, filt.weights):
        out = out + np.where(t >= a, w * np.exp(-t / a), 0.0)
    return out if out.ndim else float(out)


def F_laplace(filt: Filter, x):
    """``F(x) = sum_j w_j a_j exp(-1 - a_j x) / (1 + a_j x)``; 0 on underflow."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    for a, w in zip(filt.scales, filt.weights):
        out = out + w * basis_laplace(a, x)
    return out if out.ndim else float(out)


def moment_residual(filt: Filter) -> float:
    """``max_i |sum_j w_j basis_moment(a_j, s_i) - delta_ik|``."""
    matrix = moment_matrix(filt.poles.active, filt.scales)
    target = np.zeros(filt.k + 1)
    target[-1] = 1.0
    return float(np.max(np.abs(matrix @ np.asarray(filt.weights) - target)))


def moment_quadrature(filt: Filter, s: float, tol: float = QUAD_TOL) -> float:
    """Adaptive quadrature of ``int t**(-s) f(t) dt``; independent of ``basis_moment``."""
    edges = list(filt.scales) + [math.inf]
    total = 0.0
    err_total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, err = integrate.quad(
                    lambda t: t ** (-s) * f_time(filt, t), lo, hi,
                    epsabs=tol / 10, epsrel=1e-13, limit=400,
                )
            except integrate.IntegrationWarning as exc:
                raise QuadratureFailure(f"moment at s={s} on [{lo}, {hi}]: {exc}") from exc
        total += val
        err_total += err
    if err_total > tol:
        raise QuadratureFailure(f"moment at s={s}: error estimate {err_total:.2e} > {tol:.0e}")
    return total
