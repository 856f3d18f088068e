"""Localized residues ``res_{s=s_k} Gamma(s) tr(h Delta^-s)``.

The localizer ``h`` enters only through its diagonal matrix elements
``<h phi, phi>`` in an orthonormal eigenbasis, so a :class:`WeightedSpectrum`
lists one entry per basis vector: multiplicities are unrolled because ``h``
may distinguish eigenvectors inside an eigenspace.

For a spectral-triple style curvature functional ``a -> R_Lambda(a)`` pick
the cutoff (e.g. a power of ``||D^2||``) and call :func:`estimate_localized`
with the diagonal elements of ``a``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from specres.errors import EmptySpectrum, ParseError
from specres.estimator import (EstimateResult, oracle_value, epsilon_schedule, make_result,
                               resolve_m, weighted_partial_trace)
from specres.filters import Filter
from specres.models import (OracleData, Spectrum, check_cutoff, theta_tail,
                            parse_eigenvalue, read_records)


@dataclass(frozen=True, eq=False)
class WeightedSpectrum:
    eigenvalues: np.ndarray
    weights: np.ndarray
    bound: float | None = None
    description: str = ""
    oracle: OracleData | None = field(default=None)

    def __post_init__(self):
        # Reuses Spectrum's checks on the eigenvalue column.
        eig = Spectrum(self.eigenvalues, np.ones(len(self.eigenvalues), dtype=np.int64)).eigenvalues
        w = np.array(self.weights, dtype=np.float64)
        if w.shape != eig.shape:
            raise ValueError("eigenvalues and weights must have equal length")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        w.flags.writeable = False
        max_w = float(np.max(np.abs(w))) if w.size else 0.0
        bound = max_w if self.bound is None else float(self.bound)
        if bound < max_w:
            raise ValueError(f"bound {bound} is below max |weight| = {max_w}")
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bound", bound)

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def entries(self) -> list[tuple[float, float]]:
        return list(zip(self.eigenvalues.tolist(), self.weights.tolist()))

    def with_weights(self, weights) -> "WeightedSpectrum":
        return WeightedSpectrum(self.eigenvalues, weights, None, self.description)

    @classmethod
    def from_spectrum(cls, spectrum: Spectrum, weight: float = 1.0) -> "WeightedSpectrum":
        """Unroll multiplicities with a constant weight (``h = weight * I``)."""
        eig = np.repeat(spectrum.eigenvalues, spectrum.multiplicities)
        return cls(eig, np.full(eig.size, float(weight)), None, spectrum.description)


def estimate_localized(wspec: WeightedSpectrum, filt: Filter, cutoff: float,
                       m: float | None = None) -> EstimateResult:
    m = resolve_m(filt, m)
    eps = epsilon_schedule(cutoff, m)
    value = weighted_partial_trace(wspec.eigenvalues, wspec.weights, filt, cutoff, eps)
    n_terms = int(np.searchsorted(wspec.eigenvalues, cutoff, side="right"))
    return make_result(cutoff, m, eps, value, n_terms, oracle_value(wspec.oracle, filt))


# Heat coefficients of the circle Laplacian localized to one parity class:
# even modes give (1/2) sqrt(pi/t) - 1, odd modes (1/2) sqrt(pi/t).
CIRCLE_EVEN_ORACLE = OracleData((0.5, 0.0), (0.5 * math.sqrt(math.pi), -1.0))
CIRCLE_ODD_ORACLE = OracleData((0.5, 0.0), (0.5 * math.sqrt(math.pi), 0.0))


def circle_projection_weights(cutoff: float,
                              keep: Literal["even", "odd"] = "even") -> WeightedSpectrum:
    """Circle eigenbasis ``e^{+-inx}`` with ``h`` projecting onto one parity of ``n``."""
    cutoff = check_cutoff(cutoff, 4.0)
    if keep not in ("even", "odd"):
        raise ValueError(f"keep must be 'even' or 'odd', got {keep!r}")
    n = np.repeat(np.arange(1, math.isqrt(math.floor(cutoff)) + 1, dtype=np.int64), 2)
    parity = 0 if keep == "even" else 1
    weights = (n % 2 == parity).astype(np.float64)
    oracle = CIRCLE_EVEN_ORACLE if keep == "even" else CIRCLE_ODD_ORACLE
    return WeightedSpectrum((n * n).astype(np.float64), weights, 1.0,
                            f"circle, projection onto {keep} modes", oracle)


def circle_projection_heat_trace(t: float, keep: str = "even") -> float:
    """Brute-force ``tr h e^{-t Delta}`` for the parity projection."""
    if keep == "even":
        return 2.0 * theta_tail(t, 4.0)
    return 2.0 * (theta_tail(t) - theta_tail(t, 4.0))


def load_weighted_spectrum(path) -> WeightedSpectrum:
    """Read ``eigenvalue,weight`` lines with an optional ``#bound=<float>`` header."""
    records, headers = read_records(path)
    eigs, weights = [], []
    for lineno, first, second in records:
        eigs.append(parse_eigenvalue(lineno, first))
        try:
            w = float(second)
        except ValueError:
            raise ParseError(lineno, f"weight {second!r} is not a number") from None
        if not math.isfinite(w):
            raise ParseError(lineno, f"weight {second!r} is not finite")
        weights.append(w)
    if not eigs:
        raise EmptySpectrum(f"{path}: no eigenvalues")
    bound = None
    if "bound" in headers:
        lineno, text = headers["bound"]
        try:
            bound = float(text)
        except ValueError:
            raise ParseError(lineno, f"bound {text!r} is not a number") from None
        if not bound >= max(abs(w) for w in weights):
            raise ParseError(lineno, f"bound {bound} is below the largest |weight|")
    order = np.argsort(eigs, kind="stable")
    return WeightedSpectrum(np.asarray(eigs)[order], np.asarray(weights)[order], bound,
                            f"file {path}")
