"""Model spectra with known heat coefficients, and spectrum files.

The three generators are Laplacians with the zero mode removed:

==========  =======================  ==========  =================
model       eigenvalues              poles       heat coefficients
==========  =======================  ==========  =================
circle      n**2, mult 2             (1/2, 0)    (sqrt(pi), -1)
torus2      p**2 + q**2              (1, 0)      (pi, -1)
sphere      l(l+1), mult 2l+1        (1, 0)      (1, -2/3)
==========  =======================  ==========  =================

The tabulated coefficients are cross-checked against a brute-force fit of the
heat trace (:func:`fit_heat_coefficients`), which never sees the tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from specres.errors import EmptySpectrum, InvalidCutoff, NonpositiveEigenvalue, ParseError
from specres.filters import PoleSet

# Terms with exponent beyond this contribute < e**-50 relative to the sum.
_HEAT_EXPONENT_CUTOFF = 50.0
_TORUS_CHUNK = 4_000_000


@dataclass(frozen=True)
class OracleData:
    poles: tuple[float, ...]
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if len(self.poles) != len(self.coefficients):
            raise ValueError("poles and coefficients must have the same length")
        PoleSet.of(self.poles)  # validates ordering

    def pole_set(self, k: int | None = None) -> PoleSet:
        return PoleSet.of(self.poles, k)


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Positive eigenvalues in nondecreasing order with multiplicities."""

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    description: str = ""
    oracle: OracleData | None = field(default=None)

    def __post_init__(self):
        eig = _frozen(self.eigenvalues, np.float64)
        mult = _frozen(self.multiplicities, np.int64)
        if eig.ndim != 1 or eig.shape != mult.shape:
            raise ValueError("eigenvalues and multiplicities must be 1-d and of equal length")
        if eig.size and not np.all(np.isfinite(eig)):
            raise ValueError("eigenvalues must be finite")
        if eig.size and eig[0] <= 0.0:
            raise NonpositiveEigenvalue(float(eig[0]))
        if np.any(np.diff(eig) < 0):
            raise ValueError("eigenvalues must be nondecreasing")
        if np.any(mult <= 0):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "multiplicities", mult)

    def __len__(self) -> int:
        return int(self.eigenvalues.size)

    @property
    def entries(self) -> list[tuple[float, int]]:
        return list(zip(self.eigenvalues.tolist(), self.multiplicities.tolist()))

    def count(self, cutoff: float) -> int:
        """Number of eigenvalues in ``(0, cutoff]`` counted with multiplicity."""
        n = np.searchsorted(self.eigenvalues, cutoff, side="right")
        return int(self.multiplicities[:n].sum())

    def truncate(self, cutoff: float) -> "Spectrum":
        n = np.searchsorted(self.eigenvalues, cutoff, side="right")
        return Spectrum(self.eigenvalues[:n], self.multiplicities[:n],
                        self.description, self.oracle)

    def scaled(self, c: float) -> "Spectrum":
        return Spectrum(self.eigenvalues * c, self.multiplicities,
                        f"{self.description} scaled by {c}", None)


def check_cutoff(cutoff: float, minimum: float) -> float:
    cutoff = float(cutoff)
    if not math.isfinite(cutoff) or cutoff < minimum:
        raise InvalidCutoff(f"cutoff must be >= {minimum}, got {cutoff}")
    return cutoff


CIRCLE_ORACLE = OracleData((0.5, 0.0), (math.sqrt(math.pi), -1.0))
TORUS2_ORACLE = OracleData((1.0, 0.0), (math.pi, -1.0))
SPHERE_ORACLE = OracleData((1.0, 0.0), (1.0, -2.0 / 3.0))


def circle_spectrum(cutoff: float) -> Spectrum:
    cutoff = check_cutoff(cutoff, 1.0)
    n = np.arange(1, math.isqrt(math.floor(cutoff)) + 1, dtype=np.int64)
    return Spectrum((n * n).astype(np.float64), np.full(n.size, 2),
                    "circle Laplacian, zero mode removed", CIRCLE_ORACLE)


def _merge_counts(values: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    uniq, inverse = np.unique(values, return_inverse=True)
    return uniq, np.bincount(inverse, weights=counts).astype(np.int64)


def torus2_spectrum(cutoff: float) -> Spectrum:
    """Flat square torus R^2 / (2 pi Z)^2: eigenvalues p^2 + q^2 != 0."""
    cutoff = check_cutoff(cutoff, 1.0)
    top = math.floor(cutoff)
    radius = math.isqrt(top)
    # Quadrant p, q >= 0 with symmetry weights; (0, 0) skipped.
    acc_vals = np.empty(0, dtype=np.int64)
    acc_counts = np.empty(0, dtype=np.int64)
    chunk_vals, chunk_counts, chunk_size = [], [], 0
    for p in range(radius + 1):
        q = np.arange(1 if p == 0 else 0, math.isqrt(top - p * p) + 1, dtype=np.int64)
        chunk_vals.append(p * p + q * q)
        chunk_counts.append(np.where(q > 0, 2, 1) * (2 if p > 0 else 1))
        chunk_size += q.size
        if chunk_size >= _TORUS_CHUNK or p == radius:
            vals = np.concatenate([acc_vals, *chunk_vals])
            counts = np.concatenate([acc_counts, *chunk_counts])
            acc_vals, acc_counts = _merge_counts(vals, counts)
            chunk_vals, chunk_counts, chunk_size = [], [], 0
    return Spectrum(acc_vals.astype(np.float64), acc_counts,
                    "flat square 2-torus Laplacian, zero mode removed", TORUS2_ORACLE)


def sphere_spectrum(cutoff: float) -> Spectrum:
    cutoff = check_cutoff(cutoff, 2.0)
    top = math.floor(cutoff)
    lmax = (math.isqrt(1 + 4 * top) - 1) // 2
    ell = np.arange(1, lmax + 1, dtype=np.int64)
    return Spectrum((ell * (ell + 1)).astype(np.float64), 2 * ell + 1,
                    "unit round 2-sphere Laplacian, zero mode removed", SPHERE_ORACLE)


MODELS: dict[str, Callable[[float], Spectrum]] = {
    "circle": circle_spectrum,
    "torus2": torus2_spectrum,
    "sphere": sphere_spectrum,
}


# -- brute-force heat traces -------------------------------------------------

def theta_tail(t: float, scale: float = 1.0) -> float:
    """``sum_{n>=1} exp(-scale t n^2)``, summed until negligible."""
    nmax = math.isqrt(int(_HEAT_EXPONENT_CUTOFF / (scale * t))) + 2
    n = np.arange(1, nmax + 1, dtype=np.float64)
    return math.fsum(np.exp(-scale * t * n * n).tolist())


def circle_heat_trace(t: float) -> float:
    return 2.0 * theta_tail(t)


def torus2_heat_trace(t: float) -> float:
    theta = 1.0 + 2.0 * theta_tail(t)
    return theta * theta - 1.0


def sphere_heat_trace(t: float) -> float:
    lmax = math.isqrt(int(_HEAT_EXPONENT_CUTOFF / t)) + 2
    ell = np.arange(1, lmax + 1, dtype=np.float64)
    return math.fsum(((2 * ell + 1) * np.exp(-t * ell * (ell + 1))).tolist())


HEAT_TRACES: dict[str, Callable[[float], float]] = {
    "circle": circle_heat_trace,
    "torus2": torus2_heat_trace,
    "sphere": sphere_heat_trace,
}

FIT_TIMES: dict[str, tuple[float, float]] = {
    "circle": (1e-3, 1e-4),
    "torus2": (1e-3, 1e-4),
    "sphere": (1e-3, 1e-4),
}


def fit_heat_coefficients(trace: Callable[[float], float], poles: Sequence[float],
                          times: Sequence[float]) -> tuple[float, ...]:
    """Least-squares fit of ``trace(t) ~ sum_i c_i t**(-s_i)`` at the given times."""
    times = np.asarray(times, dtype=np.float64)
    design = np.power.outer(times, -np.asarray(poles, dtype=np.float64))
    rhs = np.array([trace(float(t)) for t in times])
    coeffs, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    return tuple(float(c) for c in coeffs)


# -- spectrum files ----------------------------------------------------------

def read_records(path) -> tuple[list[tuple[int, str, str]], dict[str, tuple[int, str]]]:
    """Split a two-column text file into ``(line, first, second)`` records.

    Lines starting with ``#`` are comments, except ``#key=value`` headers,
    which are collected separately as ``key -> (line, value)``.  Blank lines
    are skipped.
    """
    records, headers = [], {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body and " " not in body.split("=", 1)[0]:
                key, value = body.split("=", 1)
                headers[key.strip()] = (lineno, value.strip())
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise ParseError(lineno, f"expected 2 comma-separated fields, got {len(fields)}")
        records.append((lineno, fields[0], fields[1]))
    return records, headers


def parse_eigenvalue(lineno: int, token: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"eigenvalue {token!r} is not a number") from None
    if not math.isfinite(value):
        raise ParseError(lineno, f"eigenvalue {token!r} is not finite")
    if value <= 0.0:
        raise NonpositiveEigenvalue(value, lineno)
    return value


def load_spectrum(path, oracle: OracleData | None = None) -> Spectrum:
    """Read ``eigenvalue,multiplicity`` lines; sort and merge duplicates."""
    records, _ = read_records(path)
    eigs, mults = [], []
    for lineno, first, second in records:
        eigs.append(parse_eigenvalue(lineno, first))
        try:
            mult = int(second)
        except ValueError:
            raise ParseError(lineno, f"multiplicity {second!r} is not an integer") from None
        if mult <= 0:
            raise ParseError(lineno, f"multiplicity must be positive, got {mult}")
        mults.append(mult)
    if not eigs:
        raise EmptySpectrum(f"{path}: no eigenvalues")
    values, counts = _merge_counts(np.array(eigs), np.array(mults, dtype=np.int64))
    return Spectrum(values, counts, f"file {path}", oracle)
