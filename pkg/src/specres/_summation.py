"""Order-independent, correctly rounded weighted sums.

Products are split exactly (Veltkamp/Dekker) into ``hi + lo`` so that the
final ``math.fsum`` sees the exact value of every ``w_i * v_i``.  The result
is therefore the correctly rounded value of the exact dot product, which makes
``sum(2 * v)`` and ``sum(v) + sum(v)`` agree bit for bit and keeps results
deterministic regardless of chunking.
"""

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_product(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(p, e)`` with ``p = fl(a*b)`` and ``p + e == a*b`` exactly."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    p = a * b
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    e = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo
    return p, e


def exact_dot(weights, values) -> float:
    """Correctly rounded ``sum(weights * values)``."""
    p, e = two_product(weights, values)
    return math.fsum(np.concatenate((p.ravel(), e.ravel())).tolist())
