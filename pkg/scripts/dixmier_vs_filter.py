#!/usr/bin/env python3
"""Compare the filtered estimate of the leading coefficient with the
logarithmic (Dixmier-type) baseline on the circle and the sphere."""

from __future__ import annotations

import argparse
import math

import numpy as np

from specres.models import MODELS
from specres import build_filter, dixmier_baseline, estimate_coefficient, gamma


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--top", type=float, default=1e8, help="largest cutoff")
    args = parser.parse_args()
    cutoffs = np.geomspace(1e3, args.top, int(round(math.log10(args.top / 1e3))) + 1)
    print(f"{'model':7s} {'lambda':>8s} {'filter rel':>12s} {'baseline rel':>13s}")
    for name in ("circle", "sphere"):
        spec = MODELS[name](args.top)
        s0, c0 = spec.oracle.poles[0], spec.oracle.coefficients[0]
        filt = build_filter(spec.oracle.pole_set(0))
        for cutoff in cutoffs:
            r = estimate_coefficient(spec, filt, cutoff)
            base = gamma(s0) * dixmier_baseline(spec, s0, cutoff)
            print(f"{name:7s} {cutoff:8.0e} {r.rel_error:12.3e} {abs(base - c0) / abs(c0):13.3e}")


if __name__ == "__main__":
    main()
