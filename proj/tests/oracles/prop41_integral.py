"""Independent value of the integral of |H w|^p w^(1-p) over supp w.

Reads a <name>.measure.json written by `weightlab build` and integrates each
piece with scipy's QUADPACK routine, evaluating H from the closed form in
coordinates scaled to integers.
"""
import json
import sys
from fractions import Fraction

import numpy as np
from scipy.integrate import quad


def main(measure_path, exponents):
    pieces = json.load(open(measure_path))["pieces"]
    a = [Fraction(p["a"]) for p in pieces]
    b = [Fraction(p["b"]) for p in pieces]
    d = np.array([float(Fraction(p["d"])) for p in pieces])
    denom = 1
    for v in a + b:
        denom = max(denom, v.denominator)
    A = np.array([float(v * denom) for v in a])
    B = np.array([float(v * denom) for v in b])

    def integrand(p, base, sign):
        # x = base + sign * t; offsets to the breakpoints are exact integers,
        # so the singular logarithms near base carry no cancellation
        oa, ob = A - base, B - base

        def g(t):
            h = float((np.log(np.abs((ob - sign * t) / (oa - sign * t))) * d).sum())
            return abs(h) ** p

        return g

    for p in exponents:
        total = 0.0
        err = 0.0
        for i in range(len(pieces)):
            # scaled coordinates, dx = dt / denom; each half integrated from its endpoint
            half = 0.5 * (B[i] - A[i])
            for base, sign in ((A[i], 1.0), (B[i], -1.0)):
                val, e = quad(integrand(p, base, sign), 0.0, half, limit=400, epsabs=0.0, epsrel=1e-11)
                total += d[i] ** (1.0 - p) * val / denom
                err += d[i] ** (1.0 - p) * e / denom
        print(f"p={p} integral={total:.12f} quad_error={err:.2e}")


if __name__ == "__main__":
    main(sys.argv[1], [float(Fraction(s)) for s in sys.argv[2:]] or [1.5, 2.0, 3.0])
