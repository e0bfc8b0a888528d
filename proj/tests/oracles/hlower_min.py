"""Independent minimum of |H w|/w over residual-middle samples.

Reads <name>.measure.json and <name>.tree.json written by `weightlab build`.
Coordinates are scaled to integers so every difference is exact in double;
H(x) = sum_i d_i log|(b_i - x)/(a_i - x)| is summed with numpy.
"""
import json
import sys
from fractions import Fraction

import numpy as np


def main(measure_path, tree_path, samples):
    pieces = json.load(open(measure_path))["pieces"]
    tree = json.load(open(tree_path))
    a = [Fraction(p["a"]) for p in pieces]
    b = [Fraction(p["b"]) for p in pieces]
    d = np.array([float(Fraction(p["d"])) for p in pieces])
    xs, dens = [], []
    for gen in tree["generations"]:
        for r in gen["residuals"]:
            lo, hi = Fraction(r["I"][0]), Fraction(r["I"][1])
            third = (hi - lo) / 3
            m_lo = lo + third
            step = third / samples
            xs.extend(m_lo + step * Fraction(2 * s + 1, 2) for s in range(samples))
    denom = 1
    for v in a + b + xs:
        denom = max(denom, v.denominator)
    assert all(denom % v.denominator == 0 for v in a + b + xs)
    assert denom < 2**53
    A = np.array([float(v * denom) for v in a])
    B = np.array([float(v * denom) for v in b])
    X = np.array([float(v * denom) for v in xs])
    idx = np.searchsorted(A, X, side="right") - 1
    density = d[idx]
    best = np.inf
    chunk = 256
    for s in range(0, len(X), chunk):
        x = X[s:s + chunk, None]
        h = (np.log(np.abs((B - x) / (A - x))) * d).sum(axis=1)
        best = min(best, float(np.min(np.abs(h) / density[s:s + chunk])))
    print(f"{best:.12f}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2], int(sys.argv[3]) if len(sys.argv) > 3 else 16)
