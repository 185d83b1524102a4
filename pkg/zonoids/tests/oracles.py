"""
Independent reference computations for the test-suite.

Deliberately naive: cofactor expansion, sign enumeration, sampling and
polynomial interpolation, sharing no code with the engine beyond body
construction.
"""
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np


def cofactor_det(matrix):
    rows = [[Fraction(x) for x in row] for row in matrix]
    if len(rows) == 1:
        return rows[0][0]
    total = Fraction(0)
    for j, a in enumerate(rows[0]):
        if a == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        total += (-1) ** j * a * cofactor_det(minor)
    return total


def sign_enumeration_support(zonotope, x):
    """max over sign vectors e of <sum e_i lambda_i u_i, x>."""
    best = None
    for signs in product((-1, 1), repeat=len(zonotope.generators)):
        value = sum(s * w * sum(a * b for a, b in zip(u, x))
                    for s, (u, w) in zip(signs, zonotope.generators))
        best = value if best is None else max(best, value)
    return best


def monte_carlo_volume(contains, radius, dim, samples, rng):
    """Volume of a body inside [-radius, radius]^dim by uniform sampling."""
    points = rng.uniform(-radius, radius, size=(samples, dim))
    inside = np.count_nonzero([contains(p) for p in points])
    return (2 * radius) ** dim * inside / samples


def solve_vandermonde(xs, ys):
    """Coefficients c with sum_k c_k x^k = y at every x, exactly."""
    n = len(xs)
    rows = [[Fraction(x) ** k for k in range(n)] + [Fraction(y)] for x, y in zip(xs, ys)]
    for c in range(n):
        pivot = next(r for r in range(c, n) if rows[r][c] != 0)
        rows[c], rows[pivot] = rows[pivot], rows[c]
        rows[c] = [v / rows[c][c] for v in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                factor = rows[r][c]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[c])]
    return [row[n] for row in rows]


def interpolated_mixed_volumes(volume_of_sum, n):
    """
    V(K[n-k], L[k]) for k = 0..n from Vol(K + sL) at s = 0..n, a polynomial
    with coefficients comb(n, k) V(K[n-k], L[k]).
    """
    coefficients = solve_vandermonde(range(n + 1), [volume_of_sum(s) for s in range(n + 1)])
    return [c / comb(n, k) for k, c in enumerate(coefficients)]
