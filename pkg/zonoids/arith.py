"""
Scalars, vectors and the linear algebra the engine runs on.

Two interchangeable backends share one arithmetic contract. ``EXACT`` keeps
every value an ``int`` or a ``fractions.Fraction`` (always in lowest terms,
positive denominator), so comparisons are total and error-free. ``FLOAT``
stores binary floats and hands heavy work to numpy.

Vectors are plain tuples of scalars. All functions are pure.
"""
import logging
import math
from fractions import Fraction
from itertools import chain
from numbers import Rational
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DegenerateBody, DimensionMismatch, UnsupportedBackend

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction, float]
Vector = Tuple[Scalar, ...]
Matrix = Sequence[Sequence[Scalar]]

# Float directions are merged after rounding to this many decimals.
FLOAT_KEY_DIGITS = 12


class Backend:
    name = None
    exact = False

    def scalar(self, value):
        raise NotImplementedError

    def vector(self, coords):
        return tuple(self.scalar(c) for c in coords)

    def matrix(self, rows):
        return tuple(self.vector(row) for row in rows)

    def sqrt(self, value):
        raise NotImplementedError

    def __repr__(self):
        return '<Backend %s>' % self.name


class ExactBackend(Backend):
    name = 'exact'
    exact = True

    def scalar(self, value):
        if isinstance(value, bool):
            raise TypeError('Booleans are not scalars.')
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(value):
                raise ValueError('Non-finite value %r has no exact form.' % value)
            # Read floats as the decimal they print as, not their binary expansion.
            return Fraction(repr(float(value)))
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, Rational):
            return Fraction(value.numerator, value.denominator)
        raise TypeError('Cannot read %r as an exact scalar.' % (value,))

    def sqrt(self, value):
        root = exact_root(value, 2)
        if root is None:
            raise UnsupportedBackend('sqrt(%s) is irrational; use the float backend.' % value)
        return root


class FloatBackend(Backend):
    name = 'float'

    def scalar(self, value):
        if isinstance(value, bool):
            raise TypeError('Booleans are not scalars.')
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)

    def sqrt(self, value):
        return math.sqrt(value)


EXACT = ExactBackend()
FLOAT = FloatBackend()

BACKENDS = {
    EXACT.name: EXACT,
    FLOAT.name: FLOAT,
}


def get_backend(name=None) -> Backend:
    if isinstance(name, Backend):
        return name
    if name is None:
        from .conf import logbm_settings
        name = logbm_settings.BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise UnsupportedBackend("Unknown backend '%s' (expected exact or float)." % name)


def is_float(value) -> bool:
    return isinstance(value, (float, np.floating))


def backend_of(*values) -> Backend:
    """The backend a collection of scalars belongs to: float wins."""
    for value in values:
        if is_float(value):
            return FLOAT
    return EXACT


def vector_backend(*vectors) -> Backend:
    return backend_of(*chain.from_iterable(vectors))


def to_float(value) -> float:
    return float(value)


def format_scalar(value):
    """JSON encoding: exact scalars as "p/q" (q omitted when 1), floats as numbers."""
    if is_float(value):
        return float(value)
    return str(Fraction(value))


def parse_scalar(value, backend=None):
    return get_backend(backend).scalar(value)


# Vectors

def check_dims(*vectors):
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DimensionMismatch('Vectors of dimensions %s cannot be combined.' % sorted(dims))


def dot(v, w) -> Scalar:
    if len(v) != len(w):
        raise DimensionMismatch('dot: dimension %d vs %d.' % (len(v), len(w)))
    return sum(a * b for a, b in zip(v, w))


def add(v, w) -> Vector:
    check_dims(v, w)
    return tuple(a + b for a, b in zip(v, w))


def sub(v, w) -> Vector:
    check_dims(v, w)
    return tuple(a - b for a, b in zip(v, w))


def scale(alpha, v) -> Vector:
    return tuple(alpha * a for a in v)


def neg(v) -> Vector:
    return tuple(-a for a in v)


def is_zero(v) -> bool:
    return all(a == 0 for a in v)


def unit(dim: int, index: int) -> Vector:
    return tuple(1 if i == index else 0 for i in range(dim))


# Determinants

def det(matrix: Matrix) -> Scalar:
    """
    Determinant of a square matrix.

    Exact input stays exact: cofactor expansion up to dimension 4, Bareiss
    fraction-free elimination above. Float input goes to numpy.
    """
    rows = [tuple(row) for row in matrix]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise DimensionMismatch('det expects a square matrix.')
    if n == 0:
        return 1
    if n <= 4:
        return _cofactor_det(rows)
    if vector_backend(*rows) is FLOAT:
        return float(np.linalg.det(np.array(rows, dtype=float)))
    return _bareiss_det(rows)


def _cofactor_det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        (a, b), (c, d) = rows
        return a * d - b * c
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = rows
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    total = 0
    for j, entry in enumerate(rows[0]):
        if entry == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = entry * _cofactor_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _integer_rows(rows):
    """Scale each row to integers; returns (rows, product of the scale factors)."""
    scaled, factor = [], 1
    for row in rows:
        entries = [Fraction(x) for x in row]
        common = math.lcm(*(x.denominator for x in entries)) if entries else 1
        scaled.append([int(x * common) for x in entries])
        factor *= common
    return scaled, factor


def _bareiss_det(rows):
    m, factor = _integer_rows(rows)
    n = len(m)
    sign, previous = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * pivot - m[i][k] * m[k][j]) // previous
        previous = pivot
    return Fraction(sign * m[n - 1][n - 1], factor)


def generalized_cross(vectors: Sequence[Vector]) -> Vector:
    """
    Normal to the span of n-1 vectors in R^n.

    The result w is orthogonal to every input, its length is the
    (n-1)-volume of the parallelepiped they span and it vanishes exactly
    when they are dependent. Components are signed maximal minors, so exact
    input gives exact output, and det([v_1, ..., v_{n-1}, w]) = |w|^2.
    """
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        raise DimensionMismatch('generalized_cross needs at least one vector.')
    n = len(vectors[0])
    if len(vectors) != n - 1 or any(len(v) != n for v in vectors):
        raise DimensionMismatch(
            'generalized_cross expects n-1 vectors of dimension n, got %d of dimension %d.'
            % (len(vectors), n))
    if n == 3:
        (a0, a1, a2), (b0, b1, b2) = vectors
        return (a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0)
    normal = []
    for i in range(n):
        cofactor = det([v[:i] + v[i + 1:] for v in vectors])
        normal.append(cofactor if (n - 1 + i) % 2 == 0 else -cofactor)
    return tuple(normal)


def gram_matrix(vectors: Sequence[Vector]):
    return [[dot(v, w) for w in vectors] for v in vectors]


def gram_determinant(vectors: Sequence[Vector]) -> Scalar:
    return det(gram_matrix(vectors))


# Elimination

def row_echelon(rows: Sequence[Vector]) -> Tuple[List[List[Scalar]], List[int]]:
    """Reduced row echelon form over the scalars' field; returns (rows, pivot columns)."""
    m = [list(row) for row in rows]
    if not m:
        return [], []
    floating = vector_backend(*m) is FLOAT
    if not floating:
        m = [[Fraction(x) for x in row] for row in m]
    width = len(m[0])
    pivots, r = [], 0
    for c in range(width):
        if r == len(m):
            break
        if floating:
            best = max(range(r, len(m)), key=lambda i: abs(m[i][c]))
            if abs(m[best][c]) <= 1e-12:
                continue
        else:
            best = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
            if best is None:
                continue
        m[r], m[best] = m[best], m[r]
        pivot = m[r][c]
        m[r] = [x / pivot for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(vectors: Sequence[Vector]) -> int:
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return 0
    return len(row_echelon(vectors)[1])


def nullspace(rows: Sequence[Vector], dim: int) -> List[Vector]:
    """Basis of {x : <r, x> = 0 for every row r}; rational for exact rows."""
    rows = [tuple(r) for r in rows if not is_zero(r)]
    if not rows:
        return [unit(dim, i) for i in range(dim)]
    reduced, pivots = row_echelon(rows)
    free = [c for c in range(dim) if c not in pivots]
    basis = []
    for f in free:
        x = [0] * dim
        x[f] = 1
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(matrix: Matrix, rhs: Vector) -> Vector:
    """Unique solution of matrix . x = rhs for a nonsingular square matrix."""
    n = len(matrix)
    augmented = [tuple(row) + (b,) for row, b in zip(matrix, rhs)]
    reduced, pivots = row_echelon(augmented)
    if pivots != list(range(n)):
        raise DegenerateBody('Singular system in solve().')
    return tuple(row[n] for row in reduced)


# Directions

def ray_direction(v: Vector) -> Tuple[Vector, Scalar]:
    """
    (p, f) with v = f * p and f > 0.

    Exact: p is the primitive integer vector on the ray of v. Float: p is
    the unit vector, rounded so parallel inputs produce equal keys.
    """
    if is_zero(v):
        raise DegenerateBody('The zero vector has no direction.')
    if vector_backend(v) is FLOAT:
        length = math.sqrt(sum(float(a) * float(a) for a in v))
        p = tuple(round(float(a) / length, FLOAT_KEY_DIGITS) + 0.0 for a in v)
        return p, length
    entries = [Fraction(a) for a in v]
    common = math.lcm(*(x.denominator for x in entries))
    ints = [int(x * common) for x in entries]
    content = math.gcd(*ints)
    return tuple(i // content for i in ints), Fraction(content, common)


def line_direction(v: Vector) -> Tuple[Vector, Scalar]:
    """(p, f) with v = f * p and the first nonzero coordinate of p positive."""
    p, f = ray_direction(v)
    leading = next(a for a in p if a != 0)
    if leading < 0:
        return neg(p), -f
    return p, f


# Roots

def integer_root(a: int, n: int) -> Optional[int]:
    """Exact n-th root of a nonnegative integer, or None."""
    if a < 0:
        return None
    if a < 2:
        return a
    x = 1 << -(-a.bit_length() // n)
    while True:
        y = ((n - 1) * x + a // x ** (n - 1)) // n
        if y >= x:
            break
        x = y
    for candidate in (x, x + 1):
        if candidate ** n == a:
            return candidate
    return None


def exact_root(value, n: int) -> Optional[Fraction]:
    """Rational n-th root of a nonnegative rational, or None when irrational."""
    value = Fraction(value)
    if value < 0:
        return None
    top = integer_root(value.numerator, n)
    bottom = integer_root(value.denominator, n)
    if top is None or bottom is None:
        return None
    return Fraction(top, bottom)


def float_vector(v: Iterable[Scalar]) -> np.ndarray:
    return np.array([float(a) for a in v], dtype=float)
