"""
Seeded random instances.

Every generator takes a ``numpy.random.Generator``; a trial's instances are a
function of the generator state alone.
"""
import math
from fractions import Fraction

import numpy as np

from . import arith
from .bodies import SmoothBody, SymmetricPolytope, Zonotope, minkowski_sum
from .exceptions import PreconditionViolation

MAX_ATTEMPTS = 100


def random_integer_vector(rng, dim, bound):
    while True:
        v = tuple(int(x) for x in rng.integers(-bound, bound + 1, size=dim))
        if any(v):
            return v


def random_weight(rng, bound):
    return Fraction(int(rng.integers(1, bound + 1)), int(rng.integers(1, bound + 1)))


def random_zonotope(rng, dim, count, bound=5) -> Zonotope:
    """A full-dimensional zonotope with ``count`` integer generators and rational weights."""
    if count < dim:
        raise PreconditionViolation('A full-dimensional zonotope in R^%d needs %d generators.' % (dim, dim))
    for _ in range(MAX_ATTEMPTS):
        pairs = [(random_integer_vector(rng, dim, bound), random_weight(rng, bound)) for _ in range(count)]
        Z = Zonotope.from_generators(pairs, dim=dim)
        if Z.full_dimensional:
            return Z
    return Zonotope.cube(dim)


def random_polytope(rng, dim, count, bound=5) -> SymmetricPolytope:
    for _ in range(MAX_ATTEMPTS):
        P = SymmetricPolytope.from_vertices([random_integer_vector(rng, dim, bound) for _ in range(count)], dim=dim)
        if P.full_dimensional:
            return P
    return SymmetricPolytope.cross(dim)


def random_box(rng, dim, bound=5) -> Zonotope:
    return Zonotope.box([random_weight(rng, bound) for _ in range(dim)])


def random_spd(rng, dim, spread=1.0):
    B = rng.normal(size=(dim, dim))
    S = B @ B.T + spread * np.eye(dim)
    return (S + S.T) / 2


def random_smooth(rng, dim, count=1) -> SmoothBody:
    """A sum of ``count`` random centered ellipsoids."""
    return SmoothBody.from_matrices([random_spd(rng, dim).tolist() for _ in range(count)])


def random_ellipsoid(rng, dim, low=0.5, high=2.0) -> SmoothBody:
    return SmoothBody.ellipsoid(rng.uniform(low, high, size=dim).tolist())


def random_partition(rng, dim):
    """Random composition of ``dim`` into at least two positive parts."""
    if dim < 2:
        raise PreconditionViolation('A direct sum needs n >= 2.')
    cuts = sorted(rng.choice(np.arange(1, dim), size=int(rng.integers(1, dim)), replace=False).tolist())
    bounds = [0] + cuts + [dim]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _embedded(rng, dim, offset, size, count, bound):
    block = random_zonotope(rng, size, max(size, count), bound)
    pairs = []
    for u, weight in block.generators:
        v = [0] * dim
        v[offset:offset + size] = u
        pairs.append((tuple(v), weight))
    return Zonotope.from_generators(pairs, dim=dim)


def direct_sum_instance(rng, dim, count=3, bound=3):
    """
    (K, L, components, scales) with K = C_1 + ... + C_m a direct sum over
    coordinate blocks and L = b_1 C_1 + ... + b_m C_m, an equality pair of
    the local log-Brunn-Minkowski inequality.
    """
    parts = random_partition(rng, dim)
    components, offset = [], 0
    for size in parts:
        components.append(_embedded(rng, dim, offset, size, count, bound))
        offset += size
    scales = [random_weight(rng, bound) for _ in components]
    K = minkowski_sum(*components)
    L = minkowski_sum(*(C.scaled(b) for C, b in zip(components, scales)))
    return K, L, components, scales


def random_even_trig(rng, modes=4, decay=2.0):
    """A smooth even function on the circle: sum of cos/sin(2 k theta) with decaying amplitudes."""
    a = rng.normal(size=modes + 1) / (1 + np.arange(modes + 1)) ** decay
    b = rng.normal(size=modes + 1) / (1 + np.arange(modes + 1)) ** decay
    b[0] = 0.0

    def f(theta):
        return sum(a[k] * math.cos(2 * k * theta) + b[k] * math.sin(2 * k * theta) for k in range(modes + 1))
    return f


def random_parameter(rng, bound=5):
    q = int(rng.integers(2, bound + 2))
    return Fraction(int(rng.integers(1, q)), q)


def random_direction(rng, dim, bound=5):
    return random_integer_vector(rng, dim, bound)


def rounded(value, denominator):
    """Nearest multiple of 1/denominator, as an exact scalar."""
    return Fraction(round(Fraction(value) * denominator), denominator)


def rounded_vector(v, denominator):
    return tuple(rounded(x, denominator) for x in v)


def rounded_body(body, denominator):
    if isinstance(body, Zonotope):
        pairs = [(rounded_vector(u, denominator), max(rounded(w, denominator), Fraction(1, denominator)))
                 for u, w in body.generators]
        return Zonotope.from_generators([(u, w) for u, w in pairs if not arith.is_zero(u)], dim=body.dim)
    if isinstance(body, SymmetricPolytope):
        return SymmetricPolytope.from_vertices([rounded_vector(v, denominator) for v in body.vertices], dim=body.dim)
    return body


def as_float(body):
    """The same body on the float backend."""
    if isinstance(body, Zonotope):
        return Zonotope.from_generators(
            [(tuple(float(x) for x in u), float(w)) for u, w in body.generators], dim=body.dim)
    if isinstance(body, SymmetricPolytope):
        return SymmetricPolytope.from_vertices(
            [tuple(float(x) for x in v) for v in body.vertices], dim=body.dim)
    return body
