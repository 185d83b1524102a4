"""
Convex bodies and their support functions.

Three kinds of origin-symmetric bodies are supported:

* ``Zonotope``: a sum of centered segments ``[-lambda*u, lambda*u]``, kept in
  canonical form (parallel generators merged, input order preserved);
* ``SymmetricPolytope``: the hull of ``+-v`` over a list of representatives;
* ``SmoothBody``: a sum of centered ellipsoids, ``h(x) = sum sqrt(x^T A x)``,
  float backend only.

``SupportExpr`` is a signed combination of bodies (a difference of support
functions) and ``GeoMeanBody`` the pair of volume bounds for the geometric
mean of two bodies.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import List, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from . import arith
from .arith import FLOAT, Scalar, Vector
from .conf import logbm_settings
from .exceptions import (
    DegenerateBody, DimensionMismatch, InsufficientDirections, NotSymmetric,
    PreconditionViolation, UnsupportedBackend, UnsupportedCombination,
)

logger = logging.getLogger(__name__)


def _coerce(rows, scalars=()):
    """Pick the backend of all coordinates and convert them to it."""
    rows = [tuple(row) for row in rows]
    backend = arith.backend_of(*scalars, *(c for row in rows for c in row))
    return backend, [backend.vector(row) for row in rows], [backend.scalar(s) for s in scalars]


def _check_dim(body, x):
    if len(x) != body.dim:
        raise DimensionMismatch(
            'Cannot evaluate a %d-dimensional body at a %d-dimensional point.' % (body.dim, len(x)))


@dataclass(frozen=True)
class Zonotope:
    dim: int
    generators: Tuple[Tuple[Vector, Scalar], ...]

    kind = 'zonotope'

    @classmethod
    def from_generators(cls, pairs, dim=None):
        pairs = [(tuple(u), weight) for u, weight in pairs]
        if dim is None:
            if not pairs:
                raise DimensionMismatch('An empty generator list needs an explicit dimension.')
            dim = len(pairs[0][0])
        if any(len(u) != dim for u, _ in pairs):
            raise DimensionMismatch('All generators must have dimension %d.' % dim)

        backend, directions, weights = _coerce([u for u, _ in pairs], [w for _, w in pairs])
        merged = {}
        for u, weight in zip(directions, weights):
            if weight <= 0:
                raise PreconditionViolation('Generator weights must be positive, got %s.' % weight)
            if arith.is_zero(u):
                raise DegenerateBody('Generator directions must be nonzero.')
            direction, factor = arith.line_direction(u)
            merged[direction] = merged.get(direction, 0) + weight * abs(factor)
        return cls(dim, tuple(merged.items()))

    @classmethod
    def segment(cls, u, weight=1):
        return cls.from_generators([(u, weight)])

    @classmethod
    def box(cls, scales):
        dim = len(scales)
        return cls.from_generators([(arith.unit(dim, i), s) for i, s in enumerate(scales)])

    @classmethod
    def cube(cls, dim):
        return cls.box([1] * dim)

    @property
    def directions(self) -> List[Vector]:
        return [u for u, _ in self.generators]

    @property
    def weights(self) -> List[Scalar]:
        return [w for _, w in self.generators]

    @property
    def backend(self):
        return arith.backend_of(*self.weights)

    @property
    def rank(self) -> int:
        return arith.rank(self.directions)

    @property
    def full_dimensional(self) -> bool:
        return self.rank == self.dim

    def support(self, x) -> Scalar:
        _check_dim(self, x)
        return sum(w * abs(arith.dot(u, x)) for u, w in self.generators)

    def volume(self) -> Scalar:
        return zonotope_volume(self)

    def scaled(self, alpha):
        if alpha == 0:
            raise DegenerateBody('Scaling by zero collapses the zonotope.')
        return Zonotope(self.dim, tuple((u, w * abs(alpha)) for u, w in self.generators))

    def to_polytope(self):
        """The zonotope as the hull of its 2^m sign-vector points."""
        if not self.generators:
            raise DegenerateBody('A zonotope without generators has no vertices.')
        (first, w0), rest = self.generators[0], self.generators[1:]
        start = arith.scale(w0, first)
        points = []
        for signs in product((1, -1), repeat=len(rest)):
            point = start
            for sign, (u, w) in zip(signs, rest):
                point = arith.add(point, arith.scale(sign * w, u))
            points.append(point)
        return SymmetricPolytope.from_vertices(boundary_points(points, self.dim), dim=self.dim)

    def __add__(self, other):
        return minkowski_sum(self, other)


@dataclass(frozen=True)
class SymmetricPolytope:
    dim: int
    vertices: Tuple[Vector, ...]

    kind = 'polytope'

    @classmethod
    def from_vertices(cls, vertices, dim=None):
        vertices = [tuple(v) for v in vertices]
        if dim is None:
            if not vertices:
                raise DimensionMismatch('An empty vertex list needs an explicit dimension.')
            dim = len(vertices[0])
        if any(len(v) != dim for v in vertices):
            raise DimensionMismatch('All vertices must have dimension %d.' % dim)
        _, vertices, _ = _coerce(vertices)
        pairs = {}
        for v in vertices:
            if arith.is_zero(v):
                continue
            key = v if next(c for c in v if c != 0) > 0 else arith.neg(v)
            pairs.setdefault(key, v)
        return cls(dim, tuple(pairs.values()))

    @classmethod
    def cross(cls, dim, scale=1):
        return cls.from_vertices([arith.scale(scale, arith.unit(dim, i)) for i in range(dim)])

    @property
    def backend(self):
        return arith.vector_backend(*self.vertices)

    def points(self) -> List[Vector]:
        """Representatives followed by their negatives; facet indices refer to this list."""
        return list(self.vertices) + [arith.neg(v) for v in self.vertices]

    @property
    def rank(self) -> int:
        return arith.rank(self.vertices)

    @property
    def full_dimensional(self) -> bool:
        return self.rank == self.dim

    def support(self, x) -> Scalar:
        _check_dim(self, x)
        if not self.vertices:
            return 0
        return max(abs(arith.dot(v, x)) for v in self.vertices)

    def volume(self) -> Scalar:
        return polytope_volume(self)

    def scaled(self, alpha):
        if alpha == 0:
            raise DegenerateBody('Scaling by zero collapses the polytope.')
        return SymmetricPolytope(self.dim, tuple(arith.scale(alpha, v) for v in self.vertices))

    def __add__(self, other):
        return minkowski_sum(self, other)


@dataclass(frozen=True)
class SmoothBody:
    """Sum of centered ellipsoids; each matrix is symmetric positive definite."""
    dim: int
    matrices: Tuple[Tuple[Tuple[float, ...], ...], ...]

    kind = 'smooth'

    @classmethod
    def from_matrices(cls, matrices):
        matrices = [tuple(tuple(float(a) for a in row) for row in m) for m in matrices]
        if not matrices:
            raise DegenerateBody('A smooth body needs at least one ellipsoid term.')
        dim = len(matrices[0])
        for m in matrices:
            if len(m) != dim or any(len(row) != dim for row in m):
                raise DimensionMismatch('Ellipsoid matrices must all be %dx%d.' % (dim, dim))
            array = np.array(m)
            if not np.allclose(array, array.T, rtol=0, atol=1e-12):
                raise NotSymmetric('Ellipsoid matrix is not symmetric.')
            minors = [arith.det([row[:k] for row in m[:k]]) for k in range(1, dim + 1)]
            if min(minors) <= 0:
                raise PreconditionViolation(
                    'Ellipsoid matrix is not positive definite (leading minors %s).' % minors)
        return cls(dim, tuple(matrices))

    @classmethod
    def ellipsoid(cls, axes):
        """Ellipsoid with the given semi-axes along the coordinate directions."""
        dim = len(axes)
        return cls.from_matrices([[[float(axes[i]) ** 2 if i == j else 0.0 for j in range(dim)]
                                   for i in range(dim)]])

    @classmethod
    def ball(cls, dim, radius=1.0):
        return cls.ellipsoid([radius] * dim)

    @property
    def backend(self):
        return FLOAT

    @property
    def rank(self) -> int:
        return self.dim

    @property
    def full_dimensional(self) -> bool:
        return True

    @property
    def arrays(self) -> List[np.ndarray]:
        return [np.array(m, dtype=float) for m in self.matrices]

    def support(self, x) -> float:
        _check_dim(self, x)
        return float(self.support_values(np.array([x], dtype=float))[0])

    def support_values(self, points: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(points, dtype=float))
        return sum(np.sqrt(np.einsum('ij,jk,ik->i', X, A, X)) for A in self.arrays)

    def gradients(self, points: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(points, dtype=float))
        total = np.zeros_like(X)
        for A in self.arrays:
            AX = X @ A
            total += AX / np.sqrt(np.einsum('ij,ij->i', AX, X))[:, None]
        return total

    def hessians(self, points: np.ndarray) -> np.ndarray:
        """Euclidean Hessians of h at each point, shape (N, n, n)."""
        X = np.atleast_2d(np.asarray(points, dtype=float))
        total = np.zeros((len(X), self.dim, self.dim))
        for A in self.arrays:
            AX = X @ A
            h = np.sqrt(np.einsum('ij,ij->i', AX, X))
            total += A[None, :, :] / h[:, None, None]
            total -= np.einsum('ni,nj->nij', AX, AX) / (h ** 3)[:, None, None]
        return total

    def scaled(self, alpha):
        factor = float(alpha) ** 2
        return SmoothBody(self.dim, tuple(
            tuple(tuple(factor * a for a in row) for row in m) for m in self.matrices))

    def __add__(self, other):
        return minkowski_sum(self, other)


BODY_TYPES = (Zonotope, SymmetricPolytope, SmoothBody)


@dataclass(frozen=True)
class SupportExpr:
    """Signed combination sum(alpha_j * h_{body_j}); equal bodies are merged."""
    dim: int
    terms: Tuple[Tuple[Scalar, object], ...]

    kind = 'expr'

    @classmethod
    def combine(cls, *pairs):
        coefficients = {}
        dim = None
        for alpha, body in pairs:
            if isinstance(body, SupportExpr):
                for beta, inner in body.terms:
                    coefficients[inner] = coefficients.get(inner, 0) + alpha * beta
                body_dim = body.dim
            elif isinstance(body, BODY_TYPES):
                coefficients[body] = coefficients.get(body, 0) + alpha
                body_dim = body.dim
            else:
                raise UnsupportedCombination('Cannot combine %r into a support expression.' % (body,))
            if dim is not None and body_dim != dim:
                raise DimensionMismatch('Support expression mixes dimensions %d and %d.' % (dim, body_dim))
            dim = body_dim
        if dim is None:
            raise DimensionMismatch('An empty support expression has no dimension.')
        return cls(dim, tuple((alpha, body) for body, alpha in coefficients.items() if alpha != 0))

    @classmethod
    def of(cls, body):
        return cls.combine((1, body))

    @property
    def bodies(self):
        return [body for _, body in self.terms]

    @property
    def polytopes(self):
        return [body for body in self.bodies if isinstance(body, SymmetricPolytope)]

    def support(self, x) -> Scalar:
        _check_dim(self, x)
        return sum(alpha * body.support(x) for alpha, body in self.terms)

    def __add__(self, other):
        return SupportExpr.combine((1, self), (1, other))

    def __sub__(self, other):
        return SupportExpr.combine((1, self), (-1, other))

    def __rmul__(self, alpha):
        return SupportExpr.combine((alpha, self))

    def __neg__(self):
        return SupportExpr.combine((-1, self))


def as_expr(value) -> SupportExpr:
    return value if isinstance(value, SupportExpr) else SupportExpr.of(value)


@dataclass(frozen=True)
class GeoMeanBody:
    """Outer approximation of K^(1-t) L^t cut out by the sampled directions."""
    K: object
    L: object
    t: float
    directions: Tuple[Vector, ...]

    kind = 'geomean'

    @property
    def dim(self):
        return self.K.dim

    def support(self, x) -> float:
        _check_dim(self, x)
        t = float(self.t)
        return float(self.K.support(x)) ** (1 - t) * float(self.L.support(x)) ** t

    def bounds(self):
        return geomean_volume_bounds(self.K, self.L, self.t, directions=self.directions)


def support_eval(body, x, backend=None) -> Scalar:
    """
    h_body(x). The backend defaults to that of x; smooth bodies and
    geometric means are rejected on the exact backend.
    """
    backend = arith.get_backend(backend) if backend is not None else arith.vector_backend(x)
    x = backend.vector(x)
    if backend.exact and _needs_float(body):
        raise UnsupportedBackend('Smooth bodies have irrational support values; use the float backend.')
    return body.support(x)


def _needs_float(body):
    if isinstance(body, (SmoothBody, GeoMeanBody)):
        return True
    if isinstance(body, SupportExpr):
        return any(_needs_float(b) for b in body.bodies)
    return False


def zonotope_volume(Z: Zonotope) -> Scalar:
    """Vol(Z) = 2^n sum over n-subsets of generators of prod(lambda) |det|."""
    n = Z.dim
    total = 0
    for subset in combinations(Z.generators, n):
        d = arith.det([u for u, _ in subset])
        if d == 0:
            continue
        weight = 1
        for _, w in subset:
            weight *= w
        total += weight * abs(d)
    return 2 ** n * total


def minkowski_sum(*bodies):
    """Sum of bodies of one dimension; zonotopes stay zonotopes."""
    if not bodies:
        raise DimensionMismatch('minkowski_sum needs at least one body.')
    dims = {b.dim for b in bodies}
    if len(dims) > 1:
        raise DimensionMismatch('Cannot add bodies of dimensions %s.' % sorted(dims))
    dim = dims.pop()
    if all(isinstance(b, Zonotope) for b in bodies):
        return Zonotope.from_generators([g for b in bodies for g in b.generators], dim=dim)
    if all(isinstance(b, SmoothBody) for b in bodies):
        return SmoothBody(dim, tuple(m for b in bodies for m in b.matrices))
    if any(isinstance(b, SmoothBody) for b in bodies):
        raise UnsupportedCombination('Smooth bodies only add to smooth bodies.')

    points = [(0,) * dim]
    for body in bodies:
        polytope = body.to_polytope() if isinstance(body, Zonotope) else body
        points = [arith.add(p, q) for p in points for q in polytope.points()]
        points = boundary_points(points, dim)
    return SymmetricPolytope.from_vertices(points, dim=dim)


def scaled(body, alpha):
    return body.scaled(alpha)


# Hulls

@dataclass(frozen=True)
class Facet:
    normal: Vector
    offset: Scalar
    vertices: Tuple[int, ...]


def _integer_points(points):
    common = math.lcm(*(Fraction(c).denominator for p in points for c in p)) if points else 1
    return [tuple(int(Fraction(c) * common) for c in p) for p in points], common


def _extreme_candidates(points, dim):
    try:
        hull = ConvexHull(np.array(points, dtype=float))
    except (QhullError, ValueError):
        return None, list(range(len(points)))
    return hull, sorted(int(i) for i in hull.vertices)


def _plane(points, subset):
    base = points[subset[0]]
    normal = arith.generalized_cross([arith.sub(points[i], base) for i in subset[1:]])
    if arith.is_zero(normal):
        return None
    offset = arith.dot(normal, base)
    if offset == 0:
        return None
    if offset < 0:
        normal, offset = arith.neg(normal), -offset
    key, factor = arith.ray_direction(normal)
    return key, offset / factor


def _supporting(points, candidates, key, offset):
    return all(arith.dot(key, points[i]) <= offset for i in candidates)


def _brute_force_planes(points, candidates, dim):
    planes = {}
    for subset in combinations(candidates, dim):
        plane = _plane(points, subset)
        if plane is None or plane[0] in planes:
            continue
        key, offset = plane
        if _supporting(points, candidates, key, offset):
            planes[key] = offset
    return planes


def _seeded_planes(points, hull, dim):
    """Exact planes through the vertices of every Qhull simplex, or None if one fails."""
    candidates = sorted(int(i) for i in hull.vertices)
    planes = {}
    for simplex in hull.simplices:
        plane = _plane(points, [int(i) for i in simplex])
        if plane is None:
            return None
        key, offset = plane
        if key in planes:
            continue
        if not _supporting(points, candidates, key, offset):
            return None
        planes[key] = offset
    return planes


def _exact_facets(points, dim):
    scaled_points, common = _integer_points(points)
    hull, candidates = _extreme_candidates(scaled_points, dim)
    budget = logbm_settings.HULL['BRUTE_FORCE_SUBSETS']
    planes = None
    if hull is not None and math.comb(len(candidates), dim) > budget:
        planes = _seeded_planes(scaled_points, hull, dim)
        if planes is None:
            logger.warning('Qhull simplices failed exact verification; enumerating subsets.')
    if planes is None:
        planes = _brute_force_planes(scaled_points, candidates, dim)
    everything = range(len(scaled_points))
    if not all(_supporting(scaled_points, everything, k, b) for k, b in planes.items()):
        logger.warning('Pruned hull misses input points; enumerating all %d points.', len(points))
        planes = _brute_force_planes(scaled_points, list(everything), dim)
    facets = []
    for key, offset in planes.items():
        incident = tuple(i for i in everything if arith.dot(key, scaled_points[i]) == offset)
        facets.append(Facet(key, Fraction(offset, common), incident))
    logger.debug('Exact hull: %d points, %d facets.', len(points), len(facets))
    return facets


def _float_facets(points, dim):
    try:
        hull = ConvexHull(np.array(points, dtype=float))
    except QhullError as exc:
        raise DegenerateBody('Qhull failed on the polytope: %s' % exc)
    grouped = {}
    for simplex, equation in zip(hull.simplices, hull.equations):
        key = tuple(round(float(c), arith.FLOAT_KEY_DIGITS) + 0.0 for c in equation[:dim])
        offset = -float(equation[dim])
        grouped.setdefault(key, [offset, set()])[1].update(int(i) for i in simplex)
    return [Facet(key, offset, tuple(sorted(idx))) for key, (offset, idx) in grouped.items()]


def boundary_points(points, dim) -> List[Vector]:
    """Points lying on some facet of their hull (drops interior points)."""
    points = list(dict.fromkeys(tuple(p) for p in points))
    if arith.rank(points) < dim:
        return points
    if arith.vector_backend(*points) is FLOAT:
        _, candidates = _extreme_candidates(points, dim)
        return [points[i] for i in candidates]
    keep = sorted({i for facet in _exact_facets(points, dim) for i in facet.vertices})
    return [points[i] for i in keep]


@lru_cache(maxsize=256)
def hull_facets(P: SymmetricPolytope) -> Tuple[Facet, ...]:
    """
    Facets of P as (outer normal, offset, incident indices into P.points()).

    Exact polytopes: every candidate hyperplane through n affinely independent
    points is tested against all points; normals are primitive integer vectors.
    """
    if P.dim < 2:
        raise DegenerateBody('Hull enumeration needs dimension at least 2.')
    if not P.full_dimensional:
        raise DegenerateBody('Polytope spans only %d of %d dimensions.' % (P.rank, P.dim))
    points = P.points()
    if P.backend is FLOAT:
        return tuple(_float_facets(points, P.dim))
    return tuple(_exact_facets(points, P.dim))


def _affine_dim(indices, points):
    indices = list(indices)
    base = points[indices[0]]
    return arith.rank([arith.sub(points[i], base) for i in indices[1:]])


def _triangulate(face, d, incidences, points):
    """Simplices (index tuples) of a pulling triangulation of a d-dimensional face."""
    if d == 0:
        return [(min(face),)]
    apex = min(face)
    subfaces = set()
    for other in incidences:
        sub = face & other
        if sub == face or apex in sub or len(sub) < d:
            continue
        if _affine_dim(sub, points) == d - 1:
            subfaces.add(sub)
    return [simplex + (apex,) for sub in subfaces
            for simplex in _triangulate(sub, d - 1, incidences, points)]


def polytope_volume(P: SymmetricPolytope) -> Scalar:
    """Sum of the cones from the origin over a triangulation of every facet."""
    facets = hull_facets(P)
    points = P.points()
    if P.backend is FLOAT:
        return float(ConvexHull(np.array(points, dtype=float)).volume)
    incidences = [frozenset(f.vertices) for f in facets]
    total = 0
    for face in incidences:
        for simplex in _triangulate(face, P.dim - 1, incidences, points):
            total += abs(arith.det([points[i] for i in simplex]))
    return Fraction(total) / math.factorial(P.dim)


def body_volume(body) -> Scalar:
    if isinstance(body, Zonotope):
        return zonotope_volume(body)
    if isinstance(body, SymmetricPolytope):
        return polytope_volume(body)
    raise UnsupportedCombination('No exact volume for %s bodies.' % body.kind)


def normal_directions(body) -> List[Vector]:
    """Facet normals (both orientations) of a zonotope or polytope."""
    if isinstance(body, Zonotope):
        normals = {}
        for subset in combinations(body.directions, body.dim - 1):
            w = arith.generalized_cross(subset)
            if not arith.is_zero(w):
                normals.setdefault(arith.line_direction(w)[0], None)
        return [v for w in normals for v in (w, arith.neg(w))]
    if isinstance(body, SymmetricPolytope):
        return [f.normal for f in hull_facets(body)]
    return []


# Geometric mean

def sample_directions(dim, count, rng) -> np.ndarray:
    gaussian = rng.standard_normal((count, dim))
    return gaussian / np.linalg.norm(gaussian, axis=1)[:, None]


def _membership(body, factor):
    """
    (M, bounds, A_ub, b_ub) with {M x : x within bounds, A_ub x <= b_ub} = factor * body.
    """
    if isinstance(body, Zonotope):
        M = np.array([[float(w) * float(c) for c in u] for u, w in body.generators]).T
        return M, [(-factor, factor)] * M.shape[1], None, None
    if isinstance(body, SymmetricPolytope):
        V = np.array([[float(c) for c in v] for v in body.vertices]).T
        M = np.hstack([V, -V])
        return M, [(0, None)] * M.shape[1], np.ones((1, M.shape[1])), np.array([factor])
    raise UnsupportedCombination('Geometric-mean bounds need zonotopes or polytopes, not %s.' % body.kind)


def _contact_point(K, L, t, w):
    r = float(L.support(w)) / float(K.support(w))
    a, b = r ** t, r ** (t - 1)
    MK, boundsK, AK, bK = _membership(K, a)
    ML, boundsL, AL, bL = _membership(L, b)
    nk, nl = MK.shape[1], ML.shape[1]
    objective = -np.concatenate([np.asarray(w) @ MK, np.zeros(nl)])
    A_eq = np.hstack([MK, -ML])
    rows, rhs = [], []
    for A, bound, offset, width in ((AK, bK, 0, nk), (AL, bL, nk, nl)):
        if A is not None:
            row = np.zeros((1, nk + nl))
            row[:, offset:offset + width] = A
            rows.append(row)
            rhs.append(bound)
    result = linprog(
        objective,
        A_ub=np.vstack(rows) if rows else None,
        b_ub=np.concatenate(rhs) if rhs else None,
        A_eq=A_eq, b_eq=np.zeros(A_eq.shape[0]),
        bounds=boundsK + boundsL, method='highs')
    if result.status != 0:
        logger.warning('Contact LP failed in direction %s: %s', w, result.message)
        return None
    return MK @ result.x[:nk]


def geomean_volume_bounds(K, L, t, directions=None, sample_budget=None, seed=0):
    """
    (lower, upper) with lower <= Vol(K^(1-t) L^t) <= upper.

    The upper bound is the volume of the halfspace intersection over the
    direction set. The lower bound is the hull of one contact point of
    r^t K ∩ r^(t-1) L per direction, r = h_L/h_K, a set inside the mean.
    """
    t = float(t)
    if not 0 <= t <= 1:
        raise PreconditionViolation('t must lie in [0, 1], got %s.' % t)
    if K.dim != L.dim:
        raise DimensionMismatch('K and L live in dimensions %d and %d.' % (K.dim, L.dim))
    for body in (K, L):
        if not body.full_dimensional:
            raise DegenerateBody('Geometric-mean bounds need full-dimensional bodies.')
    n = K.dim
    if sample_budget is None:
        sample_budget = logbm_settings.GEOMEAN['DIRECTIONS']

    rows = [np.asarray([float(c) for c in w]) for w in (directions if directions is not None else [])]
    if not rows:
        rows = list(sample_directions(n, sample_budget, np.random.default_rng(seed)))
    for w in normal_directions(K) + normal_directions(L):
        rows.append(np.asarray([float(c) for c in w]))
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        rows.extend([e, -e])
    W = np.array([w / np.linalg.norm(w) for w in rows])
    W = np.vstack([W, -W])
    W = np.unique(np.round(W, arith.FLOAT_KEY_DIGITS), axis=0)

    bound = np.array([float(K.support(w)) ** (1 - t) * float(L.support(w)) ** t for w in W])
    try:
        intersection = HalfspaceIntersection(np.hstack([W, -bound[:, None]]), np.zeros(n))
        vertices = intersection.intersections
        if not np.all(np.isfinite(vertices)):
            raise InsufficientDirections()
        upper = float(ConvexHull(vertices).volume)
    except (QhullError, ValueError):
        raise InsufficientDirections('The sampled halfspaces do not bound a full-dimensional body.')

    contacts = [p for p in (_contact_point(K, L, t, w) for w in W) if p is not None]
    try:
        lower = float(ConvexHull(np.array(contacts)).volume) if len(contacts) > n else 0.0
    except QhullError:
        lower = 0.0
    logger.debug('Geometric-mean bounds over %d directions: [%g, %g].', len(W), lower, upper)
    return min(lower, upper), upper
