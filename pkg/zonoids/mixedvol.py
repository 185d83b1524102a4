"""
Mixed volumes and atomic mixed area measures.

A measure atom ``(w, c)`` places mass ``c * |w|`` at the unit direction
``w / |w|`` (the *length* convention). Integrals of 1-homogeneous functions
then reduce to ``sum c * g(w)`` and stay rational. Densities of degree one
(``h_K dS``, ``f dS``) switch to the *unit* convention, where the atom
carries mass ``c`` outright.

Slots are zonotopes (a segment is a one-generator zonotope) and at most one
symmetric polytope.
"""
import logging
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Sequence, Tuple

from . import arith
from .arith import Scalar, Vector
from .bodies import SmoothBody, SupportExpr, SymmetricPolytope, Zonotope, as_expr
from .exceptions import (
    DegenerateBody, DimensionMismatch, PreconditionViolation, UnsupportedCombination,
)
from .verdicts import InequalityReport, Verdict

logger = logging.getLogger(__name__)

LENGTH = 'length'
UNIT = 'unit'


@dataclass(frozen=True)
class AtomicSphericalMeasure:
    dim: int
    atoms: Tuple[Tuple[Vector, Scalar], ...]
    convention: str = LENGTH

    @classmethod
    def from_atoms(cls, dim, atoms, convention=LENGTH):
        """Merge parallel atoms onto their canonical ray and drop zero masses."""
        merged = {}
        for w, c in atoms:
            w = tuple(w)
            if len(w) != dim:
                raise DimensionMismatch('Atom %s does not live in dimension %d.' % (w, dim))
            if c == 0:
                continue
            direction, factor = arith.ray_direction(w)
            mass = c * factor if convention == LENGTH else c
            merged[direction] = merged.get(direction, 0) + mass
        atoms = tuple(sorted((w, c) for w, c in merged.items() if c != 0))
        return cls(dim, atoms, convention)

    @classmethod
    def zero(cls, dim, convention=LENGTH):
        return cls(dim, (), convention)

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    @property
    def directions(self):
        return [w for w, _ in self.atoms]

    @property
    def even(self) -> bool:
        masses = dict(self.atoms)
        return all(masses.get(arith.neg(w)) == c for w, c in self.atoms)

    @property
    def nonnegative(self) -> bool:
        return all(c > 0 for _, c in self.atoms)

    def mass(self, w, c) -> float:
        if self.convention == UNIT:
            return c
        return float(c) * math.sqrt(float(arith.dot(w, w)))

    def total(self):
        """Total mass; exact under the unit convention."""
        if self.convention == UNIT:
            return sum(c for _, c in self.atoms)
        return math.fsum(self.mass(w, c) for w, c in self.atoms)

    def integrate(self, g):
        """
        sum c * g(w): the integral of g when g is 1-homogeneous (length
        convention) or 0-homogeneous (unit convention).
        """
        return sum(c * g(w) for w, c in self.atoms)

    def density(self, g, degree=0):
        """
        The measure g * self. A degree-1 density turns length atoms into unit atoms.
        """
        if degree == 0:
            convention = self.convention
        elif degree == 1 and self.convention == LENGTH:
            convention = UNIT
        else:
            raise UnsupportedCombination(
                'A degree-%d density on a %s-convention measure is not rational.' % (degree, self.convention))
        return AtomicSphericalMeasure.from_atoms(
            self.dim, [(w, c * g(w)) for w, c in self.atoms], convention)

    def scaled(self, alpha):
        return AtomicSphericalMeasure.from_atoms(
            self.dim, [(w, alpha * c) for w, c in self.atoms], self.convention)

    def _check_compatible(self, other):
        if self.dim != other.dim:
            raise DimensionMismatch('Measures live in dimensions %d and %d.' % (self.dim, other.dim))
        if self.convention != other.convention:
            raise UnsupportedCombination('Cannot combine %s- and %s-convention measures.'
                                         % (self.convention, other.convention))

    def __add__(self, other):
        self._check_compatible(other)
        return AtomicSphericalMeasure.from_atoms(self.dim, self.atoms + other.atoms, self.convention)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def discrepancy(self, other):
        """Largest absolute coefficient of self - other (0 iff they are equal)."""
        difference = self - other
        return max((abs(c) for _, c in difference.atoms), default=0)


# Slots

def as_slot(slot):
    """Bodies pass through; a pair (u, lambda) becomes a segment."""
    if isinstance(slot, (Zonotope, SymmetricPolytope)):
        return slot
    if isinstance(slot, SmoothBody):
        raise UnsupportedCombination('Smooth bodies have no atomic mixed area measure.')
    if isinstance(slot, SupportExpr):
        raise UnsupportedCombination('Support expressions go through mixed_value().')
    u, weight = slot
    return Zonotope.segment(u, weight)


def _normalize(slots, length_offset):
    slots = tuple(as_slot(s) for s in slots)
    if not slots:
        raise DimensionMismatch('Slot list is empty.')
    dims = {s.dim for s in slots}
    if len(dims) > 1:
        raise DimensionMismatch('Slots live in dimensions %s.' % sorted(dims))
    n = dims.pop()
    if len(slots) != n - length_offset:
        raise DimensionMismatch(
            'Expected %d slots in dimension %d, got %d.' % (n - length_offset, n, len(slots)))
    return n, tuple(sorted(slots, key=lambda s: (s.kind, hash(s))))


def _grouped(zonotopes):
    """Identical slots collapse to (zonotope, multiplicity), first appearance first."""
    return list(Counter(zonotopes).items())


def _generator_choices(groups):
    """
    Yield (vectors, weight product, multiplicity) over unordered choices of
    distinct generators for repeated slots; multiplicity counts the orderings.
    """
    per_group = [combinations(range(len(z.generators)), r) for z, r in groups]
    orderings = 1
    for _, r in groups:
        orderings *= math.factorial(r)
    for choice in product(*per_group):
        vectors, weight = [], 1
        for (z, _), indices in zip(groups, choice):
            for i in indices:
                u, w = z.generators[i]
                vectors.append(u)
                weight *= w
        yield vectors, weight, orderings


def _zonotope_measure(zonotopes, n):
    constant = Fraction(2 ** (n - 1), math.factorial(n - 1))
    atoms = []
    for vectors, weight, orderings in _generator_choices(_grouped(zonotopes)):
        w = arith.generalized_cross(vectors)
        if arith.is_zero(w):
            continue
        c = constant * weight * orderings
        atoms.append((w, c))
        atoms.append((arith.neg(w), c))
    return atoms


def _planar_hull(points):
    """Indices of the strict 2D hull in counterclockwise order (monotone chain)."""
    order = sorted(range(len(points)), key=lambda i: points[i])
    unique = []
    for i in order:
        if not unique or points[unique[-1]] != points[i]:
            unique.append(i)
    if len(unique) < 3:
        return unique

    def turn(o, a, b):
        (ox, oy), (ax, ay), (bx, by) = points[o], points[a], points[b]
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)

    lower, upper = [], []
    for i in unique:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    for i in reversed(unique):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _polytope_measure(polytope, zonotopes, n):
    constant = Fraction(2 ** (n - 2), math.factorial(n - 1))
    points = polytope.points()
    atoms = []
    for vectors, weight, orderings in _generator_choices(_grouped(zonotopes)):
        if vectors and arith.rank(vectors) < len(vectors):
            continue
        b1, b2 = arith.nullspace(vectors, n)
        projected = [(arith.dot(p, b1), arith.dot(p, b2)) for p in points]
        hull = _planar_hull(projected)
        if len(hull) < 2:
            continue
        c = constant * weight * orderings
        if len(hull) == 2:
            w = arith.generalized_cross(vectors + [arith.sub(points[hull[0]], points[hull[1]])])
            atoms.extend([(w, c), (arith.neg(w), c)])
            continue
        for i, j in zip(hull, hull[1:] + hull[:1]):
            p, q = points[i], points[j]
            w = arith.generalized_cross(vectors + [arith.sub(p, q)])
            if arith.dot(w, p) < 0:
                w = arith.neg(w)
            atoms.append((w, c))
    return atoms


@lru_cache(maxsize=512)
def _area_measure(slots, n):
    polytopes = [s for s in slots if isinstance(s, SymmetricPolytope)]
    zonotopes = [s for s in slots if isinstance(s, Zonotope)]
    if len(polytopes) > 1:
        raise UnsupportedCombination('Mixed area measures allow at most one polytope slot.')
    if polytopes:
        atoms = _polytope_measure(polytopes[0], zonotopes, n)
    else:
        atoms = _zonotope_measure(zonotopes, n)
    measure = AtomicSphericalMeasure.from_atoms(n, atoms)
    logger.debug('Mixed area measure of %d slots in dimension %d: %d atoms.', len(slots), n, len(measure))
    return measure


def mixed_area_measure(slots: Sequence) -> AtomicSphericalMeasure:
    """S_{C_1,...,C_{n-1}} as merged (w, c) atoms in the length convention."""
    n, slots = _normalize(slots, 1)
    if n == 1:
        # S on S^0 with no slots: unit masses at +-1.
        return AtomicSphericalMeasure.from_atoms(1, [((1,), 1), ((-1,), 1)])
    return _area_measure(slots, n)


def _zonotope_mixed_volume(zonotopes, n):
    total = 0
    for vectors, weight, orderings in _generator_choices(_grouped(zonotopes)):
        d = arith.det(vectors)
        if d != 0:
            total += weight * orderings * abs(d)
    return Fraction(2 ** n, math.factorial(n)) * total


@lru_cache(maxsize=4096)
def _mixed_volume(slots, n):
    polytopes = [s for s in slots if isinstance(s, SymmetricPolytope)]
    if not polytopes:
        return _zonotope_mixed_volume(list(slots), n)
    if len(polytopes) > 2 or (len(polytopes) == 2 and polytopes[0] != polytopes[1]):
        raise UnsupportedCombination(
            'Mixed volumes with two distinct polytope slots are not supported.')
    integrand = polytopes[0]
    rest = list(slots)
    rest.remove(integrand)
    measure = mixed_area_measure(rest)
    return measure.integrate(integrand.support) / n


def mixed_volume(slots: Sequence) -> Scalar:
    """
    V(C_1, ..., C_n). All zonotopes: (2^n/n!) sum of prod(lambda) |det| over one
    generator per slot. With a polytope P: (1/n) integral of h_P against the
    area measure of the other slots.
    """
    n, slots = _normalize(slots, 0)
    return _mixed_volume(slots, n)


def _terms(slot):
    if isinstance(slot, (SupportExpr, Zonotope, SymmetricPolytope, SmoothBody)):
        return as_expr(slot).terms
    return ((1, as_slot(slot)),)


def mixed_value(slots: Sequence) -> Scalar:
    """V(f_1, ..., f_n) for support expressions, expanded multilinearly."""
    expanded = [_terms(s) for s in slots]
    total = 0
    for choice in product(*expanded):
        coefficient = 1
        for alpha, _ in choice:
            coefficient *= alpha
        total += coefficient * mixed_volume([body for _, body in choice])
    return total


def mixed_area_value(slots: Sequence) -> AtomicSphericalMeasure:
    """S_{f_1,...,f_{n-1}} for support expressions; atoms may be signed."""
    expanded = [_terms(s) for s in slots]
    n = len(slots) + 1
    total = AtomicSphericalMeasure.zero(n)
    for choice in product(*expanded):
        coefficient = 1
        for alpha, _ in choice:
            coefficient *= alpha
        total = total + mixed_area_measure([body for _, body in choice]).scaled(coefficient)
    return total


def cone_volume_measure(K: Zonotope) -> AtomicSphericalMeasure:
    """(1/n) h_K dS_{K,...,K} in the unit convention; total mass Vol(K)."""
    if not isinstance(K, Zonotope):
        raise UnsupportedCombination('Cone volume measures are computed for zonotopes.')
    if not K.full_dimensional:
        raise DegenerateBody('Cone volume measure needs a full-dimensional zonotope.')
    n = K.dim
    surface = mixed_area_measure([K] * (n - 1))
    return surface.density(lambda w: K.support(w) / n, degree=1)


# Projections

def _projection_frame(u):
    u = tuple(u)
    if arith.is_zero(u):
        raise PreconditionViolation('Projection direction u must be nonzero.')
    n = len(u)
    basis = arith.nullspace([u], n)
    gram = arith.gram_matrix(basis)
    return n, basis, gram, abs(arith.det([u] + basis))


def _project_zonotope(Z, basis, gram):
    """P_{u-perp} Z in the coordinates of ``basis``."""
    generators = []
    for v, weight in Z.generators:
        y = arith.solve(gram, tuple(arith.dot(b, v) for b in basis))
        if not arith.is_zero(y):
            generators.append((y, weight))
    return Zonotope.from_generators(generators, dim=len(basis))


def projection_identity_check(u, slots) -> InequalityReport:
    """
    (n/2) V([-u,u], C_1, ..., C_{n-1}) against the mixed volume of the
    projections onto u-perp, both exact. For non-unit u the right side is
    |det(u, B)| times the mixed volume in the coordinates of a rational
    basis B of u-perp.
    """
    n, basis, gram, scale = _projection_frame(u)
    slots = [as_slot(s) for s in slots]
    if any(not isinstance(s, Zonotope) for s in slots):
        raise UnsupportedCombination('The projection identity is checked for zonotope slots.')
    if len(slots) != n - 1 or any(s.dim != n for s in slots):
        raise DimensionMismatch('Expected %d slots in dimension %d.' % (n - 1, n))
    lhs = Fraction(n, 2) * mixed_volume([Zonotope.segment(u)] + slots)
    projected = [_project_zonotope(s, basis, gram) for s in slots]
    rhs = scale * mixed_volume(projected)
    return InequalityReport.build('projection-identity', n, lhs, rhs, form='volume')


def projected_area_measure(u, slots) -> AtomicSphericalMeasure:
    """
    |u| * S_{P C_1, ..., P C_{n-2}} computed intrinsically in u-perp and
    embedded in R^n; equals ((n-1)/2) S_{[-u,u], C_1, ..., C_{n-2}}.
    """
    u = tuple(u)
    if arith.is_zero(u):
        raise PreconditionViolation('Projection direction u must be nonzero.')
    n = len(u)
    slots = [as_slot(s) for s in slots]
    if len(slots) != n - 2 or any(not isinstance(s, Zonotope) or s.dim != n for s in slots):
        raise DimensionMismatch('Expected %d zonotope slots in dimension %d.' % (n - 2, n))
    uu = arith.dot(u, u)
    projected = []
    for s in slots:
        generators = []
        for v, weight in s.generators:
            pv = arith.sub(v, arith.scale(arith.dot(v, u) / uu, u))
            if not arith.is_zero(pv):
                generators.append((pv, weight))
        projected.append(Zonotope.from_generators(generators, dim=n))
    constant = Fraction(2 ** (n - 2), math.factorial(n - 2))
    atoms = []
    for vectors, weight, orderings in _generator_choices(_grouped(projected)):
        w = arith.generalized_cross([u] + vectors)
        if arith.is_zero(w):
            continue
        c = constant * weight * orderings
        atoms.extend([(w, c), (arith.neg(w), c)])
    return AtomicSphericalMeasure.from_atoms(n, atoms)


def projection_measure_check(u, slots) -> InequalityReport:
    u = tuple(u)
    n = len(u)
    left = mixed_area_measure([Zonotope.segment(u)] + [as_slot(s) for s in slots]).scaled(Fraction(n - 1, 2))
    right = projected_area_measure(u, slots)
    gap = left.discrepancy(right)
    report = InequalityReport.build(
        'projection-measure', n, left.integrate(lambda w: 1), right.integrate(lambda w: 1), form='measure')
    report.details['max_discrepancy'] = gap
    report.details['atoms'] = len(left)
    if gap != 0:
        report.verdict = Verdict.VIOLATED
    return report
