"""
Equality cases of the local log-Brunn-Minkowski inequality for zonotopes.

Equality holds exactly when L is, on the supports that matter, a rescaling
of each direct summand of K separately. ``certify_equality`` produces the
summands and their scales or a refutation carrying the offending atoms.
"""
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import List, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import arith
from .bodies import SupportExpr, Zonotope, body_volume, minkowski_sum
from .exceptions import DegenerateBody, PreconditionViolation, UnsupportedCombination
from .inequalities import check_induction_step, check_local_logbm
from .mixedvol import (
    AtomicSphericalMeasure, cone_volume_measure, mixed_area_measure, mixed_area_value,
    mixed_value, mixed_volume,
)
from .verdicts import InequalityReport, Verdict

logger = logging.getLogger(__name__)


@dataclass
class MeasureEqualityReport:
    lhs: AtomicSphericalMeasure
    rhs: AtomicSphericalMeasure
    matched: bool
    max_discrepancy: object
    scale: object = None


@dataclass
class GeneratorGraph:
    vertices: List[Tuple]
    edges: List[Tuple[int, int]]
    components: List[List[int]]


@dataclass
class DecompositionCertificate:
    components: List[List[int]]
    dims: List[int]
    scales: List[object]
    residual: dict = field(default_factory=dict)


@dataclass
class Refutation:
    reason: str
    detail: str = ''
    witness_atoms: List[dict] = field(default_factory=list)
    deficit: object = None


@dataclass
class ProbeReport:
    equal_measures: bool
    same_body: bool
    max_discrepancy: object
    atoms: Tuple[int, int] = (0, 0)


def _surface(K):
    return mixed_area_measure([K] * (K.dim - 1))


def check_alexandrov_condition(K, L) -> MeasureEqualityReport:
    """
    Compare h_K dS_{f,K,...,K} with -(1/(n-1)) f dS_{K,...,K} for
    f = h_L - a h_K, a = V(L,K,...,K)/Vol(K). Both sides are unit-convention
    measures built atomwise; they agree exactly when the local inequality is
    an equality.
    """
    if not isinstance(K, Zonotope) or not K.full_dimensional:
        raise DegenerateBody('K must be a full-dimensional zonotope.')
    n = K.dim
    a = mixed_value([L] + [K] * (n - 1)) / body_volume(K)
    f = SupportExpr.combine((1, L), (-a, K))
    mixed = mixed_area_value([f] + [K] * (n - 2))
    lhs = mixed.density(K.support, degree=1)
    rhs = _surface(K).density(lambda w: -f.support(w) / (n - 1), degree=1)
    gap = lhs.discrepancy(rhs)
    return MeasureEqualityReport(lhs, rhs, gap == 0, gap, scale=a)


def check_alexandrov_equality(K, L) -> InequalityReport:
    """The measure condition as a report: lhs is the largest atom discrepancy, rhs 0."""
    result = check_alexandrov_condition(K, L)
    verdict = Verdict.EQUALITY if result.matched else Verdict.HOLDS
    report = InequalityReport('alexandrov-eq', K.dim, result.max_discrepancy, 0, verdict, form='measure')
    report.details.update({
        'a': result.scale,
        'h_K dS_{f,K,...,K}': result.lhs,
        '-f dS_{K,...,K}/(n-1)': result.rhs,
    })
    report.witness = {'K': K, 'L': L}
    return report


def generator_graph(K: Zonotope) -> GeneratorGraph:
    """
    Vertices are the merged generator directions; u_i ~ u_j when one atom w
    of S_{K,...,K} has <u_i, w> != 0 and <u_j, w> != 0.
    """
    if not K.full_dimensional:
        raise DegenerateBody('The generator graph needs a full-dimensional zonotope.')
    directions = K.directions
    edges = set()
    for w in _surface(K).directions:
        touched = [i for i, u in enumerate(directions) if arith.dot(u, w) != 0]
        for a in range(len(touched)):
            for b in range(a + 1, len(touched)):
                edges.add((touched[a], touched[b]))
    edges = sorted(edges)
    m = len(directions)
    rows = [i for i, _ in edges]
    cols = [j for _, j in edges]
    adjacency = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(m, m))
    _, labels = connected_components(adjacency, directed=False)
    grouped = {}
    for index, label in enumerate(labels):
        grouped.setdefault(int(label), []).append(index)
    components = sorted(grouped.values(), key=min)
    logger.debug('Generator graph: %d vertices, %d edges, %d components.', m, len(edges), len(components))
    return GeneratorGraph(directions, edges, components)


def _component_zonotope(K, indices, scale=1):
    return Zonotope.from_generators(
        [(K.generators[i][0], scale * K.generators[i][1]) for i in indices], dim=K.dim)


def _atom_witness(w, **values):
    return dict({'w': w}, **values)


def certify_equality(K, L):
    """
    A DecompositionCertificate when equality holds for (K, L), else a Refutation.
    """
    report = check_local_logbm(K, L)
    if report.verdict is not Verdict.EQUALITY:
        return Refutation('inequality strict', 'local log-BM deficit is %s' % report.deficit,
                          deficit=report.deficit)

    graph = generator_graph(K)
    directions = K.directions
    dims = [arith.rank([directions[i] for i in comp]) for comp in graph.components]
    if sum(dims) != K.dim:
        return Refutation('not a direct sum',
                          'component spans have dimensions %s in R^%d' % (dims, K.dim))

    surface = _surface(K)
    scales = []
    for comp in graph.components:
        atoms = [w for w in surface.directions if any(arith.dot(directions[i], w) != 0 for i in comp)]
        first = atoms[0]
        a = Fraction(L.support(first)) / Fraction(K.support(first))
        for w in atoms[1:]:
            ratio = Fraction(L.support(w)) / Fraction(K.support(w))
            if ratio != a:
                return Refutation(
                    'inconsistent scale',
                    'h_L/h_K takes values %s and %s on one component' % (a, ratio),
                    [_atom_witness(first, ratio=a), _atom_witness(w, ratio=ratio)])
        scales.append(a)

    pieces = [_component_zonotope(K, comp, a) for comp, a in zip(graph.components, scales) if a != 0]
    rebuilt = minkowski_sum(*pieces) if pieces else Zonotope(K.dim, ())
    checked = list(surface.directions)
    if rebuilt.generators:
        checked += mixed_area_measure([rebuilt] + [K] * (K.dim - 2)).directions
    mismatches = [_atom_witness(w, h_L=L.support(w), h_rebuilt=rebuilt.support(w))
                  for w in dict.fromkeys(checked) if L.support(w) != rebuilt.support(w)]
    if mismatches:
        return Refutation('support mismatch',
                          'h_L differs from the rebuilt sum at %d atoms' % len(mismatches), mismatches[:4])
    return DecompositionCertificate(
        [list(comp) for comp in graph.components], dims, scales,
        {'checked_atoms': len(set(checked)), 'max_residual': 0})


def cone_volume_uniqueness_probe(K, L) -> ProbeReport:
    left, right = cone_volume_measure(K), cone_volume_measure(L)
    gap = left.discrepancy(right)
    same = K.dim == L.dim and set(K.generators) == set(L.generators)
    return ProbeReport(gap == 0, same, gap, (len(left), len(right)))


@dataclass
class DirectSumProfile:
    dims: List[int]
    gamma: object
    volume: object
    predicted: object

    @property
    def matched(self):
        return self.volume == self.predicted


def direct_sum_profile(components, b) -> DirectSumProfile:
    """Vol(sum b_i C_i) against Gamma * prod b_i^dim(C_i), Gamma = Vol(sum C_i)."""
    if len(components) != len(b):
        raise PreconditionViolation('One scale per component is required.')
    if any(x <= 0 for x in b):
        raise PreconditionViolation('Direct-sum scales must be positive.')
    dims = [c.rank for c in components]
    if sum(dims) != components[0].dim:
        raise DegenerateBody('Components of dimensions %s do not form a direct sum.' % dims)
    gamma = body_volume(minkowski_sum(*components))
    volume = body_volume(minkowski_sum(*(c.scaled(x) for c, x in zip(components, b))))
    predicted = gamma
    for x, d in zip(b, dims):
        predicted *= x ** d
    return DirectSumProfile(dims, gamma, volume, predicted)


def multiplicity_support(components) -> List[Tuple[Tuple[int, ...], object, bool]]:
    """
    (multiset of component indices, mixed volume, expected nonzero) for every
    n-multiset; the mixed volume is nonzero exactly when index i appears
    dim(C_i) times.
    """
    n = components[0].dim
    dims = [c.rank for c in components]
    rows = []
    for multiset in combinations_with_replacement(range(len(components)), n):
        counts = Counter(multiset)
        expected = all(counts[i] == d for i, d in enumerate(dims))
        value = mixed_volume([components[i] for i in multiset])
        rows.append((multiset, value, expected))
    return rows


def projection_equality_check(K, L, directions=None) -> List[Tuple[tuple, InequalityReport]]:
    """
    For an equality pair (K, L), the induction-step form along each generator
    direction u of K (the projections onto u-perp) is again an equality.
    """
    if not isinstance(K, Zonotope):
        raise UnsupportedCombination('K must be a zonotope.')
    if K.dim < 3:
        raise PreconditionViolation('Projections need n >= 3.')
    directions = K.directions if directions is None else [tuple(u) for u in directions]
    return [(u, check_induction_step(K, L, u)) for u in directions]
