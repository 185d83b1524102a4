"""
Evaluators for the Brunn-Minkowski family of inequalities.

Every check returns an ``InequalityReport``; lhs >= rhs is the claim. Exact
inputs give exact verdicts except where a logarithm or an irrational root is
unavoidable, in which case the report records the float form and its
tolerance.
"""
import logging
import math
from fractions import Fraction
from itertools import combinations

from . import arith
from .bodies import (
    SmoothBody, SupportExpr, SymmetricPolytope, Zonotope, as_expr, body_volume,
    geomean_volume_bounds, minkowski_sum,
)
from .conf import logbm_settings
from .exceptions import (
    DegenerateBody, DimensionMismatch, NotSymmetric, PreconditionViolation,
    UnsupportedCombination,
)
from .mixedvol import mixed_area_measure, mixed_value
from .verdicts import InequalityReport, Verdict, decide, float_tolerance

logger = logging.getLogger(__name__)


def _require_zonotope(K):
    if not isinstance(K, Zonotope):
        raise UnsupportedCombination('K must be a zonotope, got a %s.' % K.kind)
    if not K.full_dimensional:
        raise DegenerateBody('K spans only %d of %d dimensions.' % (K.rank, K.dim))
    return K


def _require_same_dim(*bodies):
    dims = {b.dim for b in bodies}
    if len(dims) > 1:
        raise DimensionMismatch('Bodies live in dimensions %s.' % sorted(dims))
    return dims.pop()


def _check_expr(f):
    f = as_expr(f)
    if len(set(f.polytopes)) > 1:
        raise UnsupportedCombination('f may contain at most one polytope; V(f, f, ...) would need two.')
    if any(isinstance(b, SmoothBody) for b in f.bodies):
        raise UnsupportedCombination('f must combine zonotopes and polytopes only.')
    return f


def _parameter(t):
    t = arith.backend_of(t).scalar(t)
    if not 0 <= t <= 1:
        raise PreconditionViolation('t must lie in [0, 1], got %s.' % t)
    return t


def _combination(K, L, t):
    if t == 0:
        return K
    if t == 1:
        return L
    return minkowski_sum(K.scaled(1 - t), L.scaled(t))


def check_bm(K, L, t) -> InequalityReport:
    """
    Vol((1-t)K + tL) >= ((1-t) Vol(K)^(1/n) + t Vol(L)^(1/n))^n, exact when
    both volumes have rational n-th roots. The geometric-mean form
    Vol((1-t)K + tL) >= Vol(K)^(1-t) Vol(L)^t is reported alongside in float.
    """
    n = _require_same_dim(K, L)
    t = _parameter(t)
    for body in (K, L):
        if not isinstance(body, (Zonotope, SymmetricPolytope)):
            raise UnsupportedCombination('check_bm supports zonotopes and polytopes, not %s.' % body.kind)
    volume_k, volume_l = body_volume(K), body_volume(L)
    lhs = body_volume(_combination(K, L, t))

    root_k, root_l = arith.exact_root(volume_k, n), arith.exact_root(volume_l, n)
    if arith.backend_of(t, volume_k, volume_l).exact and root_k is not None and root_l is not None:
        report = InequalityReport.build('bm', n, lhs, ((1 - t) * root_k + t * root_l) ** n, form='power')
    else:
        logger.warning('Volumes have irrational %d-th roots; checking the power form in float.', n)
        rhs = ((1 - float(t)) * float(volume_k) ** (1 / n) + float(t) * float(volume_l) ** (1 / n)) ** n
        report = InequalityReport.build('bm', n, float(lhs), rhs, form='power (float)')

    geometric = float(volume_k) ** (1 - float(t)) * float(volume_l) ** float(t)
    report.details['geometric_mean'] = {
        'lhs': float(lhs),
        'rhs': geometric,
        'verdict': decide(float(lhs), geometric).value,
    }
    report.witness = {'K': K, 'L': L, 't': t}
    return report


def check_minkowski_first(K, L) -> InequalityReport:
    """V(L, K, ..., K)^n >= Vol(L) Vol(K)^(n-1)."""
    _require_zonotope(K)
    n = _require_same_dim(K, L)
    first = mixed_value([L] + [K] * (n - 1))
    lhs = first ** n
    rhs = body_volume(L) * body_volume(K) ** (n - 1)
    report = InequalityReport.build('mink1', n, lhs, rhs, form='power')
    report.details['V(L,K,...,K)'] = first
    report.witness = {'K': K, 'L': L}
    return report


def check_minkowski_second(K, L) -> InequalityReport:
    """V(L, K, ..., K)^2 >= V(L, L, K, ..., K) Vol(K)."""
    _require_zonotope(K)
    n = _require_same_dim(K, L)
    first = mixed_value([L] + [K] * (n - 1))
    second = mixed_value([L, L] + [K] * (n - 2))
    report = InequalityReport.build('mink2', n, first ** 2, second * body_volume(K))
    report.details.update({'V(L,K,...,K)': first, 'V(L,L,K,...,K)': second})
    report.witness = {'K': K, 'L': L}
    return report


def _untested_atoms(f, measure):
    return [w for w in measure.directions if f.support(w) == 0]


def check_local_logbm(K, f) -> InequalityReport:
    """
    V(f,K,...,K)^2 / Vol(K) >= ((n-1)/n) V(f,f,K,...,K) + (1/n^2) int f^2/h_K dS_{K,...,K}.

    The integral is evaluated atomwise as sum c f(w)^2 / h_K(w).
    """
    _require_zonotope(K)
    f = _check_expr(f)
    n = _require_same_dim(K, f)
    volume = body_volume(K)
    first = mixed_value([f] + [K] * (n - 1))
    second = mixed_value([f, f] + [K] * (n - 2))
    surface = mixed_area_measure([K] * (n - 1))
    integral = surface.integrate(lambda w: f.support(w) ** 2 / K.support(w))

    lhs = first ** 2 / volume
    rhs = Fraction(n - 1, n) * second + integral / n ** 2
    report = InequalityReport.build('local-logbm', n, lhs, rhs)
    report.details.update({
        'vol(K)': volume,
        'V(f,K,...,K)': first,
        'V(f,f,K,...,K)': second,
        'int f^2/h_K dS': integral,
    })
    flat = _untested_atoms(f, surface)
    if flat and len(f.terms) == 1:
        logger.warning('f vanishes at %d atoms of S_K; degenerate L is untested territory.', len(flat))
        report.details['untested'] = 'f vanishes on %d atoms of S_{K,...,K}' % len(flat)
    report.witness = {'K': K, 'f': f}
    return report


def _log_terms(K, L, surface):
    terms = []
    for w, c in surface.atoms:
        h_l, h_k = L.support(w), K.support(w)
        if h_l <= 0:
            raise DegenerateBody('h_L vanishes at the atom %s; L is not full-dimensional.' % (w,))
        terms.append((c * h_k, Fraction(h_l) / Fraction(h_k) if arith.backend_of(h_l, h_k).exact
                      else h_l / h_k))
    return terms


def check_log_minkowski(K, L) -> InequalityReport:
    """
    int h_K log(h_L/h_K) dS_{K,...,K} >= Vol(K) log(Vol(L)/Vol(K)), in double
    precision with a worst-case error bound taken from the exact atom data.
    """
    _require_zonotope(K)
    n = _require_same_dim(K, L)
    surface = mixed_area_measure([K] * (n - 1))
    terms = _log_terms(K, L, surface)
    volume_k, volume_l = body_volume(K), body_volume(L)

    ratios = {ratio for _, ratio in terms}
    if len(ratios) == 1 and arith.backend_of(*ratios, volume_k, volume_l).exact:
        ratio = ratios.pop()
        if volume_l == ratio ** n * volume_k:
            # Homothetic pair: both sides equal n Vol(K) log(ratio).
            value = n * float(volume_k) * math.log(ratio)
            report = InequalityReport('logmink', n, value, value, Verdict.EQUALITY, form='homothetic')
            report.witness = {'K': K, 'L': L}
            return report

    values = [float(weight) * math.log(ratio) for weight, ratio in terms]
    lhs = math.fsum(values)
    rhs = float(volume_k) * math.log(Fraction(volume_l) / Fraction(volume_k))
    error = logbm_settings.TOLERANCE['LOG_ULPS'] * 2 ** -52 * (math.fsum(abs(v) for v in values) + abs(rhs))
    report = InequalityReport.build('logmink', n, lhs, rhs, form='float', tolerance=error, error_bound=error)
    report.witness = {'K': K, 'L': L}
    return report


def check_induction_step(K, f, u) -> InequalityReport:
    """
    With S = [-u, u]:
    V(S,f,K,...)^2 / V(S,K,...) >= ((n-2)/(n-1)) V(S,f,f,K,...)
                                    + (1/(n(n-1))) int f^2/h_K dS_{S,K,...,K}.
    """
    _require_zonotope(K)
    f = _check_expr(f)
    n = _require_same_dim(K, f)
    if n < 3:
        raise PreconditionViolation('The induction step needs n >= 3.')
    if len(u) != n:
        raise DimensionMismatch('u has dimension %d, expected %d.' % (len(u), n))
    segment = Zonotope.segment(u)
    base = mixed_value([segment] + [K] * (n - 1))
    if base == 0:
        raise DegenerateBody('V([-u,u], K, ..., K) vanishes.')
    first = mixed_value([segment, f] + [K] * (n - 2))
    second = mixed_value([segment, f, f] + [K] * (n - 3))
    surface = mixed_area_measure([segment] + [K] * (n - 2))
    integral = surface.integrate(lambda w: f.support(w) ** 2 / K.support(w))

    lhs = first ** 2 / base
    rhs = Fraction(n - 2, n - 1) * second + integral / (n * (n - 1))
    report = InequalityReport.build('indstep', n, lhs, rhs)
    report.details.update({
        'V(S,K,...,K)': base,
        'V(S,f,K,...,K)': first,
        'V(S,f,f,K,...,K)': second,
        'int f^2/h_K dS': integral,
    })
    report.witness = {'K': K, 'f': f, 'u': tuple(u)}
    return report


def check_hilbert_projection(K, L) -> InequalityReport:
    """0 >= V(f, f, K, ..., K) for f = h_L - (V(L,K,...,K)/Vol(K)) h_K."""
    _require_zonotope(K)
    n = _require_same_dim(K, L)
    a = mixed_value([L] + [K] * (n - 1)) / body_volume(K)
    f = SupportExpr.combine((1, L), (-a, K))
    value = mixed_value([f, f] + [K] * (n - 2))
    report = InequalityReport.build('hilbert', n, 0, value)
    report.details['a'] = a
    report.witness = {'K': K, 'L': L}
    return report


def check_km_spectral_form(K, L) -> InequalityReport:
    """
    With f the projection of h_L on h_K's orthocomplement in L^2(mu_K):
    -(1/(n-1)) <f, f>_{mu_K} >= V(f, f, K, ..., K), where
    <f, f>_{mu_K} = (1/n) int f^2/h_K dS_{K,...,K}.
    """
    _require_zonotope(K)
    _check_expr(L)
    n = _require_same_dim(K, L)
    if n < 2:
        raise PreconditionViolation('The spectral form needs n >= 2.')
    a = mixed_value([L] + [K] * (n - 1)) / body_volume(K)
    f = SupportExpr.combine((1, L), (-a, K))
    surface = mixed_area_measure([K] * (n - 1))
    norm = surface.integrate(lambda w: f.support(w) ** 2 / K.support(w)) / n
    value = mixed_value([f, f] + [K] * (n - 2))
    report = InequalityReport.build('km-spectral', n, -norm / (n - 1), value)
    report.details.update({'a': a, '<f,f>': norm})
    report.witness = {'K': K, 'L': L}
    return report


def check_geomean_logbm(K, L, t, directions=None, sample_budget=None, seed=0) -> InequalityReport:
    """
    Vol(K^(1-t) L^t) >= Vol(K)^(1-t) Vol(L)^t from certified float bounds:
    holds when the lower bound clears the right side, violated when the upper
    bound falls below it, inconclusive otherwise.
    """
    n = _require_same_dim(K, L)
    t = float(_parameter(t))
    lower, upper = geomean_volume_bounds(K, L, t, directions=directions,
                                         sample_budget=sample_budget, seed=seed)
    rhs = float(body_volume(K)) ** (1 - t) * float(body_volume(L)) ** t
    tolerance = logbm_settings.TOLERANCE['GEOMEAN'] * max(1.0, rhs)
    report = InequalityReport.build('geomean', n, lower, rhs, form='bounds (float)', tolerance=tolerance)
    if report.verdict is Verdict.VIOLATED and upper >= rhs - tolerance:
        report.verdict = Verdict.INCONCLUSIVE
    report.details.update({'lower': lower, 'upper': upper})
    report.witness = {'K': K, 'L': L, 't': t}
    return report


# Mixed discriminants

def _square(matrix, size=None):
    rows = [tuple(row) for row in matrix]
    size = len(rows) if size is None else size
    if len(rows) != size or any(len(row) != size for row in rows):
        raise DimensionMismatch('Expected a %dx%d matrix.' % (size, size))
    backend = arith.backend_of(*(a for row in rows for a in row))
    return backend.matrix(rows)


def _require_symmetric(matrix, label):
    size = len(matrix)
    if any(matrix[i][j] != matrix[j][i] for i in range(size) for j in range(i)):
        raise NotSymmetric('%s is not symmetric.' % label)


def _matrix_sum(matrices, size):
    return [[sum(m[i][j] for m in matrices) for j in range(size)] for i in range(size)]


def mixed_discriminant(matrices) -> arith.Scalar:
    """
    D(A_1, ..., A_m) = (1/m!) sum over nonempty S of (-1)^(m-|S|) det(sum_{i in S} A_i).
    """
    if not matrices:
        raise DimensionMismatch('mixed_discriminant needs at least one matrix.')
    size = len(matrices[0])
    matrices = [_square(m, size) for m in matrices]
    m = len(matrices)
    if m != size:
        raise DimensionMismatch('%d matrices of size %d: the count must equal the size.' % (m, size))
    total = 0
    for k in range(1, m + 1):
        sign = -1 if (m - k) % 2 else 1
        for subset in combinations(matrices, k):
            total += sign * arith.det(_matrix_sum(subset, size))
    if arith.backend_of(total).exact:
        return Fraction(total) / math.factorial(m)
    return total / math.factorial(m)


def is_positive_semidefinite(matrix) -> bool:
    """All principal minors nonnegative (exact on rational input)."""
    size = len(matrix)
    for k in range(1, size + 1):
        for idx in combinations(range(size), k):
            minor = arith.det([[matrix[i][j] for j in idx] for i in idx])
            if minor < 0:
                return False
    return True


def check_alexandrov_mixed_discriminant(A, B, others=()) -> InequalityReport:
    """D(A, B, M...)^2 >= D(A, A, M...) D(B, B, M...) for symmetric A and PSD B, M_i."""
    size = len(A)
    A, B = _square(A, size), _square(B, size)
    others = [_square(M, size) for M in others]
    if len(others) != size - 2:
        raise DimensionMismatch('Matrices of size %d need %d extra slots, got %d.'
                                % (size, size - 2, len(others)))
    _require_symmetric(A, 'A')
    for label, M in [('B', B)] + [('M_%d' % (i + 1), M) for i, M in enumerate(others)]:
        _require_symmetric(M, label)
        if not is_positive_semidefinite(M):
            raise PreconditionViolation('%s is not positive semidefinite.' % label)
    mixed = mixed_discriminant([A, B] + others)
    lhs = mixed ** 2
    rhs = mixed_discriminant([A, A] + others) * mixed_discriminant([B, B] + others)
    tolerance = None if arith.backend_of(lhs, rhs).exact else float_tolerance(lhs, rhs)
    report = InequalityReport.build('mixdisc', size + 1, lhs, rhs, tolerance=tolerance)
    report.details['D(A,B,M...)'] = mixed
    report.witness = {'A': A, 'B': B, 'M': others}
    return report
