"""
Numerical Hilbert-operator checks for smooth zonoids.

On the circle the operator A_K f = h (f'' + f) / (h'' + h) is discretized on
a uniform grid with spectral derivatives and solved as a generalized
symmetric eigenproblem, separately on the even and odd subspaces. On S^2
only quadratic forms are evaluated, with a centroid rule on a subdivided
icosahedron.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List

import numpy as np
import scipy.linalg

from .bodies import SmoothBody, SymmetricPolytope, Zonotope, as_expr
from .conf import logbm_settings
from .exceptions import (
    ConvexityViolation, DimensionMismatch, NotSymmetric, PreconditionViolation,
    UnsupportedCombination,
)
from .mixedvol import LENGTH, AtomicSphericalMeasure, mixed_area_measure
from .verdicts import InequalityReport, decide

logger = logging.getLogger(__name__)


# Circle

def _ellipse_terms(K, theta):
    """h and h'' along the circle for a planar sum of ellipses, in closed form."""
    c, s = np.cos(theta), np.sin(theta)
    h = np.zeros_like(theta)
    h2 = np.zeros_like(theta)
    for A in K.arrays:
        q = A[0, 0] * c * c + 2 * A[0, 1] * c * s + A[1, 1] * s * s
        dq = 2 * ((A[1, 1] - A[0, 0]) * c * s + A[0, 1] * (c * c - s * s))
        d2q = 2 * ((A[1, 1] - A[0, 0]) * (c * c - s * s) - 4 * A[0, 1] * c * s)
        root = np.sqrt(q)
        h += root
        h2 += d2q / (2 * root) - dq ** 2 / (4 * root ** 3)
    return h, h2


def second_derivative(values: np.ndarray) -> np.ndarray:
    """Spectral second derivative of a periodic grid function on [0, 2 pi)."""
    N = len(values)
    k = np.fft.fftfreq(N, d=1.0 / N)
    return np.real(np.fft.ifft(-(k ** 2) * np.fft.fft(values)))


@dataclass
class CircleOperator:
    theta: np.ndarray
    h: np.ndarray
    h2: np.ndarray

    def __post_init__(self):
        if len(self.theta) % 2:
            raise PreconditionViolation('The circle grid size must be even.')
        bad = np.flatnonzero(self.rho <= 0)
        if len(bad):
            raise ConvexityViolation(
                "h'' + h <= 0 at %d grid nodes (first at theta=%.6f)." % (len(bad), self.theta[bad[0]]))
        if np.any(self.h <= 0):
            raise ConvexityViolation('The support function must be positive on the circle.')

    @staticmethod
    def grid(N=None):
        N = N or logbm_settings.SPECTRAL['GRID']
        return 2 * np.pi * np.arange(N) / N

    @classmethod
    def from_body(cls, K, N=None):
        if not isinstance(K, SmoothBody) or K.dim != 2:
            raise UnsupportedCombination('The circle operator needs a planar smooth body.')
        theta = cls.grid(N)
        return cls(theta, *_ellipse_terms(K, theta))

    @classmethod
    def from_support(cls, support, N=None):
        """Any support function of theta; h'' by centered second differences."""
        theta = cls.grid(N)
        h = np.asarray([support(t) for t in theta], dtype=float)
        step = theta[1] - theta[0]
        h2 = (np.roll(h, -1) - 2 * h + np.roll(h, 1)) / step ** 2
        return cls(theta, h, h2)

    @property
    def N(self):
        return len(self.theta)

    @property
    def rho(self):
        return self.h2 + self.h

    @property
    def weights(self):
        """mu_K = (h'' + h) / (2h) d theta at the nodes."""
        return self.rho / (2 * self.h) * (2 * np.pi / self.N)

    def sample(self, f):
        if callable(f):
            return np.asarray([f(t) for t in self.theta], dtype=float)
        f = np.asarray(f, dtype=float)
        if f.shape != self.theta.shape:
            raise DimensionMismatch('Expected %d grid values, got %s.' % (self.N, f.shape))
        return f

    def apply(self, f):
        f = self.sample(f)
        return self.h * (second_derivative(f) + f) / self.rho

    def inner(self, f, g):
        return float(np.dot(self.sample(f) * self.sample(g), self.weights))

    def stiffness(self):
        N = self.N
        k = np.fft.fftfreq(N, d=1.0 / N)
        D2 = np.real(np.fft.ifft(-(k ** 2)[:, None] * np.fft.fft(np.eye(N), axis=0), axis=0))
        S = D2 + np.eye(N)
        return (S + S.T) / 2

    def mass(self):
        return np.diag(self.rho / self.h)


def parity_basis(N, parity):
    """Orthonormal basis of the grid functions with f(theta + pi) = +-f(theta)."""
    half = N // 2
    sign = 1.0 if parity == 'even' else -1.0
    E = np.zeros((N, half))
    index = np.arange(half)
    E[index, index] = 1 / math.sqrt(2)
    E[index + half, index] = sign / math.sqrt(2)
    return E


def parity_leakage(operator: CircleOperator) -> float:
    """Norm of the even-odd block of the stiffness and mass matrices."""
    even, odd = parity_basis(operator.N, 'even'), parity_basis(operator.N, 'odd')
    return max(np.linalg.norm(even.T @ M @ odd) for M in (operator.stiffness(), operator.mass()))


@dataclass
class CircleSpectrum:
    eigenvalues: np.ndarray
    parities: List[str]
    vectors: np.ndarray
    operator: CircleOperator = field(repr=False)

    def of_parity(self, parity):
        return np.array([v for v, p in zip(self.eigenvalues, self.parities) if p == parity])

    @property
    def principal_index(self):
        """Even eigenvector most aligned with h_K in L^2(mu_K)."""
        h = self.operator.h
        best, score = None, -1.0
        for i, parity in enumerate(self.parities):
            if parity != 'even':
                continue
            v = self.vectors[:, i]
            alignment = abs(self.operator.inner(v, h)) / math.sqrt(
                self.operator.inner(v, v) * self.operator.inner(h, h))
            if alignment > score:
                best, score = i, alignment
        return best

    @property
    def principal_eigenvalue(self):
        return float(self.eigenvalues[self.principal_index])

    def top_even_orthogonal(self):
        """Largest even eigenvalue apart from the one carried by h_K."""
        skip = self.principal_index
        return max(float(v) for i, (v, p) in enumerate(zip(self.eigenvalues, self.parities))
                   if p == 'even' and i != skip)

    def rows(self):
        return [(i, p, float(v)) for i, (v, p) in enumerate(zip(self.eigenvalues, self.parities))]


def circle_spectrum(K, N=None) -> CircleSpectrum:
    """Eigenvalues of A_K on the circle, sorted descending, with parity labels."""
    operator = K if isinstance(K, CircleOperator) else CircleOperator.from_body(K, N)
    S, M = operator.stiffness(), operator.mass()
    values, parities, vectors = [], [], []
    for parity in ('even', 'odd'):
        E = parity_basis(operator.N, parity)
        w, v = scipy.linalg.eigh(E.T @ S @ E, E.T @ M @ E)
        values.extend(w)
        parities.extend([parity] * len(w))
        vectors.append(E @ v)
    vectors = np.hstack(vectors)
    order = np.argsort(-np.asarray(values), kind='stable')
    logger.debug('Circle spectrum on %d nodes: top eigenvalue %.9f.', operator.N, values[order[0]])
    return CircleSpectrum(np.asarray(values)[order], [parities[i] for i in order],
                          vectors[:, order], operator)


def _check_even(operator, f):
    half = operator.N // 2
    scale = max(1.0, float(np.max(np.abs(f))))
    if np.max(np.abs(f - np.roll(f, -half))) > 1e-9 * scale:
        raise NotSymmetric('f is not even: f(theta + pi) != f(theta).')


def check_superlich_circle(K, f, N=None) -> InequalityReport:
    """<A f, A f> >= <f, f> in L^2(mu_K) for even f on the circle."""
    operator = K if isinstance(K, CircleOperator) else CircleOperator.from_body(K, N)
    f = operator.sample(f)
    _check_even(operator, f)
    Af = operator.apply(f)
    lhs, rhs = operator.inner(Af, Af), operator.inner(f, f)
    tolerance = logbm_settings.TOLERANCE['SPECTRAL'] * max(1.0, abs(rhs))
    report = InequalityReport.build('superlich-circle', 2, lhs, rhs, form='circle', tolerance=tolerance)
    report.details['<f,Af>'] = operator.inner(f, Af)
    report.details['N'] = operator.N
    return report


def circle_hilbert_projection(K, f, N=None) -> InequalityReport:
    """<g, A g> <= 0 for g the projection of f onto h_K's orthocomplement."""
    operator = K if isinstance(K, CircleOperator) else CircleOperator.from_body(K, N)
    f = operator.sample(f)
    h = operator.h
    g = f - operator.inner(f, h) / operator.inner(h, h) * h
    value = operator.inner(g, operator.apply(g))
    tolerance = logbm_settings.TOLERANCE['SPECTRAL'] * max(1.0, operator.inner(g, g))
    report = InequalityReport.build('hilbert-circle', 2, 0.0, value, form='circle', tolerance=tolerance)
    report.details['<g,g>'] = operator.inner(g, g)
    return report


def _rotate_clockwise(w):
    return (w[1], -w[0])


def planar_generating_measure(source, N=None) -> Zonotope:
    """
    Generating measure of a planar symmetric body as a zonotope: each atom of
    S_K becomes the generator u-dagger (u rotated clockwise by a right angle)
    with a quarter of its mass.
    """
    if isinstance(source, SmoothBody):
        operator = CircleOperator.from_body(source, N)
        step = 2 * np.pi / operator.N
        generators = [((math.sin(t), -math.cos(t)), r * step / 4)
                      for t, r in zip(operator.theta, operator.rho)]
        return Zonotope.from_generators(generators)
    if isinstance(source, (Zonotope, SymmetricPolytope)):
        if source.dim != 2:
            raise DimensionMismatch('The planar generating measure needs a planar body.')
        source = mixed_area_measure([source])
    if not isinstance(source, AtomicSphericalMeasure) or source.dim != 2:
        raise DimensionMismatch('Expected a planar body or a planar area measure.')
    if source.convention != LENGTH:
        raise UnsupportedCombination('Area measures use the length convention.')
    if not source.even:
        raise NotSymmetric('S_K is not even; the body is not origin-symmetric.')
    return Zonotope.from_generators([(_rotate_clockwise(w), c / 4) for w, c in source.atoms], dim=2)


# Sphere

def icosahedron():
    t = (1.0 + 5 ** 0.5) / 2.0
    vertices = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    faces = np.array([
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ])
    vertices /= np.linalg.norm(vertices, axis=1)[:, None]
    return vertices, faces


def _normalized(points):
    return points / np.linalg.norm(points, axis=-1)[..., None]


def subdivide(triangles: np.ndarray) -> np.ndarray:
    """Split each spherical triangle (F, 3, 3) into four."""
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    ab, bc, ca = _normalized(a + b), _normalized(b + c), _normalized(c + a)
    return np.concatenate([
        np.stack([a, ab, ca], axis=1),
        np.stack([ab, b, bc], axis=1),
        np.stack([ca, bc, c], axis=1),
        np.stack([ab, bc, ca], axis=1),
    ])


def spherical_areas(triangles: np.ndarray) -> np.ndarray:
    a, b, c = triangles[:, 0], triangles[:, 1], triangles[:, 2]
    triple = np.abs(np.einsum('ij,ij->i', a, np.cross(b, c)))
    denominator = 1 + np.einsum('ij,ij->i', a, b) + np.einsum('ij,ij->i', b, c) + np.einsum('ij,ij->i', c, a)
    return 2 * np.arctan2(triple, denominator)


@dataclass
class SphereQuadrature:
    level: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def icosahedral(cls, level=None):
        if level is None:
            level = logbm_settings.SPECTRAL['LEVEL']
        vertices, faces = icosahedron()
        triangles = vertices[faces]
        for _ in range(level):
            triangles = subdivide(triangles)
        nodes = _normalized(triangles.mean(axis=1))
        return cls(level, nodes, spherical_areas(triangles))

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))

    def tangent_frames(self) -> np.ndarray:
        """(N, 3, 2) orthonormal bases of the tangent planes."""
        x = self.nodes
        axis = np.zeros_like(x)
        axis[np.arange(len(x)), np.argmin(np.abs(x), axis=1)] = 1.0
        t1 = _normalized(np.cross(x, axis))
        t2 = np.cross(x, t1)
        return np.stack([t1, t2], axis=2)


def _smooth_terms(f, dim):
    terms = []
    for alpha, body in as_expr(f).terms:
        if not isinstance(body, SmoothBody):
            raise UnsupportedCombination('Sphere quadrature needs smooth bodies, got a %s.' % body.kind)
        if body.dim != dim:
            raise DimensionMismatch('Expected bodies in R^%d.' % dim)
        terms.append((float(alpha), body))
    return terms


def values_and_hessians(f, quadrature: SphereQuadrature):
    """f and its tangential Hessian D^2 f (N, 2, 2) at the nodes."""
    frames = quadrature.tangent_frames()
    values = np.zeros(len(quadrature.nodes))
    hessians = np.zeros((len(quadrature.nodes), 2, 2))
    for alpha, body in _smooth_terms(f, 3):
        values += alpha * body.support_values(quadrature.nodes)
        full = body.hessians(quadrature.nodes)
        hessians += alpha * np.einsum('nia,nij,njb->nab', frames, full, frames)
    return values, hessians


def _det2(A):
    return A[:, 0, 0] * A[:, 1, 1] - A[:, 0, 1] * A[:, 1, 0]


def mixed_discriminant2(A, B):
    """D(A, B) = (det(A + B) - det A - det B) / 2 for stacks of 2x2 matrices."""
    return (_det2(A + B) - _det2(A) - _det2(B)) / 2


@dataclass
class QuadraticForms:
    level: int
    AfAf: float
    fAf: float
    ff: float
    side1: float
    side2: float

    @property
    def residual(self):
        return abs(self.side1 - self.side2)


def quadratic_forms(K, f, quadrature=None) -> QuadraticForms:
    """
    The L^2(mu_K) forms of A_K on S^2, mu_K = Q / (3 h_K) d omega with
    Q = det D^2 h_K, and both sides of the Bochner identity.
    """
    quadrature = quadrature or SphereQuadrature.icosahedral()
    h, HK = values_and_hessians(K, quadrature)
    fv, HF = values_and_hessians(f, quadrature)
    Q = _det2(HK)
    if np.any(Q <= 0) or np.any(h <= 0):
        raise ConvexityViolation('det D^2 h_K <= 0 at %d nodes.' % int(np.sum(Q <= 0)))
    DfK = mixed_discriminant2(HF, HK)
    Dff = _det2(HF)
    integrate = quadrature.integrate
    AfAf = integrate(h * DfK ** 2 / Q) / 3
    fAf = integrate(fv * DfK) / 3
    ff = integrate(fv ** 2 * Q / h) / 3
    side2 = integrate(h * (DfK ** 2 / Q - Dff)) / 3
    return QuadraticForms(quadrature.level, AfAf, fAf, ff, AfAf - fAf, side2)


def quadrature_mixed_value(f, g, K, quadrature=None) -> float:
    """V(f, g, K) = (1/3) int f D(D^2 g, D^2 h_K) d omega."""
    quadrature = quadrature or SphereQuadrature.icosahedral()
    fv, _ = values_and_hessians(f, quadrature)
    _, HG = values_and_hessians(g, quadrature)
    _, HK = values_and_hessians(K, quadrature)
    return quadrature.integrate(fv * mixed_discriminant2(HG, HK)) / 3


def quadrature_volume(K, quadrature=None) -> float:
    """Vol(K) = (1/3) int h_K det D^2 h_K d omega."""
    quadrature = quadrature or SphereQuadrature.icosahedral()
    h, HK = values_and_hessians(K, quadrature)
    return quadrature.integrate(h * _det2(HK)) / 3


def bochner_residual(K, f, quadrature=None):
    """(side1, side2, |side1 - side2|) of the Bochner identity."""
    forms = quadratic_forms(K, f, quadrature)
    return forms.side1, forms.side2, forms.residual


def bochner_convergence(K, f, levels=None) -> List[QuadraticForms]:
    low, high = levels or logbm_settings.SPECTRAL['LEVELS']
    return [quadratic_forms(K, f, SphereQuadrature.icosahedral(level)) for level in range(low, high + 1)]


def check_superlich_quadrature(K, f, level=None) -> InequalityReport:
    """
    <A f, A f> >= (1/2) <f, A f> + (1/2) <f, f> on S^2. The margin is the
    larger of the configured floor and ten times the change from the next
    coarser level.
    """
    if not isinstance(K, SmoothBody) or K.dim != 3:
        raise UnsupportedCombination('The quadrature check needs a smooth body in R^3.')
    level = logbm_settings.SPECTRAL['LEVEL'] if level is None else level
    forms = quadratic_forms(K, f, SphereQuadrature.icosahedral(level))
    lhs, rhs = forms.AfAf, (forms.fAf + forms.ff) / 2
    margin = logbm_settings.TOLERANCE['QUADRATURE'] * max(1.0, abs(rhs))
    if level > 0:
        coarse = quadratic_forms(K, f, SphereQuadrature.icosahedral(level - 1))
        change = abs((lhs - rhs) - (coarse.AfAf - (coarse.fAf + coarse.ff) / 2))
        margin = max(margin, 10 * change)
    report = InequalityReport('superlich', 3, lhs, rhs, decide(lhs, rhs, margin),
                              form='quadrature', error_bound=margin)
    report.details.update({'<f,Af>': forms.fAf, '<f,f>': forms.ff, 'level': level,
                           'bochner_residual': forms.residual})
    report.witness = {'K': K, 'f': as_expr(f)}
    return report


def check_bochner(K, f, levels=None) -> InequalityReport:
    """side2 >= 0 at the finest level, with the residual table across levels."""
    table = bochner_convergence(K, f, levels)
    finest = table[-1]
    tolerance = max(finest.residual, logbm_settings.TOLERANCE['QUADRATURE'])
    report = InequalityReport('bochner', 3, finest.side2, 0.0, decide(finest.side2, 0.0, tolerance),
                              form='quadrature', error_bound=tolerance)
    report.details['levels'] = [
        {'level': row.level, 'side1': row.side1, 'side2': row.side2, 'residual': row.residual}
        for row in table]
    report.witness = {'K': K, 'f': as_expr(f)}
    return report
