from fractions import Fraction

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings, strategies as st

from zonoids.bodies import (
    SmoothBody, SupportExpr, SymmetricPolytope, Zonotope, body_volume, geomean_volume_bounds,
    hull_facets, minkowski_sum, normal_directions, support_eval,
)
from zonoids.exceptions import (
    DegenerateBody, DimensionMismatch, NotSymmetric, PreconditionViolation, UnsupportedBackend,
)
from zonoids.tests.oracles import monte_carlo_volume, sign_enumeration_support


@st.composite
def rational_zonotopes(draw, dim=None, max_generators=5):
    dim = dim or draw(st.integers(2, 3))
    count = draw(st.integers(dim, max_generators))
    pairs = []
    for _ in range(count):
        u = draw(st.lists(st.integers(-3, 3), min_size=dim, max_size=dim).filter(any))
        weight = Fraction(draw(st.integers(1, 4)), draw(st.integers(1, 3)))
        pairs.append((u, weight))
    return Zonotope.from_generators(pairs, dim=dim)


class ZonotopeTest(SimpleTestCase):

    def setUp(self):
        self.cube = Zonotope.cube(3)
        self.box = Zonotope.box([1, 2, 3])
        self.hexagon = Zonotope.from_generators([((1, 0), 1), ((0, 1), 1), ((1, 1), 1)])

    def test_volumes(self):
        self.assertEqual(body_volume(self.cube), 8)
        self.assertEqual(body_volume(self.box), 48)
        self.assertEqual(body_volume(self.hexagon), 12)

    def test_parallel_generators_merge(self):
        Z = Zonotope.from_generators([((1, 0), 1), ((-2, 0), 1), ((0, 3), Fraction(1, 3))])
        self.assertEqual(Z.generators, (((1, 0), 3), ((0, 1), 1)))

    def test_rejects_bad_generators(self):
        with self.assertRaises(PreconditionViolation):
            Zonotope.from_generators([((1, 0), 0)])
        with self.assertRaises(DegenerateBody):
            Zonotope.from_generators([((0, 0), 1)])
        with self.assertRaises(DimensionMismatch):
            Zonotope.from_generators([((1, 0), 1), ((1, 0, 0), 1)])

    def test_support(self):
        self.assertEqual(self.box.support((1, -1, 1)), 6)
        with self.assertRaises(DimensionMismatch):
            self.box.support((1, 1))

    @given(rational_zonotopes(), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
    def test_support_matches_sign_enumeration(self, Z, x):
        x = tuple(x[:Z.dim])
        self.assertEqual(Z.support(x), sign_enumeration_support(Z, x))

    def test_sum_concatenates_generators(self):
        self.assertEqual(minkowski_sum(self.cube, self.cube), self.cube.scaled(2))
        self.assertEqual(body_volume(minkowski_sum(self.cube, self.cube)), 64)

    def test_hexagon_as_polytope(self):
        P = self.hexagon.to_polytope()
        self.assertEqual(len(P.vertices), 3)
        self.assertEqual(body_volume(P), 12)

    @settings(deadline=None, max_examples=20)
    @given(rational_zonotopes(dim=3, max_generators=4))
    def test_hull_volume_matches_determinant_formula(self, Z):
        if not Z.full_dimensional:
            return
        self.assertEqual(body_volume(Z.to_polytope()), body_volume(Z))

    def test_normal_directions(self):
        normals = normal_directions(self.cube)
        self.assertEqual(len(normals), 6)
        self.assertIn((0, 0, -1), normals)


class SymmetricPolytopeTest(SimpleTestCase):

    def setUp(self):
        self.cross = SymmetricPolytope.cross(3)
        self.cube_polytope = Zonotope.cube(3).to_polytope()

    def test_dedupes_antipodal_vertices(self):
        P = SymmetricPolytope.from_vertices([(1, 0), (-1, 0), (0, 1), (0, 0)])
        self.assertEqual(len(P.vertices), 2)
        self.assertEqual(len(P.points()), 4)

    def test_cross_polytope(self):
        self.assertEqual(body_volume(self.cross), Fraction(4, 3))
        self.assertEqual(self.cross.support((1, -2, 1)), 2)
        self.assertEqual(len(hull_facets(self.cross)), 8)

    def test_cube_facets(self):
        facets = hull_facets(self.cube_polytope)
        self.assertEqual(len(facets), 6)
        for facet in facets:
            self.assertEqual(facet.offset, 1)
            self.assertEqual(len(facet.vertices), 4)

    def test_flat_polytope_is_degenerate(self):
        with self.assertRaises(DegenerateBody):
            hull_facets(SymmetricPolytope.from_vertices([(1, 0, 0), (0, 1, 0)]))

    def test_mixed_sum(self):
        S = minkowski_sum(Zonotope.cube(2), SymmetricPolytope.cross(2))
        # Octagon: square [-1,1]^2 plus the diamond.
        self.assertEqual(body_volume(S), 4 + 8 + 2)

    def test_volume_against_sampling(self):
        rng = np.random.default_rng(7)
        P = SymmetricPolytope.from_vertices([(2, 1, 0), (0, 1, 1), (1, -1, 2), (1, 0, 0)])
        facets = hull_facets(P)
        normals = np.array([[float(c) for c in f.normal] for f in facets])
        offsets = np.array([float(f.offset) for f in facets])

        def contains(x):
            return np.all(normals @ x <= offsets)
        estimate = monte_carlo_volume(contains, 2.0, 3, 100000, rng)
        self.assertAlmostEqual(float(body_volume(P)) / estimate, 1.0, delta=0.05)

    def test_float_polytope(self):
        P = SymmetricPolytope.from_vertices([(1.0, 0.0), (0.0, 1.0)])
        self.assertAlmostEqual(body_volume(P), 2.0)


class SmoothBodyTest(SimpleTestCase):

    def test_ball(self):
        ball = SmoothBody.ball(3)
        x = np.array([[0.6, 0.8, 0.0]])
        self.assertAlmostEqual(ball.support((0.6, 0.8, 0.0)), 1.0)
        H = ball.hessians(x)[0]
        np.testing.assert_allclose(H, np.eye(3) - np.outer(x[0], x[0]), atol=1e-12)

    def test_ellipsoid_support(self):
        E = SmoothBody.ellipsoid([1, 2])
        self.assertAlmostEqual(E.support((0, 1)), 2.0)
        self.assertAlmostEqual(E.support((3, 4)), (9 + 64) ** 0.5)

    def test_rejects_bad_matrices(self):
        with self.assertRaises(NotSymmetric):
            SmoothBody.from_matrices([[[1, 1], [0, 1]]])
        with self.assertRaises(PreconditionViolation):
            SmoothBody.from_matrices([[[1, 2], [2, 1]]])

    def test_exact_backend_rejects_smooth(self):
        with self.assertRaises(UnsupportedBackend):
            support_eval(SmoothBody.ball(2), (1, 0), backend='exact')
        self.assertAlmostEqual(support_eval(SmoothBody.ball(2), (1.0, 0.0)), 1.0)


class SupportExprTest(SimpleTestCase):

    def test_combination(self):
        cube, box = Zonotope.cube(3), Zonotope.box([1, 2, 3])
        f = SupportExpr.combine((1, box), (-2, cube))
        self.assertEqual(f.support((0, 0, 1)), 1)
        self.assertEqual((f + SupportExpr.of(cube)).support((1, 0, 0)), 0)
        self.assertEqual(len((f - f).terms), 0)


class GeoMeanBoundsTest(SimpleTestCase):

    def test_equal_bodies(self):
        cube = Zonotope.cube(3)
        lower, upper = geomean_volume_bounds(cube, cube, Fraction(1, 2), sample_budget=100)
        self.assertAlmostEqual(upper, 8.0, places=6)
        self.assertLessEqual(lower, upper)
        self.assertGreater(lower, 7.0)

    def test_directions_as_array(self):
        square = Zonotope.cube(2)
        directions = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, -1.0]])
        lower, upper = geomean_volume_bounds(square, square, Fraction(1, 2), directions=directions)
        self.assertAlmostEqual(upper, 4.0, places=9)
        self.assertLessEqual(lower, upper)

    def test_scaled_pair(self):
        cube = Zonotope.cube(2)
        lower, upper = geomean_volume_bounds(cube, cube.scaled(4), Fraction(1, 2), sample_budget=60)
        self.assertAlmostEqual(upper, 16.0, places=6)
        self.assertLessEqual(lower, 16.0 + 1e-9)

    def test_parameter_range(self):
        with self.assertRaises(PreconditionViolation):
            geomean_volume_bounds(Zonotope.cube(2), Zonotope.cube(2), 2)
