import math
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import assume, given, settings, strategies as st

from zonoids.arith import det
from zonoids.bodies import SmoothBody, SupportExpr, SymmetricPolytope, Zonotope
from zonoids.exceptions import (
    DegenerateBody, DimensionMismatch, NotSymmetric, PreconditionViolation, UnsupportedCombination,
)
from zonoids.inequalities import (
    check_alexandrov_mixed_discriminant, check_bm, check_geomean_logbm, check_hilbert_projection,
    check_induction_step, check_km_spectral_form, check_local_logbm, check_log_minkowski,
    check_minkowski_first, check_minkowski_second, mixed_discriminant,
)
from zonoids.tests.test_bodies import rational_zonotopes
from zonoids.verdicts import Verdict


class CubeCrossTest(SimpleTestCase):

    def setUp(self):
        self.cube = Zonotope.cube(3)
        self.cross = SymmetricPolytope.cross(3)

    def test_local_logbm(self):
        report = check_local_logbm(self.cube, SupportExpr.of(self.cross))
        self.assertEqual(report.lhs, 8)
        self.assertEqual(report.rhs, Fraction(16, 3))
        self.assertEqual(report.deficit, Fraction(8, 3))
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertTrue(report.exact)
        self.assertEqual(report.details['V(f,f,K,...,K)'], 4)
        self.assertEqual(report.details['int f^2/h_K dS'], 24)

    def test_local_logbm_with_f_equal_to_h_K(self):
        report = check_local_logbm(self.cube, self.cube)
        self.assertEqual(report.lhs, 8)
        self.assertEqual(report.verdict, Verdict.EQUALITY)

    def test_minkowski_first(self):
        report = check_minkowski_first(self.cube, self.cross)
        self.assertEqual(report.lhs, 512)
        self.assertEqual(report.rhs, Fraction(256, 3))
        self.assertEqual(report.verdict, Verdict.HOLDS)

    def test_minkowski_second(self):
        report = check_minkowski_second(self.cube, self.cross)
        self.assertEqual(report.lhs, 64)
        self.assertEqual(report.rhs, 32)

    def test_minkowski_second_with_flat_L(self):
        for segment in (SymmetricPolytope.from_vertices([(0, 0, 1)]), Zonotope.segment((0, 0, 1))):
            report = check_minkowski_second(self.cube, segment)
            self.assertEqual(report.details['V(L,L,K,...,K)'], 0)
            self.assertEqual(report.rhs, 0)
            self.assertEqual(report.verdict, Verdict.HOLDS)

    def test_log_minkowski(self):
        report = check_log_minkowski(self.cube, self.cross)
        self.assertEqual(report.lhs, 0)
        self.assertAlmostEqual(report.rhs, 8 * math.log(1 / 6))
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertFalse(report.exact)
        self.assertGreater(report.error_bound, 0)

    def test_log_minkowski_homothetic(self):
        report = check_log_minkowski(self.cube, self.cube.scaled(2))
        self.assertEqual(report.verdict, Verdict.EQUALITY)
        self.assertAlmostEqual(report.lhs, 24 * math.log(2))

    def test_induction_step(self):
        report = check_induction_step(self.cube, SupportExpr.of(self.cross), (0, 0, 1))
        self.assertEqual(report.details['V(S,K,...,K)'], Fraction(8, 3))
        self.assertEqual(report.lhs, Fraction(8, 3))
        self.assertEqual(report.rhs, 2)
        self.assertEqual(report.verdict, Verdict.HOLDS)

    def test_induction_step_needs_three_dimensions(self):
        square = Zonotope.cube(2)
        with self.assertRaises(PreconditionViolation):
            check_induction_step(square, square, (1, 0))

    def test_hilbert_projection(self):
        report = check_hilbert_projection(self.cube, self.cross)
        self.assertEqual(report.details['a'], 1)
        self.assertEqual(report.rhs, -4)
        self.assertEqual(report.verdict, Verdict.HOLDS)

    def test_hilbert_projection_homothetic(self):
        report = check_hilbert_projection(self.cube, self.cube.scaled(2))
        self.assertEqual(report.rhs, 0)
        self.assertEqual(report.verdict, Verdict.EQUALITY)

    def test_spectral_form(self):
        report = check_km_spectral_form(self.cube, self.cross)
        self.assertEqual(report.details['<f,f>'], 0)
        self.assertEqual(report.rhs, -4)
        self.assertEqual(report.verdict, Verdict.HOLDS)


class BoxEqualityTest(SimpleTestCase):
    """Boxes against the cube are equality cases: both sides equal (8/9)(a+b+c)^2."""

    def test_box123(self):
        report = check_local_logbm(Zonotope.cube(3), Zonotope.box([1, 2, 3]))
        self.assertEqual(report.lhs, 32)
        self.assertEqual(report.rhs, 32)
        self.assertEqual(report.deficit, 0)
        self.assertEqual(report.verdict, Verdict.EQUALITY)

    @settings(deadline=None, max_examples=20)
    @given(st.tuples(*[st.fractions(Fraction(1, 8), 8, max_denominator=8)] * 3))
    def test_random_boxes(self, sides):
        a, b, c = sides
        report = check_local_logbm(Zonotope.cube(3), Zonotope.box([a, b, c]))
        self.assertEqual(report.deficit, 0)
        self.assertEqual(report.lhs, Fraction(8, 9) * (a + b + c) ** 2)
        self.assertEqual(report.verdict, Verdict.EQUALITY)


class PreconditionTest(SimpleTestCase):

    def test_polytope_K_is_unsupported(self):
        cross = SymmetricPolytope.cross(3)
        with self.assertRaises(UnsupportedCombination):
            check_local_logbm(cross, Zonotope.cube(3))

    def test_flat_K_is_degenerate(self):
        flat = Zonotope.from_generators([((1, 0, 0), 1), ((0, 1, 0), 1)])
        with self.assertRaises(DegenerateBody):
            check_local_logbm(flat, Zonotope.cube(3))

    def test_dimension_mismatch(self):
        with self.assertRaises(DimensionMismatch):
            check_minkowski_first(Zonotope.cube(3), Zonotope.cube(2))

    def test_f_with_two_polytopes(self):
        f = SupportExpr.combine((1, SymmetricPolytope.cross(3)),
                                (1, SymmetricPolytope.from_vertices([(1, 1, 0), (0, 1, 1), (1, 0, 1)])))
        with self.assertRaises(UnsupportedCombination):
            check_local_logbm(Zonotope.cube(3), f)

    def test_parameter_range(self):
        with self.assertRaises(PreconditionViolation):
            check_bm(Zonotope.cube(2), Zonotope.cube(2), Fraction(3, 2))

    def test_smooth_bm_is_unsupported(self):
        with self.assertRaises(UnsupportedCombination):
            check_bm(SmoothBody.ball(2), Zonotope.cube(2), Fraction(1, 2))


class BrunnMinkowskiTest(SimpleTestCase):

    def test_homothetic_equality(self):
        cube = Zonotope.cube(3)
        report = check_bm(cube, cube.scaled(2), Fraction(1, 2))
        self.assertEqual(report.lhs, 27)
        self.assertEqual(report.rhs, 27)
        self.assertEqual(report.verdict, Verdict.EQUALITY)
        self.assertEqual(report.form, 'power')

    def test_irrational_roots_fall_back_to_float(self):
        report = check_bm(Zonotope.cube(3), Zonotope.box([1, 2, 3]), Fraction(1, 2))
        self.assertEqual(report.form, 'power (float)')
        self.assertEqual(report.verdict, Verdict.HOLDS)
        self.assertIn('geometric_mean', report.details)

    def test_endpoints(self):
        cube = Zonotope.cube(2)
        report = check_bm(cube, SymmetricPolytope.cross(2), 0)
        self.assertEqual(report.lhs, 4)


class GeoMeanTest(SimpleTestCase):

    def test_equal_bodies_are_not_violated(self):
        cube = Zonotope.cube(2)
        report = check_geomean_logbm(cube, cube, Fraction(1, 2), sample_budget=60)
        self.assertNotEqual(report.verdict, Verdict.VIOLATED)
        self.assertLessEqual(report.details['lower'], report.details['upper'])
        self.assertAlmostEqual(report.rhs, 4.0)

    def test_box_pair(self):
        report = check_geomean_logbm(Zonotope.cube(2), Zonotope.box([1, 3]), Fraction(1, 3), sample_budget=80)
        self.assertIn(report.verdict, (Verdict.HOLDS, Verdict.EQUALITY, Verdict.INCONCLUSIVE))


class ZonoidTheoremTest(SimpleTestCase):
    """The local inequality holds for every zonotope K and every symmetric L."""

    @settings(deadline=None, max_examples=25)
    @given(rational_zonotopes(dim=3, max_generators=4), rational_zonotopes(dim=3, max_generators=4),
           st.fractions(-3, 3, max_denominator=4))
    def test_local_logbm_holds(self, K, L, a):
        assume(K.full_dimensional)
        f = SupportExpr.combine((1, L), (-a, K))
        report = check_local_logbm(K, f)
        self.assertTrue(report.exact)
        self.assertNotEqual(report.verdict, Verdict.VIOLATED)

    @settings(deadline=None, max_examples=20)
    @given(rational_zonotopes(dim=3, max_generators=4), rational_zonotopes(dim=3, max_generators=4))
    def test_minkowski_and_hilbert_hold(self, K, L):
        assume(K.full_dimensional)
        for check in (check_minkowski_first, check_minkowski_second, check_hilbert_projection):
            self.assertNotEqual(check(K, L).verdict, Verdict.VIOLATED)

    @settings(deadline=None, max_examples=15)
    @given(rational_zonotopes(dim=3, max_generators=4), rational_zonotopes(dim=3, max_generators=4))
    def test_spectral_form_agrees_with_local_form(self, K, L):
        assume(K.full_dimensional)
        spectral = check_km_spectral_form(K, L)
        local = check_local_logbm(K, L)
        self.assertEqual(spectral.verdict is Verdict.VIOLATED, local.verdict is Verdict.VIOLATED)


def symmetric_matrices(size):
    entries = st.lists(st.integers(-4, 4), min_size=size * size, max_size=size * size)

    def build(values):
        return [[values[min(i, j) * size + max(i, j)] for j in range(size)] for i in range(size)]
    return entries.map(build)


class MixedDiscriminantTest(SimpleTestCase):

    def test_plane_example(self):
        report = check_alexandrov_mixed_discriminant([[1, 0], [0, -1]], [[1, 0], [0, 1]])
        self.assertEqual(report.details['D(A,B,M...)'], 0)
        self.assertEqual(report.lhs, 0)
        self.assertEqual(report.rhs, -1)
        self.assertEqual(report.verdict, Verdict.HOLDS)

    @given(symmetric_matrices(3))
    def test_diagonal_is_determinant(self, A):
        self.assertEqual(mixed_discriminant([A, A, A]), det(A))

    @settings(deadline=None, max_examples=40)
    @given(symmetric_matrices(3))
    def test_alexandrov_holds_with_identity(self, A):
        identity = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        report = check_alexandrov_mixed_discriminant(A, identity, [identity])
        self.assertNotEqual(report.verdict, Verdict.VIOLATED)

    def test_preconditions(self):
        identity = [[1, 0], [0, 1]]
        with self.assertRaises(NotSymmetric):
            check_alexandrov_mixed_discriminant([[1, 2], [0, 1]], identity)
        with self.assertRaises(PreconditionViolation):
            check_alexandrov_mixed_discriminant(identity, [[1, 0], [0, -1]])
        with self.assertRaises(DimensionMismatch):
            check_alexandrov_mixed_discriminant(identity, identity, [identity])
        with self.assertRaises(DimensionMismatch):
            mixed_discriminant([identity])
