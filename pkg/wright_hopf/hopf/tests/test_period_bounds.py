import math

from django.test import SimpleTestCase

from hopf.bifurcation import Direction, classify_sequence
from hopf.exceptions import BoundDomainError
from hopf.period_bounds import (BoundSource, PeriodBound, bound_all_subcritical, bound_for, bound_supercritical,
                                bound_switching, cooke_consistency, linear_period, monotonicity_flags)

POLY_SWITCH = classify_sequence(1.0, 1.44)
POLY_SUBCRITICAL = classify_sequence(1.0, 22.0 / 15.0)
WRIGHT = classify_sequence(0.5, 1.0 / 6.0)


class ClosedFormTests(SimpleTestCase):

    def test_linear_period(self):
        self.assertEqual(linear_period(0), 4.0)
        self.assertAlmostEqual(linear_period(3), 4.0 / 13.0)

    def test_supercritical_lower_bound(self):
        bound = bound_supercritical(0, 0.1)
        self.assertAlmostEqual(bound.lower, 4.0 / (1.0 + 0.2 / math.pi))
        self.assertIsNone(bound.upper)
        self.assertEqual(bound.source, BoundSource.THM2)

    def test_all_subcritical_upper_bound(self):
        bound = bound_all_subcritical(2, 0.3)
        self.assertAlmostEqual(bound.upper, 4.0 / (9.0 - 0.6 / math.pi))
        self.assertIsNone(bound.lower)

    def test_switching_interior(self):
        eta = 0.05
        d = 1.0 - 2.0 * eta / math.pi
        bound = bound_switching(0, eta, 1)
        self.assertAlmostEqual(bound.lower, (4.0 + 2.0 * eta / (2.0 * math.pi)) / d)
        self.assertAlmostEqual(bound.upper, (4.0 + 2.0 * eta / math.pi) / d)
        self.assertEqual(bound.source, BoundSource.THM4_INTERIOR)
        self.assertLess(bound.lower, bound.upper)

    def test_switching_edge(self):
        bound = bound_switching(1, 0.05, 1)
        self.assertIsNone(bound.upper)
        self.assertEqual(bound.source, BoundSource.THM4_EDGE)
        self.assertGreater(bound.lower, linear_period(1))

    def test_domain_errors(self):
        for call in (lambda: bound_supercritical(-1, 0.1),
                     lambda: bound_supercritical(0, 0.0),
                     lambda: bound_all_subcritical(0, math.pi / 2),
                     lambda: bound_switching(2, 0.1, 1),
                     lambda: bound_switching(0, 0.1, -1)):
            with self.assertRaises(BoundDomainError):
                call()

    def test_contains(self):
        bound = PeriodBound(k=0, eta=0.1, lower=4.0, upper=4.2, source=BoundSource.THM4_INTERIOR)
        self.assertTrue(bound.contains(4.1))
        self.assertFalse(bound.contains(4.25))
        self.assertTrue(bound.contains(4.25, rel_tol=0.02))
        self.assertTrue(bound.contains(3.9995, abs_tol=1e-3))


class LimitAndMonotonicityTests(SimpleTestCase):
    ETAS = (0.2, 0.1, 0.05, 0.01, 1e-3, 1e-5)

    def test_bounds_tend_to_linear_period(self):
        for k in range(4):
            t0 = linear_period(k)
            edges = [bound_supercritical(k, 1e-9).lower, bound_all_subcritical(k, 1e-9).upper,
                     bound_switching(k, 1e-9, k + 1).lower, bound_switching(k, 1e-9, k + 1).upper,
                     bound_switching(k, 1e-9, k).lower]
            for value in edges:
                self.assertAlmostEqual(value, t0, delta=1e-8 * t0, msg=f'k={k}')

    def test_switching_gap(self):
        for k, n in ((0, 1), (0, 3), (1, 2), (2, 5)):
            for eta in self.ETAS:
                bound = bound_switching(k, eta, n)
                gap = (2.0 * eta / math.pi) * (1.0 / (n - k) - 1.0 / (n - k + 1)) / (4 * k + 1 - 2.0 * eta / math.pi)
                self.assertAlmostEqual(bound.upper - bound.lower, gap, delta=1e-13)
                self.assertGreater(bound.upper, bound.lower)
        ratios = [bound_switching(0, eta, 1).upper / bound_switching(0, eta, 1).lower for eta in self.ETAS]
        self.assertTrue(all(a > b for a, b in zip(ratios, ratios[1:])))
        self.assertAlmostEqual(ratios[-1], 1.0, delta=1e-5)

    def test_supercritical_lower_bound_decreases(self):
        for k in range(3):
            lower = [bound_supercritical(k, eta).lower for eta in sorted(self.ETAS)]
            self.assertTrue(all(a > b for a, b in zip(lower, lower[1:])), msg=f'k={k}')

    def test_all_subcritical_upper_bound_increases(self):
        for k in range(3):
            upper = [bound_all_subcritical(k, eta).upper for eta in sorted(self.ETAS)]
            self.assertTrue(all(a < b for a, b in zip(upper, upper[1:])), msg=f'k={k}')


class DispatchTests(SimpleTestCase):

    def test_sources_follow_classification(self):
        self.assertEqual(bound_for(WRIGHT, 0, 0.1).source, BoundSource.THM2)
        self.assertEqual(bound_for(POLY_SWITCH, 0, 0.1).source, BoundSource.THM4_INTERIOR)
        self.assertEqual(bound_for(POLY_SWITCH, 1, 0.1).source, BoundSource.THM4_EDGE)
        self.assertEqual(bound_for(POLY_SWITCH, 2, 0.1).source, BoundSource.THM2)
        self.assertEqual(bound_for(POLY_SUBCRITICAL, 0, 0.1).source, BoundSource.THM3)
        self.assertEqual(bound_for(classify_sequence(1.0, 1.5), 0, 0.1).source, BoundSource.THM3)

    def test_degenerate_k(self):
        with self.assertRaises(BoundDomainError):
            bound_for(classify_sequence(1.0, (22 * math.pi - 8) / (15 * math.pi)), 0, 0.1)

    def test_cooke_consistency(self):
        eta = 0.1
        lower = bound_supercritical(0, eta).lower
        self.assertTrue(cooke_consistency(0, 1, eta, lower, Direction.SUPERCRITICAL))
        self.assertFalse(cooke_consistency(0, 1, eta, 3.0, Direction.SUPERCRITICAL))
        upper = bound_all_subcritical(0, eta).upper
        self.assertTrue(cooke_consistency(0, 1, eta, upper * 0.999, Direction.SUBCRITICAL))
        with self.assertRaises(BoundDomainError):
            cooke_consistency(0, 1, eta, 4.0, Direction.DEGENERATE)


class MonotonicityTests(SimpleTestCase):

    def test_last_subcritical_branch_is_monotone(self):
        self.assertTrue(monotonicity_flags(POLY_SWITCH, 1).monotone_increasing)
        self.assertFalse(monotonicity_flags(POLY_SWITCH, 0).monotone_increasing)
        self.assertFalse(monotonicity_flags(WRIGHT, 0).subcritical)

    def test_short_period_contradicts_switching(self):
        with self.assertLogs('hopf.period_bounds', level='WARNING'):
            report = monotonicity_flags(POLY_SWITCH, 0, measured_period=3.9)
        self.assertTrue(report.later_subcritical_required)
        self.assertTrue(report.contradiction)

    def test_short_period_consistent_when_all_later_subcritical(self):
        report = monotonicity_flags(POLY_SUBCRITICAL, 0, measured_period=3.9)
        self.assertTrue(report.later_subcritical_required)
        self.assertFalse(report.contradiction)
