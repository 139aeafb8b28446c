import math

import numpy as np
from django.test import SimpleTestCase

from hopf.bifurcation import (H_MAX, H_MIN, LIMIT_RATIO, BranchSide, Direction, SequenceCase, bifurcation_point,
                              branch_side, classify, classify_nonlinearity, classify_sequence, hopf_threshold,
                              normal_form_K, schwarzian_guard)
from hopf.exceptions import DegenerateBifurcationError, NegativeSlopeError
from hopf.nonlinearity import from_cubic, make_builtin

SUB = Direction.SUBCRITICAL
SUPER = Direction.SUPERCRITICAL


class ThresholdTests(SimpleTestCase):

    def test_quoted_constants(self):
        self.assertAlmostEqual(H_MIN, (22 * math.pi - 8) / (15 * math.pi))
        self.assertAlmostEqual(H_MAX, (66 * math.pi + 8) / (45 * math.pi))
        self.assertEqual(round(H_MIN, 1), 1.3)
        self.assertEqual(round(H_MIN, 3), 1.297)
        self.assertEqual(round(H_MAX, 2), 1.52)

    def test_monotone_approach_to_limit(self):
        positive = hopf_threshold(np.arange(0, 10 ** 6 + 1))
        self.assertTrue(np.all(np.diff(positive) > 0))
        self.assertTrue(np.all(positive < LIMIT_RATIO))
        negative = hopf_threshold(np.arange(-1, -10 ** 6 - 1, -1))
        self.assertTrue(np.all(np.diff(negative) < 0))
        self.assertTrue(np.all(negative > LIMIT_RATIO))


class PresetVerdictTests(SimpleTestCase):

    def directions(self, name, k_range):
        return [point.direction for point in classify_nonlinearity(make_builtin(name), k_range)]

    def test_wright_all_supercritical(self):
        self.assertEqual(self.directions('wright', range(-2, 5)), [SUPER] * 7)
        self.assertEqual(classify_sequence(0.5, 1.0 / 6.0).case, SequenceCase.ALL_SUPER)

    def test_ikeda_all_supercritical(self):
        self.assertEqual(self.directions('ikeda', range(-5, 6)), [SUPER] * 11)
        self.assertEqual(classify_sequence(0.0, -1.0 / 6.0).case, SequenceCase.ALL_SUPER)

    def test_poly_switch(self):
        self.assertEqual(self.directions('poly-switch', range(0, 4)), [SUB, SUB, SUPER, SUPER])
        sequence = classify_sequence(1.0, 1.44)
        self.assertEqual(sequence.case, SequenceCase.SWITCH_NONNEG)
        self.assertEqual(sequence.n, 1)

    def test_poly_subcritical(self):
        self.assertEqual(self.directions('poly-subcritical', range(0, 8)), [SUB] * 8)
        self.assertEqual(self.directions('poly-subcritical', range(-6, 0)), [SUPER] * 6)
        self.assertEqual(classify_sequence(1.0, 22.0 / 15.0).case, SequenceCase.BOUNDARY)

    def test_cubic_input_matches_preset(self):
        points = classify_nonlinearity(from_cubic(1.0, 2.0, 8.64), range(0, 2))
        self.assertEqual([p.direction for p in points], [SUB, SUB])

    def test_scaled_nonlinearity_reports_original_parameter(self):
        point = classify_nonlinearity(make_builtin('wright').scaled(2.0), [0])[0]
        self.assertEqual(point.direction, SUPER)
        self.assertAlmostEqual(point.mu_original, math.pi / 4)

    def test_negative_slope(self):
        with self.assertRaises(NegativeSlopeError):
            classify_nonlinearity(from_cubic(-1.0, 1.0, 1.0), [0])


class NormalFormTests(SimpleTestCase):

    def test_sign_matches_threshold(self):
        for k in range(-4, 7):
            for B in np.round(np.arange(-2.0, 2.0001, 0.1), 10):
                for C in np.round(np.arange(-3.0, 3.0001, 0.1), 10):
                    gap = C - hopf_threshold(k) * B ** 2
                    if abs(gap) <= 1e-10:
                        continue
                    self.assertEqual(np.sign(normal_form_K(B, C, k)), np.sign(gap), msg=f'B={B}, C={C}, k={k}')

    def test_closed_form_of_K(self):
        for k in (-2, 0, 3):
            w = (4 * k + 1) * math.pi / 2
            for B, C in ((1.0, 1.44), (0.5, 1.0 / 6.0), (0.0, -1.0)):
                expected = 3 * w ** 2 / (1 + w ** 2) * (C - hopf_threshold(k) * B ** 2)
                self.assertAlmostEqual(normal_form_K(B, C, k), expected, delta=1e-9 * max(1.0, abs(expected)))

    def test_classify_degenerate_band(self):
        self.assertEqual(classify(1.0, hopf_threshold(2), 2), Direction.DEGENERATE)
        self.assertEqual(classify(1.0, hopf_threshold(2) + 1e-6, 2), SUB)


class BranchTests(SimpleTestCase):

    def test_branch_side(self):
        self.assertEqual(branch_side(SUPER, 0), BranchSide.RIGHT)
        self.assertEqual(branch_side(SUB, 0), BranchSide.LEFT)
        self.assertEqual(branch_side(SUPER, -1), BranchSide.LEFT)
        self.assertEqual(branch_side(SUB, -2), BranchSide.RIGHT)

    def test_degenerate_has_no_side(self):
        with self.assertRaises(DegenerateBifurcationError):
            branch_side(Direction.DEGENERATE, 0)
        point = bifurcation_point(1.0, H_MIN, 0)
        self.assertIsNone(point.branch_side)
        self.assertIsNone(point.delta_k)

    def test_point_fields(self):
        point = bifurcation_point(1.0, 1.44, 0)
        self.assertEqual(point.delta_k, -1)
        self.assertAlmostEqual(point.mu_k, math.pi / 2)
        self.assertGreater(point.K, 0.0)
        self.assertAlmostEqual(point.crossing_speed, (math.pi / 2) / (1 + math.pi ** 2 / 4))


class SequenceTests(SimpleTestCase):

    def test_switch_index_nonnegative(self):
        sequence = classify_sequence(1.0, 1.46)
        self.assertEqual(sequence.case, SequenceCase.SWITCH_NONNEG)
        self.assertEqual(sequence.n, 6)
        self.assertTrue(sequence.is_subcritical(6))
        self.assertFalse(sequence.is_subcritical(7))
        self.assertFalse(sequence.is_subcritical(-1))

    def test_switch_index_negative(self):
        sequence = classify_sequence(1.0, 1.5)
        self.assertEqual(sequence.case, SequenceCase.SWITCH_NEG)
        self.assertEqual(sequence.n, -2)
        self.assertEqual(sequence.direction_at(0), SUB)
        self.assertEqual(sequence.direction_at(-1), SUPER)
        self.assertEqual(sequence.direction_at(-2), SUB)
        for k in range(-8, 9):
            self.assertEqual(sequence.direction_at(k), classify(1.0, 1.5, k))

    def test_all_subcritical(self):
        sequence = classify_sequence(1.0, 1.6)
        self.assertEqual(sequence.case, SequenceCase.ALL_SUB)
        self.assertTrue(all(sequence.is_subcritical(k) for k in range(-5, 6)))

    def test_boundary_ratios(self):
        low = classify_sequence(1.0, H_MIN)
        self.assertEqual((low.case, low.degenerate_k), (SequenceCase.ALL_SUPER, (0,)))
        high = classify_sequence(1.0, H_MAX)
        self.assertEqual((high.case, high.degenerate_k), (SequenceCase.ALL_SUB, (-1,)))
        self.assertEqual(high.direction_at(-1), Direction.DEGENERATE)

    def test_zero_curvature(self):
        self.assertEqual(classify_sequence(0.0, 0.0).case, SequenceCase.DEGENERATE)
        self.assertEqual(classify_sequence(0.0, 1.0).case, SequenceCase.ALL_SUB)

    def test_sequence_agrees_with_pointwise_classification(self):
        for ratio in (0.5, 1.35, 1.44, 1.465, 1.48, 1.51, 1.7):
            sequence = classify_sequence(1.0, ratio)
            for k in range(-6, 12):
                self.assertEqual(sequence.direction_at(k), classify(1.0, ratio, k), msg=f'ratio={ratio}, k={k}')


class SchwarzianGuardTests(SimpleTestCase):

    def test_ikeda(self):
        report = schwarzian_guard(make_builtin('ikeda'), np.linspace(-1, 1, 21))
        self.assertTrue(report.all_negative)
        self.assertTrue(report.consistent)
        self.assertTrue(all(ok for _, _, ok in report.zero_curvature_checks))

    def test_negative_schwarzian_forces_all_supercritical(self):
        rng = np.random.default_rng(11)
        grid = np.linspace(-1, 1, 41)
        checked = 0
        for B, C in zip(rng.uniform(-2, 2, 100), rng.uniform(-3, 3, 100)):
            report = schwarzian_guard(from_cubic(1.0, 2.0 * B, 6.0 * C), grid)
            if report.all_negative:
                checked += 1
                self.assertEqual(report.sequence.case, SequenceCase.ALL_SUPER)
        self.assertGreater(checked, 0)

    def test_critical_points_are_excluded(self):
        with self.assertLogs('hopf.bifurcation', level='WARNING'):
            report = schwarzian_guard(from_cubic(1.0, 0.0, -6.0), [0.0, 1.0 / math.sqrt(3.0)])
        self.assertEqual(len(report.excluded), 1)
