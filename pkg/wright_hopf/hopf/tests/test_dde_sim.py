import math

import numpy as np
from django.test import SimpleTestCase, tag

from hopf.bifurcation import Direction
from hopf.dde_sim import (FunctionHistory, Trajectory, amplitude_sweep, equation_residual, find_periodic_orbit,
                          integrate, linear_frequency, measure_period, sweep_cell, unstable_orbit_threshold)
from hopf.exceptions import BoundDomainError, BracketError, InsufficientCoverageError, NoOscillationError
from hopf.nonlinearity import from_cubic, make_builtin
from hopf.period_bounds import bound_supercritical, bound_switching, linear_period
from hopf.spectral import leading_root

HALF_PI = math.pi / 2


def sinusoid(t_end, step=1.0 / 64):
    t = np.arange(0.0, t_end + step / 2, step)
    return Trajectory.from_samples(t, np.sin(HALF_PI * t), HALF_PI * np.cos(HALF_PI * t))


class IntegratorTests(SimpleTestCase):

    def setUp(self):
        self.wright = make_builtin('wright')

    def test_zero_history_stays_zero(self):
        for name in ('wright', 'ikeda', 'poly-switch'):
            traj = integrate(make_builtin(name), 2.5, 0.0, t_end=20.0)
            self.assertTrue(np.all(traj.x == 0.0))

    def test_step_must_divide_delay(self):
        with self.assertRaises(ValueError):
            integrate(self.wright, 1.0, 0.1, t_end=5.0, step=0.1)
        with self.assertRaises(ValueError):
            integrate(self.wright, 1.0, 0.1, t_end=5.0, step=1.0 / 64.5)
        with self.assertRaises(ValueError):
            integrate(self.wright, 1.0, 0.1, t_end=0.0)

    def test_decay_below_first_bifurcation(self):
        traj = integrate(self.wright, 1.0, 0.1, t_end=200.0)
        self.assertLess(abs(traj.x[-1]), 1e-4)

    def test_oscillation_above_first_bifurcation(self):
        traj = integrate(self.wright, 1.8, 0.1, t_end=500.0)
        late = np.max(np.abs(traj(np.linspace(460.0, 500.0, 2001))))
        earlier = np.max(np.abs(traj(np.linspace(400.0, 440.0, 2001))))
        self.assertTrue(np.all(np.isfinite(traj.x)))
        self.assertGreater(late, 0.1)
        self.assertGreater(late, 0.99 * earlier)

    def test_interpolant_passes_through_knots(self):
        traj = integrate(self.wright, 1.8, 0.1, t_end=10.0)
        self.assertEqual(float(traj(traj.times[300])), traj.x[300])
        self.assertAlmostEqual(float(traj(-0.5)), 0.1)
        with self.assertRaises(InsufficientCoverageError):
            traj(11.0)

    def test_continuation_reproduces_single_run(self):
        whole = integrate(self.wright, 1.8, 0.1, t_end=40.0)
        first = integrate(self.wright, 1.8, 0.1, t_end=20.0)
        second = integrate(self.wright, 1.8, first.as_history(), t_end=20.0)
        self.assertAlmostEqual(second.x[-1], whole.x[-1], delta=1e-12)

    def test_function_history(self):
        traj = integrate(self.wright, 1.2, FunctionHistory(lambda s: 0.1 * math.cos(s)), t_end=5.0)
        self.assertAlmostEqual(float(traj(-0.5)), 0.1 * math.cos(-0.5), delta=1e-6)
        self.assertTrue(np.all(np.isfinite(traj.x)))

    def test_fourth_order_convergence(self):
        reference = integrate(self.wright, 1.8, 0.1, t_end=50.0, step=1.0 / 320)
        times = np.arange(1.0, 51.0)

        def error(m):
            traj = integrate(self.wright, 1.8, 0.1, t_end=50.0, step=1.0 / m)
            return np.max(np.abs(traj.x[(times * m).astype(int) + m] - reference.x[(times * 320).astype(int) + 320]))

        self.assertGreaterEqual(error(20) / error(40), 12.0)

    def test_linear_frequency_matches_spectrum(self):
        mu = HALF_PI + 0.05
        omega = linear_frequency(from_cubic(1.0, 0.0, 0.0), mu)
        self.assertAlmostEqual(omega, leading_root(mu).omega, delta=0.01 * leading_root(mu).omega)


class PeriodMeasurementTests(SimpleTestCase):

    def test_sinusoid_period(self):
        period, amplitude, convergence = measure_period(sinusoid(40.0), tail=40.0)
        self.assertAlmostEqual(period, 4.0, delta=1e-8)
        self.assertAlmostEqual(amplitude, 1.0, delta=1e-4)
        self.assertLess(convergence, 1e-8)

    def test_too_few_crossings(self):
        with self.assertRaises(NoOscillationError):
            measure_period(sinusoid(10.0), tail=10.0)

    def test_decayed_trajectory(self):
        traj = integrate(make_builtin('wright'), 1.0, 0.1, t_end=200.0)
        with self.assertRaises(NoOscillationError):
            measure_period(traj)


class PeriodicOrbitTests(SimpleTestCase):

    def test_no_orbit_below_first_bifurcation(self):
        with self.assertRaises(NoOscillationError):
            find_periodic_orbit(make_builtin('wright'), 1.0)

    @tag('slow')
    def test_wright_orbit_period(self):
        orbit = find_periodic_orbit(make_builtin('wright'), HALF_PI + 0.2)
        lower = 4.0 / (1.0 + 0.4 / math.pi)
        self.assertLessEqual(orbit.convergence, 1e-5)
        self.assertGreaterEqual(orbit.period, lower - 1e-3)
        self.assertLessEqual(orbit.period, 1.1 * lower)
        self.assertLess(equation_residual(orbit, make_builtin('wright')), 1e-4)

    @tag('slow')
    def test_ikeda_orbit(self):
        orbit = find_periodic_orbit(make_builtin('ikeda'), HALF_PI + 0.2)
        self.assertGreater(orbit.amplitude, 0.0)
        self.assertLessEqual(orbit.convergence, 1e-5)

    @tag('slow')
    def test_supercritical_lower_bound(self):
        f = make_builtin('wright')
        for eta in (0.05, 0.1, 0.2):
            orbit = find_periodic_orbit(f, HALF_PI + eta)
            self.assertGreaterEqual(orbit.period, bound_supercritical(0, eta).lower - 1e-3, msg=f'eta={eta}')


class UnstableOrbitTests(SimpleTestCase):

    def test_supercritical_has_no_threshold(self):
        with self.assertRaises(BracketError):
            unstable_orbit_threshold(make_builtin('wright'), HALF_PI - 0.1, bracket=(0.0, 1.0))

    def test_bracket_order(self):
        with self.assertRaises(BracketError):
            unstable_orbit_threshold(make_builtin('poly-switch'), HALF_PI - 0.1, bracket=(1.0, 0.5))

    @tag('slow')
    def test_threshold_grows_away_from_bifurcation(self):
        f = make_builtin('poly-switch')
        thresholds = [unstable_orbit_threshold(f, HALF_PI - eta).amplitude_threshold for eta in (0.05, 0.1, 0.15)]
        self.assertTrue(0.0 < thresholds[0] < thresholds[1] < thresholds[2] < 1.0)

    @tag('slow')
    def test_transient_period_near_switching_bounds(self):
        f = make_builtin('poly-switch')
        for eta in (0.01, 0.02):
            result = unstable_orbit_threshold(f, HALF_PI - eta)
            bound = bound_switching(0, eta, 1)
            self.assertGreater(result.period_estimate, linear_period(0))
            self.assertTrue(bound.contains(result.period_estimate, rel_tol=0.02),
                            msg=f'eta={eta}: T={result.period_estimate}, [{bound.lower}, {bound.upper}]')

    @tag('slow')
    def test_period_slope_grows_toward_bound_slope(self):
        f = make_builtin('poly-switch')
        slopes = []
        for eta in (0.1, 0.02, 0.005):
            period = unstable_orbit_threshold(f, HALF_PI - eta).period_estimate
            slopes.append((period - linear_period(0)) / eta)
        bound_slope = (bound_switching(0, 1e-6, 1).lower - linear_period(0)) / 1e-6
        self.assertTrue(0.0 < slopes[0] < slopes[1] < slopes[2], msg=f'{slopes}')
        self.assertLess(slopes[2], bound_slope)
        self.assertAlmostEqual(bound_slope, 9.0 / math.pi, delta=1e-3)


class SweepTests(SimpleTestCase):

    def test_only_first_branch(self):
        with self.assertRaises(BoundDomainError):
            sweep_cell(make_builtin('wright'), 0.1, Direction.SUPERCRITICAL, k=1)

    @tag('slow')
    def test_square_root_law(self):
        grid = np.linspace(0.02, 0.2, 10)
        for name in ('wright', 'ikeda'):
            table = amplitude_sweep(make_builtin(name), grid)
            self.assertEqual(table.direction, Direction.SUPERCRITICAL)
            self.assertEqual([row.eta for row in table.rows], sorted(grid))
            self.assertGreater(table.r_squared, 0.99, msg=name)
