import math
import warnings

import numpy as np
import pytest

from lqwalk.analysis import (
    SCALING_TABLE,
    ScalingLaw,
    analytic_l_dependent_part,
    analytic_mean_position,
    asymptotic_mean,
    crossover_windows,
    fit_scaling_exponent,
    regime_report,
)
from lqwalk.evolve import quantum_mean_position
from lqwalk.sweeps import log_grid
from lqwalk.topology import DirectedRing


def simulated(alpha, l, t):
    return quantum_mean_position(DirectedRing(t + 2), l, alpha, t)


class TestAnalyticMean:
    def test_alpha0_large_l(self):
        assert analytic_mean_position(0.0, 1e12, 50) == pytest.approx(50.0, rel=1e-6)

    def test_terms(self):
        a, l, t = 100.0, 1e6, 50
        expected = (t - 4 * 10 * t / 1000 + (a * (2 * t * t + 2 * t) + 2 * t * t - 4 * t) / l) / (a + 1)
        assert analytic_mean_position(a, l, t) == pytest.approx(expected, rel=1e-14)

    def test_matches_simulation(self):
        a, l, t = 100.0, 1e6, 50
        sim = simulated(a, l, t)
        assert abs(analytic_mean_position(a, l, t) - sim) / sim < 0.05

    def test_sqrt_term_dominates_correction(self):
        # t* = 0.01: the l**-1/2 correction outweighs the l**-1 one
        a, l, t = 1e4, 1e8, 100
        sqrt_term = 4 * math.sqrt(a) * t / math.sqrt(l) / (a + 1)
        inv_term = (a * (2 * t * t + 2 * t) + 2 * t * t - 4 * t) / l / (a + 1)
        assert sqrt_term > inv_term
        part = analytic_l_dependent_part(a, l, t)
        assert part == pytest.approx(-sqrt_term + inv_term, rel=1e-12)

    def test_trapped_limit(self):
        assert analytic_mean_position(math.inf, 1e6, 100) == pytest.approx(20200 / 1e6)
        assert analytic_mean_position(1e12, 1e6, 100) == pytest.approx(20200 / 1e6, rel=1e-3)

    def test_truncated_variant_close_at_large_l(self):
        for a in (0.0, 1.0, 100.0, math.inf):
            full = analytic_mean_position(a, 1e6, 50, truncated=True)
            assert full == pytest.approx(analytic_mean_position(a, 1e6, 50), rel=1e-2)

    def test_domain(self):
        with pytest.raises(ValueError):
            analytic_mean_position(1.0, 1.0, 10)
        with pytest.raises(ValueError):
            analytic_mean_position(-1.0, 100.0, 10)
        with pytest.warns(RuntimeWarning):
            analytic_mean_position(1.0, 5.0, 10)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            analytic_mean_position(1.0, 10.0, 10)


class TestClosedFormAgreement:
    @pytest.mark.parametrize("alpha", [0.0, 1.0, 10.0, 100.0])
    @pytest.mark.parametrize("t", [20, 50])
    def test_within_five_percent_and_improving(self, alpha, t):
        errs = []
        for l in (1e4, 1e5, 1e6):
            sim = simulated(alpha, l, t)
            errs.append(abs(analytic_mean_position(alpha, l, t) - sim) / sim)
        assert errs[0] > errs[1] > errs[2]
        assert max(errs) <= 0.05, f"relative errors {errs}"

    def test_trapped_limit_slopes(self):
        # alpha = 1e6, t = 100 (l* = 1e4): slope -1 at t* >> 1, -1/2 at t* << 1
        t, a = 100, 1e6
        low = log_grid(10, 100, 9)
        high = log_grid(1e13, 1e15, 9)
        fit_low = fit_scaling_exponent(low, [abs(analytic_l_dependent_part(a, l, t)) for l in low])
        fit_high = fit_scaling_exponent(high, [abs(analytic_l_dependent_part(a, l, t)) for l in high])
        assert fit_low.exponent == pytest.approx(-1.0, abs=0.02)
        assert fit_high.exponent == pytest.approx(-0.5, abs=0.02)


class TestScalingTable:
    def test_cells(self):
        assert asymptotic_mean("small", "large") == ScalingLaw(2, 0)
        assert asymptotic_mean("large", "small") == ScalingLaw(1, 0.5)
        assert asymptotic_mean("small", "small") == ScalingLaw(1, 0)
        assert asymptotic_mean("large", "large") == ScalingLaw(2, -1)
        assert asymptotic_mean("any", "large", walker="classical") == ScalingLaw(1, -1)
        assert asymptotic_mean("large", "small", walker="classical") == ScalingLaw(1, 0)
        assert len(SCALING_TABLE) == 6

    def test_bad_tags(self):
        with pytest.raises(ValueError):
            asymptotic_mean("medium", "large")
        with pytest.raises(ValueError):
            asymptotic_mean("small", "large", walker="other")

    def test_flat_in_l_for_small_alpha_small_l(self):
        values = [simulated(0.0, l, 100) for l in (1e-3, 1e-2, 1e-1)]
        spread = (max(values) - min(values)) / min(values)
        assert spread < 0.05, f"<x> = {values}"

    def test_sqrt_l_for_trapped_small_l(self):
        ls = log_grid(1e-4, 1e-2, 7)
        fit = fit_scaling_exponent(ls, [simulated(math.inf, l, 100) for l in ls])
        assert fit.exponent == pytest.approx(0.5, abs=0.05)

    def test_large_l_scalings(self):
        # alpha = 0: independent of l; alpha = inf: t**2 / l
        ls = log_grid(1e6, 1e8, 5)
        flat = fit_scaling_exponent(ls, [simulated(0.0, l, 100) for l in ls])
        assert abs(flat.exponent) < 0.01
        ratio = simulated(math.inf, 1e8, 100) / simulated(math.inf, 1e8, 50)
        assert ratio == pytest.approx(4.0, rel=0.05)


class TestFit:
    def test_exact_power_law(self):
        l = np.geomspace(1, 1e3, 7)
        fit = fit_scaling_exponent(l, 3.0 / l)
        assert fit.exponent == pytest.approx(-1.0, abs=1e-12)
        assert fit.prefactor == pytest.approx(3.0, rel=1e-12)
        np.testing.assert_allclose(fit.predict(l), 3.0 / l, rtol=1e-12)
        assert fit.stderr < 1e-12
        assert (fit.l_min, fit.l_max, fit.n_samples) == (1.0, 1e3, 7)

    @pytest.mark.parametrize(
        "l, y",
        [
            ([1, 2, 3, 4], [1, 1, 1, 1]),
            ([1, 10, 100], [1, 2, 3]),
            ([1, 10, 100, 1000], [1, -2, 3, 4]),
            ([0, 10, 100, 1000], [1, 2, 3, 4]),
            ([1, 10, 100], [1, 2]),
        ],
    )
    def test_rejects(self, l, y):
        with pytest.raises(ValueError):
            fit_scaling_exponent(l, y)

    def test_ring_crossover_slopes(self):
        low = log_grid(1e2, 1e3, 9)
        high = log_grid(1e6, 1e8, 9)
        f1 = fit_scaling_exponent(low, [simulated(math.inf, l, 100) for l in low])
        f2 = fit_scaling_exponent(high, [simulated(math.inf, l, 100) for l in high])
        assert f1.exponent == pytest.approx(-0.5, abs=0.1)
        assert f2.exponent == pytest.approx(-1.0, abs=0.1)


class TestRegime:
    def test_ring_boundary(self):
        r = regime_report(100, 1e4)
        assert r.t_star == pytest.approx(1.0)
        assert r.l_star == 1e4
        assert r.regime == "boundary"

    def test_tree_boundary(self):
        r = regime_report(10, 1e2)
        assert (r.l_star, r.regime) == (100.0, "boundary")

    def test_small_scaled_time(self):
        # t* = 0.01 lies past the crossover, where simulation gives <x> ~ 1/l
        r = regime_report(100, 1e8)
        assert r.t_star == pytest.approx(0.01)
        assert r.regime == "inverse_l"

    def test_large_scaled_time(self):
        assert regime_report(100, 1e2).regime == "inverse_sqrt_l"

    def test_band_edges(self):
        assert regime_report(100, (100 / 1.09) ** 2).regime == "boundary"
        assert regime_report(100, (100 / 1.11) ** 2).regime == "inverse_sqrt_l"

    def test_domain(self):
        with pytest.raises(ValueError):
            regime_report(0, 10)
        with pytest.raises(ValueError):
            regime_report(10, 0)

    def test_windows(self):
        assert crossover_windows(100) == ((1e2, 1e3), (1e6, 1e8))
