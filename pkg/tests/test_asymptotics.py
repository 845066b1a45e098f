"""Small-deviation limits: exact targets, transform-scale convergence, Tauberian."""

import math

import numpy as np
import pytest

from besqint import asymptotics as asym
from besqint.errors import RegimeViolationError
from besqint.laws import BesqParams

P11 = BesqParams(1.0, 1.0)


class TestTargets:
    def test_trivial_at_equal_levels(self):
        t = asym.small_ball_targets(P11, 1.5, 1.5)
        assert t.lt_rate == 0.0 and t.sb_constant == 0.0
        assert t.lil_constant == pytest.approx(1.0 / 8.0)

    def test_frozen_point(self):
        t = asym.small_ball_targets(P11, 0.0, 1.0)
        assert t.lt_rate == pytest.approx(-math.sqrt(2) / 2)
        assert t.sb_constant == pytest.approx(1.0 / 8.0)
        assert t.lil_constant == pytest.approx(1.0 / 8.0)

    def test_index_free(self):
        ts = {asym.small_ball_targets(BesqParams(nu, 1.0), 0.5, 2.0)
              for nu in (-0.5, 0.0, 1.0, 3.0)}
        assert len(ts) == 1

    def test_requires_positive_power(self):
        with pytest.raises(RegimeViolationError):
            asym.small_ball_targets(BesqParams(1.0, 0.0), 0.0, 1.0)


class TestTransformRate:
    def test_converges_to_target(self):
        t = asym.small_ball_targets(P11, 1.0, 2.0)
        pts = asym.lt_rate_empirical(P11, 1.0, 2.0, np.geomspace(1e2, 1e8, 7))
        rates = [r for _, r in pts]
        errs = [abs(r - t.lt_rate) for r in rates]
        assert all(a > b for a, b in zip(errs, errs[1:]))
        assert errs[-1] <= 1e-3

    def test_trivial_at_equal_levels(self):
        pts = asym.lt_rate_empirical(P11, 1.0, 1.0, [1e4, 1e8])
        assert all(r == 0.0 for _, r in pts)

    def test_index_collapse(self):
        # curves for different indices agree at the deep end
        vals = [asym.lt_rate_empirical(BesqParams(nu, 1.0), 1.0, 2.0, [1e8])[0][1]
                for nu in (-0.5, 0.0, 1.0, 3.0)]
        assert max(vals) - min(vals) <= 2e-3


class TestTauberian:
    def test_within_five_percent_at_smallest_stable(self):
        t = asym.small_ball_targets(P11, 1.0, 2.0)
        pts = asym.tauberian_empirical(
            P11, 1.0, 2.0, [0.01, 0.005, 0.003, 0.002, 0.001])
        assert pts, "no stable points survived"
        eps, val = pts[-1]
        assert eps <= 0.003
        assert abs(val + t.sb_constant) <= 0.05 * t.sb_constant

    def test_deep_garbage_is_dropped(self):
        # far below the stable window nothing should survive the witness
        pts = asym.tauberian_empirical(P11, 1.0, 2.0, [1e-5])
        assert pts == []


class TestLil:
    def test_phi(self):
        y = math.exp(math.e)
        assert asym.lil_phi(y, 1.0) == pytest.approx(y ** 2)
        with pytest.raises(RegimeViolationError):
            asym.lil_phi(2.0, 1.0)

    def test_experiment_smoke(self):
        from besqint.simulate import PathConfig

        cfg = PathConfig(step=2e-3, n_paths=40, seed=17, max_time=500.0)
        grid = list(np.geomspace(10.0, 200.0, 20))
        res = asym.lil_experiment(P11, cfg, grid)
        assert res.ratios.shape == (40, 20)
        assert res.proxies.size >= 30
        assert np.all(res.proxies >= 0.0)
        # proxies concentrate within an order of magnitude of the constant
        assert 0.02 <= res.median_proxy <= 0.6
