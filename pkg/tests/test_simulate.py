"""Path engine: exact transitions, determinism, estimator agreement."""

import math

import numpy as np
import pytest

from besqint import simulate as sim
from besqint.errors import CensoredMajorityWarning, NonFiniteInputError, RegimeViolationError
from besqint.laws import BesqParams, SigmaQuery, laplace_sigma

P11 = BesqParams(1.0, 1.0)


def rng(seed=0):
    return np.random.Generator(np.random.Philox(key=np.array([seed, 0], dtype=np.uint64)))


class TestStep:
    def test_moments(self):
        # mean x + delta h, variance 4 x h + 2 delta h^2
        draws = sim.besq_step(np.full(400_000, 1.0), 0.01, BesqParams(1.0, 0.0), rng(7))
        n = draws.size
        m, v = draws.mean(), draws.var()
        assert m == pytest.approx(1.04, abs=3 * math.sqrt(0.0408 / n))
        assert v == pytest.approx(0.0408, abs=3 * 0.0408 * math.sqrt(2.0 / n))

    def test_zero_dimension_trap(self):
        out = sim.besq_step(np.zeros(1000), 0.1, BesqParams(-1.0, 1.0), rng(1))
        assert np.all(out == 0.0)

    def test_low_dimension_poisson_mixture(self):
        # delta in (0, 2): the transition mixes an atom-free gamma with a
        # point mass at 0 of weight exp(-x/(2h)) as x -> 0 stays reachable
        params = BesqParams(-0.5, 0.0)  # delta = 1
        draws = sim.besq_step(np.full(200_000, 0.01), 0.05, params, rng(3))
        assert draws.min() >= 0.0
        assert draws.mean() == pytest.approx(0.01 + 1.0 * 0.05, rel=0.02)

    def test_scalar_input(self):
        out = sim.besq_step(1.0, 0.01, P11, rng(2))
        assert isinstance(out, float) and out > 0

    def test_validation(self):
        with pytest.raises(NonFiniteInputError):
            sim.besq_step(1.0, 0.0, P11, rng(0))
        with pytest.raises(NonFiniteInputError):
            sim.besq_step(-1.0, 0.1, P11, rng(0))


class TestConfig:
    def test_validation(self):
        with pytest.raises(NonFiniteInputError):
            sim.PathConfig(step=0.0, n_paths=10, seed=1)
        with pytest.raises(NonFiniteInputError):
            sim.PathConfig(step=0.1, n_paths=0, seed=1)
        with pytest.raises(NonFiniteInputError):
            sim.PathConfig(step=0.1, n_paths=10, seed=1, max_time=math.inf)

    def test_engine_rejects_negative_power(self):
        with pytest.raises(RegimeViolationError):
            sim.run_paths(BesqParams(1.0, -0.5), 1.0, 2.0,
                          sim.PathConfig(step=0.01, n_paths=10, seed=1))


class TestDeterminism:
    def test_repeatable_and_worker_independent(self):
        cfg1 = sim.PathConfig(step=1e-2, n_paths=30_000, seed=42, n_workers=1)
        cfg4 = sim.PathConfig(step=1e-2, n_paths=30_000, seed=42, n_workers=4)
        a = sim.run_paths(P11, 0.0, 1.0, cfg1)
        b = sim.run_paths(P11, 0.0, 1.0, cfg1)
        c = sim.run_paths(P11, 0.0, 1.0, cfg4)
        for other in (b, c):
            assert np.array_equal(a.sigma, other.sigma, equal_nan=True)
            assert np.array_equal(a.hit_time, other.hit_time, equal_nan=True)
            assert np.array_equal(a.max_level, other.max_level)

    def test_seed_changes_draws(self):
        cfg1 = sim.PathConfig(step=1e-2, n_paths=1000, seed=1)
        cfg2 = sim.PathConfig(step=1e-2, n_paths=1000, seed=2)
        a = sim.run_paths(P11, 0.0, 1.0, cfg1)
        b = sim.run_paths(P11, 0.0, 1.0, cfg2)
        assert not np.array_equal(a.sigma, b.sigma, equal_nan=True)


class TestRunPaths:
    def test_start_at_target(self):
        cfg = sim.PathConfig(step=1e-2, n_paths=100, seed=3)
        summ = sim.run_paths(P11, 1.0, 1.0, cfg)
        assert np.all(summ.hit_time == 0.0)
        assert np.all(summ.sigma == 0.0)

    def test_extremes_bracket_start_and_target(self):
        cfg = sim.PathConfig(step=1e-3, n_paths=2000, seed=4)
        summ = sim.run_paths(P11, 0.5, 2.0, cfg)
        ok = ~summ.censored
        assert np.all(summ.max_level[ok] >= 2.0)
        assert np.all(summ.min_level[ok] <= 0.5)

    def test_mean_sigma_matches_closed_form(self):
        cfg = sim.PathConfig(step=2.5e-4, n_paths=30_000, seed=5)
        summ = sim.run_paths(P11, 0.0, 1.0, cfg)
        m = float(np.nanmean(summ.sigma))
        se = float(np.nanstd(summ.sigma)) / math.sqrt((~summ.censored).sum())
        assert abs(m - 1.0 / 12.0) <= 3 * se

    def test_censoring_warns(self):
        cfg = sim.PathConfig(step=1e-2, n_paths=200, seed=6, max_time=0.05)
        with pytest.warns(CensoredMajorityWarning):
            summ = sim.run_paths(P11, 0.0, 4.0, cfg)
        assert summ.censored_fraction > 0.5
        assert np.isnan(summ.hit_time[summ.censored]).all()


class TestEstimators:
    def test_laplace_estimate_upward(self):
        cfg = sim.PathConfig(step=5e-4, n_paths=30_000, seed=7)
        est = sim.estimate_laplace(P11, 0.0, 1.0, 2.0, cfg)
        exact = laplace_sigma(SigmaQuery(P11, 0.0, 1.0, 2.0))
        assert abs(est.estimate - exact) <= 3 * est.std_error

    @pytest.mark.filterwarnings("ignore::besqint.errors.CensoredMajorityWarning")
    def test_laplace_estimate_defective_downward(self):
        # half of the paths never reach the target; they carry a payoff bound
        # below e^-256 at this horizon
        cfg = sim.PathConfig(step=5e-4, n_paths=20_000, seed=8, max_time=5.0)
        est = sim.estimate_laplace(P11, 1.0, 0.5, 4.0, cfg)
        exact = 0.5 * math.exp(-0.5)
        assert est.censored_fraction == pytest.approx(0.5, abs=0.02)
        assert abs(est.estimate - exact) <= 3 * est.std_error

    def test_lambda_zero_estimate(self):
        cfg = sim.PathConfig(step=1e-3, n_paths=5000, seed=9)
        est = sim.estimate_laplace(P11, 0.0, 1.0, 0.0, cfg)
        assert est.estimate == pytest.approx(1.0)
        assert est.std_error == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.filterwarnings("ignore::besqint.errors.CensoredMajorityWarning")
    def test_joint_r_sigma_estimate(self):
        from besqint.laws import joint_r_sigma_laplace

        cfg = sim.PathConfig(step=5e-4, n_paths=20_000, seed=13, max_time=5.0)
        est = sim.estimate_joint_r_sigma(P11, 1.0, 0.5, 2.0, 1.0, cfg)
        exact = joint_r_sigma_laplace(SigmaQuery(P11, 1.0, 0.5, 2.0), 1.0)
        assert abs(est.estimate - exact) <= 3 * est.std_error


class TestLevels:
    def test_ladder_means(self):
        cfg = sim.PathConfig(step=5e-4, n_paths=20_000, seed=10)
        sig_at, censored = sim.run_paths_levels(P11, 0.0, [0.5, 1.0, 2.0], cfg)
        want = [0.25 / 12.0, 1.0 / 12.0, 4.0 / 12.0]
        for j, w in enumerate(want):
            col = sig_at[:, j]
            m = float(np.nanmean(col))
            se = float(np.nanstd(col)) / math.sqrt(np.isfinite(col).sum())
            assert abs(m - w) <= 4 * se

    def test_increments_uncorrelated(self):
        cfg = sim.PathConfig(step=1e-3, n_paths=20_000, seed=11)
        sig_at, _ = sim.run_paths_levels(P11, 0.0, [0.5, 1.0, 2.0], cfg)
        i1 = sig_at[:, 1] - sig_at[:, 0]
        i2 = sig_at[:, 2] - sig_at[:, 1]
        ok = np.isfinite(i1) & np.isfinite(i2)
        r = np.corrcoef(i1[ok], i2[ok])[0, 1]
        assert abs(r) <= 3.0 / math.sqrt(ok.sum())

    def test_scaling_law_in_distribution(self):
        # empirical laws of y^(p+1) Sigma(0 -> 1) and Sigma(0 -> y)
        n = 10_000
        a = sim.run_paths(P11, 0.0, 1.0, sim.PathConfig(step=2.5e-4, n_paths=n, seed=33))
        b = sim.run_paths(P11, 0.0, 2.0, sim.PathConfig(step=2.5e-4, n_paths=n, seed=34))
        xs = np.sort(4.0 * a.sigma[~a.censored])
        ys = np.sort(b.sigma[~b.censored])
        grid = np.concatenate([xs, ys])
        grid.sort()
        ks = np.abs(
            np.searchsorted(xs, grid, side="right") / xs.size
            - np.searchsorted(ys, grid, side="right") / ys.size
        ).max()
        assert ks <= 0.02


class TestBiasStudy:
    def test_table_and_intercept(self):
        ref = laplace_sigma(SigmaQuery(P11, 0.0, 1.0, 2.0))
        res = sim.bias_study(P11, 0.0, 1.0, 2.0, [4e-3, 2e-3, 1e-3],
                             n_paths=20_000, seed=12, reference=ref)
        assert len(res.rows) == 3
        hs = [r.step for r in res.rows]
        assert hs == sorted(hs, reverse=True)
        assert res.convergence_order in (0.5, 1.0)
        # intercept extrapolates toward the closed form
        assert abs(res.intercept - ref) <= max(
            abs(res.rows[0].estimate - ref), 4 * res.rows[-1].std_error)

    def test_start_at_target_unbiased(self):
        res = sim.bias_study(P11, 1.0, 1.0, 2.0, [1e-2, 5e-3], n_paths=100, seed=1)
        assert all(r.estimate == 1.0 for r in res.rows)


def test_csv_roundtrip(tmp_path):
    cfg = sim.PathConfig(step=1e-2, n_paths=50, seed=3, max_time=2.0)
    summ = sim.run_paths(P11, 0.0, 1.0, cfg)
    out = tmp_path / "paths.csv"
    sim.write_paths_csv(summ, out, header_lines=["seed=3"])
    lines = out.read_text().splitlines()
    assert lines[0] == "# seed=3"
    assert lines[1] == "path_id,hit_time,sigma,max,min,censored"
    assert len(lines) == 2 + len(summ)
    first = lines[2].split(",")
    assert int(first[0]) == 0
    if first[5] == "0":
        assert float(first[2]) == summ.sigma[0]
