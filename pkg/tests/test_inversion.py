"""Laplace inversion: analytic pairs, cross-method checks, library targets."""

import math

import mpmath as mp
import pytest

from besqint import inversion as inv
from besqint.errors import NonFiniteInputError, UnstableInversionError
from besqint.laws import BesqParams, jump_measure_transform

# analytic transform pairs (transform, original); all smooth on (0, inf)
PAIRS = [
    ("const", lambda s: 1 / s, lambda t: 1.0),
    ("ramp", lambda s: 1 / s ** 2, lambda t: t),
    ("exp", lambda s: 1 / (s + 1), lambda t: math.exp(-t)),
    ("sqrt", lambda s: 1 / mp.sqrt(s), lambda t: 1.0 / math.sqrt(math.pi * t)),
    ("bm-hit", lambda s: mp.exp(-mp.sqrt(2 * s)),
     lambda t: (2 * math.pi * t ** 3) ** -0.5 * math.exp(-1.0 / (2 * t))),
    ("gamma2", lambda s: 1 / (s + 1) ** 2, lambda t: t * math.exp(-t)),
]


class TestConfig:
    def test_gs_order_must_be_even(self):
        with pytest.raises(ValueError):
            inv.InversionConfig(method=inv.GAVER_STEHFEST, order_or_nodes=15)

    def test_gs_order_precision_cap(self):
        with pytest.raises(ValueError):
            inv.InversionConfig(method=inv.GAVER_STEHFEST, order_or_nodes=32,
                                working_precision_digits=20)

    def test_talbot_minimum_nodes(self):
        with pytest.raises(ValueError):
            inv.InversionConfig(method=inv.TALBOT, order_or_nodes=4)

    def test_env_var_digits(self, monkeypatch):
        monkeypatch.setenv("BESQINT_PRECISION_DIGITS", "55")
        assert inv.InversionConfig().digits == 55

    def test_default_gs_order(self):
        cfg = inv.gs_config()
        assert cfg.order_or_nodes == 16 and cfg.method == inv.GAVER_STEHFEST


class TestAnalyticPairs:
    @pytest.mark.parametrize("name,fhat,f", PAIRS, ids=[p[0] for p in PAIRS])
    def test_talbot_round_trip(self, name, fhat, f):
        for t in (0.3, 1.0, 3.0):
            assert inv.invert(fhat, t) == pytest.approx(f(t), rel=1e-8, abs=1e-10)

    @pytest.mark.parametrize("name,fhat,f", PAIRS, ids=[p[0] for p in PAIRS])
    def test_gs_round_trip(self, name, fhat, f):
        cfg = inv.gs_config(order=48)
        for t in (0.3, 1.0, 3.0):
            assert inv.invert(fhat, t, cfg) == pytest.approx(f(t), rel=1e-8, abs=1e-10)

    @pytest.mark.parametrize("name,fhat,f", PAIRS, ids=[p[0] for p in PAIRS])
    def test_cross_method_agreement(self, name, fhat, f):
        for t in (0.5, 2.0):
            _, disc = inv.invert_checked(fhat, t)
            assert disc <= 1e-6

    def test_frozen_invert_examples(self):
        assert inv.invert(lambda s: 1 / s, 7.3) == pytest.approx(1.0, abs=1e-8)
        assert inv.invert(lambda s: 1 / (s + 1), 1.0) == pytest.approx(math.exp(-1), abs=1e-8)
        assert inv.invert(lambda s: mp.exp(-mp.sqrt(2 * s)), 1.0) == pytest.approx(
            0.24197072451914337, abs=1e-8)


class TestStability:
    def test_unstable_on_inconsistent_transform(self):
        # oscillatory transforms break Gaver-Stehfest; the cross check sees it
        with pytest.raises(UnstableInversionError):
            inv.invert_checked(lambda s: 1 / (s * s + 1), 20.0)

    def test_invalid_abscissa(self):
        with pytest.raises(NonFiniteInputError):
            inv.invert(lambda s: 1 / s, 0.0)


class TestCdfSigma:
    def test_in_unit_interval_and_monotone(self):
        params = BesqParams(0.5, 0.0)
        vals = [inv.cdf_sigma(params, 0.0, 1.0, t) for t in (0.05, 0.1, 0.3, 0.8, 2.0)]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_small_ball_decay(self):
        assert inv.cdf_sigma(BesqParams(1.0, 1.0), 0.0, 1.0, 1e-3) <= 1e-4

    def test_cross_checked(self):
        v = inv.cdf_sigma(BesqParams(1.0, 1.0), 0.0, 1.0, 0.2, cross_check=True)
        assert 0.0 < v < 1.0

    def test_defective_cdf_saturates_below_one(self):
        # nu > 0 downward: P[Sigma < inf] = (y/x)^nu = 1/2, approached with a
        # heavy t^(-1/2) tail
        v50 = inv.cdf_sigma(BesqParams(1.0, 1.0), 2.0, 1.0, 50.0)
        v400 = inv.cdf_sigma(BesqParams(1.0, 1.0), 2.0, 1.0, 400.0)
        assert 0.4 < v50 < v400 < 0.5
        assert v400 == pytest.approx(0.5, abs=0.02)


class TestJumpDensity:
    def test_reversed_half_order_closed_form(self):
        params = BesqParams(0.5, 0.0)
        for x in (0.0, 0.3):
            for b in (0.1, 1.0, 5.0):
                got = inv.jump_density(params, x, b, "reversed")
                want = (1 - x) ** (0.5 - 1.0) / math.sqrt(2 * math.pi * b)
                assert got == pytest.approx(want, abs=1e-6)

    def test_forward_nonnegative_decreasing(self):
        params = BesqParams(1.0, 1.0)
        bs = [0.05, 0.1, 0.3, 0.8, 2.0, 5.0]
        vals = [inv.jump_density(params, 1.0, b, "forward") for b in bs]
        assert all(v >= 0.0 for v in vals)
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_forward_vanishes_at_infinity(self):
        assert inv.jump_density(BesqParams(1.0, 1.0), 1.0, 40.0, "forward") < 1e-8

    def test_round_trip_to_transform(self):
        # quadrature of exp(-(lam/2) b) against the inverted tail recovers the
        # closed-form transform; b = v^2 removes the 1/sqrt(b) endpoint
        from scipy.integrate import quad

        params = BesqParams(1.0, 1.0)
        lam = 2.0
        want = jump_measure_transform(params, 1.0, lam, "forward")

        def f(v):
            return 2 * v * math.exp(-0.5 * lam * v * v) * inv.jump_density(
                params, 1.0, v * v, "forward")

        got, _ = quad(f, 1e-6, 7.0, epsabs=1e-9, epsrel=1e-8, limit=50)
        assert got == pytest.approx(want, abs=1e-6)


class TestZ4Density:
    def test_matches_brownian_hitting_density(self):
        for x in (0.5, 0.9):
            a = 0.5 * x
            for t in (0.1, 0.5, 2.0):
                want = a / math.sqrt(2 * math.pi * t ** 3) * math.exp(-a * a / (2 * t))
                assert inv.z4_density(x, t) == pytest.approx(want, abs=1e-8)
