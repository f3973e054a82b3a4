"""Closed-form Gaussian rate families, the capacity region, and b_star."""

import math

import numpy as np
import pytest

from cograte.model import ChannelParams
from cograte.bounds import co1_pentagon
from cograte.gaussian import (
    b_condition,
    b_star,
    capacity_pentagon,
    capacity_region,
    g1_region,
    g2_pentagon,
    g2_region,
    g3_pentagon,
    g3_region_lambda_sweep,
    g3p_pentagon,
    g3p_region,
    ga_pentagon,
    gb_pentagon,
    lambda_opt,
)
from cograte.geometry import hull_of_union, subset_within


def hl2(x):
    return 0.5 * math.log2(x)


CH = ChannelParams(6.0, 6.0, 1.3628)
CH2 = ChannelParams(6.0, 6.0, 2.0)


class TestGaPentagon:
    def test_all_power_on_own_message(self):
        # alpha=1, beta=1: private cognitive signal only, no relaying
        for theta in (0.0, 0.3, 1.0):
            p = ga_pentagon(CH, alpha=1.0, beta=1.0, theta=theta)
            assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)
            assert p.r2_max == pytest.approx(hl2(7), abs=1e-12)
            assert p.sum_max == pytest.approx(
                hl2(1 + 6 + CH.b**2 * 6), abs=1e-12
            )

    def test_alpha_zero_kills_r1(self):
        for b in (1.0, 2.0):
            p = ga_pentagon(ChannelParams(6, 6, b), alpha=0.0, beta=0.7, theta=0.4)
            assert p.r1_max == 0.0

    def test_p1_zero_channel(self):
        p = ga_pentagon(ChannelParams(0, 6, 2), alpha=0.5, beta=0.5, theta=0.5)
        assert p.r1_max == 0.0
        assert p.r2_max == pytest.approx(hl2(7), abs=1e-12)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            ga_pentagon(CH, alpha=1.2, beta=0.5, theta=0.5)
        with pytest.raises(ValueError):
            ga_pentagon(CH, alpha=0.5, beta=-0.1, theta=0.5)
        with pytest.raises(ValueError):
            ga_pentagon(CH, alpha=0.5, beta=0.5, theta=float("nan"))


class TestGbPentagon:
    def test_full_relay_split(self):
        # alpha=1, beta=0: all cognitive power carries the primary message
        p = gb_pentagon(CH2, alpha=1.0, beta=0.0)
        assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)
        assert p.r2_max == pytest.approx(hl2(1 + 6 / 25), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(1 + 6 / 25) + hl2(7), abs=1e-12)

    def test_alpha_zero_beamforms(self):
        p = gb_pentagon(CH2, alpha=0.0, beta=0.3)
        assert p.r1_max == 0.0
        assert p.r2_max == pytest.approx(hl2(1 + (2 * math.sqrt(6) + math.sqrt(6)) ** 2), abs=1e-12)

    def test_relay_without_secondary_power(self):
        p = gb_pentagon(ChannelParams(6, 0, 1), alpha=0.5, beta=1.0)
        assert p.r2_max == pytest.approx(1.0, abs=1e-12)


class TestG2Pentagon:
    def test_alpha_one(self):
        p = g2_pentagon(CH2, alpha=1.0)
        assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)
        assert p.r2_max == pytest.approx(hl2(7), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(31), abs=1e-12)

    def test_alpha_zero(self):
        p = g2_pentagon(CH2, alpha=0.0)
        assert p.r1_max == 0.0
        assert p.r2_max == pytest.approx(hl2(55), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(55), abs=1e-12)

    def test_p1_zero(self):
        p = g2_pentagon(ChannelParams(0, 9, 3), alpha=0.7)
        assert p.r1_max == 0.0
        assert p.r2_max == pytest.approx(hl2(10), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(10), abs=1e-12)

    def test_monotone_in_alpha(self):
        alphas = np.linspace(0.0, 1.0, 101)
        pens = [g2_pentagon(CH, a) for a in alphas]
        r1 = np.array([p.r1_max for p in pens])
        r2 = np.array([p.r2_max for p in pens])
        assert np.all(np.diff(r1) >= 0)
        assert np.all(np.diff(r2) <= 0)


class TestG3Pentagon:
    def test_lambda_zero_alpha_one(self):
        p = g3_pentagon(CH2, alpha=1.0, lam=0.0)
        assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)

    def test_lambda_zero_alpha_zero(self):
        p = g3_pentagon(CH2, alpha=0.0, lam=0.0)
        assert p.r1_max == pytest.approx(0.0, abs=1e-12)

    def test_optimal_lambda_collapses_r1(self):
        lam = lambda_opt(ChannelParams(6, 6, 1.2), 0.5)
        p = g3_pentagon(ChannelParams(6, 6, 1.2), alpha=0.5, lam=lam)
        assert p.r1_max == pytest.approx(1.0, abs=1e-12)  # half log2(1+3)

    def test_bad_lambda_can_empty_the_pentagon(self):
        assert g3_pentagon(CH2, alpha=0.5, lam=50.0).is_empty()

    def test_lambda_validation(self):
        with pytest.raises(ValueError):
            g3_pentagon(CH2, alpha=0.5, lam=-0.5)
        with pytest.raises(ValueError):
            g3_pentagon(CH2, alpha=0.5, lam=float("inf"))


class TestLambdaOpt:
    def test_endpoints_vanish(self):
        assert lambda_opt(CH, 1.0) == 0.0
        assert lambda_opt(CH, 0.0) == 0.0

    def test_interior_value(self):
        assert lambda_opt(ChannelParams(6, 3, 1.1), 0.5) == pytest.approx(0.75, abs=1e-15)


class TestG3pPentagon:
    def test_max_r2_corner_at_threshold_gain(self):
        b = math.sqrt(13 / 7)
        p = g3p_pentagon(ChannelParams(6, 6, b), alpha=0.0)
        assert p.r1_max == 0.0
        expect = hl2((b * math.sqrt(6) + math.sqrt(6)) ** 2 + 1)
        assert p.sum_max == pytest.approx(expect, abs=1e-12)

    def test_alpha_one(self):
        p = g3p_pentagon(CH2, alpha=1.0)
        assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(6 + 4 * 6 + 1), abs=1e-12)

    def test_p1_zero(self):
        assert g3p_pentagon(ChannelParams(0, 6, 2), alpha=0.4).r1_max == 0.0


class TestCapacityPentagon:
    def test_alpha_one_unit_gain(self):
        p = capacity_pentagon(ChannelParams(6, 6, 1), alpha=1.0)
        assert p.r1_max == pytest.approx(hl2(7), abs=1e-12)
        assert p.sum_max == pytest.approx(hl2(13), abs=1e-12)
        assert p.r2_max == p.sum_max  # no individual R2 cap

    def test_alpha_zero_beamforming_corner(self):
        p = capacity_pentagon(ChannelParams(6, 6, 1), alpha=0.0)
        assert p.r1_max == 0.0
        assert p.sum_max == pytest.approx(hl2(25), abs=1e-12)

    def test_p1_zero(self):
        p = capacity_pentagon(ChannelParams(0, 4, 1), alpha=0.9)
        assert p.r1_max == 0.0
        assert p.sum_max == pytest.approx(hl2(5), abs=1e-12)


class TestBStar:
    def test_reference_channel(self):
        assert b_star(CH) == pytest.approx(math.sqrt(13 / 7), abs=1e-15)
        assert b_star(CH) == pytest.approx(1.3628, abs=1e-4)

    def test_no_primary_power(self):
        assert b_star(ChannelParams(6, 0, 1)) == 1.0

    def test_per_alpha_condition(self):
        assert b_condition(CH, 1.0) == pytest.approx(math.sqrt(7), abs=1e-15)
        assert b_condition(CH, 0.0) == pytest.approx(b_star(CH), abs=0)

    def test_condition_monotone_in_alpha(self):
        alphas = np.linspace(0.0, 1.0, 51)
        vals = [b_condition(CH, a) for a in alphas]
        assert np.all(np.diff(vals) >= 0)


class TestFamilyConsistency:
    def test_g3_at_optimal_lambda_matches_g3p(self):
        rng = np.random.default_rng(5)
        channels = [CH, ChannelParams(6, 6, 3.3628)] + [
            ChannelParams(rng.uniform(0.1, 10), rng.uniform(0, 10), rng.uniform(1, 4))
            for _ in range(5)
        ]
        alphas = np.linspace(0.0, 1.0, 201)
        for ch in channels:
            for a in alphas:
                p3 = g3_pentagon(ch, a, lambda_opt(ch, a))
                pp = g3p_pentagon(ch, a)
                assert abs(p3.r1_max - pp.r1_max) <= 1e-9
                assert abs(p3.r2_max - pp.r2_max) <= 1e-9
                assert abs(p3.sum_max - pp.sum_max) <= 1e-9

    def test_g3p_r1_closed_form_is_exact(self):
        alphas = np.linspace(0.0, 1.0, 201)
        for ch in (CH, CH2, ChannelParams(0.3, 8, 1.5)):
            for a in alphas:
                got = g3p_pentagon(ch, a).r1_max
                want = hl2(1 + a * ch.p1)
                assert got == pytest.approx(want, rel=1e-12, abs=1e-15)

    def test_g3p_meets_outer_bound_pointwise(self):
        # the rho = sqrt(1-alpha) correspondence behind the capacity proof
        alphas = np.linspace(0.0, 1.0, 201)
        for ch in (CH, ChannelParams(2, 5, 1.1)):
            for a in alphas:
                inner = g3p_pentagon(ch, a)
                outer = co1_pentagon(ch, rho=math.sqrt(1 - a))
                assert abs(inner.r1_max - outer.r1_max) <= 1e-9
                assert abs(inner.sum_max - outer.sum_max) <= 1e-9

    def test_achievable_families_never_empty(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            ch = ChannelParams(rng.uniform(0, 8), rng.uniform(0, 8), rng.uniform(1, 4))
            a, bta, th = rng.uniform(0, 1, 3)
            for p in (
                ga_pentagon(ch, a, bta, th),
                gb_pentagon(ch, a, bta),
                g2_pentagon(ch, a),
                g3p_pentagon(ch, a),
            ):
                assert not p.is_empty()
                assert p.r1_max >= 0 and p.r2_max >= 0 and p.sum_max >= 0


class TestLoosenessCondition:
    # For alpha > 0 the R2 cap is slack (the sum constraint already implies
    # it) exactly when b <= b_condition(ch, alpha); at alpha = 0 the margin
    # vanishes identically for every gain.

    @staticmethod
    def _margin(ch, alpha):
        p = g3p_pentagon(ch, alpha)
        cap = capacity_pentagon(ch, alpha)
        return p.r2_max - (cap.sum_max - cap.r1_max)

    def test_margin_sign_tracks_condition(self):
        alphas = np.linspace(0.01, 1.0, 34)
        for b in (1.0, 1.2, b_star(CH), 2.0, 3.3628):
            ch = ChannelParams(6, 6, b)
            for a in alphas:
                margin = self._margin(ch, a)
                if b <= b_condition(ch, a) - 1e-9:
                    assert margin >= -1e-9
                elif b >= b_condition(ch, a) + 1e-9:
                    assert margin < 0

    def test_margin_zero_at_alpha_zero(self):
        for b in (1.0, 2.0, 3.3628):
            assert self._margin(ChannelParams(6, 6, b), 0.0) == pytest.approx(0.0, abs=1e-12)


class TestRegionBuilders:
    def test_g1_is_the_beta_zero_slice(self):
        ch = CH
        n = 21
        alphas = np.linspace(0, 1, n)
        thetas = np.linspace(0, 1, n)
        pens = [ga_pentagon(ch, a, 0.0, t) for a in alphas for t in thetas]
        pens += [gb_pentagon(ch, a, 0.0) for a in alphas]
        manual = hull_of_union(pens, n_directions=181)
        built = g1_region(ch, n_alpha=n, n_theta=n, n_directions=181)
        assert np.abs(manual.support - built.support).max() <= 1e-12

    def test_capacity_region_axis_supports(self):
        reg = capacity_region(ChannelParams(6, 6, 1.0), n_alpha=201, n_directions=181)
        assert reg.support[0] == pytest.approx(hl2(7), abs=1e-9)
        assert reg.support[-1] == pytest.approx(hl2(25), abs=1e-9)

    def test_g2_region_degenerate_channel_is_a_segment(self):
        reg = g2_region(ChannelParams(0, 6, 2), n_alpha=51, n_directions=181)
        pts = reg.boundary
        assert np.abs(pts[:, 0]).max() <= 1e-9
        assert pts[:, 1].max() == pytest.approx(hl2(7), abs=1e-9)

    def test_lambda_sweep_covers_g3p(self):
        ch = CH
        sweep = g3_region_lambda_sweep(ch, n_alpha=51, n_lambda=51, n_directions=181)
        base = g3p_region(ch, n_alpha=51, n_directions=181)
        assert subset_within(base, sweep, tol=1e-3).is_subset

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            g3p_region(CH, n_alpha=1)
