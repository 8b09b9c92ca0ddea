"""Tests for 2-user G-IC rates, the Han-Kobayashi symmetric point, and the
outer-bound catalogue."""

import math

import numpy as np
import pytest

from iflab.errors import NotStrongRegime, NotWeakRegime
from iflab.gic_regions import (
    GicParams,
    classify_regime,
    hk_private_power,
    hk_region_feasible,
    outer_bound_symmetric,
    rate_hk_symmetric,
    rate_orthogonal,
    rate_strong_capacity,
    rate_tin,
)


def _hk_terms_reference(p, a):
    """Independent re-derivation of the Gaussian HK region terms with the
    noise-floor private split, used as the oracle for bisection results."""
    pp = min(p, 1.0 / a)
    floor = 1.0 + a * pp
    d = math.log2(1 + p / floor)
    gg = math.log2(1 + pp / floor)
    big_a = math.log2((1 + p + a * p) / floor)
    e = math.log2((1 + pp + a * p) / floor)
    return d, gg, big_a, e


def _hk_symmetric_closed_form(p, a):
    d, gg, big_a, e = _hk_terms_reference(p, a)
    return min(d, (big_a + gg) / 2.0, e, (big_a + gg + e) / 3.0)


def _hk_symmetric_scan(p, a, step=1e-4):
    """Brute-force max r with (r, r) feasible, stepping the same
    inequality set; independent of the bisection implementation."""
    d, gg, big_a, e = _hk_terms_reference(p, a)

    def feasible(r):
        return (
            r <= d
            and 2 * r <= big_a + gg
            and 2 * r <= 2 * e
            and 3 * r <= big_a + gg + e
        )

    r = 0.0
    while feasible(r + step):
        r += step
    return r


class TestClassifyRegime:
    def test_threshold_examples(self):
        assert classify_regime(GicParams(3, 4)) == "very_strong"  # boundary inclusive
        assert classify_regime(GicParams(10, 0.001)) == "noisy"
        assert classify_regime(GicParams(10, 0.5)) == "weak"
        assert classify_regime(GicParams(10, 2.0)) == "strong"

    def test_boundary_inclusivity(self):
        p = 3.0
        assert classify_regime(GicParams(p, 1.0 + p)) == "very_strong"
        assert classify_regime(GicParams(p, 1.0 + p - 1e-9)) == "strong"
        assert classify_regime(GicParams(p, 1.0)) == "strong"
        assert classify_regime(GicParams(p, 1.0 - 1e-12)) != "strong"

    def test_partition_is_total_and_single_valued(self):
        rng = np.random.default_rng(3)
        for _ in range(300):
            p = float(10 ** rng.uniform(-1, 4))
            a = float(10 ** rng.uniform(-4, 2))
            label = classify_regime(GicParams(p, a))
            # independent re-evaluation of the same thresholds
            if a * p >= p * (1 + p):
                expected = "very_strong"
            elif a >= 1:
                expected = "strong"
            elif math.sqrt(a) * (1 + a * p) <= 0.5:
                expected = "noisy"
            else:
                expected = "weak"
            assert label == expected

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            GicParams(0.0, 1.0)
        with pytest.raises(ValueError):
            GicParams(1.0, -0.5)
        with pytest.raises(ValueError):
            GicParams(math.inf, 0.5)


class TestBaselineRates:
    def test_tin_examples(self):
        assert rate_tin(GicParams(15, 0)) == pytest.approx(4.0, abs=1e-12)
        assert rate_tin(GicParams(1, 1)) == pytest.approx(math.log2(1.5), abs=1e-12)

    def test_tin_monotone_in_cross_gain(self):
        rates = [rate_tin(GicParams(10, a)) for a in np.linspace(0, 3, 50)]
        assert all(r1 >= r2 for r1, r2 in zip(rates, rates[1:]))

    def test_orthogonal_examples(self):
        assert rate_orthogonal(GicParams(1.5, 0.3)) == pytest.approx(1.0, abs=1e-12)
        assert rate_orthogonal(GicParams(7.5, 0.3)) == pytest.approx(2.0, abs=1e-12)

    def test_orthogonal_independent_of_cross_gain(self):
        assert rate_orthogonal(GicParams(5, 0.0)) == rate_orthogonal(GicParams(5, 99.0))

    def test_strong_capacity_examples(self):
        assert rate_strong_capacity(GicParams(3, 4)) == pytest.approx(2.0, abs=1e-12)
        assert rate_strong_capacity(GicParams(3, 1)) == pytest.approx(
            min(2.0, 0.5 * math.log2(7)), abs=1e-12
        )

    def test_strong_capacity_limit_large_a(self):
        g = GicParams(3, 1e9)
        assert rate_strong_capacity(g) == pytest.approx(math.log2(4), abs=1e-12)

    def test_strong_capacity_rejects_weak(self):
        with pytest.raises(NotStrongRegime):
            rate_strong_capacity(GicParams(3, 0.99))


class TestHkSymmetric:
    def test_private_split_rule(self):
        assert hk_private_power(GicParams(10, 0.05)) == pytest.approx(10.0)
        assert hk_private_power(GicParams(10, 0.2)) == pytest.approx(5.0)

    def test_matches_closed_form_on_grid(self):
        for p_db in range(0, 41, 5):
            p = 10 ** (p_db / 10)
            for a in np.arange(0.05, 1.0, 0.05):
                got = rate_hk_symmetric(GicParams(p, float(a)))
                want = _hk_symmetric_closed_form(p, float(a))
                assert got == pytest.approx(want, abs=1e-9)

    def test_matches_scan_oracle_p10_a02(self):
        got = rate_hk_symmetric(GicParams(10, 0.2))
        want = _hk_symmetric_scan(10, 0.2)
        assert got == pytest.approx(want, abs=1.5e-4)
        # frozen value from the closed form: e-term binds at exactly 2 bits
        assert got == pytest.approx(2.0, abs=1e-9)

    def test_small_a_limit_approaches_interference_free(self):
        g = GicParams(100, 1e-9)
        assert rate_hk_symmetric(g) == pytest.approx(math.log2(101), abs=1e-6)

    def test_reduces_to_tin_when_all_private(self):
        # a <= 1/P puts all power in the private message: exactly TIN
        for p, a in [(10, 0.05), (4, 0.2), (100, 0.005)]:
            g = GicParams(p, a)
            assert rate_hk_symmetric(g) == pytest.approx(rate_tin(g), abs=1e-9)

    def test_dominates_baselines_in_target_regime(self):
        # The fixed noise-floor split beats both treating interference as
        # noise and orthogonal sharing at high SNR with light-to-moderate
        # coupling.  It is NOT uniformly dominant (see ledger): for aP a
        # few times unity it dips below TIN, and its no-time-sharing sum
        # constraint loses to power-pooled TDM toward strong coupling.
        for p, a in [(1e3, 0.1), (1e3, 0.2), (1e4, 0.05), (1e4, 0.1), (1e4, 0.2)]:
            g = GicParams(p, a)
            hk = rate_hk_symmetric(g)
            assert hk >= rate_tin(g) - 1e-9
            assert hk >= rate_orthogonal(g) - 1e-9
        # and it is never below TIN by more than half a bit anywhere
        for p_db in range(0, 41, 5):
            p = 10 ** (p_db / 10)
            for a in np.arange(0.05, 1.0, 0.05):
                g = GicParams(p, float(a))
                assert rate_hk_symmetric(g) >= rate_tin(g) - 0.5

    def test_region_feasibility_rejects_outside(self):
        g = GicParams(10, 0.2)
        r = rate_hk_symmetric(g)
        assert hk_region_feasible(g, r - 1e-6, r - 1e-6)
        assert not hk_region_feasible(g, r + 1e-6, r + 1e-6)

    def test_rejects_out_of_domain(self):
        with pytest.raises(NotWeakRegime):
            rate_hk_symmetric(GicParams(10, 1.0))
        with pytest.raises(NotWeakRegime):
            rate_hk_symmetric(GicParams(10, 0.0))


class TestOuterBound:
    def test_upper_bounds_every_achievable_rate(self):
        for p_db in range(0, 41, 5):
            p = 10 ** (p_db / 10)
            for a in list(np.arange(0.05, 1.0, 0.05)) + [1.0, 2.0, 5.0, 1 + p, 10 * (1 + p)]:
                g = GicParams(p, float(a))
                outer = outer_bound_symmetric(g)
                achievable = [rate_tin(g), rate_orthogonal(g)]
                if 0 < a < 1:
                    achievable.append(rate_hk_symmetric(g))
                if a >= 1:
                    achievable.append(rate_strong_capacity(g))
                assert outer >= max(achievable) - 1e-12

    def test_very_strong_bound_equals_interference_free(self):
        g = GicParams(3, 4)
        assert outer_bound_symmetric(g) == pytest.approx(math.log2(4), abs=1e-12)
        assert outer_bound_symmetric(g) == pytest.approx(rate_strong_capacity(g), abs=1e-12)

    def test_gap_example_p10_a05(self):
        g = GicParams(10, 0.5)
        gap = outer_bound_symmetric(g) - rate_hk_symmetric(g)
        assert 0.0 <= gap <= 1.0
        # frozen: HK binds at 2.0, the Z-channel bound at ~2.4372
        assert gap == pytest.approx(0.43724, abs=1e-4)

    def test_very_strong_exactness_to_machine_precision(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            p = float(10 ** rng.uniform(0, 3))
            a = float((1 + p) * (1 + rng.uniform(0, 3)))
            g = GicParams(p, a)
            assert abs(rate_strong_capacity(g) - math.log2(1 + p)) <= 1e-12
