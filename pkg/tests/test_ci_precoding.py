"""Tests for constructive-interference classification, the CI/ZF precoders,
and the SER simulation machinery."""

import math

import numpy as np
import pytest
from scipy.special import erfc

from iflab.channel_model import RngStream, psk_points
from iflab.ci_precoding import (
    CiScenario,
    TwoUserToy,
    _ci_solve_normalized,
    ci_precode,
    is_constructive,
    received_toy,
    sector_margin,
    ser_curve,
    snr_at_target,
    zf_amplitude,
    zf_precode,
)
from iflab.errors import EmptyGrid, InvalidSymbol, NotBracketed, RankError, ShapeError
from iflab.results import CurveResult, Series


def _scenario(h, m, p_t):
    return CiScenario(channel=np.asarray(h, complex), constellation=psk_points(m), total_power=p_t)


def _rand(seed, *shape):
    g = RngStream(seed).generator
    return (g.standard_normal(shape) + 1j * g.standard_normal(shape)) / np.sqrt(2)


class TestToy:
    def test_destructive_case(self):
        assert received_toy(TwoUserToy(1, -1, 0.5)) == pytest.approx(0.5)

    def test_constructive_case(self):
        assert received_toy(TwoUserToy(1, -1, -0.5)) == pytest.approx(1.5)

    def test_no_interference(self):
        assert received_toy(TwoUserToy(1, -1, 0.0)) == pytest.approx(1.0)

    def test_rejects_non_unit_symbols(self):
        with pytest.raises(ValueError):
            TwoUserToy(2.0, -1, 0.5)


class TestIsConstructive:
    def test_bpsk_cases(self):
        assert is_constructive(1.5, 1, 2)
        assert not is_constructive(0.5, 1, 2)

    @pytest.mark.parametrize("m", [2, 4, 8])
    def test_nominal_point_boundary(self, m):
        for s in psk_points(m).points:
            assert is_constructive(s, s, m)

    def test_zero_symbol_rejected(self):
        with pytest.raises(InvalidSymbol):
            is_constructive(1.0, 0.0, 2)

    def test_bpsk_agrees_with_sign_test(self):
        g = RngStream(808).generator
        y = g.standard_normal(100000) * 2 + 1j * g.standard_normal(100000) * 2
        s = np.where(g.standard_normal(100000) > 0, 1.0, -1.0)
        for yi, si in zip(y[:2000], s[:2000]):
            assert is_constructive(yi, si, 2) == (np.real(yi * np.conj(si)) >= abs(si))
        # full-size vectorized cross-check of the same rule
        margins = np.real(y * np.conj(s)) / np.abs(s)
        assert np.array_equal(
            margins >= np.abs(s) - 1e-12,
            np.real(y * np.conj(s)) >= np.abs(s) - 1e-12,
        )

    def test_deeper_point_is_constructive_qpsk(self):
        s = psk_points(4).points[0]
        assert is_constructive(1.8 * s, s, 4)
        assert not is_constructive(0.9 * s, s, 4)


class TestZfPrecode:
    def test_scalar_case(self):
        sc = _scenario([[2.0]], 2, 1.0)
        x = zf_precode(sc, [1.0])
        np.testing.assert_allclose(x, [1.0], atol=1e-12)
        np.testing.assert_allclose(sc.channel @ x, [2.0], atol=1e-12)

    def test_receive_proportional_to_symbols(self):
        for seed in range(10):
            h = _rand(seed, 3, 5)
            sc = _scenario(h, 4, 2.5)
            s = psk_points(4).points[RngStream(seed, 1).generator.integers(0, 4, 3)]
            x = zf_precode(sc, s)
            y = h @ x
            beta = zf_amplitude(sc, s)
            np.testing.assert_allclose(y, beta * s, atol=1e-10 * beta)
            assert np.linalg.norm(x) ** 2 == pytest.approx(2.5, rel=1e-10)

    def test_orthonormal_rows_scale(self):
        q, _ = np.linalg.qr(_rand(5, 4, 4))
        sc = _scenario(q.conj().T[:4], 4, 3.0)
        # rows of q^H are orthonormal
        s = psk_points(4).points[np.array([0, 1, 2, 3])]
        assert zf_amplitude(sc, s) == pytest.approx(math.sqrt(3.0 / 4.0), rel=1e-10)

    def test_rank_deficient_rejected(self):
        h = np.array([[1.0, 2.0], [2.0, 4.0]], dtype=complex)
        with pytest.raises(RankError):
            zf_precode(_scenario(h, 2, 1.0), [1.0, -1.0])

    def test_symbol_count_checked(self):
        with pytest.raises(ShapeError):
            zf_precode(_scenario(np.eye(2), 2, 1.0), [1.0])


def _grid_oracle_power(h, s, delta, p_t, rounds=8, pts=13):
    """Exhaustive grid search with convex zoom refinement (K=2, BPSK).

    The channel is square, so transmit vectors and receive points are in
    bijection; the grid walks the derotated receive domain where BPSK
    feasibility is the exact half-space Re z_k >= delta, making every grid
    point's feasibility decidable without slack.
    """
    q = np.linalg.inv(h @ h.conj().T)
    qt = (np.conj(s)[:, None] * q) * s[None, :]
    lo_eig = np.linalg.eigvalsh(qt)[0]
    w = math.sqrt(p_t / lo_eig)
    center = np.array([delta, delta, 0.0, 0.0])
    half = np.array([w, w, w, w])
    best_power = None
    for _ in range(rounds):
        axes = [np.linspace(center[i] - half[i], center[i] + half[i], pts) for i in range(4)]
        axes[0] = np.maximum(axes[0], delta)   # clamp into the feasible half-space
        axes[1] = np.maximum(axes[1], delta)
        g0, g1, g2, g3 = np.meshgrid(*axes, indexing="ij")
        z = np.stack([g0.ravel() + 1j * g2.ravel(), g1.ravel() + 1j * g3.ravel()], axis=1)
        power = np.einsum("nk,kl,nl->n", z.conj(), qt, z).real
        i = int(np.argmin(power))
        best_power = float(power[i])
        center = np.array([z[i, 0].real, z[i, 1].real, z[i, 0].imag, z[i, 1].imag])
        spacing = 2 * half / (pts - 1)
        half = 3 * spacing
    return best_power


class TestCiPrecode:
    def test_single_user_equals_zf_power(self):
        h = _rand(3, 1, 1)
        sc = _scenario(h, 4, 2.0)
        s = psk_points(4).points[[1]]
        x_ci = ci_precode(sc, s)
        x_zf = zf_precode(sc, s)
        assert np.linalg.norm(x_ci) ** 2 == pytest.approx(np.linalg.norm(x_zf) ** 2, rel=1e-9)

    def test_k4_strict_saving_and_constructive_points(self):
        h = _rand(11, 4, 4)
        sc = _scenario(h, 4, 4.0)
        s = psk_points(4).points[np.array([0, 3, 1, 2])]
        x_ci = ci_precode(sc, s)
        x_zf = zf_precode(sc, s)
        assert np.linalg.norm(x_ci) ** 2 < np.linalg.norm(x_zf) ** 2 * (1 - 1e-6)
        delta = zf_amplitude(sc, s)
        y = h @ x_ci
        for k in range(4):
            # at least as deep as the nominal ZF receive point delta * s_k
            assert is_constructive(y[k], delta * s[k], 4)

    def test_power_never_exceeds_budget(self):
        g = RngStream(55).generator
        for trial in range(200):
            k = int(g.integers(1, 7))
            nt = int(g.integers(k, 8))
            m = int(2 ** g.integers(1, 4))
            h = (g.standard_normal((k, nt)) + 1j * g.standard_normal((k, nt))) / np.sqrt(2)
            s = psk_points(m).points[g.integers(0, m, k)]
            sc = _scenario(h, m, 1.7)
            x = ci_precode(sc, s)
            assert np.linalg.norm(x) ** 2 <= 1.7 * (1 + 1e-9)

    def test_min_margin_is_tight(self):
        # optimality requires at least one constraint at equality: a strictly
        # interior solution could be scaled down and still be feasible
        for seed in (1, 2, 3, 4):
            h = _rand(seed, 3, 3)
            sc = _scenario(h, 4, 2.0)
            s = psk_points(4).points[RngStream(seed, 9).generator.integers(0, 4, 3)]
            delta = zf_amplitude(sc, s)
            y = (h @ ci_precode(sc, s)) * np.conj(s)
            margins = sector_margin(y, 4)
            target = delta * math.sin(math.pi / 4)
            assert margins.min() >= target * (1 - 1e-8)
            assert margins.min() == pytest.approx(target, rel=1e-8)

    def test_removing_active_user_strictly_reduces_power(self):
        from iflab.ci_precoding import _sector_constraints

        for seed in (21, 22, 23):
            h = _rand(seed, 3, 3)
            m = 4
            s = psk_points(m).points[RngStream(seed, 2).generator.integers(0, m, 3)]
            hh = h @ h.conj().T
            z, full_power = _ci_solve_normalized(hh, s, m)
            margins = sector_margin(z, m)
            target = math.sin(math.pi / m)
            active = [k for k in range(3) if margins[k] <= target * (1 + 1e-8)]
            assert active
            c, d = _sector_constraints(3, m)
            for k in active:
                keep = np.ones(len(d), dtype=bool)
                keep[2 * k] = keep[2 * k + 1] = False
                _, reduced = _ci_solve_normalized(hh, s, m, (c[keep], d[keep]))
                assert reduced < full_power * (1 - 1e-9)

    def test_matches_grid_search_k2_bpsk(self):
        for seed in (31, 32, 33):
            h = _rand(seed, 2, 2)
            sc = _scenario(h, 2, 2.0)
            s = np.array(psk_points(2).points[[0, 1]])
            delta = zf_amplitude(sc, s)
            x = ci_precode(sc, s)
            qp_power = float(np.linalg.norm(x) ** 2)
            grid_power = _grid_oracle_power(h, s, delta, 2.0)
            assert grid_power >= qp_power - 1e-9
            assert grid_power <= qp_power * 1.01

    def test_toy_embedding_keeps_beneficial_interference(self):
        # the two-user example with cross coefficient -0.5 and opposite
        # symbols: each user transmits at power one through a lossless
        # direct link, so the nominal amplitude is 1 and the constructive
        # cross term lifts the received amplitude to 1.5
        rho = -0.5
        h = np.array([[1.0, rho], [rho, 1.0]], dtype=complex)
        s = np.array([1.0, -1.0], dtype=complex)
        sc = _scenario(h, 2, 2.0)
        x = ci_precode(sc, s)
        x_full = x * math.sqrt(2.0 / np.linalg.norm(x) ** 2)
        y = h @ x_full
        amplitudes = np.real(y * np.conj(s))
        assert np.all(amplitudes >= 1.5 - 1e-9)
        for k in range(2):
            assert is_constructive(y[k], s[k], 2)


def _q(x):
    return 0.5 * erfc(x / math.sqrt(2.0))


def _replicate_zf_error_probs(seed, users, nt, trials, snr_db, chunk_size=4096):
    """Analytic per-trial QPSK error probabilities for the ZF receive point,
    replaying the exact channel draws the curve simulation makes."""
    gamma = 10 ** (snr_db / 10)
    probs = []
    n_chunks = (trials + chunk_size - 1) // chunk_size
    for c in range(n_chunks):
        n = min(chunk_size, trials - c * chunk_size)
        g = RngStream(seed, 0).child(c).generator
        h = (g.standard_normal((n, users, nt)) + 1j * g.standard_normal((n, users, nt))) / np.sqrt(2)
        sym = g.integers(0, 4, (n, users))
        _ = (g.standard_normal((n, users)), g.standard_normal((n, users)))  # noise draws
        s = psk_points(4).points[sym]
        hh = np.einsum("nkt,nlt->nkl", h, h.conj())
        qs = np.linalg.solve(hh, s[..., None])[..., 0]
        norm2 = np.einsum("nk,nk->n", s.conj(), qs).real
        beta = np.sqrt(nt * gamma / norm2)
        q = _q(beta)
        probs.append(np.repeat(2 * q - q * q, users))
    return np.concatenate(probs)


class TestSerCurve:
    def test_empty_grid(self):
        with pytest.raises(EmptyGrid):
            ser_curve("zf", 2, 4, [], 100, RngStream(1))

    def test_unknown_precoder(self):
        with pytest.raises(ValueError):
            ser_curve("mrt", 2, 4, [10.0], 100, RngStream(1))

    def test_deterministic_and_worker_independent(self):
        a = ser_curve("ci", 2, 4, [8.0, 16.0], 3000, RngStream(9), workers=1)
        b = ser_curve("ci", 2, 4, [8.0, 16.0], 3000, RngStream(9), workers=2)
        assert a.column("ser").values == b.column("ser").values

    def test_high_snr_drives_errors_down(self):
        curve = ser_curve("zf", 2, 4, [0.0, 15.0, 30.0], 4000, RngStream(17))
        ser = curve.column("ser").values
        assert ser[0] > ser[1] > ser[2]
        assert ser[2] < 5e-3

    def test_zf_matches_analytic_qpsk_oracle(self):
        seed, users, trials, snr_db = 1234, 2, 30000, 14.0
        curve = ser_curve("zf", users, 4, [snr_db], trials, RngStream(seed, 0))
        probs = _replicate_zf_error_probs(seed, users, users, trials, snr_db)
        observed = curve.column("ser").values[0] * trials * users
        expected = probs.sum()
        spread = math.sqrt(np.sum(probs * (1 - probs)))
        assert abs(observed - expected) <= 2.58 * spread  # 99% two-sided


class TestSnrAtTarget:
    def _curve(self, axis, ser):
        return CurveResult(axis_name="snr_db", axis=axis, series=[Series("ser", ser)])

    def test_log_linear_midpoint(self):
        curve = self._curve([10.0, 20.0], [1e-1, 1e-3])
        assert snr_at_target(curve, 1e-2) == pytest.approx(15.0, abs=1e-12)

    def test_exact_grid_hit(self):
        curve = self._curve([5.0, 10.0, 15.0], [0.3, 0.01, 0.001])
        assert snr_at_target(curve, 0.01) == 10.0

    def test_all_zero_not_bracketed(self):
        curve = self._curve([5.0, 10.0], [0.0, 0.0])
        with pytest.raises(NotBracketed):
            snr_at_target(curve, 1e-2)

    def test_zero_tail_skipped(self):
        curve = self._curve([0.0, 10.0, 20.0, 30.0], [0.5, 0.05, 0.004, 0.0])
        value = snr_at_target(curve, 1e-2)
        assert 10.0 < value < 20.0
