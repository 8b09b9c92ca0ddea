"""Constructive-interference classification and symbol-level downlink
precoding against a zero-forcing baseline, with Monte Carlo SER curves.

The CI precoder solves, per symbol slot, the minimum-power convex program
that keeps every user's noiseless receive point inside its PSK decision
sector at least as deeply as zero forcing would place it at full power.
Known multiuser interference is then working for the symbols instead of
being cancelled, and the saved transmit power is the measured gain.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .channel_model import PskConstellation, RngStream, psk_points
from .errors import EmptyGrid, InvalidSymbol, NotBracketed, RankError, ShapeError
from .results import CurveResult, Series, wilson_interval

__all__ = [
    "CiScenario",
    "TwoUserToy",
    "received_toy",
    "is_constructive",
    "sector_margin",
    "zf_precode",
    "ci_precode",
    "ser_curve",
    "snr_at_target",
]


@dataclass(frozen=True)
class CiScenario:
    """Downlink instance: K single-antenna users, Nt transmit antennas,
    an M-PSK constellation, and a total power budget."""

    channel: np.ndarray            # (K, Nt)
    constellation: PskConstellation
    total_power: float

    def __post_init__(self):
        h = np.asarray(self.channel)
        if h.ndim != 2:
            raise ShapeError(f"channel must be K x Nt, got shape {h.shape}")
        if h.shape[0] > h.shape[1]:
            raise ShapeError(f"need K <= Nt for ZF feasibility, got {h.shape}")
        if not self.total_power > 0:
            raise ValueError(f"total power must be positive, got {self.total_power}")

    @property
    def users(self):
        return self.channel.shape[0]

    @property
    def transmit_antennas(self):
        return self.channel.shape[1]


@dataclass(frozen=True)
class TwoUserToy:
    """Two-user scalar example: desired symbol, interfering symbol, and the
    cross coefficient coupling them at receiver 1."""

    x1: complex
    x2: complex
    rho: complex

    def __post_init__(self):
        for name, x in (("x1", self.x1), ("x2", self.x2)):
            if abs(abs(x) - 1.0) > 1e-9:
                raise ValueError(f"{name} must be unit modulus, got |{name}|={abs(x)}")


def received_toy(toy: TwoUserToy) -> complex:
    """Noiseless received sample of the two-user toy: ``x1 + rho * x2``."""
    return toy.x1 + toy.rho * toy.x2


def sector_margin(z, m_order):
    """Signed distance of ``z`` to the M-PSK decision sector around the
    positive real axis: ``Re(z) sin(pi/M) - |Im(z)| cos(pi/M)``."""
    theta = np.pi / m_order
    return np.real(z) * np.sin(theta) - np.abs(np.imag(z)) * np.cos(theta)


def is_constructive(y, s, m_order) -> bool:
    """Classify received point ``y`` against reference symbol ``s``.

    After derotating by the symbol phase, the interference is constructive
    when the point sits at least as deep inside the decision sector as the
    nominal symbol itself, i.e. ``margin(y conj(s)/|s|) >= |s| sin(pi/M)``
    (up to a 1e-12 slack on the boundary).
    """
    s = complex(s)
    if s == 0:
        raise InvalidSymbol("reference symbol must be nonzero")
    mag = abs(s)
    derot = complex(y) * s.conjugate() / mag
    theta = math.pi / m_order
    return sector_margin(derot, m_order) >= mag * math.sin(theta) - 1e-12


def _row_rank_check(h):
    sv = np.linalg.svd(h, compute_uv=False)
    if sv.size == 0 or sv[-1] <= 1e-12 * sv[0] or sv[-1] == 0.0:
        raise RankError("channel matrix is row-rank deficient")


def zf_precode(scenario: CiScenario, symbols):
    """Zero-forcing transmit vector at exactly the scenario power budget.

    Returns ``x = beta H^H (H H^H)^-1 s`` with ``beta`` fixing
    ``||x||^2 = P_T``; the noiseless receive vector is ``beta * s``.
    """
    h = np.asarray(scenario.channel, dtype=np.complex128)
    s = np.asarray(symbols, dtype=np.complex128)
    if s.shape != (scenario.users,):
        raise ShapeError(f"expected {scenario.users} symbols, got shape {s.shape}")
    _row_rank_check(h)
    hh = h @ h.conj().T
    qs = np.linalg.solve(hh, s)
    x_unit = h.conj().T @ qs
    norm2 = float(np.vdot(s, qs).real)
    beta = math.sqrt(scenario.total_power / norm2)
    return beta * x_unit


def zf_amplitude(scenario: CiScenario, symbols) -> float:
    """Per-user noiseless receive amplitude delivered by ZF at full power."""
    h = np.asarray(scenario.channel, dtype=np.complex128)
    s = np.asarray(symbols, dtype=np.complex128)
    hh = h @ h.conj().T
    norm2 = float(np.vdot(s, np.linalg.solve(hh, s)).real)
    return math.sqrt(scenario.total_power / norm2)


def _nnls(a, b, exact=False, max_outer=None):
    """Nonnegative least squares by the Lawson-Hanson active-set method.

    Runs to exact KKT (up to a scale-relative gradient tolerance), which
    the CI dual needs; scipy's rewritten nnls can stop early on small
    dense problems.  Sized for the tiny systems this module produces:
    passive-set systems go through the normal equations unless ``exact``
    asks for the slower least-squares factorization.
    """
    m, n = a.shape
    ata = a.T @ a
    atb = a.T @ b
    tol = 1e-12 * max(1.0, float(np.abs(atb).max()))
    x = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    if max_outer is None:
        max_outer = 50 * n
    for _ in range(max_outer):
        w = atb - ata @ x
        w = np.where(passive, -np.inf, w)
        j = int(np.argmax(w))
        if w[j] <= tol:
            break
        passive[j] = True
        while True:
            idx = np.flatnonzero(passive)
            if exact:
                z = np.linalg.lstsq(a[:, idx], b, rcond=None)[0]
            else:
                try:
                    z = np.linalg.solve(ata[np.ix_(idx, idx)], atb[idx])
                except np.linalg.LinAlgError:
                    z = np.linalg.lstsq(a[:, idx], b, rcond=None)[0]
            if z.min() > 0.0:
                x[:] = 0.0
                x[idx] = z
                break
            xp = x[idx]
            shrink = z <= 0.0
            alpha = float(np.min(xp[shrink] / (xp[shrink] - z[shrink])))
            x[idx] = xp + alpha * (z - xp)
            np.maximum(x, 0.0, out=x)
            passive[idx[x[idx] <= 1e-14 * max(1.0, x.max())]] = False
            x[~passive] = 0.0
    return x


def _sector_constraints(k_users, m_order):
    """Constraint matrix C and offsets for margins at the normalized depth.

    Rows act on the stacked real vector ``t = [Re z; Im z]``; the feasible
    set is ``C t >= d`` with ``d = sin(pi/M)`` per row (BPSK degenerates to
    a single real-part constraint per user).
    """
    theta = np.pi / m_order
    st, ct = np.sin(theta), np.cos(theta)
    if m_order == 2:
        c = np.zeros((k_users, 2 * k_users))
        c[np.arange(k_users), np.arange(k_users)] = 1.0
        d = np.ones(k_users)
    else:
        c = np.zeros((2 * k_users, 2 * k_users))
        for k in range(k_users):
            c[2 * k, k] = st
            c[2 * k, k_users + k] = -ct
            c[2 * k + 1, k] = st
            c[2 * k + 1, k_users + k] = ct
        d = np.full(2 * k_users, st)
    return c, d


def _ci_solve_normalized(hh, symbols, m_order, constraints=None):
    """Solve the unit-margin CI program in the derotated receive domain.

    Minimizes ``z^H Qt z`` (transmit power for receive points ``s * z``)
    subject to per-user sector margins of at least ``sin(pi/M)``, i.e. the
    margin a unit ZF amplitude would have.  The program is solved exactly
    through its nonnegative-least-squares dual.  Returns ``(z, power)``;
    by positive homogeneity the solution for margin depth ``delta`` is
    ``delta * z`` at power ``delta^2 * power``.
    """
    k_users = symbols.size
    q = np.linalg.inv(hh)
    qt = (symbols.conj()[:, None] * q) * symbols[None, :]
    p2 = np.block([[qt.real, -qt.imag], [qt.imag, qt.real]])
    if constraints is None:
        constraints = _sector_constraints(k_users, m_order)
    c, d = constraints
    r = cholesky(p2, lower=True)
    a = solve_triangular(r, c.T, lower=True)
    # Any b with A^T b = 2d works; t0 = [1...1, 0...0] satisfies C t0 = d.
    t0 = np.concatenate([np.ones(k_users), np.zeros(k_users)])
    b = r.T @ (2.0 * t0)
    z = t = None
    for exact in (False, True):
        lam = _nnls(a, b, exact=exact)
        t = 0.5 * solve_triangular(r, a @ lam, lower=True, trans="T")
        if (c @ t - d).min() >= -1e-9:
            break
    # Guard against solver round-off: the constraint rows are positively
    # homogeneous in t, so a minimal up-scaling restores exact feasibility.
    rows = c @ t
    if (rows - d).min() < 0.0:
        assert rows.min() > 0.0, "CI program unexpectedly infeasible"
        scale = float(np.max(d / rows))
        assert scale <= 1.0 + 1e-6, "CI program unexpectedly infeasible"
        t = t * max(scale, 1.0)
    z = t[:k_users] + 1j * t[k_users:]
    power = float(np.real(np.vdot(z, qt @ z)))
    return z, power


def ci_precode(scenario: CiScenario, symbols):
    """Minimum-power constructive-interference transmit vector.

    Every user's noiseless receive point is pushed at least as deep into
    its decision sector as the full-power ZF point, so ``||x||^2 <= P_T``
    always, with strict saving for generic channels; the effective gain is
    ``P_T / ||x||^2``.
    """
    h = np.asarray(scenario.channel, dtype=np.complex128)
    s = np.asarray(symbols, dtype=np.complex128)
    if s.shape != (scenario.users,):
        raise ShapeError(f"expected {scenario.users} symbols, got shape {s.shape}")
    _row_rank_check(h)
    m = scenario.constellation.order
    hh = h @ h.conj().T
    delta = zf_amplitude(scenario, s)
    z_hat, f_hat = _ci_solve_normalized(hh, s, m)
    y = delta * s * z_hat
    x = h.conj().T @ np.linalg.solve(hh, y)
    power = delta * delta * f_hat
    assert power <= scenario.total_power * (1.0 + 1e-9)
    assert np.allclose(np.linalg.norm(x) ** 2, power, rtol=1e-8)
    return x


def _ser_chunk(key, chunk_index, n_trials, users, nt, m_order, snr_linear, precoder):
    """Error counts for one deterministic chunk of Monte Carlo trials.

    Channel, symbol, and noise draws are shared by both precoders and all
    SNR points of a curve (common random numbers): the draw order is fixed
    and independent of the precoder argument.
    """
    rng = RngStream(key[0], key[1], key[2]).child(chunk_index)
    g = rng.generator
    n = n_trials
    h = (g.standard_normal((n, users, nt)) + 1j * g.standard_normal((n, users, nt))) / np.sqrt(2.0)
    sym_idx = g.integers(0, m_order, size=(n, users))
    noise = (g.standard_normal((n, users)) + 1j * g.standard_normal((n, users))) / np.sqrt(2.0)
    const = psk_points(m_order)
    s = const.points[sym_idx]
    hh = np.einsum("nkt,nlt->nkl", h, h.conj())
    qs = np.linalg.solve(hh, s[..., None])[..., 0]
    norm2 = np.einsum("nk,nk->n", s.conj(), qs).real
    if precoder == "zf":
        y_unit = s / np.sqrt(norm2)[:, None]
    else:
        cons = _sector_constraints(users, m_order)
        y_unit = np.empty((n, users), dtype=np.complex128)
        for i in range(n):
            z_hat, f_hat = _ci_solve_normalized(hh[i], s[i], m_order, cons)
            y_unit[i] = s[i] * z_hat / math.sqrt(f_hat)
    errors = np.zeros(len(snr_linear), dtype=np.int64)
    for pt, gamma in enumerate(snr_linear):
        scale = math.sqrt(nt * gamma)   # full power budget P_T = Nt * gamma
        detected = const.slice_indices(scale * y_unit + noise)
        errors[pt] = int(np.sum(detected != sym_idx))
    return errors


def ser_curve(
    precoder,
    users,
    psk_order,
    snr_grid_db,
    trials,
    rng: RngStream,
    nt=None,
    wilson_z=1.96,
    chunk_size=4096,
    workers=1,
):
    """Uncoded symbol-error-rate curve over an SNR-per-transmit-antenna grid.

    Per trial one channel and one symbol vector are drawn, the selected
    precoder ("zf" or "ci") shapes the noiseless receive points at the full
    power budget ``P_T = Nt * snr`` (unit noise), and detection is
    minimum-distance PSK slicing.  Reports the SER with Wilson-interval
    bounds per point.
    """
    if precoder not in ("zf", "ci"):
        raise ValueError(f"precoder must be 'zf' or 'ci', got {precoder!r}")
    snr_grid_db = list(snr_grid_db)
    if not snr_grid_db:
        raise EmptyGrid("SNR grid is empty")
    if trials < 1:
        raise ValueError("need at least one trial")
    nt = users if nt is None else nt
    snr_linear = tuple(10.0 ** (v / 10.0) for v in snr_grid_db)
    key = (rng.master_seed, rng.stream_id, rng._path)
    n_chunks = (trials + chunk_size - 1) // chunk_size
    sizes = [min(chunk_size, trials - i * chunk_size) for i in range(n_chunks)]
    args = [(key, i, sizes[i], users, nt, psk_order, snr_linear, precoder) for i in range(n_chunks)]
    from .parallel import run_indexed

    counts = run_indexed(_ser_chunk, args, workers)
    errors = np.sum(np.stack(counts, axis=0), axis=0)
    n_symbols = trials * users
    ser = errors / n_symbols
    lo, hi = zip(*(wilson_interval(int(e), n_symbols, wilson_z) for e in errors))
    return CurveResult(
        axis_name="snr_db",
        axis=list(snr_grid_db),
        series=[Series("ser", ser.tolist(), err_lo=list(lo), err_hi=list(hi))],
        metadata={
            "experiment": "ci-ser",
            "precoder": precoder,
            "users": users,
            "nt": nt,
            "psk_order": psk_order,
            "trials": trials,
            "wilson_z": wilson_z,
            "master_seed": rng.master_seed,
            "stream_id": rng.stream_id,
        },
    )


def snr_at_target(curve: CurveResult, target_ser, series_name="ser"):
    """SNR (dB) at which the curve crosses ``target_ser``.

    Uses log-linear interpolation between the first bracketing pair of grid
    points; an exact grid hit returns that grid point.

    Raises
    ------
    NotBracketed
        If no adjacent pair of strictly positive SER values brackets the
        target.
    """
    axis = list(curve.axis)
    ser = list(curve.column(series_name).values)
    for x, s in zip(axis, ser):
        if s == target_ser:
            return float(x)
    for i in range(len(axis) - 1):
        s0, s1 = ser[i], ser[i + 1]
        if s0 <= 0.0 or s1 <= 0.0:
            continue
        if (s0 - target_ser) * (s1 - target_ser) < 0.0:
            f = (math.log(target_ser) - math.log(s0)) / (math.log(s1) - math.log(s0))
            return float(axis[i] + (axis[i + 1] - axis[i]) * f)
    raise NotBracketed(f"target SER {target_ser} not bracketed by curve")
