"""Secrecy rates with interference as the defender's tool: artificial noise
from a multi-antenna source, and a full-duplex destination that jams the
eavesdropper while receiving.

The full-duplex receiver pays for its jamming with loop interference: with
multiple transmit antennas it nulls the loop exactly at its receive filter;
with a single antenna a configurable residual fraction ``k_li`` of the
jamming power leaks into its own decoder.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel_model import RngStream
from .errors import NoNullSpace, ShapeError
from .results import CurveResult, Series

__all__ = [
    "SecrecyScenario",
    "FdDesign",
    "SCHEME_HD",
    "SCHEME_FD_MRC_EVE",
    "SCHEME_FD_MMSE_EVE",
    "SCHEME_AN_SOURCE",
    "SCHEMES",
    "secrecy_rate",
    "an_source_design",
    "fd_design",
    "sinr_pair",
    "secrecy_curve",
]

SCHEME_HD = "hd"
SCHEME_FD_MRC_EVE = "fd_mrc_eve"
SCHEME_FD_MMSE_EVE = "fd_mmse_eve"
SCHEME_AN_SOURCE = "an_source"
SCHEMES = (SCHEME_HD, SCHEME_FD_MRC_EVE, SCHEME_FD_MMSE_EVE, SCHEME_AN_SOURCE)

ANTENNA_CONFIGS = {
    # (destination receive, destination transmit, eavesdropper receive)
    "single": (1, 1, 1),
    "multi": (2, 2, 4),
}


@dataclass(frozen=True)
class SecrecyScenario:
    """Source-destination-eavesdropper instance.

    Channel shapes: ``h_sd`` (Nr x Ns), ``h_se`` (Ne x Ns), ``h_de``
    (Ne x Nt_D, jamming to eavesdropper), ``h_li`` (Nr x Nt_D, loop).
    ``k_li`` is the residual loop-interference fraction after analog
    cancellation when the loop cannot be nulled spatially.
    """

    h_sd: np.ndarray
    h_se: np.ndarray
    h_de: np.ndarray
    h_li: np.ndarray
    p_s: float
    p_j: float
    sigma2: float = 1.0
    k_li: float = 0.15

    def __post_init__(self):
        if self.h_sd.ndim != 2 or self.h_se.ndim != 2:
            raise ShapeError("h_sd and h_se must be 2-D (rx antennas x source antennas)")
        if self.h_sd.shape[1] != self.h_se.shape[1]:
            raise ShapeError("h_sd and h_se disagree on source antenna count")
        if self.h_de.shape != (self.h_se.shape[0], self.h_li.shape[1]):
            raise ShapeError("h_de must be Ne x Nt_D matching h_se and h_li")
        if self.h_li.shape[0] != self.h_sd.shape[0]:
            raise ShapeError("h_li must have Nr rows")
        if min(self.p_s, self.p_j) < 0:
            raise ValueError("powers must be nonnegative")
        if not 0.0 <= self.k_li <= 1.0:
            raise ValueError(f"k_li must lie in [0, 1], got {self.k_li}")

    @property
    def ns(self):
        return self.h_sd.shape[1]

    @property
    def nr(self):
        return self.h_sd.shape[0]

    @property
    def ne(self):
        return self.h_se.shape[0]

    @property
    def nt_d(self):
        return self.h_li.shape[1]


@dataclass(frozen=True)
class FdDesign:
    """Full-duplex destination design: unit receive filter, unit jamming
    vector, and whether the loop interference is spatially nulled."""

    receive_filter: np.ndarray
    jamming: np.ndarray
    li_nulled: bool


def secrecy_rate(sinr_d, sinr_e):
    """Achievable secrecy rate ``max(0, log2(1+SINR_D) - log2(1+SINR_E))``
    in bits per channel use; accepts scalars or arrays."""
    return np.maximum(0.0, np.log2(1.0 + np.asarray(sinr_d)) - np.log2(1.0 + np.asarray(sinr_e)))


def an_source_design(scenario: SecrecyScenario):
    """Matched signal beamformer plus artificial noise filling the null
    space of the legitimate channel.

    Returns ``(w_s, q_an)`` where ``q_an`` spreads the jamming budget
    ``p_j`` uniformly over the null space of the rows of ``h_sd``, so the
    destination sees none of it while the eavesdropper generically does.

    Raises
    ------
    NoNullSpace
        With fewer than two source antennas there is no null space to hide
        the noise in.
    """
    if scenario.ns < 2:
        raise NoNullSpace(f"need at least 2 source antennas, got {scenario.ns}")
    h = scenario.h_sd
    _, sv, vh = np.linalg.svd(h)
    rank = int(np.sum(sv > 1e-12 * sv[0])) if sv.size else 0
    if rank >= scenario.ns:
        raise NoNullSpace("legitimate channel rows span the whole source space")
    w_s = vh[0].conj()                      # matched to the dominant row direction
    basis = vh[rank:].conj().T              # (ns, ns - rank) orthonormal null basis
    dim = basis.shape[1]
    q_an = (scenario.p_j / dim) * (basis @ basis.conj().T)
    return w_s, q_an


def fd_design(scenario: SecrecyScenario) -> FdDesign:
    """Receive filter and jamming vector of the full-duplex destination.

    The filter is matched to the source channel.  With ``Nt_D >= 2`` the
    jammer transmits in the null space of the loop channel as seen through
    that filter, picking the direction that lands the most power on the
    eavesdropper, so the loop interference is exactly zero at the filter
    output.  A single-antenna jammer cannot null and operates in residual
    mode (fraction ``k_li`` of the jamming power survives cancellation).
    """
    if scenario.ns != 1:
        raise ShapeError("full-duplex design assumes a single-antenna source")
    h_sd = scenario.h_sd[:, 0]
    r = h_sd / np.linalg.norm(h_sd)
    if scenario.nt_d == 1:
        return FdDesign(receive_filter=r, jamming=np.ones(1, dtype=np.complex128), li_nulled=False)
    row = r.conj() @ scenario.h_li          # 1 x Nt_D loop channel after filtering
    norm = np.linalg.norm(row)
    ident = np.eye(scenario.nt_d, dtype=np.complex128)
    proj = ident - np.outer(row.conj(), row) / (norm * norm)
    basis_u, basis_s, _ = np.linalg.svd(proj)
    null_basis = basis_u[:, basis_s > 0.5]  # projector eigenvalues are 0/1
    reach = scenario.h_de @ null_basis
    _, _, vh = np.linalg.svd(reach)
    w_j = null_basis @ vh[0].conj()
    w_j = w_j / np.linalg.norm(w_j)
    return FdDesign(receive_filter=r, jamming=w_j, li_nulled=True)


def _mmse_sinr(p_signal, h, p_cov, g):
    """SINR of the MMSE receiver against a rank-one jamming covariance."""
    g2 = float(np.vdot(g, g).real)
    cross = np.vdot(g, h)
    white = float(np.vdot(h, h).real) - p_cov * abs(cross) ** 2 / (1.0 + p_cov * g2)
    return p_signal * white


def sinr_pair(scenario: SecrecyScenario, scheme, design):
    """Destination and eavesdropper SINRs for one scheme and design.

    Noise is normalized per branch (``sigma2`` scales both powers), the
    eavesdropper always knows its source channel, and for the MMSE scheme
    also the jamming covariance.
    """
    s2 = scenario.sigma2
    if scheme == SCHEME_AN_SOURCE:
        w_s, q_an = design
        if w_s.shape != (scenario.ns,):
            raise ShapeError("beamformer length must equal source antenna count")
        a_d = scenario.h_sd @ w_s
        sinr_d = scenario.p_s * float(np.vdot(a_d, a_d).real) / s2
        a_e = scenario.h_se @ w_s
        cov = s2 * np.eye(scenario.ne) + scenario.h_se @ q_an @ scenario.h_se.conj().T
        sinr_e = scenario.p_s * float(np.real(a_e.conj() @ np.linalg.solve(cov, a_e)))
        return sinr_d, sinr_e

    if scheme not in (SCHEME_HD, SCHEME_FD_MRC_EVE, SCHEME_FD_MMSE_EVE):
        raise ValueError(f"unknown scheme {scheme!r}")
    if not isinstance(design, FdDesign):
        raise ShapeError("HD/FD schemes take an FdDesign")
    if scenario.ns != 1:
        raise ShapeError("HD/FD schemes assume a single-antenna source")
    r = design.receive_filter
    if r.shape != (scenario.nr,):
        raise ShapeError("receive filter length must equal Nr")
    h_sd = scenario.h_sd[:, 0]
    h_se = scenario.h_se[:, 0]
    p_j = 0.0 if scheme == SCHEME_HD else scenario.p_j

    residual = 0.0
    if p_j > 0.0 and not design.li_nulled:
        leak = r.conj() @ scenario.h_li @ design.jamming
        residual = scenario.k_li * p_j * abs(leak) ** 2
    sinr_d = scenario.p_s * abs(np.vdot(r, h_sd)) ** 2 / (
        s2 * float(np.vdot(r, r).real) + residual
    )

    if p_j == 0.0:
        sinr_e = scenario.p_s * float(np.vdot(h_se, h_se).real) / s2
    else:
        g = scenario.h_de @ design.jamming
        if scheme == SCHEME_FD_MRC_EVE:
            ne2 = float(np.vdot(h_se, h_se).real)
            jam = p_j * abs(np.vdot(h_se, g)) ** 2 / ne2
            sinr_e = scenario.p_s * ne2 / (s2 + jam)
        else:
            sinr_e = _mmse_sinr(scenario.p_s / s2, h_se, p_j / s2, g)
    return sinr_d, sinr_e


def _secrecy_chunk(key, chunk_index, n, scheme, nr, ntd, ne, snr_linear, k_li, pj_ratio):
    """Partial sums (rate, rate^2) per SNR point for one chunk of draws.

    All channels are drawn in a fixed order regardless of scheme, so curves
    for different schemes share realizations given the same parent stream.
    """
    g = RngStream(key[0], key[1], key[2]).child(chunk_index).generator
    root2 = np.sqrt(2.0)
    h_sd = (g.standard_normal((n, nr)) + 1j * g.standard_normal((n, nr))) / root2
    h_se = (g.standard_normal((n, ne)) + 1j * g.standard_normal((n, ne))) / root2
    h_li = (g.standard_normal((n, nr, ntd)) + 1j * g.standard_normal((n, nr, ntd))) / root2
    h_de = (g.standard_normal((n, ne, ntd)) + 1j * g.standard_normal((n, ne, ntd))) / root2

    nd2 = np.sum(np.abs(h_sd) ** 2, axis=1)
    ne2 = np.sum(np.abs(h_se) ** 2, axis=1)
    r = h_sd / np.linalg.norm(h_sd, axis=1, keepdims=True)
    if ntd == 1:
        w_j = np.ones((n, 1), dtype=np.complex128)
        leak2 = np.abs(np.einsum("ni,nij->nj", r.conj(), h_li)[:, 0]) ** 2
        li_nulled = False
    elif ntd == 2:
        # null vector of the linear form w -> (r^H H_li) w, no conjugation
        row = np.einsum("ni,nij->nj", r.conj(), h_li)
        w_j = np.stack([-row[:, 1], row[:, 0]], axis=1)
        w_j = w_j / np.linalg.norm(w_j, axis=1, keepdims=True)
        leak2 = np.zeros(n)
        li_nulled = True
    else:
        raise ValueError("vectorized curves support Nt_D in {1, 2}")
    g_e = np.einsum("nej,nj->ne", h_de, w_j)
    g2 = np.sum(np.abs(g_e) ** 2, axis=1)
    cross2 = np.abs(np.einsum("ne,ne->n", g_e.conj(), h_se)) ** 2

    sums = np.zeros(len(snr_linear))
    sq_sums = np.zeros(len(snr_linear))
    for pt, snr in enumerate(snr_linear):
        p_s = snr
        p_j = pj_ratio * snr
        if scheme == SCHEME_HD:
            sinr_d = p_s * nd2
            sinr_e = p_s * ne2
        else:
            residual = 0.0 if li_nulled else k_li * p_j * leak2
            sinr_d = p_s * nd2 / (1.0 + residual)
            if scheme == SCHEME_FD_MRC_EVE:
                sinr_e = p_s * ne2 / (1.0 + p_j * cross2 / ne2)
            else:
                sinr_e = p_s * (ne2 - p_j * cross2 / (1.0 + p_j * g2))
        rates = secrecy_rate(sinr_d, sinr_e)
        sums[pt] = rates.sum()
        sq_sums[pt] = np.square(rates).sum()
    return sums, sq_sums


def secrecy_curve(
    scheme,
    antennas,
    snr_grid_db,
    trials,
    rng: RngStream,
    k_li=0.15,
    pj_ratio=1.0,
    chunk_size=20000,
    workers=1,
):
    """Ergodic (mean) secrecy rate versus transmit SNR over Rayleigh draws.

    ``antennas`` is "single" (1/1/1), "multi" (2 rx + 2 tx at the
    destination, 4-antenna eavesdropper), or an explicit ``(nr, nt_d, ne)``
    tuple.  Jamming power follows the transmit power through ``pj_ratio``.
    Reports the mean rate and its standard error per SNR point.
    """
    if scheme not in (SCHEME_HD, SCHEME_FD_MRC_EVE, SCHEME_FD_MMSE_EVE):
        raise ValueError(f"curve schemes are HD/FD variants, got {scheme!r}")
    nr, ntd, ne = ANTENNA_CONFIGS[antennas] if isinstance(antennas, str) else antennas
    snr_grid_db = list(snr_grid_db)
    snr_linear = tuple(10.0 ** (v / 10.0) for v in snr_grid_db)
    key = (rng.master_seed, rng.stream_id, rng._path)
    n_chunks = (trials + chunk_size - 1) // chunk_size
    args = [
        (key, i, min(chunk_size, trials - i * chunk_size), scheme, nr, ntd, ne,
         snr_linear, k_li, pj_ratio)
        for i in range(n_chunks)
    ]
    from .parallel import run_indexed

    parts = run_indexed(_secrecy_chunk, args, workers)
    total = np.sum(np.stack([p[0] for p in parts]), axis=0)
    total_sq = np.sum(np.stack([p[1] for p in parts]), axis=0)
    mean = total / trials
    var = np.maximum(0.0, (total_sq - trials * mean**2) / max(trials - 1, 1))
    stderr = np.sqrt(var / trials)
    return CurveResult(
        axis_name="snr_db",
        axis=snr_grid_db,
        series=[
            Series("mean_rate", mean.tolist()),
            Series("stderr", stderr.tolist()),
        ],
        metadata={
            "experiment": "secrecy",
            "scheme": scheme,
            "antennas": antennas if isinstance(antennas, str) else f"{nr}x{ntd}x{ne}",
            "trials": trials,
            "k_li": k_li,
            "pj_ratio": pj_ratio,
            "master_seed": rng.master_seed,
            "stream_id": rng.stream_id,
        },
    )
