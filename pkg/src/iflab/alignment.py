"""Closed-form interference alignment for the 3-user 2x2 MIMO channel and
signal alignment for multi-pair two-way relaying.

Alignment quality is always verified numerically: null-space residuals for
signal alignment, colinearity determinants and leakage fractions for
interference alignment.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateAlignment, NoAlignmentSpace, ShapeError, SingularChannel

__all__ = [
    "TwoWayRelayScenario",
    "IaTriple",
    "sa_precoders",
    "sa_directions",
    "relay_separability",
    "ia_3user",
    "ia_receive_filters",
    "interference_leakage",
]

_COND_LIMIT = 1e9


@dataclass(frozen=True)
class TwoWayRelayScenario:
    """Uplink of an M-pair two-way relay network.

    ``uplink_a[m]`` and ``uplink_b[m]`` are the relay_antennas x N channels of
    the two partners of pair ``m``.  With signal alignment the relay needs
    only M antennas to take in the 2M incoming streams.
    """

    uplink_a: tuple
    uplink_b: tuple

    def __post_init__(self):
        if len(self.uplink_a) != len(self.uplink_b) or not self.uplink_a:
            raise ShapeError("need the same nonzero number of channels on both sides")
        r, n = self.uplink_a[0].shape
        for h in (*self.uplink_a, *self.uplink_b):
            if h.shape != (r, n):
                raise ShapeError(f"inconsistent channel shape {h.shape}, expected {(r, n)}")

    @property
    def pair_count(self):
        return len(self.uplink_a)

    @property
    def relay_antennas(self):
        return self.uplink_a[0].shape[0]

    @property
    def source_antennas(self):
        return self.uplink_a[0].shape[1]


@dataclass(frozen=True)
class IaTriple:
    """3-user interference-alignment solution: channels plus unit precoders."""

    channels: np.ndarray  # (3, 3, 2, 2); channels[k, j] maps tx j -> rx k
    v1: np.ndarray
    v2: np.ndarray
    v3: np.ndarray

    @property
    def precoders(self):
        return (self.v1, self.v2, self.v3)


def sa_precoders(h_a, h_b):
    """Pair precoders aligning both partners onto one relay direction.

    Returns ``(v_a, v_b)`` cut from a unit-norm null vector of
    ``[H_a | -H_b]`` so that ``H_a v_a = H_b v_b`` holds as a vector
    equality (the halves are deliberately not renormalized).

    Raises
    ------
    NoAlignmentSpace
        If ``2N <= R`` so the stacked matrix generically has no null space.
    DegenerateAlignment
        If the null vector collapses onto a single partner.
    """
    h_a = np.asarray(h_a, dtype=np.complex128)
    h_b = np.asarray(h_b, dtype=np.complex128)
    if h_a.shape != h_b.shape or h_a.ndim != 2:
        raise ShapeError(f"channel shapes differ: {h_a.shape} vs {h_b.shape}")
    r, n = h_a.shape
    if 2 * n <= r:
        raise NoAlignmentSpace(f"2N must exceed R for alignment, got N={n}, R={r}")
    stacked = np.hstack([h_a, -h_b])
    _, _, vh = np.linalg.svd(stacked)
    v = vh[-1].conj()  # right-singular vector of the smallest singular value
    v_a, v_b = v[:n], v[n:]
    if np.linalg.norm(v_a) < 1e-9 or np.linalg.norm(v_b) < 1e-9:
        raise DegenerateAlignment("null vector lies entirely on one side of the pair")
    return v_a, v_b


def sa_directions(scenario: TwoWayRelayScenario):
    """Aligned relay directions ``g_m = H_{a,m} v_{a,m}``, one per pair."""
    cols = []
    for h_a, h_b in zip(scenario.uplink_a, scenario.uplink_b):
        v_a, _ = sa_precoders(h_a, h_b)
        cols.append(h_a @ v_a)
    return np.stack(cols, axis=1)


def relay_separability(scenario: TwoWayRelayScenario, aligned_directions):
    """Numerical rank of the relay-side matrix of aligned directions.

    Singular values above ``1e-9 * sigma_max`` count; for generic channels
    with relay_antennas = pair_count the rank equals the pair count, i.e.
    the M aligned streams stay separable.
    """
    g = np.asarray(aligned_directions)
    if g.ndim != 2 or g.shape[0] != scenario.relay_antennas:
        raise ShapeError(f"directions must be relay_antennas x pairs, got {g.shape}")
    s = np.linalg.svd(g, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > 1e-9 * s[0]))


def _check_invertible(h, name):
    if np.linalg.cond(h) >= _COND_LIMIT:
        raise SingularChannel(f"cross channel {name} is singular or near-singular")


def ia_3user(channels):
    """Closed-form interference alignment for three 2x2 single-stream links.

    ``channels[k, j]`` is the 2x2 matrix from transmitter j to receiver k.
    The first precoder is the dominant-eigenvalue eigenvector of

        E = H31^-1 H32 H12^-1 H13 H23^-1 H21

    and ``v2 = H32^-1 H31 v1``, ``v3 = H23^-1 H21 v1`` (normalized), which
    collapses both interference directions at every receiver onto a line,
    freeing half of each receiver's two-dimensional signal space.
    """
    h = np.asarray(channels, dtype=np.complex128)
    if h.shape != (3, 3, 2, 2):
        raise ShapeError(f"expected channels of shape (3, 3, 2, 2), got {h.shape}")
    for k in range(3):
        for j in range(3):
            if k != j:
                _check_invertible(h[k, j], f"H{k + 1}{j + 1}")
    e = (
        np.linalg.solve(h[2, 0], h[2, 1])
        @ np.linalg.solve(h[0, 1], h[0, 2])
        @ np.linalg.solve(h[1, 2], h[1, 0])
    )
    vals, vecs = np.linalg.eig(e)
    idx = int(np.argmax(np.abs(vals)))   # argmax takes the first index on ties
    v1 = vecs[:, idx]
    v1 = v1 / np.linalg.norm(v1)
    v2 = np.linalg.solve(h[2, 1], h[2, 0] @ v1)
    v3 = np.linalg.solve(h[1, 2], h[1, 0] @ v1)
    v2 = v2 / np.linalg.norm(v2)
    v3 = v3 / np.linalg.norm(v3)
    return IaTriple(channels=h, v1=v1, v2=v2, v3=v3)


def _orth_unit(vec):
    """Unit vector orthogonal to a 2-vector."""
    return np.array([-vec[1].conj(), vec[0].conj()]) / np.linalg.norm(vec)


def ia_receive_filters(channels, triple: IaTriple):
    """Per-receiver unit filters orthogonal to the aligned interference line."""
    h = np.asarray(channels, dtype=np.complex128)
    v = triple.precoders
    filters = []
    for k in range(3):
        j = (k + 1) % 3
        filters.append(_orth_unit(h[k, j] @ v[j]))
    return tuple(filters)


def interference_leakage(precoders, channels, receive_filters):
    """Fraction of interference power surviving the receive filters.

    Returns ``sum_k sum_{j!=k} |u_k^H H_kj v_j|^2`` normalized by the total
    interference power ``sum_k sum_{j!=k} ||H_kj v_j||^2``; 0/0 (no
    interference at all) is defined as 0.
    """
    h = np.asarray(channels, dtype=np.complex128)
    if h.ndim != 4 or h.shape[0] != h.shape[1]:
        raise ShapeError(f"channels must be (K, K, nr, nt), got {h.shape}")
    k_users = h.shape[0]
    if len(precoders) != k_users or len(receive_filters) != k_users:
        raise ShapeError("need one precoder and one receive filter per user")
    num = 0.0
    den = 0.0
    for k in range(k_users):
        u = np.asarray(receive_filters[k])
        if u.shape != (h.shape[2],):
            raise ShapeError(f"receive filter {k} has shape {u.shape}")
        for j in range(k_users):
            if j == k:
                continue
            direction = h[k, j] @ np.asarray(precoders[j])
            num += float(np.abs(u.conj() @ direction) ** 2)
            den += float(np.linalg.norm(direction) ** 2)
    if den == 0.0:
        return 0.0
    return num / den
