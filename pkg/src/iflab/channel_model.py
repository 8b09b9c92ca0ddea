"""Random channel generation, PSK constellations, and deterministic seeding.

Channels, precoders, and filters are plain complex ``numpy`` arrays
throughout the package; this module owns how randomness enters them.
All Monte Carlo draws flow through :class:`RngStream` so that every
experiment is reproducible bit-for-bit and can be split across workers
without the schedule affecting the results.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidNoise, InvalidOrder

__all__ = ["RngStream", "PskConstellation", "draw_rayleigh", "psk_points", "add_awgn"]

_MASK64 = (1 << 64) - 1


class RngStream:
    """Deterministic random stream keyed by ``(master_seed, stream_id)``.

    Two streams with different ids are statistically independent, and a
    stream's sample sequence depends only on its key, never on when or
    where it is consumed.  Trials can therefore be farmed out to any
    number of workers and reduced in index order with identical results.

    A stream is consumed statefully in program order; reconstructing the
    same ``(master_seed, stream_id)`` replays the identical sequence.
    Use :meth:`child` to derive independent sub-streams (one per trial
    or per chunk) from a parent stream.
    """

    def __init__(self, master_seed, stream_id=0, _path=()):
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        self._path = tuple(int(i) for i in _path)
        self._gen = None

    @property
    def generator(self):
        """The underlying counter-based ``numpy.random.Generator`` (Philox)."""
        if self._gen is None:
            seq = np.random.SeedSequence(
                entropy=self.master_seed & _MASK64,
                spawn_key=tuple(x & _MASK64 for x in (self.stream_id, *self._path)),
            )
            self._gen = np.random.Generator(np.random.Philox(seq))
        return self._gen

    def child(self, index):
        """Derive the ``index``-th independent sub-stream of this stream."""
        return RngStream(self.master_seed, self.stream_id, self._path + (int(index),))

    def __repr__(self):
        path = "".join(f"/{i}" for i in self._path)
        return f"RngStream({self.master_seed}, {self.stream_id}{path})"


@dataclass(frozen=True)
class PskConstellation:
    """Unit-modulus M-PSK constellation with Gray-style symmetric layout.

    ``points[m] = exp(j(2*pi*m/M + phi0))`` with ``phi0 = 0`` for BPSK and
    ``phi0 = pi/M`` otherwise, so decision boundaries never coincide with
    the I/Q axes ties.
    """

    order: int
    points: np.ndarray

    @property
    def phase_offset(self):
        return 0.0 if self.order == 2 else np.pi / self.order

    @property
    def half_angle(self):
        """Half-angle of each decision sector, pi/M."""
        return np.pi / self.order

    def slice_indices(self, received):
        """Minimum-distance detection of PSK symbols.

        For unit-modulus PSK, nearest-point detection reduces to angular
        sector slicing, so the result is invariant to any positive scaling
        of ``received``.
        """
        received = np.asarray(received)
        m = self.order
        idx = np.rint((np.angle(received) - self.phase_offset) * m / (2 * np.pi))
        return idx.astype(np.int64) % m

    def min_distance(self):
        """Smallest pairwise distance between constellation points."""
        d = np.abs(self.points[:, None] - self.points[None, :])
        return d[~np.eye(self.order, dtype=bool)].min()


def psk_points(order):
    """Build the M-PSK constellation for ``order`` in {2, 4, 8, ...}.

    Raises
    ------
    InvalidOrder
        If ``order`` is below 2 or not a power of two.
    """
    m = int(order)
    if m < 2 or (m & (m - 1)) != 0:
        raise InvalidOrder(f"PSK order must be a power of two >= 2, got {order}")
    phi0 = 0.0 if m == 2 else np.pi / m
    points = np.exp(1j * (2 * np.pi * np.arange(m) / m + phi0))
    return PskConstellation(order=m, points=points)


def draw_rayleigh(rows, cols, rng):
    """Draw a ``rows x cols`` i.i.d. Rayleigh-fading channel matrix.

    Entries are circularly-symmetric complex Gaussian with zero mean and
    unit variance (real and imaginary parts each of variance 1/2).
    """
    if rows < 0 or cols < 0:
        raise ValueError("matrix dimensions must be nonnegative")
    g = rng.generator
    re = g.standard_normal((rows, cols))
    im = g.standard_normal((rows, cols))
    return (re + 1j * im) / np.sqrt(2.0)


def add_awgn(signal, noise_variance, rng):
    """Add circularly-symmetric complex Gaussian noise CN(0, ``noise_variance``).

    Raises
    ------
    InvalidNoise
        If ``noise_variance`` is negative.
    """
    if noise_variance < 0:
        raise InvalidNoise(f"noise variance must be nonnegative, got {noise_variance}")
    signal = np.asarray(signal, dtype=np.complex128)
    g = rng.generator
    scale = np.sqrt(noise_variance / 2.0)
    re = g.standard_normal(signal.shape)
    im = g.standard_normal(signal.shape)
    return signal + scale * (re + 1j * im)
