"""Rate formulas and regime classification for the symmetric 2-user Gaussian
interference channel.

Model (complex baseband, unit noise): ``Y1 = X1 + sqrt(a) X2 + Z``,
``Z ~ CN(0, 1)``, each user under power ``P``, so SNR = P and INR = aP.
All rates are bits per complex channel use, per user.
"""

import math
from dataclasses import dataclass

from .errors import NotStrongRegime, NotWeakRegime

__all__ = [
    "GicParams",
    "REGIMES",
    "classify_regime",
    "rate_tin",
    "rate_orthogonal",
    "rate_strong_capacity",
    "hk_private_power",
    "hk_region_feasible",
    "rate_hk_symmetric",
    "outer_bound_symmetric",
]

REGIME_NOISY = "noisy"
REGIME_WEAK = "weak"
REGIME_STRONG = "strong"
REGIME_VERY_STRONG = "very_strong"
REGIMES = (REGIME_NOISY, REGIME_WEAK, REGIME_STRONG, REGIME_VERY_STRONG)

_LOG2 = math.log(2.0)


def _log2(x):
    return math.log(x) / _LOG2


@dataclass(frozen=True)
class GicParams:
    """Symmetric 2-user G-IC instance: per-user power ``p`` and cross gain ``a``."""

    p: float
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 0):
            raise ValueError(f"transmit power must be finite and positive, got {self.p}")
        if not (math.isfinite(self.a) and self.a >= 0):
            raise ValueError(f"cross gain must be finite and nonnegative, got {self.a}")


def classify_regime(g: GicParams) -> str:
    """Assign exactly one interference regime label to ``(P, a)``.

    Thresholds (inclusive where stated):

    * very_strong:  ``aP >= P(1 + P)``, i.e. decoding interference first is free
    * strong:       ``a >= 1``
    * noisy:        ``sqrt(a) (1 + aP) <= 1/2`` (treating interference as noise
      is sum-capacity optimal under this standard sufficient condition)
    * weak:         everything else
    """
    p, a = g.p, g.a
    if a * p >= p * (1.0 + p):
        return REGIME_VERY_STRONG
    if a >= 1.0:
        return REGIME_STRONG
    if math.sqrt(a) * (1.0 + a * p) <= 0.5:
        return REGIME_NOISY
    return REGIME_WEAK


def rate_tin(g: GicParams) -> float:
    """Per-user rate when interference is treated as noise."""
    return _log2(1.0 + g.p / (1.0 + g.a * g.p))


def rate_orthogonal(g: GicParams) -> float:
    """Per-user rate of half-time orthogonal sharing with power pooling.

    Each user transmits half the time at power 2P, meeting the average
    power constraint; independent of the cross gain.
    """
    return 0.5 * _log2(1.0 + 2.0 * g.p)


def rate_strong_capacity(g: GicParams) -> float:
    """Symmetric capacity under joint decoding, valid for ``a >= 1``.

    Returns ``min(log2(1 + P), log2(1 + P + aP) / 2)``.  In the very strong
    regime the min is the interference-free rate: the receiver decodes the
    interference first at no cost.
    """
    if g.a < 1.0:
        raise NotStrongRegime(f"joint-decoding capacity needs a >= 1, got a={g.a}")
    return min(_log2(1.0 + g.p), 0.5 * _log2(1.0 + g.p + g.a * g.p))


def hk_private_power(g: GicParams) -> float:
    """Private-message power of the simplified Han-Kobayashi split.

    ``p_private = min(P, 1/a)`` puts the private signal at (or below) the
    noise floor of the unintended receiver; the remainder is the common
    message decoded by both receivers.
    """
    return min(g.p, 1.0 / g.a)


def _hk_terms(g: GicParams, private_power):
    """Gaussian mutual-information terms of the compact HK region.

    With private power ``p`` (``c = P - p`` common) and the interferer's
    private part always treated as noise, the per-receiver quantities are

    * d = I(X1; Y1 | U2)        = log2(1 + P / (1 + a p))
    * gg = I(X1; Y1 | U1, U2)   = log2(1 + p / (1 + a p))
    * A = I(X1, U2; Y1)         = log2((1 + P + aP) / (1 + a p))
    * e = I(X1, U2; Y1 | U1)    = log2((1 + p + aP) / (1 + a p))
    """
    p_tot, a = g.p, g.a
    p = private_power
    floor = 1.0 + a * p
    d = _log2(1.0 + p_tot / floor)
    gg = _log2(1.0 + p / floor)
    big_a = _log2((1.0 + p_tot + a * p_tot) / floor)
    e = _log2((1.0 + p + a * p_tot) / floor)
    return d, gg, big_a, e


def hk_region_feasible(g: GicParams, r1, r2, private_power=None) -> bool:
    """Membership test for ``(r1, r2)`` in the compact seven-inequality
    Han-Kobayashi achievable region with a fixed Gaussian power split and
    no time sharing."""
    if not 0.0 < g.a < 1.0:
        raise NotWeakRegime(f"HK region evaluated only for 0 < a < 1, got a={g.a}")
    if private_power is None:
        private_power = hk_private_power(g)
    d, gg, big_a, e = _hk_terms(g, private_power)
    return (
        r1 <= d
        and r2 <= d
        and r1 + r2 <= big_a + gg
        and r1 + r2 <= gg + big_a
        and r1 + r2 <= 2.0 * e
        and 2.0 * r1 + r2 <= big_a + gg + e
        and r1 + 2.0 * r2 <= big_a + gg + e
    )


def rate_hk_symmetric(g: GicParams, private_power=None, tol=1e-12) -> float:
    """Symmetric rate of the simplified Han-Kobayashi scheme for ``0 < a < 1``.

    The power split is fixed (``p = min(P, 1/a)`` unless overridden) and the
    value is the largest ``r`` with ``(r, r)`` inside the compact HK region,
    found by bisection on the feasibility test.
    """
    if not 0.0 < g.a < 1.0:
        raise NotWeakRegime(f"HK symmetric rate defined for 0 < a < 1, got a={g.a}")
    if private_power is None:
        private_power = hk_private_power(g)
    lo, hi = 0.0, _log2(1.0 + g.p) + 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if hk_region_feasible(g, mid, mid, private_power):
            lo = mid
        else:
            hi = mid
    return lo


def outer_bound_symmetric(g: GicParams) -> float:
    """Minimum over the catalogued symmetric-rate outer bounds.

    For ``a >= 1`` the strong-interference capacity expression is itself the
    bound.  For weak interference the catalogue is the cut-set bound, the
    one-sided (Z-channel) sum-rate bound, and the genie-aided sum-rate and
    2R1+R2 bounds, all per user.
    """
    p, a = g.p, g.a
    cut = _log2(1.0 + p)
    if a >= 1.0:
        return min(cut, 0.5 * _log2(1.0 + p + a * p))
    if a == 0.0:
        return cut
    inr = a * p
    snr_def = _log2(1.0 + p / (1.0 + inr))   # deflated direct link
    sum_z = 0.5 * (cut + snr_def)
    sum_genie = 0.5 * (_log2(1.0 + p + inr) + snr_def)
    sum_sym = _log2(1.0 + inr + p / (1.0 + inr))
    bound_2r = (_log2(1.0 + p + inr) + snr_def + _log2(1.0 + inr + p / (1.0 + inr))) / 3.0
    return min(cut, sum_z, sum_genie, sum_sym, bound_2r)
