"""Exception hierarchy shared by all iflab modules.

``IflabError`` is the common base.  ``ConfigError`` and ``IoError`` are
reserved for the harness/CLI; everything else signals an infeasible or
degenerate scenario and maps to CLI exit code 3.
"""


class IflabError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(IflabError):
    """Malformed, unknown, or missing configuration key."""


class IoError(IflabError):
    """Output path cannot be written."""


# ---------------------------------------------------------------------------
# channel_model
# ---------------------------------------------------------------------------

class InvalidOrder(IflabError, ValueError):
    """PSK order is not a power of two >= 2."""


class InvalidNoise(IflabError, ValueError):
    """Negative noise variance."""


# ---------------------------------------------------------------------------
# gic_regions
# ---------------------------------------------------------------------------

class NotStrongRegime(IflabError, ValueError):
    """Joint-decoding capacity requested with cross gain a < 1."""


class NotWeakRegime(IflabError, ValueError):
    """Han-Kobayashi symmetric rate requested outside 0 < a < 1."""


# ---------------------------------------------------------------------------
# alignment
# ---------------------------------------------------------------------------

class NoAlignmentSpace(IflabError):
    """Stacked channel has no null space (2N <= R)."""


class DegenerateAlignment(IflabError):
    """Null vector collapses onto one side of the pair (v_a = 0 or v_b = 0)."""


class SingularChannel(IflabError):
    """A cross channel matrix is singular (or numerically so)."""


class ShapeError(IflabError, ValueError):
    """Array arguments have inconsistent dimensions."""


# ---------------------------------------------------------------------------
# ci_precoding
# ---------------------------------------------------------------------------

class InvalidSymbol(IflabError, ValueError):
    """Zero reference symbol passed to the constructive-region test."""


class RankError(IflabError):
    """Channel matrix is row-rank deficient; ZF precoding undefined."""


class EmptyGrid(IflabError, ValueError):
    """Empty SNR grid passed to a curve simulation."""


class NotBracketed(IflabError):
    """Target error rate is not bracketed by the simulated curve."""


# ---------------------------------------------------------------------------
# swipt
# ---------------------------------------------------------------------------

class InvalidSplit(IflabError, ValueError):
    """Power-splitting ratio outside the open interval (0, 1)."""


class ZfInfeasible(IflabError):
    """Zero-forcing direction vanishes (direct channel inside interference span)."""


class DegenerateEh(IflabError):
    """Harvesting threshold degenerates the closed form (rho -> 1 corner)."""


class Infeasible(IflabError):
    """Joint beamforming/splitting problem admits no solution.

    ``constraint_index`` identifies the maximally violated constraint as
    ``(kind, user)`` with kind in {"sinr", "eh"} when it could be determined.
    """

    def __init__(self, message, constraint_index=None):
        super().__init__(message)
        self.constraint_index = constraint_index


# ---------------------------------------------------------------------------
# secrecy
# ---------------------------------------------------------------------------

class NoNullSpace(IflabError):
    """Artificial-noise design needs at least two source antennas."""
