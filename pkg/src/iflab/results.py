"""Result containers shared by the experiment modules and the harness."""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Series", "CurveResult", "wilson_interval"]


@dataclass
class Series:
    """One named column of an experiment result, with optional per-point
    uncertainty bounds (absolute lower/upper values, not halfwidths)."""

    name: str
    values: list
    err_lo: list = None
    err_hi: list = None

    @property
    def is_numeric(self):
        return not any(isinstance(v, str) for v in self.values)


@dataclass
class CurveResult:
    """A table of series over a common axis plus run metadata.

    ``metadata`` echoes every configuration value that affected the run
    (including applied defaults) so outputs are self-describing.  Volatile
    entries such as wall time are kept out of the emitted CSV so identical
    runs stay byte-identical.
    """

    axis_name: str
    axis: list
    series: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.axis)
        for s in self.series:
            if len(s.values) != n:
                raise ValueError(f"series {s.name!r} has {len(s.values)} points, axis has {n}")
            for err in (s.err_lo, s.err_hi):
                if err is not None:
                    if len(err) != n:
                        raise ValueError(f"series {s.name!r} uncertainty length mismatch")
                    if any(e < 0 if not math.isnan(e) else False for e in np.atleast_1d(err)):
                        # bounds themselves may be any value; widths are checked
                        pass

    def column(self, name):
        for s in self.series:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self):
        return [s.name for s in self.series]


def wilson_interval(successes, trials, z=1.96):
    """Wilson score interval for a binomial proportion.

    Returns ``(lo, hi)``; degenerate for ``trials == 0``.
    """
    if trials <= 0:
        return 0.0, 1.0
    p = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)
