"""iflab: treating interference as a resource instead of a nuisance.

Library modules, one per technique family:

* :mod:`iflab.channel_model`  -- Rayleigh draws, PSK constellations, seeding
* :mod:`iflab.gic_regions`    -- 2-user Gaussian interference channel rates
* :mod:`iflab.alignment`      -- interference and signal alignment
* :mod:`iflab.ci_precoding`   -- constructive-interference downlink precoding
* :mod:`iflab.swipt`          -- joint information/energy beamforming
* :mod:`iflab.secrecy`        -- artificial noise and full-duplex jamming
* :mod:`iflab.harness`        -- config, experiment runners, CSV/SVG output
"""

from .channel_model import PskConstellation, RngStream, add_awgn, draw_rayleigh, psk_points
from .gic_regions import (
    GicParams,
    classify_regime,
    outer_bound_symmetric,
    rate_hk_symmetric,
    rate_orthogonal,
    rate_strong_capacity,
    rate_tin,
)
from .results import CurveResult, Series, wilson_interval

__version__ = "0.1.0"
