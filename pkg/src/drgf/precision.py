"""Working-precision control for the high-precision (mpmath) code paths.

The number of decimal digits is taken from the DRGF_PRECISION environment
variable (default 50).  Exact integer/rational arithmetic is unaffected.
"""

import os

from mpmath import mp

DEFAULT_DPS = 50


def working_dps() -> int:
    raw = os.environ.get("DRGF_PRECISION", "")
    try:
        dps = int(raw)
    except ValueError:
        return DEFAULT_DPS
    return max(15, dps)


def workdps():
    """Context manager pinning mpmath precision to the configured digits."""
    return mp.workdps(working_dps())
