"""Log-log rate fitting."""

import numpy as np

from .errors import DomainError

MIN_FIT_POINTS = 5


def rate_fit(degrees, errors, window=None):
    """Least-squares slope of log(error) against log(n), and the RMS residual.

    ``window`` = (lo, hi) restricts the fit to lo <= n <= hi.
    """
    n = np.asarray(degrees, dtype=float)
    e = np.asarray(errors, dtype=float)
    if n.shape != e.shape:
        raise DomainError("degrees and errors differ in length")
    if window is not None:
        keep = (n >= window[0]) & (n <= window[1])
        n, e = n[keep], e[keep]
    if len(n) < MIN_FIT_POINTS:
        raise DomainError(f"need at least {MIN_FIT_POINTS} points to fit a rate, got {len(n)}")
    if np.any(e <= 0) or np.any(n <= 0):
        raise DomainError("rate fitting needs positive degrees and errors")
    lx, ly = np.log(n), np.log(e)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return float(slope), float(np.sqrt(np.mean(resid**2)))
