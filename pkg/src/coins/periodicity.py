"""
Period detection for coin sequences on the line.

A sequence has period N when U_{x+N} = U_x for every x. Floating point can
only certify "no period up to max_period within tol", which is what
detect_period returns as None.
"""

from fractions import Fraction

import numpy as np

from src.coins.sequence import CoinSequence
from src.utils.validation import TopologyError

DEFAULT_PERIOD_TOL = 1e-9


def detect_period(seq: CoinSequence, max_period: int, scan_width: int | None = None, tol: float = DEFAULT_PERIOD_TOL) -> int | None:
    """
    Smallest N <= max_period with max |U_{x+N} - U_x| <= tol on [-scan_width, scan_width].

    Args:
        seq: Coin sequence on line topology (evaluated lazily outside its window)
        max_period: Largest candidate period, >= 1
        scan_width: Half-width of the scanned window; defaults to 4 * max_period
        tol: Entrywise match tolerance

    Returns:
        int | None: The period, or None when no candidate matches
    """
    if seq.topology.is_cycle:
        raise TopologyError("detect_period works on line coin sequences")
    if max_period < 1:
        raise ValueError(f"max_period must be >= 1, got {max_period}")
    if scan_width is None:
        scan_width = 4 * max_period
    if scan_width < 2 * max_period:
        raise ValueError(f"scan_width ({scan_width}) must be at least 2 * max_period ({2 * max_period})")

    sites = np.arange(-scan_width, scan_width + max_period + 1)
    coins = seq.entries(sites)
    n_base = 2 * scan_width + 1
    base = coins[:n_base]
    for period in range(1, max_period + 1):
        shifted = coins[period:period + n_base]
        if np.max(np.abs(shifted - base)) <= tol:
            return period
    return None


def rational_period(p: int, q: int, theta: float | None = None, tol: float = DEFAULT_PERIOD_TOL) -> int:
    """
    Exact period of a C_phi sequence with phi = (p/q) pi.

    The coin depends on omega only through e^{i omega} sin(theta), so the
    period is the smallest N with N * 2 phi = 0 mod 2pi, i.e. the denominator
    of p/q in lowest terms. When theta is given and 2|sin(theta)| <= tol every
    coin is diag(cos theta, -cos theta) up to tol and the period is 1.
    """
    if q == 0:
        raise ValueError("q must be nonzero")
    if theta is not None and 2.0 * abs(np.sin(theta)) <= tol:
        return 1
    ratio = Fraction(p, q)
    return ratio.denominator
