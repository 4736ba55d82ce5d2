"""
Period dichotomy between random walks and C_phi quantum walks.

For every period n the table records whether a coin/hopping sequence with
exactly that period can carry a uniform stationary measure:
- RW: only n <= 2 (p_{x-1} = p_{x+1} forces period 1 or 2)
- QW: every n, witnessed by the C_phi walk with phi = pi/n, and the
  "inf" row by an irrational multiple of pi
"""

from itertools import product

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.coins.matrix import CPhiParams
from src.coins.periodicity import detect_period
from src.coins.sequence import CoinSequence
from src.rw.walk import HoppingSequence, rw_step, uniform_stationarity_witness
from src.state.measure import Measure, gamma_measure, stationarity_defect, uniformity_defect
from src.state.topology import Topology
from src.transfer.eigenstate import build_eigenstate, eigen_residual

IRRATIONAL_PHI = np.pi * (np.sqrt(2.0) - 1.0)
PROBABILITY_GRID = tuple(np.round(np.arange(1, 10) / 10.0, 1))


def exact_period_patterns(period: int, grid=PROBABILITY_GRID):
    """Yield hopping patterns over `grid` whose smallest period is exactly `period`."""
    for pattern in product(grid, repeat=period):
        if all(pattern != pattern[k:] + pattern[:k] for k in range(1, period) if period % k == 0):
            yield pattern


def rw_admits_uniform(period: int, grid=PROBABILITY_GRID, tol: float = 1e-12) -> bool:
    """
    Brute force: does some pattern of exact period `period` over the grid
    keep the uniform measure fixed on a cycle tiled by it?
    """
    topo = Topology.cycle(2 * period if period > 1 else 2)
    uniform = Measure.uniform(topo)
    for pattern in exact_period_patterns(period, grid):
        hop = HoppingSequence.periodic(pattern, topo)
        if stationarity_defect(rw_step(uniform, hop), uniform) <= tol:
            return True
    return False


def qw_witness(phi: float, theta: float, window: int, max_period: int, period_tol: float = 1e-9) -> dict:
    """
    Build the C_phi eigenstate at lambda = e^{i phi} and measure how well it
    satisfies the eigen relation and how uniform its measure is.
    """
    params = CPhiParams(theta=theta, phi=phi, omega0=0.0)
    coins = CoinSequence.cphi(params, Topology.line(window))
    psi = build_eigenstate(coins, params.eigenvalue)
    return {
        "qw_phi": phi,
        "qw_detected_period": detect_period(coins, max_period, tol=period_tol),
        "qw_eigen_residual": eigen_residual(psi, coins, params.eigenvalue),
        "qw_uniformity_defect": uniformity_defect(gamma_measure(psi)),
    }


def dichotomy_table(max_period: int, theta: float = np.pi / 4, window: int = 50, irrational_scan: int = 1000, grid_check_up_to: int = 4, residual_tol: float = 1e-10, uniformity_tol: float = 1e-9, period_tol: float = 1e-9, verbose: bool = False) -> pd.DataFrame:
    """
    Table of uniform-stationarity admissibility by period.

    Args:
        max_period: Largest finite period row, >= 2
        theta: Coin angle shared by every QW witness
        window: Line half-width of each witness eigenstate
        irrational_scan: max_period used to certify the "inf" row has no period
        grid_check_up_to: Periods up to this value also get an exhaustive RW grid check
        residual_tol: Bound on each witness eigen residual
        uniformity_tol: Bound on each witness uniformity defect
        period_tol: Entrywise tolerance of period detection

    Returns:
        pd.DataFrame: one row per period 1..max_period plus "inf"
    """
    if max_period < 2:
        raise ValueError(f"max_period must be >= 2, got {max_period}")

    rows = []
    periods = list(range(1, max_period + 1)) + ["inf"]
    for n in tqdm(periods, desc="Dichotomy", disable=not verbose):
        if n == "inf":
            witness = qw_witness(IRRATIONAL_PHI, theta, window, irrational_scan, period_tol)
            period_ok = witness["qw_detected_period"] is None
            rw_admits = False
            rw_grid = None
        else:
            witness = qw_witness(np.pi / n, theta, window, max(max_period, n), period_tol)
            period_ok = witness["qw_detected_period"] == n
            rw_admits = n <= 2
            rw_grid = rw_admits_uniform(n) if n <= grid_check_up_to else None

        verified = (
            period_ok
            and witness["qw_eigen_residual"] <= residual_tol
            and witness["qw_uniformity_defect"] <= uniformity_tol
        )
        rows.append({
            "period": str(n),
            "rw_admits_uniform": rw_admits,
            "qw_admits_uniform": bool(verified),
            "rw_grid_admits": rw_grid,
            **witness,
        })
    table = pd.DataFrame(rows)
    table["qw_detected_period"] = table["qw_detected_period"].astype("Int64")
    return table


def rw_pattern_report(pattern, m: int) -> dict:
    """Witness report plus the one-step defect of the uniform measure on C_m."""
    topo = Topology.cycle(m)
    hop = HoppingSequence.periodic(pattern, topo)
    uniform = Measure.uniform(topo)
    report = uniform_stationarity_witness(hop)
    return {**report.as_dict(), "uniform_step_defect": stationarity_defect(rw_step(uniform, hop), uniform)}
