"""
Generalized eigenstates built from products of transfer matrices.

On the line:
    Psi(x) = D+_x ... D+_2 D+_1 Psi(0)        (x >= 1)
    Psi(x) = D-_x ... D-_{-2} D-_{-1} Psi(0)  (x <= -1)
The matrix of the site nearest the origin is applied first.
"""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from src.coins.sequence import CoinSequence
from src.evolve.stepper import EvolutionOperator
from src.state.spinor import SpinorField
from src.state.topology import Topology
from src.transfer.matrices import (
    cphi_transfer_minus,
    cphi_transfer_plus,
    transfer_minus_at,
    transfer_plus_at,
)
from src.utils.validation import DomainError, TopologyError, normalize_lambda

GENERAL = "general"
CLOSED = "closed"


def _check_psi0(psi0) -> np.ndarray:
    vec = np.asarray(psi0, dtype=complex).reshape(-1)
    if vec.shape != (2,):
        raise DomainError(f"psi0 must have two components, got {vec.shape[0]}")
    if not np.any(vec):
        raise DomainError("psi0 must be nonzero")
    return vec


def _plus(coins: CoinSequence, lam: complex, x: int, method: str) -> np.ndarray:
    if method == CLOSED:
        return cphi_transfer_plus(coins.params, x).matrix
    return transfer_plus_at(coins, lam, x).matrix


def _minus(coins: CoinSequence, lam: complex, x: int, method: str) -> np.ndarray:
    if method == CLOSED:
        return cphi_transfer_minus(coins.params, x).matrix
    return transfer_minus_at(coins, lam, x).matrix


def _resolve_method(coins: CoinSequence, lam: complex, method: str) -> str:
    if method not in (GENERAL, CLOSED):
        raise ValueError(f"Unknown transfer method: {method}")
    if method == CLOSED:
        if not coins.is_cphi:
            raise DomainError("Closed-form transfer matrices need a C_phi coin family")
        if abs(lam - coins.params.eigenvalue) > 1e-12:
            raise DomainError("Closed-form transfer matrices hold only at lambda = e^{i phi}")
    return method


def build_eigenstate(coins: CoinSequence, lam: complex, psi0=(1.0, 0.0), window: int | None = None, method: str = GENERAL) -> SpinorField:
    """
    Solve U^(s) Psi = lambda Psi on the window [-L, L] by transfer matrices.

    Args:
        coins: Coin sequence on line topology
        lam: Eigenvalue with |lambda| = 1
        psi0: Psi(0), any nonzero 2-vector
        window: Half-width L; defaults to the coin sequence's window
        method: "general" (coin-entry formulas) or "closed" (C_phi closed form)

    Returns:
        SpinorField: The eigenstate on Topology.line(L)
    """
    if coins.topology.is_cycle:
        raise TopologyError("Use build_cycle_eigenstate for cycles")
    lam = normalize_lambda(lam)
    vec0 = _check_psi0(psi0)
    method = _resolve_method(coins, lam, method)
    L = coins.topology.size if window is None else int(window)
    topo = Topology.line(L)

    amps = np.zeros((topo.n_sites, 2), dtype=complex)
    amps[L] = vec0

    # x > 0 and x < 0 are independent recurrences
    vec = vec0
    for x in range(1, L + 1):
        vec = _plus(coins, lam, x, method) @ vec
        amps[L + x] = vec
    vec = vec0
    for x in range(-1, -L - 1, -1):
        vec = _minus(coins, lam, x, method) @ vec
        amps[L + x] = vec
    return SpinorField(topo, amps)


def cycle_product(coins: CoinSequence, lam: complex) -> np.ndarray:
    """
    Ordered product D+_m ... D+_2 D+_1 on the cycle C_m (site 1 applied first).
    """
    if not coins.topology.is_cycle:
        raise TopologyError("cycle_product needs a coin sequence on a cycle")
    lam = normalize_lambda(lam)
    prod = np.eye(2, dtype=complex)
    for x in range(1, coins.topology.size + 1):
        prod = transfer_plus_at(coins, lam, x).matrix @ prod
    return prod


def pairwise_product(coins: CoinSequence, lam: complex, x: int) -> np.ndarray:
    """D+_{x+1} D+_x."""
    lam = normalize_lambda(lam)
    return transfer_plus_at(coins, lam, x + 1).matrix @ transfer_plus_at(coins, lam, x).matrix


@dataclass(frozen=True, eq=False)
class CycleEigenstate:
    field: SpinorField
    product: np.ndarray
    closure_defect: float

    @property
    def product_defect(self) -> float:
        return float(np.max(np.abs(self.product - np.eye(2))))


def build_cycle_eigenstate(coins: CoinSequence, lam: complex, psi0=(1.0, 0.0)) -> CycleEigenstate:
    """
    Transfer-matrix field on C_m: Psi(x) = D+_x ... D+_1 Psi(0) for x = 1..m-1.

    The field is a genuine eigenvector iff going once around the cycle
    returns psi0, i.e. closure_defect = ||(prod D+) psi0 - psi0|| vanishes.
    """
    if not coins.topology.is_cycle:
        raise TopologyError("build_cycle_eigenstate needs a coin sequence on a cycle")
    lam = normalize_lambda(lam)
    vec0 = _check_psi0(psi0)
    topo = coins.topology
    m = topo.size

    amps = np.zeros((m, 2), dtype=complex)
    amps[0] = vec0
    prod = np.eye(2, dtype=complex)
    vec = vec0
    for x in range(1, m + 1):
        D = transfer_plus_at(coins, lam, x).matrix
        prod = D @ prod
        vec = D @ vec
        if x < m:
            amps[x] = vec
    closure = float(np.linalg.norm(vec - vec0))
    return CycleEigenstate(SpinorField(topo, amps), prod, closure)


def default_residual_region(psi: SpinorField) -> np.ndarray:
    """
    Sites where the eigen relation can be checked: every site of a cycle,
    [-L+1, L-1] on a fresh line window, shrunk by the contaminated layer of
    an evolved one.
    """
    if psi.topology.is_cycle:
        return psi.sites
    reach = psi.topology.size - 1 - psi.depth
    if reach < 0:
        return np.array([], dtype=int)
    return np.arange(-reach, reach + 1)


def eigen_residual_profile(psi: SpinorField, coins: CoinSequence, lam: complex, region: Iterable[int] | None = None) -> tuple[np.ndarray, np.ndarray]:
    """
    Per-site residual ||P_{x+1} Psi(x+1) + Q_{x-1} Psi(x-1) - lambda Psi(x)||_2.

    Returns:
        tuple: (sites, residuals)
    """
    if coins.topology.kind != psi.topology.kind:
        raise TopologyError(f"Field on {psi.topology}, coins on {coins.topology}")
    if psi.topology.is_cycle and coins.topology != psi.topology:
        raise TopologyError(f"Field on {psi.topology}, coins on {coins.topology}")

    sites = default_residual_region(psi) if region is None else np.asarray(list(region), dtype=int)
    if sites.size == 0:
        return sites, np.zeros(0)

    fresh = SpinorField(psi.topology, psi.amplitudes)
    image = EvolutionOperator(coins.on(psi.topology)).apply(fresh)
    idx = psi.topology.index_of(sites)
    diff = image.amplitudes[idx] - complex(lam) * psi.amplitudes[idx]
    return sites, np.linalg.norm(diff, axis=1)


def eigen_residual(psi: SpinorField, coins: CoinSequence, lam: complex, region: Iterable[int] | None = None) -> float:
    """
    Max over checkable sites of the local eigen-relation residual; 0.0 when
    no site is checkable (window of half-width 0).
    """
    _, residuals = eigen_residual_profile(psi, coins, lam, region)
    return float(residuals.max()) if residuals.size else 0.0
