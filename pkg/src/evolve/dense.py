"""
Matrix form of the cycle walk operator, used as a spectral oracle for the
stepping path and the transfer-matrix construction.

Flattening follows the site order [Psi^L(0), Psi^R(0), Psi^L(1), Psi^R(1), ...].
"""

import numpy as np
import scipy.linalg
import scipy.sparse

from src.coins.sequence import CoinSequence
from src.utils.validation import DomainError, TopologyError

MAX_DENSE_SITES = 512


def sparse_cycle_operator(coins: CoinSequence) -> scipy.sparse.csr_matrix:
    """
    Banded 2m x 2m operator U_c^(s) with periodic corners.

    Row 2x   (L at x) reads a_{x+1}, b_{x+1} from block x+1.
    Row 2x+1 (R at x) reads c_{x-1}, d_{x-1} from block x-1.
    """
    topo = coins.topology
    if not topo.is_cycle:
        raise TopologyError("The matrix operator is only built for cycles")
    m = topo.size
    if m < 2:
        raise DomainError(f"Cycle needs at least 2 sites, got {m}")

    entries = coins.entries(topo.sites)
    x = np.arange(m)
    nxt = (x + 1) % m
    prv = (x - 1) % m

    rows = np.concatenate([2 * x, 2 * x, 2 * x + 1, 2 * x + 1])
    cols = np.concatenate([2 * nxt, 2 * nxt + 1, 2 * prv, 2 * prv + 1])
    data = np.concatenate([
        entries[nxt, 0, 0],
        entries[nxt, 0, 1],
        entries[prv, 1, 0],
        entries[prv, 1, 1],
    ])
    return scipy.sparse.coo_matrix((data, (rows, cols)), shape=(2 * m, 2 * m), dtype=complex).tocsr()


def dense_cycle_operator(coins: CoinSequence) -> np.ndarray:
    m = coins.topology.size
    if coins.topology.is_cycle and m > MAX_DENSE_SITES:
        raise DomainError(f"Dense operator is limited to cycles of at most {MAX_DENSE_SITES} sites, got {m}")
    return sparse_cycle_operator(coins).toarray()


def cycle_spectrum(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Full eigendecomposition of the dense operator.

    Returns:
        tuple: (eigenvalues, eigenvectors as columns)
    """
    return scipy.linalg.eig(matrix)


def spectrum_distance(eigenvalues: np.ndarray, lam: complex) -> float:
    """Distance from lam to the nearest eigenvalue."""
    return float(np.min(np.abs(np.asarray(eigenvalues) - lam)))


def eigenspace_projection_defect(eigenvalues: np.ndarray, eigenvectors: np.ndarray, vector: np.ndarray, lam: complex, cluster_tol: float = 1e-6) -> float:
    """
    Relative distance of `vector` from the span of eigenvectors whose
    eigenvalues lie within cluster_tol of lam.

    Returns:
        float: ||v - Pv|| / ||v||, or inf when no eigenvalue is close to lam
    """
    mask = np.abs(np.asarray(eigenvalues) - lam) <= cluster_tol
    if not mask.any():
        return float("inf")
    basis = scipy.linalg.orth(eigenvectors[:, mask])
    v = np.asarray(vector, dtype=complex)
    residual = v - basis @ (basis.conj().T @ v)
    return float(np.linalg.norm(residual) / np.linalg.norm(v))
