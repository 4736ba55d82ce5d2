"""
Shared validation helpers and the exception hierarchy.

The CLI maps these exceptions onto exit codes:
- ConfigError   -> 2
- DomainError   -> 3 (SingularCoinError is a DomainError)
"""

import numpy as np


class ConfigError(ValueError):
    """Run configuration could not be parsed or is inconsistent."""


class DomainError(ValueError):
    """Input is outside the mathematical domain of an operation."""


class SingularCoinError(DomainError):
    """A coin entry that a transfer matrix divides by (or requires nonzero) vanishes."""

    def __init__(self, entry: str, site: int | None = None, value: complex = 0.0):
        self.entry = entry
        self.site = site
        self.value = value
        where = f" at site {site}" if site is not None else ""
        super().__init__(f"Coin entry {entry} is zero{where} (|{entry}| = {abs(value):.3e}); transfer matrix undefined.")


class TopologyError(ValueError):
    """Two objects that must live on the same lattice do not."""


TWO_PI = 2.0 * np.pi
ZERO_ENTRY_TOL = 1e-12
UNIT_CIRCLE_TOL = 1e-12


def is_unitary(mat: np.ndarray, atol: float = 1e-12) -> bool:
    """
    Check unitarity entrywise: max |M M^† - I| <= atol.
    """
    return unitarity_defect(mat) <= atol


def unitarity_defect(mat: np.ndarray) -> float:
    mat = np.asarray(mat)
    eye = np.eye(mat.shape[0], dtype=complex)
    return float(np.max(np.abs(mat.conj().T @ mat - eye)))


def check_theta_range(theta: float) -> None:
    if not (0.0 < theta < TWO_PI):
        raise DomainError(f"theta must lie in (0, 2pi), got {theta}")


def check_theta_nonsingular(theta: float, tol: float = ZERO_ENTRY_TOL) -> None:
    """
    theta = pi/2 or 3pi/2 makes cos(theta) vanish, so the diagonal coin
    entries are zero and no transfer matrix exists.
    """
    check_theta_range(theta)
    if abs(np.cos(theta)) < tol:
        raise DomainError(f"theta = {theta} is excluded (cos(theta) = 0, i.e. theta in {{pi/2, 3pi/2}})")


def check_angle(value: float, name: str) -> None:
    if not (0.0 <= value < TWO_PI):
        raise DomainError(f"{name} must lie in [0, 2pi), got {value}")


def normalize_lambda(lam: complex, snap_tol: float = 1e-9) -> complex:
    """
    Return lambda projected onto the unit circle.

    Values within snap_tol of the circle are renormalized; anything further
    away is rejected since stationarity needs |lambda| = 1 exactly.
    """
    lam = complex(lam)
    modulus = abs(lam)
    if abs(modulus - 1.0) > snap_tol:
        raise DomainError(f"|lambda| must be 1 (got |lambda| = {modulus:.12g})")
    return lam / modulus


def check_nonzero_entry(value: complex, entry: str, site: int | None = None, tol: float = ZERO_ENTRY_TOL) -> None:
    if abs(value) < tol:
        raise SingularCoinError(entry, site, value)
