"""
Transfer matrices for the eigenvalue problem U^(s) Psi = lambda Psi.

D+_x carries Psi(x-1) to Psi(x) and needs U_x, U_{x-1}.
D-_x carries Psi(x+1) to Psi(x) and needs U_{x+1}, U_x.

For C_phi coins at lambda = e^{i phi} both have closed unitary forms.
"""

from dataclasses import dataclass

import numpy as np

from src.coins.matrix import CoinMatrix, CPhiParams
from src.coins.sequence import CoinSequence
from src.utils.logging import setup_logger
from src.utils.validation import TWO_PI, check_nonzero_entry, is_unitary, normalize_lambda

logger = setup_logger("transfer")

PLUS = "plus"
MINUS = "minus"
CONDITION_WARNING = 1e-6


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    entries: np.ndarray
    lam: complex
    side: str
    site: int | None = None

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=complex)

    def is_unitary(self, atol: float = 1e-12) -> bool:
        return is_unitary(self.matrix, atol)

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


def _warn_if_ill_conditioned(value: complex, entry: str, site: int | None):
    if abs(value) < CONDITION_WARNING:
        where = f" at site {site}" if site is not None else ""
        logger.warning(f"|{entry}| = {abs(value):.3e}{where}: transfer matrix is ill-conditioned")


def transfer_plus(coin_x: CoinMatrix, coin_prev: CoinMatrix, lam: complex, site: int | None = None) -> TransferMatrix:
    """
    D+_x = [[(l^2 - b_x c_{x-1}) / (l a_x), -b_x d_{x-1} / (l a_x)],
            [c_{x-1} / l,                    d_{x-1} / l        ]]

    Args:
        coin_x: U_x
        coin_prev: U_{x-1}
        lam: Eigenvalue on the unit circle (snapped if within 1e-9)
        site: Optional site label, carried into errors and the result

    Raises:
        SingularCoinError: a_x, b_x, c_{x-1} or d_{x-1} vanishes
    """
    lam = normalize_lambda(lam)
    check_nonzero_entry(coin_x.a, "a_x", site)
    check_nonzero_entry(coin_x.b, "b_x", site)
    check_nonzero_entry(coin_prev.c, "c_{x-1}", site)
    check_nonzero_entry(coin_prev.d, "d_{x-1}", site)
    _warn_if_ill_conditioned(coin_x.a, "a_x", site)

    a, b = coin_x.a, coin_x.b
    c, d = coin_prev.c, coin_prev.d
    entries = np.array([
        [(lam ** 2 - b * c) / (lam * a), -b * d / (lam * a)],
        [c / lam, d / lam],
    ], dtype=complex)
    return TransferMatrix(entries, lam, PLUS, site)


def transfer_minus(coin_next: CoinMatrix, coin_x: CoinMatrix, lam: complex, site: int | None = None) -> TransferMatrix:
    """
    D-_x = [[a_{x+1} / l,                  b_{x+1} / l                      ],
            [-a_{x+1} c_x / (l d_x),       (l^2 - b_{x+1} c_x) / (l d_x)   ]]

    Raises:
        SingularCoinError: d_x, c_x, a_{x+1} or b_{x+1} vanishes
    """
    lam = normalize_lambda(lam)
    check_nonzero_entry(coin_x.d, "d_x", site)
    check_nonzero_entry(coin_x.c, "c_x", site)
    check_nonzero_entry(coin_next.a, "a_{x+1}", site)
    check_nonzero_entry(coin_next.b, "b_{x+1}", site)
    _warn_if_ill_conditioned(coin_x.d, "d_x", site)

    a, b = coin_next.a, coin_next.b
    c, d = coin_x.c, coin_x.d
    entries = np.array([
        [a / lam, b / lam],
        [-a * c / (lam * d), (lam ** 2 - b * c) / (lam * d)],
    ], dtype=complex)
    return TransferMatrix(entries, lam, MINUS, site)


def transfer_plus_at(coins: CoinSequence, lam: complex, x: int) -> TransferMatrix:
    return transfer_plus(coins.coin_at(x), coins.coin_at(x - 1), lam, site=x)


def transfer_minus_at(coins: CoinSequence, lam: complex, x: int) -> TransferMatrix:
    return transfer_minus(coins.coin_at(x + 1), coins.coin_at(x), lam, site=x)


def cphi_alpha(params: CPhiParams, x: int) -> float:
    """alpha_x = omega_x - phi = phi + omega_{x-1} (mod 2pi)."""
    return float(np.mod(params.omega_at(x) - params.phi, TWO_PI))


def cphi_transfer_plus(params: CPhiParams, x: int) -> TransferMatrix:
    """
    Closed form of D+_x for C_phi coins at lambda = e^{i phi}:
    [[e^{i phi} cos t, e^{i alpha_x} sin t], [e^{-i alpha_x} sin t, -e^{-i phi} cos t]]
    """
    alpha = cphi_alpha(params, x)
    cos_t, sin_t = np.cos(params.theta), np.sin(params.theta)
    ephi = np.exp(1j * params.phi)
    entries = np.array([
        [ephi * cos_t, np.exp(1j * alpha) * sin_t],
        [np.exp(-1j * alpha) * sin_t, -np.conj(ephi) * cos_t],
    ], dtype=complex)
    return TransferMatrix(entries, params.eigenvalue, PLUS, x)


def cphi_transfer_minus(params: CPhiParams, x: int) -> TransferMatrix:
    """
    Closed form of D-_x for C_phi coins at lambda = e^{i phi}:
    [[e^{-i phi} cos t, e^{i alpha_{x+1}} sin t], [e^{-i alpha_{x+1}} sin t, -e^{i phi} cos t]]
    """
    alpha = cphi_alpha(params, x + 1)
    cos_t, sin_t = np.cos(params.theta), np.sin(params.theta)
    ephi = np.exp(1j * params.phi)
    entries = np.array([
        [np.conj(ephi) * cos_t, np.exp(1j * alpha) * sin_t],
        [np.exp(-1j * alpha) * sin_t, -ephi * cos_t],
    ], dtype=complex)
    return TransferMatrix(entries, params.eigenvalue, MINUS, x)
