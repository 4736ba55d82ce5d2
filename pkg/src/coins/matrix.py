"""
Coin matrices for the two-state walk.

Responsibilities:
- Build single 2x2 coins of the one-parameter theta form
- Split a coin into its left-moving (P) and right-moving (Q) parts
- Evaluate the C_phi family at any site
"""

from dataclasses import dataclass

import numpy as np

from src.utils.validation import (
    TWO_PI,
    check_angle,
    check_theta_nonsingular,
    check_theta_range,
    is_unitary,
)


@dataclass(frozen=True)
class CoinMatrix:
    """
    Row-major 2x2 coin [[a, b], [c, d]] acting on (L, R) chirality.
    """
    a: complex
    b: complex
    c: complex
    d: complex

    @classmethod
    def from_array(cls, mat: np.ndarray) -> "CoinMatrix":
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError(f"Coin must be 2x2, got shape {mat.shape}")
        return cls(complex(mat[0, 0]), complex(mat[0, 1]), complex(mat[1, 0]), complex(mat[1, 1]))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def is_unitary(self, atol: float = 1e-12) -> bool:
        return is_unitary(self.matrix, atol=atol)


@dataclass(frozen=True)
class CPhiParams:
    """
    Parameters of the C_phi class: omega_x = omega0 + 2*phi*x (mod 2pi).

    theta must avoid pi/2 and 3pi/2, where cos(theta) = 0 and the transfer
    matrices are undefined.
    """
    theta: float
    phi: float
    omega0: float = 0.0

    def __post_init__(self):
        check_theta_nonsingular(self.theta)
        check_angle(self.phi, "phi")
        check_angle(self.omega0, "omega0")

    def omega_at(self, x: int | np.ndarray) -> float | np.ndarray:
        """
        Closed form of the phase at site x, reduced into [0, 2pi).
        """
        return np.mod(self.omega0 + 2.0 * self.phi * np.asarray(x, dtype=float), TWO_PI)

    @property
    def eigenvalue(self) -> complex:
        """The eigenvalue e^{i phi} whose eigenstates carry a uniform measure."""
        return complex(np.exp(1j * self.phi))


def build_coin(theta: float, omega: float) -> CoinMatrix:
    """
    Build the coin [[cos t, e^{iw} sin t], [e^{-iw} sin t, -cos t]].

    Args:
        theta: Angle in (0, 2pi). pi/2 and 3pi/2 are allowed here.
        omega: Phase in [0, 2pi).

    Returns:
        CoinMatrix: A unitary, Hermitian coin.
    """
    check_theta_range(theta)
    check_angle(omega, "omega")
    cos_t = np.cos(theta)
    sin_t = np.sin(theta)
    return CoinMatrix(
        a=complex(cos_t),
        b=complex(np.exp(1j * omega) * sin_t),
        c=complex(np.exp(-1j * omega) * sin_t),
        d=complex(-cos_t),
    )


def split_coin(coin: CoinMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Split U = P + Q where P keeps the first row (moves left) and Q the
    second row (moves right).
    """
    P = np.array([[coin.a, coin.b], [0.0, 0.0]], dtype=complex)
    Q = np.array([[0.0, 0.0], [coin.c, coin.d]], dtype=complex)
    return P, Q


def cphi_coin_at(params: CPhiParams, x: int) -> CoinMatrix:
    return build_coin(params.theta, float(params.omega_at(x)))


def cphi_coin_entries(params: CPhiParams, sites: np.ndarray) -> np.ndarray:
    """
    Vectorized C_phi coins over an array of sites.

    Returns:
        np.ndarray: complex array of shape (len(sites), 2, 2)
    """
    omega = params.omega_at(sites)
    cos_t = np.cos(params.theta)
    sin_t = np.sin(params.theta)
    out = np.empty((len(omega), 2, 2), dtype=complex)
    out[:, 0, 0] = cos_t
    out[:, 0, 1] = np.exp(1j * omega) * sin_t
    out[:, 1, 0] = np.exp(-1j * omega) * sin_t
    out[:, 1, 1] = -cos_t
    return out
