"""
Site-indexed coin families {U_x} on a line window or a cycle.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from src.coins.matrix import CoinMatrix, CPhiParams, cphi_coin_entries
from src.state.topology import Topology
from src.utils.logging import setup_logger
from src.utils.validation import TWO_PI

logger = setup_logger("coins")


@dataclass(frozen=True, eq=False)
class CoinSequence:
    """
    A coin family bound to a topology.

    The source is either CPhiParams (evaluated lazily at any site) or an
    explicit tuple of coins repeated periodically, with coins[0] placed at
    site `start`. On a cycle every site label is first reduced mod m.
    """
    topology: Topology
    source: CPhiParams | tuple[CoinMatrix, ...]
    start: int = 0

    def __post_init__(self):
        if isinstance(self.source, CPhiParams):
            if self.topology.is_cycle and not self.closes_on_cycle():
                logger.warning(
                    f"C_phi increment 2*phi = {2 * self.source.phi:.6g} does not close on {self.topology}; "
                    "the phase relation breaks across the seam"
                )
            return
        coins = tuple(self.source)
        if not coins:
            raise ValueError("Explicit coin list must not be empty")
        for k, coin in enumerate(coins):
            if not isinstance(coin, CoinMatrix):
                raise TypeError(f"Coin {k} must be a CoinMatrix, got {type(coin).__name__}")
            if not coin.is_unitary():
                raise ValueError(f"Coin {k} is not unitary within 1e-12")
        if self.topology.is_cycle and self.topology.size % len(coins) != 0:
            raise ValueError(f"{len(coins)} coins cannot tile {self.topology} periodically")
        object.__setattr__(self, "source", coins)

    @classmethod
    def cphi(cls, params: CPhiParams, topology: Topology) -> "CoinSequence":
        return cls(topology, params)

    @classmethod
    def from_list(cls, coins: Sequence[CoinMatrix], topology: Topology, start: int = 0) -> "CoinSequence":
        return cls(topology, tuple(coins), start)

    @property
    def is_cphi(self) -> bool:
        return isinstance(self.source, CPhiParams)

    @property
    def params(self) -> CPhiParams:
        if not self.is_cphi:
            raise TypeError("Coin sequence is not a C_phi family")
        return self.source

    def closes_on_cycle(self, tol: float = 1e-12) -> bool:
        """True when 2*phi*m is a multiple of 2pi, so omega is single-valued on C_m."""
        if not self.is_cphi or not self.topology.is_cycle:
            return True
        turns = 2.0 * self.source.phi * self.topology.size / TWO_PI
        return abs(turns - round(turns)) * TWO_PI <= tol * max(1.0, self.topology.size)

    def _reduce(self, sites: np.ndarray) -> np.ndarray:
        sites = np.asarray(sites, dtype=int)
        if self.topology.is_cycle:
            return np.mod(sites, self.topology.size)
        return sites

    def entries(self, sites) -> np.ndarray:
        """
        Coins at the given sites as a complex array of shape (n, 2, 2).
        """
        sites = self._reduce(np.atleast_1d(sites))
        if self.is_cphi:
            return cphi_coin_entries(self.source, sites)
        stack = np.stack([coin.matrix for coin in self.source])
        return stack[np.mod(sites - self.start, len(self.source))]

    def coin_at(self, x: int) -> CoinMatrix:
        return CoinMatrix.from_array(self.entries([x])[0])

    def on(self, topology: Topology) -> "CoinSequence":
        """Same coin source bound to another topology of the same kind."""
        if topology.kind != self.topology.kind:
            raise ValueError(f"Cannot rebind {self.topology} coins to {topology}")
        return CoinSequence(topology, self.source, self.start)
