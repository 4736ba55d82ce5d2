"""
Split-step evolution Psi_{n+1}(x) = P_{x+1} Psi_n(x+1) + Q_{x-1} Psi_n(x-1).

On cycles indices wrap mod m. On line windows amplitude that would arrive
from outside the window is taken as zero, and every step deepens the
contaminated boundary layer by one site.
"""

from typing import Iterator

import numpy as np

from src.coins.sequence import CoinSequence
from src.state.spinor import SpinorField
from src.utils.validation import TopologyError


class EvolutionOperator:
    """
    The walk operator U^(s) (or U_c^(s) on a cycle) for a coin sequence,
    with coin entries cached over the sites of its topology.
    """

    def __init__(self, coins: CoinSequence):
        self.coins = coins
        self.topology = coins.topology
        entries = coins.entries(self.topology.sites)
        self._a = entries[:, 0, 0]
        self._b = entries[:, 0, 1]
        self._c = entries[:, 1, 0]
        self._d = entries[:, 1, 1]

    def apply(self, psi: SpinorField) -> SpinorField:
        if psi.topology != self.topology:
            raise TopologyError(f"Field lives on {psi.topology}, operator on {self.topology}")

        L = psi.amplitudes[:, 0]
        R = psi.amplitudes[:, 1]
        # P_x Psi(x) leaves towards x-1, Q_x Psi(x) towards x+1
        to_left = self._a * L + self._b * R
        to_right = self._c * L + self._d * R

        out = np.zeros_like(psi.amplitudes)
        if self.topology.is_cycle:
            out[:, 0] = np.roll(to_left, -1)
            out[:, 1] = np.roll(to_right, 1)
            return SpinorField(self.topology, out)

        out[:-1, 0] = to_left[1:]
        out[1:, 1] = to_right[:-1]
        return SpinorField(self.topology, out, psi.depth + 1)


def step(psi: SpinorField, op: EvolutionOperator) -> SpinorField:
    return op.apply(psi)


def iterate(psi: SpinorField, op: EvolutionOperator, n: int) -> SpinorField:
    """
    Apply n steps of the walk.

    Args:
        psi: Initial field
        op: Evolution operator on the same topology
        n: Number of steps (n = 0 returns psi unchanged)
    """
    if n < 0:
        raise ValueError(f"Step count must be >= 0, got {n}")
    for _ in range(n):
        psi = op.apply(psi)
    return psi


def trajectory(psi: SpinorField, op: EvolutionOperator, n: int) -> Iterator[SpinorField]:
    """Yield Psi_0, Psi_1, ..., Psi_n."""
    if n < 0:
        raise ValueError(f"Step count must be >= 0, got {n}")
    yield psi
    for _ in range(n):
        psi = op.apply(psi)
        yield psi
