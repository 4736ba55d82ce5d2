"""
Lattices the walk lives on: a finite window [-L, L] of the line, or a cycle Z/mZ.
"""

from dataclasses import dataclass

import numpy as np

LINE = "line"
CYCLE = "cycle"


@dataclass(frozen=True)
class Topology:
    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in (LINE, CYCLE):
            raise ValueError(f"Unknown topology kind: {self.kind}")
        if self.kind == LINE and self.size < 0:
            raise ValueError(f"Line window half-width must be >= 0, got {self.size}")
        if self.kind == CYCLE and self.size < 1:
            raise ValueError(f"Cycle must have at least one site, got {self.size}")

    @classmethod
    def line(cls, half_width: int) -> "Topology":
        return cls(LINE, int(half_width))

    @classmethod
    def cycle(cls, m: int) -> "Topology":
        return cls(CYCLE, int(m))

    @property
    def is_cycle(self) -> bool:
        return self.kind == CYCLE

    @property
    def n_sites(self) -> int:
        return 2 * self.size + 1 if self.kind == LINE else self.size

    @property
    def sites(self) -> np.ndarray:
        """Site labels in storage order: -L..L on the line, 0..m-1 on a cycle."""
        if self.kind == LINE:
            return np.arange(-self.size, self.size + 1)
        return np.arange(self.size)

    def index_of(self, x: int | np.ndarray) -> int | np.ndarray:
        """
        Storage index of site x. Cycle labels are reduced mod m; line labels
        outside the window raise.
        """
        if self.kind == CYCLE:
            return np.mod(x, self.size)
        x_arr = np.asarray(x)
        if np.any(np.abs(x_arr) > self.size):
            raise ValueError(f"Site outside window [-{self.size}, {self.size}]: {x}")
        return x_arr + self.size if x_arr.ndim else int(x_arr) + self.size

    def __str__(self) -> str:
        if self.kind == LINE:
            return f"line[-{self.size},{self.size}]"
        return f"C_{self.size}"
