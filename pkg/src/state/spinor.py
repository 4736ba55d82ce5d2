"""
Two-component amplitude fields Psi(x) = (Psi^L(x), Psi^R(x)).
"""

from dataclasses import dataclass, field

import numpy as np

from src.state.topology import Topology


@dataclass(frozen=True, eq=False)
class SpinorField:
    """
    Amplitudes stored as a complex array of shape (n_sites, 2), column 0 = L,
    column 1 = R, rows in Topology.sites order.

    depth counts truncated line steps: sites within `depth` of the window
    boundary are contaminated by the zero padding and excluded from interior
    claims. It is always 0 on cycles.
    """
    topology: Topology
    amplitudes: np.ndarray
    depth: int = field(default=0)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.topology.n_sites, 2):
            raise ValueError(
                f"Amplitudes must have shape ({self.topology.n_sites}, 2) for {self.topology}, got {amps.shape}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zeros(cls, topology: Topology) -> "SpinorField":
        return cls(topology, np.zeros((topology.n_sites, 2), dtype=complex))

    @classmethod
    def localized(cls, topology: Topology, psi0, site: int = 0) -> "SpinorField":
        amps = np.zeros((topology.n_sites, 2), dtype=complex)
        amps[topology.index_of(site)] = np.asarray(psi0, dtype=complex)
        return cls(topology, amps)

    @classmethod
    def constant(cls, topology: Topology, psi0) -> "SpinorField":
        amps = np.tile(np.asarray(psi0, dtype=complex), (topology.n_sites, 1))
        return cls(topology, amps)

    @classmethod
    def random(cls, topology: Topology, rng: np.random.Generator) -> "SpinorField":
        amps = rng.normal(size=(topology.n_sites, 2)) + 1j * rng.normal(size=(topology.n_sites, 2))
        return cls(topology, amps)

    @property
    def sites(self) -> np.ndarray:
        return self.topology.sites

    @property
    def left(self) -> np.ndarray:
        return self.amplitudes[:, 0]

    @property
    def right(self) -> np.ndarray:
        return self.amplitudes[:, 1]

    def at(self, x: int) -> np.ndarray:
        return self.amplitudes[self.topology.index_of(x)]

    def flatten(self) -> np.ndarray:
        """[Psi^L(x0), Psi^R(x0), Psi^L(x1), ...] in site order."""
        return self.amplitudes.reshape(-1).copy()

    @classmethod
    def from_flat(cls, topology: Topology, vec: np.ndarray, depth: int = 0) -> "SpinorField":
        return cls(topology, np.asarray(vec, dtype=complex).reshape(-1, 2), depth)

    def interior_sites(self) -> np.ndarray:
        """Sites whose amplitudes are unaffected by window truncation."""
        if self.topology.is_cycle:
            return self.sites
        reach = self.topology.size - self.depth
        if reach < 0:
            return np.array([], dtype=int)
        return np.arange(-reach, reach + 1)

    def rotated(self, shift: int) -> "SpinorField":
        """Cycle rotation: new field at x equals old field at x - shift."""
        if not self.topology.is_cycle:
            raise ValueError("Rotation is only defined on cycles")
        return SpinorField(self.topology, np.roll(self.amplitudes, shift, axis=0))

    def __add__(self, other: "SpinorField") -> "SpinorField":
        if other.topology != self.topology:
            raise ValueError("Cannot add fields on different topologies")
        return SpinorField(self.topology, self.amplitudes + other.amplitudes, max(self.depth, other.depth))
