"""
Per-site measures and the Gamma map mu(x) = |Psi^L(x)|^2 + |Psi^R(x)|^2.
"""

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from src.state.spinor import SpinorField
from src.state.topology import Topology
from src.utils.validation import DomainError, TopologyError


@dataclass(frozen=True, eq=False)
class Measure:
    topology: Topology
    values: np.ndarray
    depth: int = field(default=0)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.topology.n_sites,):
            raise ValueError(f"Measure must have {self.topology.n_sites} values, got shape {vals.shape}")
        if np.any(vals < 0):
            raise ValueError("Measure values must be nonnegative")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def uniform(cls, topology: Topology, c: float = 1.0) -> "Measure":
        return cls(topology, np.full(topology.n_sites, float(c)))

    @property
    def sites(self) -> np.ndarray:
        return self.topology.sites

    def at(self, x: int) -> float:
        return float(self.values[self.topology.index_of(x)])

    def total(self) -> float:
        return float(self.values.sum())

    def interior_sites(self) -> np.ndarray:
        if self.topology.is_cycle:
            return self.sites
        reach = self.topology.size - self.depth
        if reach < 0:
            return np.array([], dtype=int)
        return np.arange(-reach, reach + 1)


def gamma_measure(psi: SpinorField) -> Measure:
    values = np.sum(np.abs(psi.amplitudes) ** 2, axis=1)
    return Measure(psi.topology, values, psi.depth)


def _region_indices(topology: Topology, region: Iterable[int] | None) -> np.ndarray:
    if region is None:
        return np.arange(topology.n_sites)
    sites = np.asarray(list(region) if not isinstance(region, np.ndarray) else region, dtype=int)
    if sites.size == 0:
        raise DomainError("Region must contain at least one site")
    if topology.is_cycle:
        sites = np.unique(np.mod(sites, topology.size))
    else:
        sites = np.unique(sites)
        if np.any(np.abs(sites) > topology.size):
            raise DomainError(f"Region leaves the window [-{topology.size}, {topology.size}]")
    return np.asarray(topology.index_of(sites))


def uniformity_defect(mu: Measure, region: Iterable[int] | None = None) -> float:
    """
    Max deviation of mu from its value at the smallest site of the region.

    Args:
        mu: Measure to test
        region: Sites to test; None means every site of the topology

    Returns:
        float: 0 iff mu is constant on the region
    """
    idx = _region_indices(mu.topology, region)
    vals = mu.values[idx]
    return float(np.max(np.abs(vals - vals[0])))


def stationarity_defect(mu_n: Measure, mu_0: Measure, region: Iterable[int] | None = None) -> float:
    """Max |mu_n(x) - mu_0(x)| over the region."""
    if mu_n.topology != mu_0.topology:
        raise TopologyError(f"Measures live on {mu_n.topology} and {mu_0.topology}")
    idx = _region_indices(mu_n.topology, region)
    return float(np.max(np.abs(mu_n.values[idx] - mu_0.values[idx])))


def scale(psi: SpinorField, z: complex) -> SpinorField:
    return SpinorField(psi.topology, psi.amplitudes * complex(z), psi.depth)
