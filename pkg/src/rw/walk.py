"""
Classical nearest-neighbour random walk with site-dependent hopping.

p_x is the probability of moving left from x, q_x = 1 - p_x of moving right:
    mu_n(x) = p_{x+1} mu_{n-1}(x+1) + q_{x-1} mu_{n-1}(x-1)
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from src.state.measure import Measure
from src.state.topology import Topology
from src.utils.validation import TopologyError

UNIFORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HoppingSequence:
    topology: Topology
    p: np.ndarray
    depth: int = field(default=0, repr=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (self.topology.n_sites,):
            raise ValueError(f"Need {self.topology.n_sites} hopping probabilities for {self.topology}, got {p.shape}")
        if np.any(p < 0.0) or np.any(p > 1.0):
            raise ValueError("Hopping probabilities must lie in [0, 1]")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    @classmethod
    def periodic(cls, pattern: Sequence[float], topology: Topology, start: int = 0) -> "HoppingSequence":
        """
        Repeat `pattern` over the topology with pattern[0] at site `start`.
        """
        pattern = np.asarray(pattern, dtype=float)
        if pattern.size == 0:
            raise ValueError("Hopping pattern must not be empty")
        if topology.is_cycle and topology.size % pattern.size != 0:
            raise ValueError(f"Pattern of length {pattern.size} cannot tile {topology}")
        return cls(topology, pattern[np.mod(topology.sites - start, pattern.size)])

    @property
    def q(self) -> np.ndarray:
        return 1.0 - self.p

    def period(self, tol: float = UNIFORM_TOL) -> int:
        """
        Smallest k with p_{x+k} = p_x for all sites where both are defined
        (indices wrap on a cycle). Returns the full length when nothing shorter fits.
        """
        n = self.p.size
        for k in range(1, n):
            if self.topology.is_cycle:
                if n % k == 0 and np.max(np.abs(np.roll(self.p, -k) - self.p)) <= tol:
                    return k
            elif np.max(np.abs(self.p[k:] - self.p[:-k])) <= tol:
                return k
        return n


def rw_step(mu: Measure, hop: HoppingSequence) -> Measure:
    if mu.topology != hop.topology:
        raise TopologyError(f"Measure on {mu.topology}, hopping sequence on {hop.topology}")
    to_left = hop.p * mu.values
    to_right = hop.q * mu.values
    out = np.zeros_like(mu.values)
    if mu.topology.is_cycle:
        out = np.roll(to_left, -1) + np.roll(to_right, 1)
        return Measure(mu.topology, out)
    out[:-1] += to_left[1:]
    out[1:] += to_right[:-1]
    return Measure(mu.topology, out, mu.depth + 1)


def transition_matrix(hop: HoppingSequence) -> np.ndarray:
    """
    Column-stochastic matrix P^(s) on a cycle: column y sends p_y to y-1
    and q_y to y+1.
    """
    if not hop.topology.is_cycle:
        raise TopologyError("The transition matrix is only built for cycles")
    m = hop.topology.size
    P = np.zeros((m, m))
    y = np.arange(m)
    np.add.at(P, ((y - 1) % m, y), hop.p)
    np.add.at(P, ((y + 1) % m, y), hop.q)
    return P


@dataclass(frozen=True)
class WitnessReport:
    is_uniform_stationary: bool
    violating_site: int | None
    max_gap: float
    period: int

    def as_dict(self) -> dict:
        return {
            "is_uniform_stationary": self.is_uniform_stationary,
            "violating_site": self.violating_site,
            "max_gap": self.max_gap,
            "period": self.period,
        }


def uniform_stationarity_witness(hop: HoppingSequence, tol: float = UNIFORM_TOL) -> WitnessReport:
    """
    A uniform measure c is fixed by rw_step iff c = p_{x+1} c + (1 - p_{x-1}) c,
    i.e. p_{x-1} = p_{x+1} at every checked site x.

    Checked sites are all of C_m, or [-L+1, L-1] on a line window. The
    reported violating site is the first x (in site order) where the
    equality fails.
    """
    p = hop.p
    sites = hop.topology.sites
    if hop.topology.is_cycle:
        gaps = np.abs(np.roll(p, 1) - np.roll(p, -1))
        checked = sites
    else:
        gaps = np.abs(p[:-2] - p[2:])
        checked = sites[1:-1]

    if gaps.size == 0:
        return WitnessReport(True, None, 0.0, hop.period(tol))
    bad = np.flatnonzero(gaps > tol)
    max_gap = float(gaps.max())
    if bad.size:
        return WitnessReport(False, int(checked[bad[0]]), max_gap, hop.period(tol))
    return WitnessReport(True, None, max_gap, hop.period(tol))
