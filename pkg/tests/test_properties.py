import unittest
import numpy as np
import sys
import os

from hypothesis import given, settings, strategies as st

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.coins.matrix import CPhiParams, build_coin
from src.coins.sequence import CoinSequence
from src.evolve.dense import dense_cycle_operator
from src.evolve.stepper import EvolutionOperator, iterate
from src.state.measure import gamma_measure, scale
from src.state.spinor import SpinorField
from src.state.topology import Topology
from src.transfer.eigenstate import build_eigenstate, eigen_residual
from src.transfer.matrices import cphi_transfer_minus, cphi_transfer_plus
from src.utils.validation import unitarity_defect

TWO_PI = 2 * np.pi

angles = st.floats(min_value=0.0, max_value=TWO_PI, exclude_max=True, allow_nan=False)
thetas = st.floats(min_value=0.05, max_value=TWO_PI - 0.05).filter(lambda t: abs(np.cos(t)) > 0.05)
seeds = st.integers(min_value=0, max_value=2**32 - 1)
cycle_sizes = st.integers(min_value=2, max_value=24)

PROPERTY_SETTINGS = settings(max_examples=60, deadline=None, derandomize=True)


def random_cycle_coins(seed: int, m: int) -> CoinSequence:
    rng = np.random.default_rng(seed)
    coins = [build_coin(rng.uniform(0.05, TWO_PI - 0.05), rng.uniform(0, TWO_PI)) for _ in range(m)]
    return CoinSequence.from_list(coins, Topology.cycle(m))


class TestCoinProperties(unittest.TestCase):
    @PROPERTY_SETTINGS
    @given(theta=st.floats(min_value=1e-6, max_value=TWO_PI - 1e-6), omega=angles)
    def test_coin_unitary(self, theta, omega):
        self.assertLessEqual(unitarity_defect(build_coin(theta, omega).matrix), 1e-12)

    @PROPERTY_SETTINGS
    @given(theta=thetas, phi=angles, omega0=angles, x=st.integers(min_value=-500, max_value=500))
    def test_closed_transfer_matrices_unitary(self, theta, phi, omega0, x):
        params = CPhiParams(theta, phi, omega0)
        self.assertLessEqual(unitarity_defect(cphi_transfer_plus(params, x).matrix), 1e-12)
        self.assertLessEqual(unitarity_defect(cphi_transfer_minus(params, x).matrix), 1e-12)


class TestEvolutionProperties(unittest.TestCase):
    @PROPERTY_SETTINGS
    @given(seed=seeds, m=cycle_sizes, steps=st.integers(min_value=0, max_value=40))
    def test_norm_conservation(self, seed, m, steps):
        coins = random_cycle_coins(seed, m)
        psi = SpinorField.random(coins.topology, np.random.default_rng(seed + 1))
        out = iterate(psi, EvolutionOperator(coins), steps)
        total = gamma_measure(psi).total()
        self.assertAlmostEqual(gamma_measure(out).total(), total, delta=1e-10 * total)

    @PROPERTY_SETTINGS
    @given(seed=seeds, m=cycle_sizes)
    def test_step_matches_dense_operator(self, seed, m):
        coins = random_cycle_coins(seed, m)
        U = dense_cycle_operator(coins)
        self.assertLessEqual(unitarity_defect(U), 1e-12)
        psi = SpinorField.random(coins.topology, np.random.default_rng(seed + 1))
        stepped = EvolutionOperator(coins).apply(psi)
        np.testing.assert_allclose(U @ psi.flatten(), stepped.flatten(), atol=1e-12)

    @PROPERTY_SETTINGS
    @given(seed=seeds, re=st.floats(-3, 3), im=st.floats(-3, 3))
    def test_linearity(self, seed, re, im):
        coins = random_cycle_coins(seed, 10)
        rng = np.random.default_rng(seed + 1)
        psi = SpinorField.random(coins.topology, rng)
        chi = SpinorField.random(coins.topology, rng)
        z = complex(re, im)
        op = EvolutionOperator(coins)
        lhs = op.apply(scale(psi, z) + chi)
        rhs = scale(op.apply(psi), z) + op.apply(chi)
        np.testing.assert_allclose(lhs.amplitudes, rhs.amplitudes, atol=1e-12)

    @PROPERTY_SETTINGS
    @given(seed=seeds, re=st.floats(-3, 3), im=st.floats(-3, 3))
    def test_gamma_scaling(self, seed, re, im):
        psi = SpinorField.random(Topology.line(6), np.random.default_rng(seed))
        z = complex(re, im)
        np.testing.assert_allclose(
            gamma_measure(scale(psi, z)).values,
            abs(z) ** 2 * gamma_measure(psi).values,
            rtol=1e-12,
            atol=1e-300,
        )

    @PROPERTY_SETTINGS
    @given(theta=thetas, phi=angles, omega0=angles, seed=seeds, n=st.integers(min_value=0, max_value=8))
    def test_light_cone(self, theta, phi, omega0, seed, n):
        # Fields that agree on [-r, r] agree after n steps on [-(r - n), r - n]
        r = 10
        topo = Topology.line(20)
        coins = CoinSequence.cphi(CPhiParams(theta, phi, omega0), topo)
        rng = np.random.default_rng(seed)
        psi = SpinorField.random(topo, rng)
        noise = rng.normal(size=psi.amplitudes.shape) * (np.abs(topo.sites) > r)[:, None]
        chi = SpinorField(topo, psi.amplitudes + noise)
        op = EvolutionOperator(coins)
        a, b = iterate(psi, op, n), iterate(chi, op, n)
        inner = topo.index_of(np.arange(-(r - n), r - n + 1))
        np.testing.assert_array_equal(a.amplitudes[inner], b.amplitudes[inner])


class TestStationarityProperties(unittest.TestCase):
    @PROPERTY_SETTINGS
    @given(theta=thetas, phi=angles, omega0=angles, re=st.floats(-2, 2), im=st.floats(-2, 2))
    def test_cphi_eigenstate_uniform(self, theta, phi, omega0, re, im):
        params = CPhiParams(theta, phi, omega0)
        coins = CoinSequence.cphi(params, Topology.line(40))
        psi0 = (1.0, complex(re, im))
        psi = build_eigenstate(coins, params.eigenvalue, psi0)
        self.assertLessEqual(eigen_residual(psi, coins, params.eigenvalue), 1e-10 * (1 + abs(complex(re, im))))
        mu = gamma_measure(psi).values
        self.assertLessEqual(np.max(np.abs(mu - mu[40])), 1e-9 * mu[40])


if __name__ == '__main__':
    unittest.main()
