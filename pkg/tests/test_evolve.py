import unittest
import numpy as np
import sys
import os

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.coins.matrix import CPhiParams, build_coin
from src.coins.sequence import CoinSequence
from src.evolve.dense import (
    MAX_DENSE_SITES,
    cycle_spectrum,
    dense_cycle_operator,
    eigenspace_projection_defect,
    sparse_cycle_operator,
    spectrum_distance,
)
from src.evolve.stepper import EvolutionOperator, iterate, step, trajectory
from src.state.measure import gamma_measure
from src.state.spinor import SpinorField
from src.state.topology import Topology
from src.utils.validation import DomainError, TopologyError, unitarity_defect


class TestStepper(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(42)
        self.params = CPhiParams(theta=0.8, phi=0.6, omega0=1.1)

    def test_single_step_on_cycle(self):
        topo = Topology.cycle(5)
        coins = CoinSequence.from_list([build_coin(0.8, 0.3)], topo)
        psi = SpinorField.localized(topo, (1, 0), site=2)
        out = step(psi, EvolutionOperator(coins))
        coin = coins.coin_at(2)
        np.testing.assert_allclose(out.at(1), [coin.a, 0])
        np.testing.assert_allclose(out.at(3), [0, coin.c])
        self.assertEqual(out.depth, 0)

    def test_cycle_wraps(self):
        topo = Topology.cycle(3)
        coins = CoinSequence.from_list([build_coin(0.8, 0.3)], topo)
        psi = SpinorField.localized(topo, (0, 1), site=0)
        out = step(psi, EvolutionOperator(coins))
        self.assertGreater(abs(out.at(2)[0]), 0)
        self.assertGreater(abs(out.at(1)[1]), 0)

    def test_norm_conserved_on_cycle(self):
        topo = Topology.cycle(12)
        coins = CoinSequence.cphi(CPhiParams(0.8, np.pi / 6, 1.1), topo)
        psi = SpinorField.random(topo, self.rng)
        total = gamma_measure(psi).total()
        for psi_n in trajectory(psi, EvolutionOperator(coins), 40):
            self.assertAlmostEqual(gamma_measure(psi_n).total(), total, delta=1e-10 * total)

    def test_line_depth_and_boundary(self):
        topo = Topology.line(3)
        coins = CoinSequence.cphi(self.params, topo)
        op = EvolutionOperator(coins)
        psi = SpinorField.localized(topo, (1, 1), site=3)
        out = step(psi, op)
        self.assertEqual(out.depth, 1)
        # R amplitude leaving the window is dropped
        coin = coins.coin_at(3)
        np.testing.assert_allclose(out.at(2), [coin.a + coin.b, 0])
        self.assertAlmostEqual(gamma_measure(out).total(), abs(coin.a + coin.b) ** 2)
        self.assertEqual(iterate(psi, op, 2).depth, 2)

    def test_light_cone(self):
        big, small = Topology.line(30), Topology.line(10)
        psi_big = SpinorField.random(big, self.rng)
        psi_small = SpinorField(small, psi_big.amplitudes[20:41])
        n = 6
        out_big = iterate(psi_big, EvolutionOperator(CoinSequence.cphi(self.params, big)), n)
        out_small = iterate(psi_small, EvolutionOperator(CoinSequence.cphi(self.params, small)), n)
        interior = out_small.interior_sites()
        np.testing.assert_array_equal(interior, np.arange(-4, 5))
        for x in interior:
            np.testing.assert_allclose(out_small.at(x), out_big.at(x), atol=1e-14)

    def test_topology_mismatch(self):
        op = EvolutionOperator(CoinSequence.cphi(self.params, Topology.line(5)))
        with self.assertRaises(TopologyError):
            op.apply(SpinorField.zeros(Topology.line(6)))

    def test_step_count_validation(self):
        topo = Topology.line(2)
        op = EvolutionOperator(CoinSequence.cphi(self.params, topo))
        psi = SpinorField.localized(topo, (1, 0))
        self.assertIs(iterate(psi, op, 0), psi)
        with self.assertRaises(ValueError):
            iterate(psi, op, -1)
        with self.assertRaises(ValueError):
            list(trajectory(psi, op, -1))


class TestDenseOperator(unittest.TestCase):
    def setUp(self):
        self.rng = np.random.default_rng(3)
        self.topo = Topology.cycle(8)
        omegas = self.rng.uniform(0, 2 * np.pi, 8)
        self.coins = CoinSequence.from_list([build_coin(0.9, w) for w in omegas], self.topo)

    def test_sparse_operator_is_unitary(self):
        U = sparse_cycle_operator(self.coins)
        self.assertEqual(U.shape, (16, 16))
        self.assertEqual(U.nnz, 32)
        self.assertLessEqual(unitarity_defect(U.toarray()), 1e-12)

    def test_dense_matches_stepper(self):
        U = dense_cycle_operator(self.coins)
        psi = SpinorField.random(self.topo, self.rng)
        stepped = step(psi, EvolutionOperator(self.coins))
        np.testing.assert_allclose(U @ psi.flatten(), stepped.flatten(), atol=1e-13)

    def test_spectrum_on_unit_circle(self):
        eigvals, eigvecs = cycle_spectrum(dense_cycle_operator(self.coins))
        np.testing.assert_allclose(np.abs(eigvals), 1.0, atol=1e-10)
        self.assertLess(spectrum_distance(eigvals, eigvals[0]), 1e-15)

    def test_projection_defect(self):
        U = dense_cycle_operator(self.coins)
        eigvals, eigvecs = cycle_spectrum(U)
        v = eigvecs[:, 0]
        self.assertLess(eigenspace_projection_defect(eigvals, eigvecs, v, eigvals[0]), 1e-10)
        random_v = self.rng.normal(size=16) + 0j
        self.assertGreater(eigenspace_projection_defect(eigvals, eigvecs, random_v, eigvals[0]), 0.1)
        self.assertEqual(eigenspace_projection_defect(eigvals, eigvecs, v, 0.0), float("inf"))

    def test_guards(self):
        with self.assertRaises(TopologyError):
            sparse_cycle_operator(CoinSequence.cphi(CPhiParams(0.5, 0.5), Topology.line(3)))
        with self.assertRaises(DomainError):
            sparse_cycle_operator(CoinSequence.from_list([build_coin(0.5, 0.1)], Topology.cycle(1)))
        big = CoinSequence.from_list([build_coin(0.5, 0.1)], Topology.cycle(MAX_DENSE_SITES + 2))
        with self.assertRaises(DomainError):
            dense_cycle_operator(big)


if __name__ == '__main__':
    unittest.main()
