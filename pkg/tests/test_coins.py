import unittest
import numpy as np
import sys
import os

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.coins.matrix import CoinMatrix, CPhiParams, build_coin, cphi_coin_at, split_coin
from src.coins.periodicity import detect_period, rational_period
from src.coins.sequence import CoinSequence
from src.state.topology import Topology
from src.utils.validation import DomainError, TopologyError


class TestCoinMatrix(unittest.TestCase):
    def test_build_coin_is_unitary_and_hermitian(self):
        coin = build_coin(np.pi / 5, 0.3)
        U = coin.matrix
        self.assertTrue(coin.is_unitary())
        np.testing.assert_allclose(U, U.conj().T, atol=1e-15)
        self.assertAlmostEqual(coin.a, np.cos(np.pi / 5))
        self.assertAlmostEqual(coin.d, -np.cos(np.pi / 5))
        self.assertAlmostEqual(coin.b, np.exp(0.3j) * np.sin(np.pi / 5))

    def test_split_sums_to_coin(self):
        coin = build_coin(1.1, 4.0)
        P, Q = split_coin(coin)
        np.testing.assert_allclose(P + Q, coin.matrix)
        np.testing.assert_array_equal(P[1], [0, 0])
        np.testing.assert_array_equal(Q[0], [0, 0])

    def test_angle_validation(self):
        with self.assertRaises(DomainError):
            build_coin(0.0, 0.0)
        with self.assertRaises(DomainError):
            build_coin(1.0, 2 * np.pi)
        # pi/2 is a valid coin, only transfer matrices reject it
        self.assertTrue(build_coin(np.pi / 2, 0.0).is_unitary())

    def test_from_array_shape(self):
        with self.assertRaises(ValueError):
            CoinMatrix.from_array(np.eye(3))


class TestCPhiParams(unittest.TestCase):
    def test_omega_recursion(self):
        params = CPhiParams(theta=0.7, phi=1.3, omega0=0.4)
        x = np.arange(-20, 21)
        omega = params.omega_at(x)
        step = np.mod(omega[1:] - omega[:-1], 2 * np.pi)
        np.testing.assert_allclose(step, np.mod(2 * 1.3, 2 * np.pi), atol=1e-12)
        self.assertTrue(np.all((omega >= 0) & (omega < 2 * np.pi)))

    def test_excluded_theta(self):
        for theta in (np.pi / 2, 3 * np.pi / 2):
            with self.assertRaises(DomainError):
                CPhiParams(theta=theta, phi=0.5)

    def test_eigenvalue(self):
        params = CPhiParams(theta=0.7, phi=np.pi / 3)
        self.assertAlmostEqual(params.eigenvalue, np.exp(1j * np.pi / 3))

    def test_coin_at_matches_entries(self):
        params = CPhiParams(theta=0.7, phi=0.9, omega0=0.2)
        seq = CoinSequence.cphi(params, Topology.line(5))
        for x in (-7, 0, 3, 12):
            np.testing.assert_allclose(seq.coin_at(x).matrix, cphi_coin_at(params, x).matrix, atol=1e-15)


class TestCoinSequence(unittest.TestCase):
    def test_explicit_list_is_periodic_from_start(self):
        coins = [build_coin(0.4, w) for w in (0.1, 0.2, 0.3)]
        seq = CoinSequence.from_list(coins, Topology.line(10), start=-2)
        np.testing.assert_allclose(seq.coin_at(-2).matrix, coins[0].matrix)
        np.testing.assert_allclose(seq.coin_at(1).matrix, coins[0].matrix)
        np.testing.assert_allclose(seq.coin_at(-3).matrix, coins[2].matrix)

    def test_cycle_reduces_sites(self):
        coins = [build_coin(0.4, w) for w in (0.1, 0.2)]
        seq = CoinSequence.from_list(coins, Topology.cycle(4))
        np.testing.assert_allclose(seq.coin_at(5).matrix, seq.coin_at(1).matrix)
        np.testing.assert_allclose(seq.coin_at(-1).matrix, seq.coin_at(3).matrix)

    def test_list_must_tile_cycle(self):
        coins = [build_coin(0.4, w) for w in (0.1, 0.2, 0.3)]
        with self.assertRaises(ValueError):
            CoinSequence.from_list(coins, Topology.cycle(4))

    def test_non_unitary_rejected(self):
        bad = CoinMatrix(1.0, 1.0, 0.0, 1.0)
        with self.assertRaises(ValueError):
            CoinSequence.from_list([bad], Topology.line(3))

    def test_params_requires_cphi(self):
        seq = CoinSequence.from_list([build_coin(0.4, 0.1)], Topology.line(3))
        self.assertFalse(seq.is_cphi)
        with self.assertRaises(TypeError):
            _ = seq.params

    def test_closure_on_cycle(self):
        closing = CoinSequence.cphi(CPhiParams(0.6, np.pi / 3), Topology.cycle(6))
        self.assertTrue(closing.closes_on_cycle())
        with self.assertLogs("coins", level="WARNING"):
            open_seq = CoinSequence.cphi(CPhiParams(0.6, 0.5), Topology.cycle(6))
        self.assertFalse(open_seq.closes_on_cycle())

    def test_rebind_keeps_source(self):
        seq = CoinSequence.cphi(CPhiParams(0.6, 0.5), Topology.line(3))
        wide = seq.on(Topology.line(30))
        np.testing.assert_allclose(wide.coin_at(2).matrix, seq.coin_at(2).matrix)
        with self.assertRaises(ValueError):
            seq.on(Topology.cycle(4))


class TestPeriodDetection(unittest.TestCase):
    def test_rational_phi_periods(self):
        for n in (1, 2, 3, 5, 8):
            seq = CoinSequence.cphi(CPhiParams(np.pi / 4, np.pi / n, 0.0), Topology.line(10))
            self.assertEqual(detect_period(seq, 10), n)

    def test_omega0_does_not_change_period(self):
        seq = CoinSequence.cphi(CPhiParams(0.9, 2 * np.pi / 3, 1.7), Topology.line(10))
        self.assertEqual(detect_period(seq, 10), 3)

    def test_irrational_phi_has_no_period(self):
        seq = CoinSequence.cphi(CPhiParams(np.pi / 4, np.pi * (np.sqrt(2) - 1)), Topology.line(10))
        self.assertIsNone(detect_period(seq, 1000, tol=1e-9))

    def test_explicit_list_period(self):
        coins = [build_coin(0.4, w) for w in (0.1, 0.2, 0.3, 0.4)]
        seq = CoinSequence.from_list(coins, Topology.line(20))
        self.assertEqual(detect_period(seq, 10), 4)
        self.assertIsNone(detect_period(seq, 3))

    def test_rational_oracle(self):
        self.assertEqual(rational_period(1, 3), 3)
        self.assertEqual(rational_period(2, 6), 3)
        self.assertEqual(rational_period(0, 1), 1)
        self.assertEqual(rational_period(4, 1), 1)
        with self.assertRaises(ValueError):
            rational_period(1, 0)

    def test_oracle_without_omega_dependence(self):
        # sin(theta) = 0: every coin is diag(cos theta, -cos theta)
        self.assertEqual(rational_period(1, 3, theta=np.pi), 1)
        self.assertEqual(rational_period(1, 3, theta=np.pi / 4), 3)
        seq = CoinSequence.cphi(CPhiParams(np.pi, np.pi / 3), Topology.line(10))
        self.assertEqual(detect_period(seq, 10), rational_period(1, 3, theta=np.pi))

    def test_argument_validation(self):
        seq = CoinSequence.cphi(CPhiParams(0.6, 0.5), Topology.line(3))
        with self.assertRaises(ValueError):
            detect_period(seq, 0)
        with self.assertRaises(ValueError):
            detect_period(seq, 10, scan_width=5)
        cyc = CoinSequence.cphi(CPhiParams(0.6, np.pi / 2), Topology.cycle(4))
        with self.assertRaises(TopologyError):
            detect_period(cyc, 4)


if __name__ == '__main__':
    unittest.main()
