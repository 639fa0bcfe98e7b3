import math
import unittest

import numpy as np  # type: ignore

import bethe
import exceptions
from bethe import XXZParams


def overlap(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)))


class TestParams(unittest.TestCase):
    def test_limits(self):
        with self.assertRaises(exceptions.DomainError):
            XXZParams(1.0, 0.0, 7)
        with self.assertRaises(exceptions.ResourceError):
            XXZParams(1.0, 0.0, 20)

    def test_needs_reversed_spins(self):
        with self.assertRaises(exceptions.DomainError):
            bethe.solve_bethe(XXZParams(1.0, 0.0, 8), 0)


class TestSolver(unittest.TestCase):
    def test_xx_limit_is_free_fermions(self):
        p = XXZParams(0.0, 0.0, 8)
        solution = bethe.solve_bethe(p, 4)
        expected = 2.0 * (math.cos(5 * math.pi / 8) + math.cos(7 * math.pi / 8))
        self.assertAlmostEqual(solution.energy, expected, delta=1e-9)

    def test_single_magnon(self):
        p = XXZParams(1.0, 0.3, 8)
        solution = bethe.solve_bethe(p, 1)
        self.assertAlmostEqual(solution.momenta[0], math.pi, delta=1e-10)
        self.assertAlmostEqual(solution.energy, 8 / 4 - 1.0 - 1.0 - 0.3 * 3, delta=1e-10)

    def test_sector_energies_match_dense(self):
        N = 8
        cases = [(0.5, r) for r in range(1, 5)] + [(1.0, r) for r in range(1, 5)] + [(2.0, 1), (2.0, 2)]
        for gamma, r in cases:
            p = XXZParams(gamma, 0.0, N)
            with self.subTest(gamma=gamma, r=r):
                solution = bethe.solve_bethe(p, r)
                self.assertLess(solution.residual, 1e-5)
                self.assertAlmostEqual(solution.energy, bethe.xxz_dense_oracle(p, r)[0], delta=1e-8)

    def test_ground_states_match_dense(self):
        for N in (8, 10, 12):
            for gamma in (0.5, 1.0, 2.0):
                for lam in (0.0, 0.5):
                    p = XXZParams(gamma, lam, N)
                    with self.subTest(N=N, gamma=gamma, lam=lam):
                        _, solution, wavefunction = bethe.ground_state_scan(p)
                        energy, state = bethe.xxz_dense_oracle(p)
                        self.assertAlmostEqual(solution.energy, energy, delta=1e-5)
                        self.assertGreater(overlap(wavefunction.amplitudes, state), 0.999)
                        entropies = np.array([bethe.xxz_block_entropy(wavefunction, L) for L in range(1, N)])
                        np.testing.assert_allclose(entropies, entropies[::-1], atol=1e-9)
                        padded = np.concatenate([[0.0], entropies, [0.0]])
                        self.assertTrue(np.all(padded[2:] + padded[:-2] - 2.0 * padded[1:-1] <= 1e-9))

    def test_wavefunction_overlap(self):
        for gamma in (0.5, 1.0):
            p = XXZParams(gamma, 0.0, 8)
            with self.subTest(gamma=gamma):
                wavefunction = bethe.bethe_amplitudes(bethe.solve_bethe(p, 4), p)
                _, state = bethe.xxz_dense_oracle(p, 4)
                self.assertGreater(overlap(wavefunction.amplitudes, state), 0.999)

    def test_two_magnon_matching_condition(self):
        gamma = 0.7
        solution = bethe.solve_bethe(XXZParams(gamma, 0.0, 8), 2)
        adjacent, left, right = bethe.bethe_amplitude_at(solution, [[3, 4], [3, 3], [4, 4]])
        self.assertLess(abs(2.0 * gamma * adjacent - left - right), 1e-9)


class TestEntropies(unittest.TestCase):
    def test_heisenberg_curve(self):
        p = XXZParams(1.0, 0.0, 12)
        r_star, _, wavefunction = bethe.ground_state_scan(p)
        self.assertEqual(r_star, 6)
        entropies = np.array([bethe.xxz_block_entropy(wavefunction, L) for L in range(1, 12)])
        np.testing.assert_allclose(entropies, entropies[::-1], atol=1e-9)
        self.assertEqual(int(np.argmax(entropies)) + 1, 6)
        padded = np.concatenate([[0.0], entropies, [0.0]])
        self.assertTrue(np.all(padded[:-2] + padded[2:] <= 2.0 * padded[1:-1] + 1e-9))
        # grows with the chord length, roughly with a third of its log
        chord = np.log2(12 / math.pi * np.sin(math.pi * np.arange(1, 12) / 12))
        slope = np.polyfit(chord, entropies, 1)[0]
        self.assertTrue(0.15 < slope < 0.6)

    def test_saturated_field(self):
        p = XXZParams(1.0, 2.5, 12)
        r_star, _, wavefunction = bethe.ground_state_scan(p)
        self.assertEqual(r_star, 0)
        for L in range(1, 12):
            self.assertAlmostEqual(bethe.xxz_block_entropy(wavefunction, L), 0.0, delta=1e-12)

    def test_block_range(self):
        wavefunction = bethe.ground_state_scan(XXZParams(1.0, 2.5, 8))[2]
        with self.assertRaises(exceptions.DomainError):
            bethe.xxz_block_entropy(wavefunction, 8)


class TestLevelCrossings(unittest.TestCase):
    def test_field_empties_the_sectors(self):
        crossings = bethe.level_crossings(1.0, 8, np.linspace(0.0, 2.5, 51), solver="dense")
        self.assertTrue(crossings)
        self.assertEqual(crossings[-1][2], 0)
        for lam, before, after in crossings:
            self.assertLess(after, before)
            self.assertLessEqual(lam, 2.0 + 0.05)


if __name__ == "__main__":
    unittest.main()
