import math
import unittest

import numpy as np  # type: ignore

import entanglement
import exceptions
import freefermion
from freefermion import XYParams
from phase_types import FermionSector, PhaseLabel

SCALING_L = [8, 16, 32, 64, 128]


class TestKernel(unittest.TestCase):
    def test_xx_kernel_is_a_sinc(self):
        p = XYParams(0.0, 0.0)
        for d in range(1, 6):
            with self.subTest(d=d):
                expected = 2.0 / (math.pi * d) * math.sin(math.pi * d / 2.0)
                self.assertAlmostEqual(freefermion.g_kernel(p, d), expected, delta=1e-9)
        self.assertAlmostEqual(freefermion.g_kernel(p, 0), 0.0, delta=1e-9)

    def test_single_site_bound(self):
        for gamma, lam in ((0.0, 0.3), (0.5, 1.0), (1.0, 1.5), (0.2, 0.1)):
            with self.subTest(gamma=gamma, lam=lam):
                entropy = freefermion.block_entropy(XYParams(gamma, lam), 1)
                self.assertGreaterEqual(entropy, 0.0)
                self.assertLessEqual(entropy, 1.0 + 1e-12)

    def test_block_size_must_be_positive(self):
        with self.assertRaises(exceptions.DomainError):
            freefermion.block_entropy(XYParams(1.0, 1.0), 0)


class TestScalingLaws(unittest.TestCase):
    def test_xx_central_charge(self):
        fit = freefermion.entropy_scaling_fit(XYParams(0.0, 0.0), SCALING_L)
        self.assertAlmostEqual(fit.slope, 1.0 / 3.0, delta=0.01)
        self.assertAlmostEqual(freefermion.central_charge_from_slope(1.0 / 3.0), 1.0)

    def test_ising_central_charge(self):
        fit = freefermion.entropy_scaling_fit(XYParams(1.0, 1.0), SCALING_L)
        self.assertAlmostEqual(fit.slope, 1.0 / 6.0, delta=0.01)

    def test_xx_field_offset(self):
        reference = freefermion.block_entropy(XYParams(0.0, 0.0), 100)
        for lam in (0.3, 0.5, 0.6):
            with self.subTest(lam=lam):
                shift = freefermion.block_entropy(XYParams(0.0, lam), 100) - reference
                self.assertAlmostEqual(shift, math.log2(1.0 - lam * lam) / 6.0, delta=0.02)

    def test_critical_anisotropy_offset(self):
        reference = freefermion.block_entropy(XYParams(1.0, 1.0), 100)
        for gamma in (0.25, 0.5):
            with self.subTest(gamma=gamma):
                shift = freefermion.block_entropy(XYParams(gamma, 1.0), 100) - reference
                self.assertAlmostEqual(shift, math.log2(gamma) / 6.0, delta=0.05)

    def test_approach_to_the_critical_field(self):
        lams = np.array([0.9, 0.95, 0.99])
        saturated = np.array([entanglement.ising_saturated_entropy(lam) for lam in lams])
        law = -np.log2(1.0 - lams ** 2) / 6.0
        # compared up to the constant the law leaves open
        residual = saturated - law
        self.assertLess(float(np.max(np.abs(residual - residual.mean()))), 0.1)
        self.assertTrue(np.all(np.diff(saturated) > 0.0))

    def test_off_critical_saturation(self):
        p = XYParams(1.0, 1.1)
        curve = freefermion.entropy_curve(p, [120, 160, 200])
        self.assertLess(float(np.ptp(curve)), 1e-3)


class TestFermiAnalysis(unittest.TestCase):
    def test_labels(self):
        cases = {
            (0.0, 0.0): PhaseLabel.CRITICAL_XX,
            (1.0, 1.0): PhaseLabel.CRITICAL_XY,
            (1.0, 1.5): PhaseLabel.GAPPED_1FP,
            (0.5, 0.3): PhaseLabel.GAPPED_2FP,
        }
        for (gamma, lam), label in cases.items():
            with self.subTest(gamma=gamma, lam=lam):
                self.assertIs(freefermion.fermi_analysis(XYParams(gamma, lam)).phase_label, label)

    def test_masses(self):
        self.assertAlmostEqual(freefermion.fermi_analysis(XYParams(1.0, 1.5)).mass, 0.5)
        self.assertAlmostEqual(freefermion.fermi_analysis(XYParams(0.5, 0.3)).mass, 0.25 * (1.0 - 0.09 / 0.75))

    def test_gap_is_the_dispersion_minimum(self):
        for gamma, lam in ((1.0, 1.5), (0.5, 0.0), (0.5, 0.3), (0.8, -1.2)):
            with self.subTest(gamma=gamma, lam=lam):
                p = XYParams(gamma, lam)
                sampled = float(np.min(freefermion.dispersion(p, np.linspace(-np.pi, np.pi, 20001))))
                self.assertAlmostEqual(freefermion.fermi_analysis(p).gap, sampled, delta=1e-6)

    def test_saturation_needs_a_gap(self):
        with self.assertRaises(exceptions.DomainError):
            freefermion.saturation_entropy(XYParams(1.0, 1.0))
        self.assertAlmostEqual(freefermion.saturation_entropy(XYParams(1.0, 1.5)), 1.0 / 6.0)


class TestFiniteChains(unittest.TestCase):
    def test_odd_chains_are_rejected(self):
        with self.assertRaises(exceptions.DomainError):
            freefermion.momenta(7, FermionSector.NS)

    def test_matches_dense_oracle(self):
        for N in (8, 10, 12):
            for gamma in (1.0, 0.5):
                for lam in (0.0, 0.5, 1.5):
                    p = XYParams(gamma, lam)
                    oracle = freefermion.dense_oracle(p, N)
                    for L in range(1, N):
                        with self.subTest(N=N, gamma=gamma, lam=lam, L=L):
                            self.assertAlmostEqual(freefermion.block_entropy(p, L, size=N), oracle.entropy(L), delta=1e-6)

    def test_odd_parity_ground_state(self):
        p = XYParams(0.5, 0.5)
        energies = freefermion.sector_energies(p, 8)
        self.assertLess(energies[FermionSector.R], energies[FermionSector.NS])
        self.assertIs(freefermion.resolve_sector(p, 8), FermionSector.R)
        oracle = freefermion.dense_oracle(p, 8)
        self.assertEqual(oracle.parity, -1)
        self.assertAlmostEqual(oracle.energy, energies[FermionSector.R], delta=1e-9)
        self.assertLess(oracle.energy, freefermion.dense_oracle(p, 8, sector=FermionSector.NS).energy)

    def test_oracle_entropies_are_symmetric(self):
        oracle = freefermion.dense_oracle(XYParams(1.0, 1.5), 8)
        np.testing.assert_allclose(oracle.entropies, oracle.entropies[::-1], atol=1e-9)

    def test_breaking_field_selects_one_ordered_state(self):
        rows = freefermion.field_entropy_curve(1.0, [0.3, 2.0], 8, 4, breaking_field=0.1)
        (_, symmetric, broken), (_, far_symmetric, far_broken) = rows
        self.assertGreater(symmetric, 0.9)
        self.assertLess(broken, symmetric - 0.5)
        self.assertAlmostEqual(far_symmetric, far_broken, delta=0.05)

    def test_oracle_size_limit(self):
        with self.assertRaises(exceptions.ResourceError):
            freefermion.dense_oracle(XYParams(1.0, 1.0), 16)


if __name__ == "__main__":
    unittest.main()
