import math
import unittest
from fractions import Fraction

import numpy as np  # type: ignore
import numpy.testing as npt
from scipy.integrate import quad

import entanglement
import exceptions
import freefermion
from entanglement import ModeDispersion, ProbVector
from freefermion import XYParams

RG_PATH = list(np.linspace(1.05, 1.5, 11))


def quadrature_K(k: float) -> float:
    value, _ = quad(lambda t: 1.0 / math.sqrt(1.0 - (k * math.sin(t)) ** 2), 0.0, math.pi / 2, epsabs=1e-13, epsrel=1e-13)
    return value


def quadrature_dispersion(lam: float, j: int) -> float:
    if lam > 1.0:
        k = 1.0 / lam
        return (2 * j + 1) * math.pi * quadrature_K(math.sqrt(1.0 - k * k)) / quadrature_K(k)
    return 2 * j * math.pi * quadrature_K(math.sqrt(1.0 - lam * lam)) / quadrature_K(lam)


class TestSchmidt(unittest.TestCase):
    def test_bell_pair(self):
        s = entanglement.schmidt(np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0), 2, 2)
        self.assertEqual(s.rank, 2)
        self.assertAlmostEqual(entanglement.entanglement_entropy(s), 1.0)

    def test_product(self):
        state = np.kron([0.6, 0.8], [1.0, 0.0, 0.0])
        s = entanglement.schmidt(state, 2, 3)
        self.assertEqual(s.rank, 1)
        self.assertAlmostEqual(entanglement.entanglement_entropy(s), 0.0)

    def test_contract(self):
        with self.assertRaises(exceptions.NormalizationError):
            entanglement.schmidt(np.ones(4), 2, 2)
        with self.assertRaises(exceptions.ContractViolation):
            entanglement.schmidt(np.ones(4) / 2.0, 3, 2)


class TestMajorization(unittest.TestCase):
    def test_prob_vector_contract(self):
        with self.assertRaises(exceptions.NormalizationError):
            ProbVector([0.5, 0.6])
        with self.assertRaises(exceptions.NormalizationError):
            ProbVector([1.5, -0.5])

    def test_shannon_entropy(self):
        self.assertAlmostEqual(entanglement.shannon_entropy(ProbVector([0.5, 0.25, 0.25])), 1.5)

    def test_uniform_is_majorized_by_everything(self):
        uniform = [0.25] * 4
        for other in ([1.0, 0.0, 0.0, 0.0], [0.4, 0.3, 0.2, 0.1], [0.25] * 4):
            with self.subTest(other=other):
                self.assertTrue(entanglement.majorizes(uniform, other))
        self.assertFalse(entanglement.majorizes([1.0, 0.0], [0.5, 0.5]))

    def test_strict(self):
        self.assertTrue(entanglement.strictly_majorizes([0.5, 0.5], [0.9, 0.1]))
        self.assertFalse(entanglement.strictly_majorizes([0.5, 0.5], [0.5, 0.5]))

    def test_pads_shorter_vectors(self):
        self.assertTrue(entanglement.majorizes([0.5, 0.25, 0.25], [0.5, 0.5]))

    def test_doubly_stochastic_weights(self):
        omega, omega_tilde = 1.0, 2.0
        pair = entanglement.doubly_stochastic_weights(omega, omega_tilde)
        self.assertIsNotNone(pair)
        self.assertAlmostEqual(sum(pair), 1.0, delta=1e-12)
        rebuilt = entanglement.mix_permutations(pair, entanglement.mode_probs(omega_tilde))
        npt.assert_allclose(rebuilt, entanglement.mode_probs(omega).entries, atol=1e-12)

    def test_no_weights_against_the_flow(self):
        self.assertIsNone(entanglement.doubly_stochastic_weights(2.0, 1.0))
        with self.assertRaises(exceptions.DomainError):
            entanglement.doubly_stochastic_weights(1.0, 0.0)

    def test_frozen_mode(self):
        npt.assert_array_equal(entanglement.mode_probs(math.inf).entries, [1.0, 0.0])


class TestIsingDispersion(unittest.TestCase):
    def test_matches_quadrature(self):
        for lam in (0.5, 2.0, 3.0):
            for j in range(6):
                with self.subTest(lam=lam, j=j):
                    self.assertAlmostEqual(
                        entanglement.ising_mode_dispersion(lam, j), quadrature_dispersion(lam, j), delta=1e-9
                    )

    def test_domain(self):
        for lam, j in ((1.0, 1), (0.0, 1), (-2.0, 1), (2.0, -1)):
            with self.subTest(lam=lam, j=j), self.assertRaises(exceptions.DomainError):
                entanglement.ising_mode_dispersion(lam, j)

    def test_grows_away_from_the_critical_point(self):
        for side in ("above", "below"):
            disp = ModeDispersion.ising(side)
            for tau in (0.1, 0.3, 0.5):
                check = entanglement.infinitesimal_flow_check(disp, tau, 0.02, range(6))
                with self.subTest(side=side, tau=tau):
                    self.assertTrue(check.holds)
                    self.assertEqual(check.excluded, [] if side == "above" else [0])

    def test_saturated_block_matches_the_free_fermion_limit(self):
        for lam in (1.5, 2.0):
            with self.subTest(lam=lam):
                long_block = freefermion.block_entropy(XYParams(1.0, lam), 64)
                self.assertAlmostEqual(entanglement.ising_saturated_entropy(lam), long_block, delta=1e-5)

    def test_reversed_step_fails(self):
        check = entanglement.infinitesimal_flow_check(ModeDispersion.ising("above"), 0.3, -0.02, range(4))
        self.assertFalse(check)


class TestFlowAudit(unittest.TestCase):
    def test_truncated_spectrum(self):
        spectrum = entanglement.truncated_spectrum(1.2, 6)
        self.assertEqual(len(spectrum), 64)
        self.assertAlmostEqual(float(spectrum.entries.sum()), 1.0, delta=1e-12)
        for M in (0, 17):
            with self.subTest(M=M), self.assertRaises(exceptions.ResourceError):
                entanglement.truncated_spectrum(1.2, M)

    def test_flow_towards_large_field(self):
        audit = entanglement.flow_majorization_audit(RG_PATH, 8)
        self.assertEqual(len(audit.steps), 10)
        self.assertTrue(audit.passed)
        for step in audit.steps:
            self.assertTrue(step.strict)
            self.assertLessEqual(step.entropy_to, step.entropy_from)
            self.assertLessEqual(step.reconstruction_error, 1e-12)

    def test_reversed_flow_is_flagged(self):
        audit = entanglement.flow_majorization_audit(RG_PATH[::-1], 8)
        self.assertEqual(len(audit.violations), 10)

    def test_bad_paths(self):
        for path in ([], [0.9, 1.1], [1.1, 1.3, 1.2]):
            with self.subTest(path=path), self.assertRaises(exceptions.DomainError):
                entanglement.flow_majorization_audit(path, 4)


class TestKac(unittest.TestCase):
    def test_ising_central_charge(self):
        self.assertEqual(entanglement.kac_central_charge(3), Fraction(1, 2))
        self.assertEqual(entanglement.kac_central_charge(4), Fraction(7, 10))

    def test_identity_weight(self):
        for m in range(3, 8):
            with self.subTest(m=m):
                self.assertEqual(entanglement.kac_weight(m, 1, 1), 0)

    def test_ising_spin_weight(self):
        self.assertEqual(entanglement.kac_weight(3, 2, 2), Fraction(1, 16))

    def test_domain(self):
        with self.assertRaises(exceptions.DomainError):
            entanglement.kac_central_charge(2)
        with self.assertRaises(exceptions.DomainError):
            entanglement.kac_weight(3, 1, 2)


if __name__ == "__main__":
    unittest.main()
