import math
import unittest

import numpy as np  # type: ignore
import numpy.testing as npt
from scipy.special import ellipk
from scipy.stats import hypergeom

import exceptions
import numerics


class TestEigen(unittest.TestCase):
    def setUp(self):
        rng = np.random.default_rng(7)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        self.m = a + a.conj().T

    def test_trace_is_sum_of_eigenvalues(self):
        values, vectors = numerics.hermitian_eigen(self.m)
        self.assertAlmostEqual(float(np.trace(self.m).real), float(values.sum()), delta=1e-10)
        npt.assert_allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)

    def test_square_has_squared_eigenvalues(self):
        values, _ = numerics.hermitian_eigen(self.m)
        squared, _ = numerics.hermitian_eigen(self.m @ self.m)
        npt.assert_allclose(np.sort(values ** 2), squared, atol=1e-9)

    def test_rejects_non_hermitian(self):
        with self.assertRaises(exceptions.ContractViolation):
            numerics.hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestSvd(unittest.TestCase):
    def test_reconstruction(self):
        m = np.random.default_rng(1).normal(size=(5, 3))
        u, s, vh = numerics.svd(m)
        npt.assert_allclose(u @ np.diag(s) @ vh, m, atol=1e-12)
        self.assertTrue(np.all(np.diff(s) <= 0.0))


class TestEllipticK(unittest.TestCase):
    def test_zero_modulus(self):
        self.assertAlmostEqual(numerics.elliptic_K(0.0), math.pi / 2, delta=1e-15)

    def test_matches_scipy_parameter_form(self):
        for k in (0.1, 0.5, 0.9, 0.999):
            with self.subTest(k=k):
                self.assertAlmostEqual(numerics.elliptic_K(k), float(ellipk(k * k)), delta=1e-12)

    def test_domain(self):
        for k in (1.0, -0.1, 1.5):
            with self.subTest(k=k), self.assertRaises(exceptions.DomainError):
                numerics.elliptic_K(k)


class TestLinearFit(unittest.TestCase):
    def test_exact_line(self):
        fit = numerics.linear_fit([1.0, 2.0, 3.0], [3.0, 5.0, 7.0])
        self.assertAlmostEqual(fit.slope, 2.0, delta=1e-12)
        self.assertAlmostEqual(fit.intercept, 1.0, delta=1e-12)
        self.assertLess(fit.max_abs_residual, 1e-12)
        npt.assert_allclose(fit.predict([4.0]), [9.0])

    def test_degenerate(self):
        with self.assertRaises(exceptions.ContractViolation):
            numerics.linear_fit([1.0, 1.0], [0.0, 1.0])


class TestHypergeometric(unittest.TestCase):
    def test_matches_scipy(self):
        N, n, L = 40, 17, 12
        expected = hypergeom(N, n, L).pmf(np.arange(L + 1))
        npt.assert_allclose(numerics.hypergeometric_distribution(N, n, L), expected, atol=1e-14)

    def test_normalized(self):
        self.assertAlmostEqual(float(numerics.hypergeometric_distribution(1000, 300, 250).sum()), 1.0, delta=1e-12)

    def test_out_of_support_is_zero(self):
        self.assertEqual(numerics.hypergeometric_pmf(10, 2, 5, 3), 0.0)


class TestEntropies(unittest.TestCase):
    def test_shannon_bits(self):
        self.assertAlmostEqual(numerics.shannon_bits([0.5, 0.5]), 1.0)
        self.assertAlmostEqual(numerics.shannon_bits([1.0, 0.0]), 0.0)
        self.assertAlmostEqual(numerics.shannon_bits([0.25] * 4), 2.0)

    def test_binary_entropy(self):
        npt.assert_allclose(numerics.binary_entropy([0.0, 0.5, 1.0]), [0.0, 1.0, 0.0], atol=1e-15)


if __name__ == "__main__":
    unittest.main()
