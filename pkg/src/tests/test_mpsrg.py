import math
import os
import tempfile
import unittest

import numpy as np  # type: ignore
import numpy.testing as npt

import exceptions
import mpsrg
import state_factories
from mpsrg import UniformMPS
from phase_types import FixedPointKind

# spin-1 S^z in the cartesian basis of the AKLT tensors
SPIN_Z = np.array([[0.0, -1j, 0.0], [1j, 0.0, 0.0], [0.0, 0.0, 0.0]])


def random_canonical(d: int, D: int, seed: int) -> UniformMPS:
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(d * D, D)) + 1j * rng.normal(size=(d * D, D))
    q, _ = np.linalg.qr(a)
    return UniformMPS(q.reshape(d, D, D))


class TestTransferMatrix(unittest.TestCase):
    def test_aklt_spectrum(self):
        t = mpsrg.transfer_matrix(state_factories.aklt)
        npt.assert_allclose(np.sort(t.eigenvalues.real), [-1 / 3, -1 / 3, -1 / 3, 1.0], atol=1e-12)
        self.assertAlmostEqual(float(mpsrg.correlation_lengths(t)[0]), 1.0 / math.log(3.0), delta=1e-12)

    def test_aklt_norm(self):
        for N in (2, 5, 8):
            with self.subTest(N=N):
                self.assertAlmostEqual(mpsrg.mps_norm(state_factories.aklt, N), 1.0 + 3.0 * (-1.0 / 3.0) ** N, delta=1e-12)

    def test_canonical(self):
        self.assertTrue(state_factories.aklt.canonical)
        self.assertTrue(random_canonical(2, 3, 0).canonical)
        self.assertFalse(state_factories.w_state().canonical)

    def test_aklt_correlations_decay_with_the_subdominant_eigenvalue(self):
        m = state_factories.aklt
        self.assertAlmostEqual(abs(mpsrg.expectation(m, SPIN_Z)), 0.0, delta=1e-12)
        c2 = mpsrg.connected_two_point(m, SPIN_Z, SPIN_Z, 2)
        c3 = mpsrg.connected_two_point(m, SPIN_Z, SPIN_Z, 3)
        self.assertGreater(abs(c2), 1e-3)
        self.assertAlmostEqual(c3 / c2, -1.0 / 3.0, delta=1e-12)

    def test_ghz_needs_a_finite_chain(self):
        Z = np.diag([1.0, -1.0])
        with self.assertRaises(exceptions.ClusteringViolation):
            mpsrg.two_point(state_factories.ghz, Z, Z, 2)
        self.assertAlmostEqual(mpsrg.two_point(state_factories.ghz, Z, Z, 2, N=8).real, 2.0, delta=1e-12)
        self.assertTrue(np.isinf(mpsrg.correlation_lengths(mpsrg.transfer_matrix(state_factories.ghz))[0]))
        self.assertAlmostEqual(mpsrg.mps_norm(state_factories.ghz, 8), 2.0, delta=1e-12)


class TestRenormalization(unittest.TestCase):
    def test_step_squares_the_transfer_matrix(self):
        for d, D in ((2, 2), (2, 3), (3, 2), (3, 3)):
            for seed in range(3):
                m = random_canonical(d, D, seed)
                E = mpsrg.transfer_matrix(m).matrix
                with self.subTest(d=d, D=D, seed=seed):
                    npt.assert_allclose(mpsrg.transfer_matrix(mpsrg.rg_step(m)).matrix, E @ E, atol=1e-9)

    def test_aklt_family_flow(self):
        for mu in (0.1, 0.3, 0.45, 1 / math.sqrt(3.0)):
            trajectory = mpsrg.rg_trajectory(mpsrg.aklt_family(mu), 4)
            mus = [mpsrg.aklt_parameter(m) for m, _ in trajectory]
            with self.subTest(mu=mu):
                self.assertAlmostEqual(mus[0], mu, delta=1e-10)
                for before, after in zip(mus, mus[1:]):
                    self.assertAlmostEqual((1 - 4 * before ** 2) ** 2, 1 - 4 * after ** 2, delta=1e-10)

    def test_aklt_flows_to_the_cluster_fixed_point(self):
        trajectory = mpsrg.rg_trajectory(state_factories.aklt, 6)
        kinds = [mpsrg.classify_fixed_point(m).kind for m, _ in trajectory]
        self.assertEqual(kinds[5:], [FixedPointKind.CLUSTER_VALENCE] * 2)

    def test_family_domain(self):
        with self.assertRaises(exceptions.DomainError):
            mpsrg.aklt_family(0.7)


class TestBlockEntropy(unittest.TestCase):
    def test_flow_entropy_tends_to_two_bits(self):
        self.assertAlmostEqual(mpsrg.aklt_flow_entropy(20, 0.3), 2.0, delta=1e-9)
        self.assertAlmostEqual(mpsrg.aklt_flow_entropy(0, 1 / math.sqrt(3.0)), math.log2(3.0), delta=1e-12)

    def test_flow_entropy_matches_contraction(self):
        for mu in (0.2, 0.4):
            m = mpsrg.aklt_family(mu)
            for L in range(0, 7):
                with self.subTest(mu=mu, L=L):
                    self.assertAlmostEqual(mpsrg.block_entropy(m, 2 ** L), mpsrg.aklt_flow_entropy(L, mu), delta=1e-8)

    def test_dense_and_fixed_point_routes_agree(self):
        m = random_canonical(2, 2, 11)
        for n in range(1, 5):
            with self.subTest(n=n):
                self.assertAlmostEqual(
                    mpsrg.block_entropy(m, n, dense=True), mpsrg.block_entropy(m, n, dense=False), delta=1e-8
                )

    def test_symmetric_fixed_point(self):
        for D in (2, 3):
            m = mpsrg.symmetric_fixed_point(D)
            with self.subTest(D=D):
                self.assertTrue(mpsrg.transfer_matrix(m).is_idempotent())
                self.assertAlmostEqual(mpsrg.block_entropy(m, 1), math.log2(D * D), delta=1e-12)

    def test_jordan_block_has_no_environment(self):
        with self.assertRaises(exceptions.DomainError):
            mpsrg.block_entropy(state_factories.w_state(0.0), 2)


class TestClassifier(unittest.TestCase):
    def test_canonical_inputs(self):
        cases = [
            (state_factories.product, FixedPointKind.PRODUCT),
            (state_factories.ghz, FixedPointKind.GHZ),
            (state_factories.cluster, FixedPointKind.CLUSTER_VALENCE),
            (mpsrg.symmetric_fixed_point(3), FixedPointKind.SYMMETRIC_D2),
            (state_factories.w_state(0.0), FixedPointKind.W_TYPE),
            (state_factories.domain_wall(0.0), FixedPointKind.DOMAIN_WALL),
        ]
        for m, kind in cases:
            with self.subTest(kind=kind):
                self.assertIs(mpsrg.classify_fixed_point(m).kind, kind)

    def test_phases(self):
        label = mpsrg.classify_fixed_point(state_factories.w_state(0.3))
        self.assertIs(label.kind, FixedPointKind.W_TYPE)
        self.assertAlmostEqual(label.parameters["theta"], 0.3, delta=1e-12)
        label = mpsrg.classify_fixed_point(state_factories.domain_wall(-0.4))
        self.assertIs(label.kind, FixedPointKind.DOMAIN_WALL)
        self.assertAlmostEqual(label.parameters["theta"], -0.4, delta=1e-12)

    def test_aklt_is_not_a_fixed_point(self):
        self.assertIs(mpsrg.classify_fixed_point(state_factories.aklt).kind, FixedPointKind.NONE)

    def test_symmetric_state_label_depends_on_bond_dimension(self):
        self.assertIs(mpsrg.classify_fixed_point(mpsrg.symmetric_fixed_point(2)).kind, FixedPointKind.CLUSTER_VALENCE)
        self.assertIs(mpsrg.classify_fixed_point(mpsrg.symmetric_fixed_point(3)).kind, FixedPointKind.SYMMETRIC_D2)

    def test_gauge_transform_keeps_spectrum_and_label(self):
        states = {
            "ghz": state_factories.ghz,
            "cluster": state_factories.cluster,
            "aklt": state_factories.aklt,
            "w": state_factories.w_state(0.3),
            "domain-wall": state_factories.domain_wall(-0.4),
            "symmetric-D3": mpsrg.symmetric_fixed_point(3),
            "random": random_canonical(2, 3, 5),
        }
        rng = np.random.default_rng(17)
        for name, m in states.items():
            X, _ = np.linalg.qr(rng.normal(size=(m.D, m.D)) + 1j * rng.normal(size=(m.D, m.D)))
            gauged = UniformMPS(np.array([X @ a @ X.conj().T for a in m.tensors]))
            before = mpsrg.transfer_matrix(m).eigenvalues
            after = mpsrg.transfer_matrix(gauged).eigenvalues
            distance = np.abs(before[:, None] - after[None, :])
            label, gauged_label = mpsrg.classify_fixed_point(m), mpsrg.classify_fixed_point(gauged)
            with self.subTest(state=name):
                self.assertLess(distance.min(axis=1).max(), 1e-6)
                self.assertLess(distance.min(axis=0).max(), 1e-6)
                self.assertIs(gauged_label.kind, label.kind)
                for key, value in label.parameters.items():
                    self.assertAlmostEqual(gauged_label.parameters[key], value, delta=1e-9)

    def test_unknown_state(self):
        with self.assertRaises(exceptions.ConfigError):
            state_factories.make_state("dimer")


class TestStates(unittest.TestCase):
    def test_open_chain_decomposition(self):
        rng = np.random.default_rng(3)
        state = rng.normal(size=2 ** 5) + 1j * rng.normal(size=2 ** 5)
        state /= np.linalg.norm(state)
        npt.assert_allclose(mpsrg.contract_mps(mpsrg.mps_from_state(state, 5, 2)), state, atol=1e-12)

    def test_ghz_amplitudes(self):
        state = state_factories.ghz.to_state(3)
        npt.assert_allclose(state, [1, 0, 0, 0, 0, 0, 0, 1], atol=1e-15)

    def test_tensor_file(self):
        m = state_factories.w_state(0.3)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "w.txt")
            mpsrg.write_tensor_file(path, m)
            npt.assert_allclose(mpsrg.read_tensor_file(path).tensors, m.tensors, atol=1e-15)

    def test_malformed_tensor_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "bad.txt")
            with open(path, "w") as f:
                f.write("2 2\n1,0 0,0\n")
            with self.assertRaises(exceptions.TensorFileError):
                mpsrg.read_tensor_file(path)
            with self.assertRaises(exceptions.TensorFileError):
                mpsrg.read_tensor_file(os.path.join(tmp, "missing.txt"))


if __name__ == "__main__":
    unittest.main()
