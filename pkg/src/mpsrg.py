"""Translation-invariant matrix product states and their exact RG flow.

A state on N sites is tr(B A^{s1} ... A^{sN}); tensors are stored as a
(d, D, D) array. The transfer matrix is E = sum_s conj(A^s) (x) A^s with the
bra factor first, so products of site tensors map to products of E.
"""
from __future__ import annotations

import logging
import math
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore
import scipy.linalg
from scipy.special import entr

import consts
import exceptions
import numerics
from phase_types import FixedPointKind

logger = logging.getLogger(__name__)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class UniformMPS:
    def __init__(self, tensors, boundary: Optional[np.ndarray] = None):
        tensors = np.asarray(tensors, dtype=complex)
        if tensors.ndim != 3 or tensors.shape[1] != tensors.shape[2]:
            raise exceptions.ContractViolation(f"site tensors must be (d, D, D), got {tensors.shape}")
        if not np.all(np.isfinite(tensors)):
            raise exceptions.ContractViolation("site tensors have non-finite entries")
        self.tensors = tensors
        self.boundary = np.eye(tensors.shape[1], dtype=complex) if boundary is None else np.asarray(boundary, dtype=complex)

    @property
    def d(self) -> int:
        return self.tensors.shape[0]

    @property
    def D(self) -> int:
        return self.tensors.shape[1]

    @property
    def canonical(self) -> bool:
        return canonical_check(self)

    def to_state(self, N: int) -> np.ndarray:
        """Amplitudes tr(B A^{s1} ... A^{sN}) over all d^N configurations."""
        strings = site_strings(self, N)
        return np.einsum("ab,tba->t", self.boundary, strings)

    def __repr__(self) -> str:
        return f"UniformMPS(d={self.d}, D={self.D})"


class TransferMatrix:
    def __init__(self, matrix: np.ndarray):
        self.matrix = matrix
        values = scipy.linalg.eigvals(matrix)
        self.eigenvalues = values[np.argsort(-np.abs(values), kind="stable")]

    @property
    def dominant(self) -> complex:
        return self.eigenvalues[0]

    @property
    def subdominant(self) -> complex:
        return self.eigenvalues[1] if self.eigenvalues.size > 1 else 0.0

    def is_idempotent(self, tol: float = consts.FIXED_POINT_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix @ self.matrix - self.matrix)) <= tol)

    @property
    def rank(self) -> int:
        return int(np.linalg.matrix_rank(self.matrix, tol=consts.FIXED_POINT_TOL))


class FixedPointLabel:
    """kind plus the phase theta where the family has one.

    Other parameters of the W and domain-wall families depend on the
    gauge of the site tensors and are not reported.
    """

    def __init__(self, kind: FixedPointKind, parameters: Optional[Dict[str, float]] = None):
        self.kind = kind
        self.parameters = parameters or {}

    def __repr__(self) -> str:
        return f"FixedPointLabel({self.kind.value}, {self.parameters})"


def site_strings(m: UniformMPS, n: int) -> np.ndarray:
    """Products A^{s1} ... A^{sn} for all d^n strings, shape (d^n, D, D)."""
    if n < 1:
        raise exceptions.DomainError("strings need at least one site")
    strings = m.tensors
    for _ in range(n - 1):
        strings = np.einsum("tab,sbc->tsac", strings, m.tensors).reshape(-1, m.D, m.D)
    return strings


def mps_from_state(state: np.ndarray, N: int, d: int) -> List[np.ndarray]:
    """Left-canonical open-boundary tensors, shapes (d, D_left, D_right)."""
    state = np.asarray(state, dtype=complex)
    if state.ndim != 1 or state.size != d ** N:
        raise exceptions.ContractViolation(f"a state on {N} sites of dimension {d} has {d ** N} amplitudes")
    if abs(np.linalg.norm(state) - 1.0) > consts.NORM_TOL:
        raise exceptions.NormalizationError("mps_from_state needs a normalized state")

    tensors = []
    rest = state.reshape(1, -1)
    for _ in range(N - 1):
        left = rest.shape[0]
        U, s, Vh = numerics.svd(rest.reshape(left * d, -1))
        keep = max(1, int(np.count_nonzero(s > consts.SVD_TOL * max(s[0], 1.0))))
        tensors.append(U[:, :keep].reshape(left, d, keep).transpose(1, 0, 2))
        rest = s[:keep, None] * Vh[:keep]
    tensors.append(rest.reshape(rest.shape[0], d, 1).transpose(1, 0, 2))
    return tensors


def contract_mps(tensors: Sequence[np.ndarray]) -> np.ndarray:
    state = np.ones((1, 1), dtype=complex)
    for tensor in tensors:
        # state has shape (configurations, bond)
        state = np.einsum("tb,sbc->tsc", state, tensor).reshape(-1, tensor.shape[2])
    if state.shape[1] != 1:
        raise exceptions.ContractViolation("the last tensor must close the open boundary")
    return state[:, 0]


def canonical_check(m: UniformMPS) -> bool:
    total = np.einsum("sba,sbc->ac", m.tensors.conj(), m.tensors)
    return bool(np.max(np.abs(total - np.eye(m.D))) <= consts.CANONICAL_TOL)


def transfer_matrix(m: UniformMPS) -> TransferMatrix:
    matrix = sum(np.kron(a.conj(), a) for a in m.tensors)
    return TransferMatrix(matrix)


def mps_norm(m: UniformMPS, N: int) -> float:
    if N < 1:
        raise exceptions.DomainError("the norm needs N >= 1")
    E = transfer_matrix(m).matrix
    value = np.trace(np.kron(m.boundary.conj(), m.boundary) @ np.linalg.matrix_power(E, N))
    if abs(value.imag) > consts.CANONICAL_TOL * max(1.0, abs(value)):
        raise exceptions.ConsistencyError(f"norm has an imaginary part {value.imag:.3g}")
    return float(value.real)


def operator_transfer(m: UniformMPS, O: np.ndarray) -> np.ndarray:
    """sum_{s,t} <s|O|t> conj(A^s) (x) A^t."""
    O = np.asarray(O, dtype=complex)
    if O.shape != (m.d, m.d):
        raise exceptions.ContractViolation(f"operators act on the {m.d}-dimensional site space")
    return sum(O[s, t] * np.kron(m.tensors[s].conj(), m.tensors[t]) for s in range(m.d) for t in range(m.d))


def _unique_fixed_point(E: np.ndarray) -> Tuple[np.ndarray, np.ndarray, complex]:
    values, left, right = scipy.linalg.eig(E, left=True, right=True)
    order = np.argsort(-np.abs(values), kind="stable")
    lead = values[order[0]]
    if values.size > 1 and abs(values[order[1]]) >= abs(lead) * (1.0 - consts.EIGEN_TOL):
        raise exceptions.ClusteringViolation(
            "the dominant eigenvalue of the transfer matrix is degenerate, use a finite N"
        )
    x = left[:, order[0]].conj()
    y = right[:, order[0]]
    return x / (x @ y), y, lead


def two_point(
    m: UniformMPS, O1: np.ndarray, O2: np.ndarray, r: int, N: Optional[int] = None
) -> complex:
    """<O1 at 0, O2 at r>; finite N gives the unnormalized trace, N=None the infinite chain."""
    if r < 1:
        raise exceptions.DomainError("separation must be at least 1")
    E = transfer_matrix(m).matrix
    first, second = operator_transfer(m, O1), operator_transfer(m, O2)
    between = np.linalg.matrix_power(E, r - 1)
    if N is not None:
        if N < r + 1:
            raise exceptions.DomainError("the chain is shorter than the separation")
        rest = np.linalg.matrix_power(E, N - r - 1)
        return complex(np.trace(rest @ first @ between @ second))
    x, y, lead = _unique_fixed_point(E)
    return complex(x @ first @ between @ second @ y / lead ** (r + 1))


def expectation(m: UniformMPS, O: np.ndarray) -> complex:
    x, y, lead = _unique_fixed_point(transfer_matrix(m).matrix)
    return complex(x @ operator_transfer(m, O) @ y / lead)


def connected_two_point(m: UniformMPS, O1: np.ndarray, O2: np.ndarray, r: int) -> complex:
    return two_point(m, O1, O2, r) - expectation(m, O1) * expectation(m, O2)


def correlation_lengths(t: TransferMatrix) -> np.ndarray:
    lead = abs(t.dominant)
    lengths = []
    for value in t.eigenvalues[1:]:
        ratio = abs(value) / lead
        if ratio >= 1.0 - consts.EIGEN_TOL:
            lengths.append(math.inf)
        elif ratio < consts.HERMITIAN_TOL:
            lengths.append(0.0)
        else:
            lengths.append(-1.0 / math.log(ratio))
    return np.array(lengths)


def rg_step(m: UniformMPS) -> UniformMPS:
    """Block two sites and keep only the support of the blocked tensor.

    The pair tensor (A^s A^t) seen as a (d^2, D^2) matrix is U diag(sigma) Vh;
    the new site tensors are sigma_k Vh[k]. U is an isometry on the physical
    pair, so the new transfer matrix is E^2.
    """
    D = m.D
    pairs = np.einsum("sab,tbc->stac", m.tensors, m.tensors).reshape(m.d * m.d, D * D)
    _, sigma, Vh = numerics.svd(pairs)
    keep = max(1, int(np.count_nonzero(sigma > consts.RG_SVD_CUTOFF)))
    tensors = (sigma[:keep, None] * Vh[:keep]).reshape(keep, D, D)
    logger.debug("rg step: d %d -> %d at D=%d", m.d, keep, D)
    return UniformMPS(tensors, m.boundary)


def rg_trajectory(m: UniformMPS, steps: int) -> List[Tuple[UniformMPS, np.ndarray]]:
    trajectory = [(m, transfer_matrix(m).eigenvalues)]
    for _ in range(steps):
        m = rg_step(m)
        trajectory.append((m, transfer_matrix(m).eigenvalues))
    return trajectory


def aklt_family(mu: float) -> UniformMPS:
    """sqrt(1 - 3 mu^2) on the identity branch and i mu sigma on the three Pauli branches."""
    limit = 1.0 / math.sqrt(3.0)
    if not 0.0 <= mu <= limit + consts.CANONICAL_TOL:
        raise exceptions.DomainError(f"mu must lie in [0, 1/sqrt(3)], got {mu}")
    identity = math.sqrt(max(0.0, 1.0 - 3.0 * mu * mu)) * PAULI[0]
    return UniformMPS([identity] + [1j * mu * sigma for sigma in PAULI[1:]])


def aklt_parameter(m: UniformMPS) -> float:
    """mu recovered from the subdominant transfer eigenvalue 1 - 4 mu^2."""
    t = transfer_matrix(m)
    second = (t.subdominant / t.dominant).real
    return math.sqrt(max(0.0, (1.0 - second) / 4.0))


def aklt_flow_entropy(L: int, mu: float) -> float:
    """Entropy of a block of 2^L sites, equivalently one site after L RG steps."""
    if not 0.0 <= mu <= 1.0 / math.sqrt(3.0) + consts.CANONICAL_TOL:
        raise exceptions.DomainError(f"mu must lie in [0, 1/sqrt(3)], got {mu}")
    x = (1.0 - 4.0 * mu * mu) ** (2 ** L)
    spectrum = np.array([(1.0 + 3.0 * x) / 4.0] + [(1.0 - x) / 4.0] * 3)
    return float(np.sum(entr(np.clip(spectrum, 0.0, None))) / math.log(2.0))


def _environment(E: np.ndarray) -> np.ndarray:
    """Projector onto the eigenvectors of E with eigenvalue equal to the dominant one."""
    values, vectors = scipy.linalg.eig(E)
    lead = values[np.argmax(np.abs(values))]
    unit = np.abs(values - lead) <= consts.EIGEN_TOL * max(1.0, abs(lead))
    if jordan_defect(E, np.mean(values[unit])) > 0:
        raise exceptions.DomainError("the transfer matrix has a Jordan block at its dominant eigenvalue")
    inverse = scipy.linalg.inv(vectors)
    return vectors[:, unit] @ inverse[unit, :]


def _spectrum_entropy(values: np.ndarray) -> float:
    values = values.real / values.real.sum()
    values = np.clip(values, 0.0, None)
    return numerics.shannon_bits(values / values.sum())


def block_entropy(m: UniformMPS, n_sites: int, dense: Optional[bool] = None) -> float:
    """Entropy of n contiguous sites of the infinite chain.

    The dense route builds the d^n x d^n reduced state; otherwise the nonzero
    spectrum comes from the D^2 x D^2 matrix G^1/2 W G^1/2 with G the Gram
    matrix of the site strings (a reshuffled E^n) and W the environment.
    """
    if n_sites < 1:
        raise exceptions.DomainError("block must hold at least one site")
    D = m.D
    E = transfer_matrix(m).matrix
    Pi = _environment(E).reshape(D, D, D, D)  # (j, b, i, a): right bra, right ket, left bra, left ket
    if dense is None:
        dense = n_sites <= consts.DENSE_BLOCK_MAX_SITES and m.d ** n_sites <= consts.DENSE_EIGH_MAX_DIM
    if dense:
        P = site_strings(m, n_sites)
        rho = np.einsum("jbia,tab,sij->ts", Pi, P, P.conj())
        rho = 0.5 * (rho + rho.conj().T)
        return _spectrum_entropy(scipy.linalg.eigvalsh(rho))

    G = np.linalg.matrix_power(E, n_sites).reshape(D, D, D, D).transpose(0, 2, 1, 3).reshape(D * D, D * D)
    W = Pi.transpose(3, 1, 2, 0).reshape(D * D, D * D)  # rows (a, b), columns (i, j)
    G = 0.5 * (G + G.conj().T)
    values, vectors = scipy.linalg.eigh(G)
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    M = root @ W @ root
    return _spectrum_entropy(scipy.linalg.eigvalsh(0.5 * (M + M.conj().T)))


def symmetric_fixed_point(D: int) -> UniformMPS:
    """Symmetric superposition of D^2 local states; T^s has a single 1 at row a, column b with s = D a + b."""
    if D < 2:
        raise exceptions.DomainError("the symmetric fixed point needs D >= 2")
    tensors = np.zeros((D * D, D, D))
    for s in range(D * D):
        tensors[s, s // D, s % D] = 1.0
    return UniformMPS(tensors / math.sqrt(D))


def jordan_defect(E: np.ndarray, eigenvalue: complex, tol: float = consts.FIXED_POINT_TOL) -> int:
    """Algebraic minus geometric multiplicity of `eigenvalue`, from ranks of (E - eigenvalue)^k."""
    size = E.shape[0]
    shifted = E - eigenvalue * np.eye(size)
    scale = max(1.0, float(np.max(np.abs(E))))

    def kernel_dim(matrix: np.ndarray) -> int:
        s = numerics.singular_values(matrix)
        borderline = (s > tol * scale) & (s < math.sqrt(tol) * scale)
        if np.any(borderline):
            logger.warning("borderline singular values %s in Jordan detection", s[borderline])
        return size - int(np.count_nonzero(s > tol * scale))

    geometric = kernel_dim(shifted)
    algebraic = kernel_dim(np.linalg.matrix_power(shifted, size))
    return algebraic - geometric


def _has_unit_jordan_block(t: TransferMatrix, tol: float) -> bool:
    # a defective eigenvalue splits by about sqrt(eps), the cluster mean recovers it
    unit = [v for v in t.eigenvalues if abs(abs(v) - 1.0) < 1e-6]
    clusters: List[List[complex]] = []
    for value in unit:
        for cluster in clusters:
            if abs(cluster[0] - value) < 1e-6:
                cluster.append(value)
                break
        else:
            clusters.append([value])
    return any(jordan_defect(t.matrix, np.mean(c), tol) > 0 for c in clusters)


def _close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    return bool(np.max(np.abs(a - b), initial=0.0) <= tol)


def _nonzero(m: UniformMPS, tol: float) -> List[np.ndarray]:
    return [a for a in m.tensors if np.max(np.abs(a)) > tol]


def _phase_idempotent(a: np.ndarray, tol: float) -> Optional[complex]:
    """c with a @ a = c a and |c| = 1, if such a phase exists."""
    square = a @ a
    index = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    c = square[index] / a[index]
    if abs(abs(c) - 1.0) <= tol and _close(square, c * a, tol):
        return c
    return None


def _is_nilpotent(a: np.ndarray, tol: float) -> bool:
    return _close(a @ a, np.zeros_like(a), tol)


def _ratio(product: np.ndarray, target: np.ndarray, tol: float) -> Optional[complex]:
    """c with product = c target, if any."""
    index = np.unravel_index(np.argmax(np.abs(target)), target.shape)
    c = product[index] / target[index]
    return c if _close(product, c * target, tol) else None


def _is_ghz(tensors: List[np.ndarray], tol: float) -> bool:
    if len(tensors) < 2:
        return False
    for i, a in enumerate(tensors):
        if not _close(a @ a, a, tol):
            return False
        for b in tensors[i + 1:]:
            if not (_close(a @ b, np.zeros_like(a), tol) and _close(b @ a, np.zeros_like(a), tol)):
                return False
    return _close(sum(tensors), np.eye(tensors[0].shape[0]), tol)


def _w_type(tensors: List[np.ndarray], tol: float) -> Optional[float]:
    nilpotent = [a for a in tensors if _is_nilpotent(a, tol)]
    invertible = [a for a in tensors if abs(np.linalg.det(a)) > tol]
    if len(nilpotent) != 1 or len(invertible) != 1 or len(tensors) != 2:
        return None
    (N,), (G,) = nilpotent, invertible
    left, right = _ratio(G @ N, N, tol), _ratio(N @ G, N, tol)
    if left is None or right is None or abs(abs(left) - 1.0) > tol or abs(abs(right) - 1.0) > tol:
        return None
    return float(np.angle(right / left))


def _domain_wall(tensors: List[np.ndarray], tol: float) -> Optional[float]:
    walls = [a for a in tensors if _is_nilpotent(a, tol)]
    domains = [(a, _phase_idempotent(a, tol)) for a in tensors if not _is_nilpotent(a, tol)]
    if len(walls) != 1 or not 1 <= len(domains) <= 2 or any(c is None for _, c in domains):
        return None
    (W,) = walls
    zero = np.zeros_like(W)
    # P is the domain to the left of the wall, Q the one to its right
    left = [(a, c) for a, c in domains if _close(a @ W, c * W, tol) and _close(W @ a, zero, tol)]
    right = [(a, c) for a, c in domains if _close(W @ a, c * W, tol) and _close(a @ W, zero, tol)]
    if len(left) != 1 or len(left) + len(right) != len(domains):
        return None
    P, phase = left[0]
    if right:
        Q = right[0][0]
        if not (_close(P @ Q, zero, tol) and _close(Q @ P, zero, tol)):
            return None
    return float(np.angle(phase))


def classify_fixed_point(m: UniformMPS, tol: float = consts.FIXED_POINT_TOL) -> FixedPointLabel:
    """Label m by the algebra of its site tensors, which a change of gauge preserves.

    At D = 2 the maximally entangled symmetric state is reported as
    CLUSTER_VALENCE; SYMMETRIC_D2 is only returned for D >= 3.
    """
    if m.D == 1:
        return FixedPointLabel(FixedPointKind.PRODUCT)
    t = transfer_matrix(m)
    tensors = _nonzero(m, tol)
    if m.D == 2:
        if _is_ghz(tensors, tol):
            return FixedPointLabel(FixedPointKind.GHZ)
        if t.is_idempotent(tol) and t.rank == 1:
            return FixedPointLabel(FixedPointKind.CLUSTER_VALENCE)
        theta = _w_type(tensors, tol)
        if theta is not None and _has_unit_jordan_block(t, tol):
            return FixedPointLabel(FixedPointKind.W_TYPE, {"theta": theta})
        theta = _domain_wall(tensors, tol)
        if theta is not None:
            return FixedPointLabel(FixedPointKind.DOMAIN_WALL, {"theta": theta})
    elif t.is_idempotent(tol) and t.rank == 1:
        return FixedPointLabel(FixedPointKind.SYMMETRIC_D2)
    return FixedPointLabel(FixedPointKind.NONE)


def read_tensor_file(path: str) -> UniformMPS:
    """Plain text: `d D`, then d blocks of D rows of D entries written `re,im`."""
    try:
        with open(path, encoding="utf-8") as f:
            lines = [line.split() for line in f if line.strip() and not line.lstrip().startswith("#")]
    except OSError as exc:
        raise exceptions.TensorFileError(f"cannot read tensor file {path}: {exc}") from exc
    try:
        d, D = (int(x) for x in lines[0])
        rows = lines[1:]
        if len(rows) != d * D or any(len(row) != D for row in rows):
            raise ValueError(f"expected {d * D} rows of {D} entries")
        values = [[complex(*(float(part) for part in entry.split(","))) for entry in row] for row in rows]
    except (ValueError, TypeError, IndexError) as exc:
        raise exceptions.TensorFileError(f"malformed tensor file {path}: {exc}") from exc
    return UniformMPS(np.array(values).reshape(d, D, D))


def write_tensor_file(path: str, m: UniformMPS) -> None:
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(f"{m.d} {m.D}\n")
            for a in m.tensors:
                for row in a:
                    f.write(" ".join(f"{z.real!r},{z.imag!r}" for z in row) + "\n")
                f.write("\n")
    except OSError as exc:
        raise exceptions.OutputError(f"cannot write tensor file {path}: {exc}") from exc
