"""Lipkin-Meshkov-Glick model in the maximum spin sector.

    H = -(1/N) sum_{i<j} (sx_i sx_j + g sy_i sy_j) - h sum_i sz_i

The Dicke matrix couples n to n +- 2 only, so it splits into two tridiagonal
parity blocks; the ground state is taken from the block with the lower level.
"""
from __future__ import annotations

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore
import scipy.linalg
import scipy.sparse as sparse

import consts
import entanglement
import exceptions
import numerics
from freefermion import PAULI_X, PAULI_Y, PAULI_Z, chain_entropies, lowest_state, parity_indices, site_operator
from numerics import FitResult

logger = logging.getLogger(__name__)


class LMGParams:
    def __init__(self, gamma: float, h: float, N: int):
        if N < 2:
            raise exceptions.DomainError("the LMG model needs N >= 2")
        if N > consts.LMG_MAX_N:
            raise exceptions.ResourceError(f"Dicke sectors are limited to N <= {consts.LMG_MAX_N}")
        self.gamma = float(gamma)
        self.h = float(h)
        self.N = int(N)

    def __repr__(self) -> str:
        return f"LMGParams(gamma={self.gamma}, h={self.h}, N={self.N})"


class DickeVector:
    def __init__(self, N: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (N + 1,):
            raise exceptions.ContractViolation(f"a Dicke vector for N={N} has {N + 1} coefficients")
        if abs(np.linalg.norm(coeffs) - 1.0) > consts.NORM_TOL:
            raise exceptions.NormalizationError("Dicke coefficients must be normalized")
        self.N = N
        self.coeffs = coeffs

    @classmethod
    def basis(cls, N: int, n: int) -> DickeVector:
        coeffs = np.zeros(N + 1)
        coeffs[n] = 1.0
        return cls(N, coeffs)

    @property
    def peak(self) -> int:
        return int(np.argmax(np.abs(self.coeffs)))


def _dicke_bands(p: LMGParams) -> Tuple[np.ndarray, np.ndarray]:
    """Diagonal over n and the coupling between n and n + 2."""
    N, S = p.N, p.N / 2.0
    m = np.arange(N + 1) - S
    diagonal = (1.0 + p.gamma) / N * (m ** 2 + N / 2.0 - S * (S + 1.0)) - 2.0 * p.h * m
    low = m[:-2]
    ladder = np.sqrt((S - low) * (S + low + 1.0) * (S - low - 1.0) * (S + low + 2.0))
    return diagonal, (p.gamma - 1.0) / (2.0 * N) * ladder


def lmg_hamiltonian_dicke(p: LMGParams) -> np.ndarray:
    diagonal, coupling = _dicke_bands(p)
    return np.diag(diagonal) + np.diag(coupling, 2) + np.diag(coupling, -2)


def _parity_ground(p: LMGParams, parity: int) -> Tuple[float, np.ndarray]:
    diagonal, coupling = _dicke_bands(p)
    index = np.arange(parity, p.N + 1, 2)
    vector = np.zeros(p.N + 1)
    if index.size == 1:
        vector[index] = 1.0
        return float(diagonal[index[0]]), vector
    try:
        values, vectors = scipy.linalg.eigh_tridiagonal(
            diagonal[index], coupling[index[:-1]], select="i", select_range=(0, 0)
        )
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise exceptions.NumericError(f"tridiagonal eigensolver failed for {p}: {exc}") from exc
    block = vectors[:, 0]
    vector[index] = block / np.linalg.norm(block)
    return float(values[0]), _fix_sign(vector)


def _fix_sign(vector: np.ndarray) -> np.ndarray:
    return vector if vector[np.argmax(np.abs(vector))] > 0 else -vector


def _preferred_parity(p: LMGParams, energies: Dict[int, float]) -> int:
    natural = p.N % 2
    other = 1 - natural
    scale = max(1.0, abs(energies[natural]))
    if energies[other] < energies[natural] - consts.LMG_TIE_TOL * scale:
        return other
    return natural


def lmg_ground_state(p: LMGParams, broken: bool = False) -> DickeVector:
    """Lowest Dicke state; `broken` superposes the ground states of both parities."""
    grounds = {parity: _parity_ground(p, parity) for parity in (0, 1)}
    if broken:
        coeffs = (grounds[0][1] + grounds[1][1]) / math.sqrt(2.0)
        return DickeVector(p.N, _fix_sign(coeffs))
    parity = _preferred_parity(p, {q: e for q, (e, _) in grounds.items()})
    logger.debug("LMG %s ground state in the n = %d mod 2 block", p, parity)
    return DickeVector(p.N, grounds[parity][1])


def lmg_ground_energy(p: LMGParams) -> float:
    return min(_parity_ground(p, parity)[0] for parity in (0, 1))


def _block_amplitudes(v: DickeVector, L: int) -> np.ndarray:
    """W[l, j]: amplitude of |L, l> (x) |N-L, j> in v."""
    N = v.N
    if not 1 <= L <= N - 1:
        raise exceptions.DomainError(f"block size must lie in 1 .. {N - 1}")
    l = np.arange(L + 1)[:, None]
    j = np.arange(N - L + 1)[None, :]
    log_p = numerics.log_binomial(L, l) + numerics.log_binomial(N - L, j) - numerics.log_binomial(N, l + j)
    return v.coeffs[l + j] * np.exp(0.5 * log_p)


def dicke_reduced_density(v: DickeVector, L: int) -> np.ndarray:
    W = _block_amplitudes(v, L)
    return W @ W.T


def dicke_block_entropy(v: DickeVector, L: int) -> float:
    W = _block_amplitudes(v, L)
    return entanglement.entanglement_entropy(entanglement.schmidt(W.ravel(), *W.shape))


def lmg_block_entropy(p: LMGParams, L: int, broken: bool = False) -> float:
    return dicke_block_entropy(lmg_ground_state(p, broken), L)


def isotropic_entropy_closed_form(N: int, L: int, h: float, offset: float = 0.0) -> float:
    """Gaussian-limit entropy of the isotropic model; `offset` restores the dropped constant."""
    if abs(h) >= 1.0:
        return 0.0
    return 0.5 * math.log2(L * (N - L) / N) + 0.5 * math.log2(1.0 - h * h) + offset


def calibrate_offset(N: int, L: int, h: float = 0.0) -> float:
    """Exact minus closed-form entropy at one reference point."""
    exact = lmg_block_entropy(LMGParams(1.0, h, N), L)
    return exact - isotropic_entropy_closed_form(N, L, h)


def lmg_fit_suite(
    N: int = 2000,
    approach_L: Optional[int] = None,
    epsilons: Sequence[float] = tuple(np.geomspace(0.03, 0.15, 5)),
    size_Ls: Optional[Sequence[int]] = None,
    gammas: Sequence[float] = (0.0, 0.25, 0.5),
) -> Dict[str, FitResult]:
    """The three scaling laws of the model.

    field_approach: S against log2|1 - h| for h = 1 + eps at g = 0.
    critical_size: S against log2(L(N - L)/N) at h = 1, g = 0, by default for
    L from N/20 up to N/2.
    anisotropy_offset: S against log2(1 - g) at h = 1, L = N/4.
    """
    L = approach_L or N // 4
    if size_Ls is None:
        size_Ls = sorted({max(1, int(round(f * N))) for f in consts.LMG_SIZE_FRACTIONS})
    eps = np.asarray(epsilons, dtype=float)
    approach = [lmg_block_entropy(LMGParams(0.0, 1.0 + e, N), L) for e in eps]
    size = [lmg_block_entropy(LMGParams(0.0, 1.0, N), l) for l in size_Ls]
    anisotropy = [lmg_block_entropy(LMGParams(g, 1.0, N), N // 4) for g in gammas]

    size_Ls = np.asarray(size_Ls, dtype=float)
    fits = {
        "field_approach": numerics.linear_fit(np.log2(eps), approach),
        "critical_size": numerics.linear_fit(np.log2(size_Ls * (N - size_Ls) / N), size),
        "anisotropy_offset": numerics.linear_fit(np.log2(1.0 - np.asarray(gammas, dtype=float)), anisotropy),
    }
    for name, fit in fits.items():
        logger.info("LMG %s: %s", name, fit)
    return fits


def lmg_dense_oracle(p: LMGParams) -> Tuple[float, np.ndarray, np.ndarray]:
    """Ground energy, state and chain entropies of the full 2^N spin hamiltonian."""
    N = p.N
    if N > consts.LMG_DENSE_MAX_N:
        raise exceptions.ResourceError(f"the LMG spin oracle is limited to N <= {consts.LMG_DENSE_MAX_N}")
    dim = 2 ** N
    sx = [site_operator(PAULI_X, j, N) for j in range(N)]
    sy = [site_operator(PAULI_Y, j, N) for j in range(N)]
    H = sparse.csr_matrix((dim, dim), dtype=complex)
    for i in range(N):
        for j in range(i + 1, N):
            H = H - (sx[i] @ sx[j] + p.gamma * (sy[i] @ sy[j])) / N
        H = H - p.h * site_operator(PAULI_Z, i, N)
    H = H.real.tocsr()

    grounds = {}
    for parity in (0, 1):
        # n up spins with n = N mod 2 is the sector prod sz = +1
        index = parity_indices(N, 1 if parity == N % 2 else -1)
        energy, vector = lowest_state(H[index][:, index])
        state = np.zeros(dim)
        state[index] = vector / np.linalg.norm(vector)
        grounds[parity] = (energy, state)
    parity = _preferred_parity(p, {q: e for q, (e, _) in grounds.items()})
    energy, state = grounds[parity]
    return energy, state, chain_entropies(state, N)


def entropy_surface(
    N: int, L: int, gammas: Sequence[float], hs: Sequence[float]
) -> List[Tuple[float, float, float]]:
    return [(float(g), float(h), lmg_block_entropy(LMGParams(g, h, N), L)) for g in gammas for h in hs]


def ratio_collapse(gamma: float, h: float, ratio: float, N_list: Sequence[int]) -> np.ndarray:
    """Entropies at fixed L/N; their spread measures how well they collapse."""
    if not 0.0 < ratio < 1.0:
        raise exceptions.DomainError("the block ratio must lie strictly between 0 and 1")
    return np.array([
        lmg_block_entropy(LMGParams(gamma, h, N), max(1, int(round(ratio * N)))) for N in N_list
    ])
