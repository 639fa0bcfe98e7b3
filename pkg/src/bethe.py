"""Bethe ansatz for the periodic XXZ chain

    H = 1/4 sum_l [ sx_l sx_l+1 + sy_l sy_l+1 + g sz_l sz_l+1 ] - lam M_z

with r reversed (down) spins. Momenta solve N k_i = 2 pi I_i + sum_j theta_ij,
with cot(theta_ij / 2) = g sin(d) / (cos(K/2) - g cos(d)) for d = (k_i - k_j)/2
and K = k_i + k_j, theta taken in (-pi, pi].
"""
from __future__ import annotations

import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore
import scipy.sparse as sparse
from scipy.optimize import root

import consts
import entanglement
import exceptions
from freefermion import lowest_state

logger = logging.getLogger(__name__)


class XXZParams:
    def __init__(self, gamma: float, lam: float, N: int):
        if N % 2 or N < 2:
            raise exceptions.DomainError(f"XXZ chains need an even length, got N={N}")
        if N > consts.BETHE_MAX_N:
            raise exceptions.ResourceError(f"XXZ chains are limited to N <= {consts.BETHE_MAX_N}")
        self.gamma = float(gamma)
        self.lam = float(lam)
        self.N = int(N)

    def __repr__(self) -> str:
        return f"XXZParams(gamma={self.gamma}, lam={self.lam}, N={self.N})"


class BetheSolution:
    def __init__(
        self,
        r: int,
        quantum_numbers: np.ndarray,
        momenta: np.ndarray,
        phases: np.ndarray,
        energy: float,
        residual: float,
    ):
        self.r = r
        self.quantum_numbers = quantum_numbers
        self.momenta = momenta
        self.phases = phases
        self.energy = energy
        self.residual = residual

    def __repr__(self) -> str:
        return f"BetheSolution(r={self.r}, energy={self.energy:.10g}, residual={self.residual:.2g})"


class SpinWavefunction:
    """Amplitudes over all 2^N configurations; bit 1 is a down spin, site 0 the top bit."""

    def __init__(self, N: int, r: int, amplitudes: np.ndarray):
        self.N = N
        self.r = r
        self.amplitudes = amplitudes


def ground_quantum_numbers(N: int, r: int) -> np.ndarray:
    if not 0 <= r <= N // 2:
        raise exceptions.DomainError(f"r must lie in 0 .. {N // 2}, got {r}")
    return np.array([N // 2 - r - 1 + 2 * i for i in range(1, r + 1)], dtype=int)


def phase_matrix(k: np.ndarray, gamma: float) -> np.ndarray:
    r = k.size
    theta = np.zeros((r, r))
    upper_i, upper_j = np.triu_indices(r, 1)
    half_diff = 0.5 * (k[upper_i] - k[upper_j])
    num = gamma * np.sin(half_diff)
    den = np.cos(0.5 * (k[upper_i] + k[upper_j])) - gamma * np.cos(half_diff)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.where(num == 0.0, math.pi, 2.0 * np.arctan(den / num))
    theta[upper_i, upper_j] = values
    theta[upper_j, upper_i] = -values
    return theta


def _residuals(k: np.ndarray, I: np.ndarray, N: int, gamma: float) -> np.ndarray:
    return N * k - 2.0 * math.pi * I - phase_matrix(k, gamma).sum(axis=1)


def _max_residual(k: np.ndarray, I: np.ndarray, N: int, gamma: float) -> float:
    return float(np.max(np.abs(_residuals(k, I, N, gamma)), initial=0.0))


def _initial_momenta(N: int, r: int) -> np.ndarray:
    # exact at gamma = 0 where every theta_ij with i < j equals pi
    return math.pi * (N - r - 1 + 2 * np.arange(1, r + 1)) / N


def _fixed_point(k: np.ndarray, I: np.ndarray, N: int, gamma: float) -> Tuple[np.ndarray, float]:
    best_k, best = k, _max_residual(k, I, N, gamma)
    since_best = 0
    for iteration in range(consts.BETHE_MAX_ITER):
        target = (2.0 * math.pi * I + phase_matrix(k, gamma).sum(axis=1)) / N
        k = (1.0 - consts.BETHE_RELAXATION) * k + consts.BETHE_RELAXATION * target
        residual = _max_residual(k, I, N, gamma)
        if residual < best:
            best_k, best, since_best = k, residual, 0
        else:
            since_best += 1
        if best < consts.BETHE_POLISH or since_best > consts.BETHE_STAGNATION:
            break
    logger.debug("fixed point stopped after %d iterations, residual %.3g", iteration + 1, best)
    return best_k, best


def _polish(k: np.ndarray, I: np.ndarray, N: int, gamma: float) -> Tuple[np.ndarray, float]:
    result = root(_residuals, k, args=(I, N, gamma), method="hybr", tol=1e-14)
    polished = np.asarray(result.x)
    residual = _max_residual(polished, I, N, gamma)
    if residual < _max_residual(k, I, N, gamma):
        return polished, residual
    return k, _max_residual(k, I, N, gamma)


def _homotopy(I: np.ndarray, N: int, gamma: float) -> Tuple[np.ndarray, float]:
    k = _initial_momenta(N, I.size)
    for g in np.linspace(0.0, gamma, consts.HOMOTOPY_STEPS + 1)[1:]:
        k, _ = _polish(k, I, N, g)
    return _polish(k, I, N, gamma)


def solve_bethe(
    p: XXZParams,
    r: int,
    quantum_numbers: Optional[Sequence[int]] = None,
    seed: int = 0,
) -> BetheSolution:
    """Momenta and phases of the sector-r eigenstate with the given quantum numbers.

    Damped fixed-point iteration first, then a Newton-type polish. Stagnating
    solves are continued from the XX limit in the anisotropy and, as a last
    resort, restarted from seeded random perturbations.
    """
    if r < 1:
        raise exceptions.DomainError("solve_bethe needs at least one reversed spin")
    I = np.asarray(
        quantum_numbers if quantum_numbers is not None else ground_quantum_numbers(p.N, r), dtype=int
    )
    if I.size != r:
        raise exceptions.ContractViolation("one quantum number per reversed spin")
    N, gamma = p.N, p.gamma

    k, residual = _fixed_point(_initial_momenta(N, r), I, N, gamma)
    if residual > consts.BETHE_POLISH:
        k, residual = _polish(k, I, N, gamma)
    if residual > consts.BETHE_RESIDUAL:
        logger.warning("Bethe fixed point stagnated at %.3g, continuing from the XX limit", residual)
        k, residual = _homotopy(I, N, gamma)
    rng = np.random.default_rng(seed)
    for attempt in range(consts.BETHE_RESTARTS):
        if residual <= consts.BETHE_RESIDUAL:
            break
        logger.warning("Bethe restart %d (residual %.3g)", attempt + 1, residual)
        start = _initial_momenta(N, r) + rng.normal(scale=0.1 * 2.0 * math.pi / N, size=r)
        trial, _ = _fixed_point(start, I, N, gamma)
        trial, trial_residual = _polish(trial, I, N, gamma)
        if trial_residual < residual:
            k, residual = trial, trial_residual
    if residual > consts.BETHE_RESIDUAL:
        raise exceptions.SolverError(f"Bethe equations for {p} r={r} did not converge", residual)

    solution = BetheSolution(r, I, k, phase_matrix(k, gamma), 0.0, residual)
    solution.energy = bethe_energy(solution, p)
    return solution


def ferromagnet(p: XXZParams) -> BetheSolution:
    empty = np.zeros(0)
    solution = BetheSolution(0, np.zeros(0, dtype=int), empty, np.zeros((0, 0)), 0.0, 0.0)
    solution.energy = bethe_energy(solution, p)
    return solution


def bethe_energy(sol: BetheSolution, p: XXZParams) -> float:
    magnetization = p.N / 2 - sol.r
    return float(p.gamma * p.N / 4 - np.sum(p.gamma - np.cos(sol.momenta)) - p.lam * magnetization)


def sector_states(N: int, r: int) -> np.ndarray:
    """Basis indices with exactly r down spins, ascending."""
    index = np.arange(2 ** N)
    downs = np.array([bin(i).count("1") for i in index])
    return index[downs == r]


def bethe_amplitude_at(sol: BetheSolution, positions: Sequence[Sequence[int]]) -> np.ndarray:
    """Unnormalized amplitudes at rows of ordered down-spin positions.

    Positions may coincide, which gives the formal extension used by the
    two-magnon matching condition.
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=float))
    amplitudes = np.zeros(positions.shape[0], dtype=complex)
    r = sol.r
    for perm in itertools.permutations(range(r)):
        perm = list(perm)
        momentum_phase = positions @ sol.momenta[perm]
        scattering = sum(sol.phases[perm[i], perm[j]] for i in range(r) for j in range(i + 1, r))
        amplitudes += np.exp(1j * (momentum_phase + 0.5 * scattering))
    return amplitudes


def bethe_amplitudes(sol: BetheSolution, p: XXZParams) -> SpinWavefunction:
    if sol.r > consts.BETHE_MAX_R:
        raise exceptions.ResourceError(f"the permutation sum is limited to r <= {consts.BETHE_MAX_R}")
    N = p.N
    vector = np.zeros(2 ** N, dtype=complex)
    configurations = list(itertools.combinations(range(N), sol.r))
    amplitudes = bethe_amplitude_at(sol, configurations) if sol.r else np.ones(1, dtype=complex)
    norm = np.linalg.norm(amplitudes)
    if norm < consts.HERMITIAN_TOL:
        raise exceptions.NormalizationError(f"Bethe amplitudes vanish for {sol}")
    amplitudes /= norm
    # first configuration in lexicographic order with a visible amplitude is made real positive
    lead = amplitudes[np.argmax(np.abs(amplitudes) > 1e-12)]
    amplitudes *= np.conj(lead) / abs(lead)

    index = [sum(1 << (N - 1 - l) for l in config) for config in configurations]
    vector[index] = amplitudes
    return SpinWavefunction(N, sol.r, vector)


def xxz_sector_hamiltonian(p: XXZParams, r: int) -> Tuple[sparse.csr_matrix, np.ndarray]:
    """Hamiltonian restricted to r down spins, built directly in the bit basis."""
    N = p.N
    states = sector_states(N, r)
    rows, cols, values = [], [], []
    diagonal = np.full(states.size, -p.lam * (N / 2 - r))
    for j in range(N):
        mask = (1 << (N - 1 - j)) | (1 << (N - 1 - (j + 1) % N))
        bits = states & mask
        differ = (bits != 0) & (bits != mask)
        diagonal += np.where(differ, -p.gamma / 4.0, p.gamma / 4.0)
        source = np.nonzero(differ)[0]
        rows.append(np.searchsorted(states, states[source] ^ mask))
        cols.append(source)
        values.append(np.full(source.size, 0.5))
    rows.append(np.arange(states.size))
    cols.append(np.arange(states.size))
    values.append(diagonal)
    H = sparse.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))),
        shape=(states.size, states.size),
    ).tocsr()
    return H, states


def xxz_dense_oracle(p: XXZParams, r: Optional[int] = None) -> Tuple[float, np.ndarray]:
    """Lowest energy and full 2^N state in sector r, or overall when r is None."""
    if r is None:
        energies = {s: xxz_dense_oracle(p, s)[0] for s in range(p.N // 2 + 1)}
        r = _lowest_sector(energies)
    H, states = xxz_sector_hamiltonian(p, r)
    energy, vector = lowest_state(H)
    state = np.zeros(2 ** p.N)
    state[states] = vector / np.linalg.norm(vector)
    return energy, state


def _lowest_sector(energies: Dict[int, float]) -> int:
    lowest = min(energies.values())
    # ties go to the sector closest to zero magnetization
    return max(r for r, e in energies.items() if e <= lowest + consts.SECTOR_TIE_TOL * max(1.0, abs(lowest)))


def sector_energies(p: XXZParams, solver: str = "bethe", seed: int = 0) -> Dict[int, float]:
    """Lowest energy of every sector r = 0 .. N/2."""
    if solver not in ("bethe", "dense"):
        raise exceptions.ContractViolation(f"unknown solver {solver!r}")
    energies = {}
    for r in range(p.N // 2 + 1):
        if solver == "dense":
            energies[r] = xxz_dense_oracle(p, r)[0]
        elif r == 0:
            energies[r] = ferromagnet(p).energy
        else:
            energies[r] = solve_bethe(p, r, seed=seed).energy
    return energies


def ground_state_scan(
    p: XXZParams, solver: str = "bethe", seed: int = 0
) -> Tuple[int, Optional[BetheSolution], SpinWavefunction]:
    energies = sector_energies(p, solver, seed)
    r_star = _lowest_sector(energies)
    logger.debug("ground sector of %s is r=%d", p, r_star)
    if solver == "dense":
        _, state = xxz_dense_oracle(p, r_star)
        return r_star, None, SpinWavefunction(p.N, r_star, state.astype(complex))
    solution = ferromagnet(p) if r_star == 0 else solve_bethe(p, r_star, seed=seed)
    return r_star, solution, bethe_amplitudes(solution, p)


def xxz_block_entropy(w: SpinWavefunction, L: int) -> float:
    if not 1 <= L <= w.N - 1:
        raise exceptions.DomainError(f"block size must lie in 1 .. {w.N - 1}")
    return entanglement.entanglement_entropy(
        entanglement.schmidt(w.amplitudes, 2 ** L, 2 ** (w.N - L))
    )


def level_crossings(
    gamma: float, N: int, lambdas: Sequence[float], solver: str = "bethe"
) -> List[Tuple[float, int, int]]:
    """Fields along `lambdas` where the ground sector changes, as (lam, r_before, r_after)."""
    base = sector_energies(XXZParams(gamma, 0.0, N), solver)
    crossings = []
    previous = None
    for lam in lambdas:
        shifted = {r: e - lam * (N / 2 - r) for r, e in base.items()}
        r_star = _lowest_sector(shifted)
        if previous is not None and r_star != previous:
            crossings.append((float(lam), previous, r_star))
        previous = r_star
    return crossings
