"""Exact solution of the XY chain

    H = sum_l [ (1+g)/4 sx_l sx_l+1 + (1-g)/4 sy_l sy_l+1 - lam/2 sz_l ]

through Jordan-Wigner fermions. The block reduced state of the ground state
is gaussian, so everything follows from the kernel

    g(d) = (1/2pi) int e^{i phi d} (cos phi - lam - i g sin phi) / Lambda_phi dphi

whose L x L Toeplitz section has the mode occupations of the block as
singular values. Finite chains sum over the momenta of one fermion parity
sector instead of integrating.
"""
from __future__ import annotations

import functools
import logging
import math
import warnings
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore
import scipy.linalg
import scipy.sparse as sparse
from scipy.integrate import IntegrationWarning, quad
from scipy.sparse.linalg import eigsh

import consts
import entanglement
import exceptions
import numerics
from numerics import FitResult
from phase_types import FermionSector, PhaseLabel

logger = logging.getLogger(__name__)


class XYParams:
    def __init__(self, gamma: float, lam: float):
        if not (math.isfinite(gamma) and math.isfinite(lam)):
            raise exceptions.DomainError("XY couplings must be finite")
        self.gamma = float(gamma)
        self.lam = float(lam)

    def __repr__(self) -> str:
        return f"XYParams(gamma={self.gamma}, lam={self.lam})"


class FermiData:
    def __init__(
        self,
        fermi_points: List[float],
        mass: float,
        velocity: float,
        phase_label: PhaseLabel,
        gap: float,
    ):
        self.fermi_points = fermi_points
        self.mass = mass
        self.velocity = velocity
        self.phase_label = phase_label
        self.gap = gap  # true minimum of Lambda_phi

    @property
    def is_critical(self) -> bool:
        return self.phase_label.is_critical


class CorrelationKernel:
    """L x L Toeplitz matrix with entry (n, m) equal to g(n - m)."""

    def __init__(self, entries: np.ndarray):
        entries = np.asarray(entries, dtype=float)
        if np.any(np.abs(entries) > 1.0 + consts.NU_FAIL_TOL):
            raise exceptions.ConsistencyError("kernel entries must lie in [-1, 1]")
        self.entries = entries

    @classmethod
    def from_kernel(cls, column: np.ndarray, row: np.ndarray) -> CorrelationKernel:
        """`column[d]` is g(d), `row[d]` is g(-d), both for d = 0 .. L-1."""
        return cls(scipy.linalg.toeplitz(column, row))

    @property
    def L(self) -> int:
        return self.entries.shape[0]


class BlockSpectrum:
    def __init__(self, nus: np.ndarray):
        self.nus = np.asarray(nus, dtype=float)

    @property
    def occupations(self) -> np.ndarray:
        return 0.5 * (1.0 + self.nus)

    @property
    def entropy(self) -> float:
        return float(np.sum(numerics.binary_entropy(self.occupations)))


class OracleResult:
    def __init__(self, energy: float, state: np.ndarray, entropies: np.ndarray, parity: Optional[int]):
        self.energy = energy
        self.state = state
        self.entropies = entropies  # S_1 .. S_{N-1}
        self.parity = parity

    def entropy(self, L: int) -> float:
        return float(self.entropies[L - 1])


def dispersion(p: XYParams, phi):
    return np.sqrt((np.cos(phi) - p.lam) ** 2 + (p.gamma * np.sin(phi)) ** 2)


def bogoliubov_angle(p: XYParams, phi):
    energy = dispersion(p, phi)
    if np.any(energy < consts.SINGULAR_LAMBDA):
        raise exceptions.SingularMomentumError(f"gapless momentum for {p}")
    return np.arccos(np.clip((np.cos(phi) - p.lam) / energy, -1.0, 1.0))


def fermi_analysis(p: XYParams) -> FermiData:
    g2, lam = p.gamma ** 2, p.lam
    if lam + g2 >= 1.0:
        points = [0.0]
        mass = abs(1.0 - lam)
        velocity2 = lam + g2 - 1.0
    elif g2 < 1.0 and lam >= -(1.0 - g2):
        c = lam / (1.0 - g2)
        phi = math.acos(c)
        points = [-phi, phi]
        mass = g2 * (1.0 - lam * lam / (1.0 - g2))
        velocity2 = 1.0 - g2 - lam * lam / (1.0 - g2)
    else:
        # mirror of the first branch, the minimum sits at phi = pi
        points = [math.pi]
        mass = abs(1.0 + lam)
        velocity2 = -lam + g2 - 1.0

    mass = max(mass, 0.0)
    if mass <= consts.SINGULAR_LAMBDA:
        mass = 0.0
        if p.gamma == 0.0 and abs(lam) < 1.0:
            label = PhaseLabel.CRITICAL_XX
        else:
            label = PhaseLabel.CRITICAL_XY
    else:
        label = PhaseLabel.GAPPED_1FP if len(points) == 1 else PhaseLabel.GAPPED_2FP

    return FermiData(
        fermi_points=points,
        mass=mass,
        velocity=math.sqrt(max(velocity2, 0.0)),
        phase_label=label,
        gap=_gap(p),
    )


def _gap(p: XYParams) -> float:
    def squared(c: float) -> float:
        return (c - p.lam) ** 2 + p.gamma ** 2 * (1.0 - c * c)

    candidates = [squared(1.0), squared(-1.0)]
    if p.gamma ** 2 < 1.0:
        vertex = p.lam / (1.0 - p.gamma ** 2)
        if abs(vertex) <= 1.0:
            candidates.append(squared(vertex))
    return math.sqrt(max(min(candidates), 0.0))


def momenta(N: int, sector: FermionSector) -> np.ndarray:
    if N < 2 or N % 2:
        raise exceptions.DomainError(f"finite chains need an even N, got {N}")
    k = np.arange(N)
    if sector is FermionSector.NS:
        phi = 2.0 * np.pi * (k + 0.5) / N
    elif sector is FermionSector.R:
        phi = 2.0 * np.pi * k / N
    else:
        raise exceptions.ContractViolation("momenta need a concrete sector")
    return np.where(phi > np.pi, phi - 2.0 * np.pi, phi)


def sector_energies(p: XYParams, N: int) -> Dict[FermionSector, Optional[float]]:
    """Vacuum energies of both sectors.

    The R vacuum is physical only when its fermion parity is odd, which for
    the unpaired modes phi = 0, pi happens exactly when |lam| < 1.
    """
    energies: Dict[FermionSector, Optional[float]] = {
        FermionSector.NS: -0.5 * float(np.sum(dispersion(p, momenta(N, FermionSector.NS)))),
        FermionSector.R: None,
    }
    if abs(p.lam) < 1.0:
        energies[FermionSector.R] = -0.5 * float(np.sum(dispersion(p, momenta(N, FermionSector.R))))
    return energies


def resolve_sector(p: XYParams, N: int, sector: FermionSector = FermionSector.AUTO) -> FermionSector:
    if sector is not FermionSector.AUTO:
        return sector
    energies = sector_energies(p, N)
    e_ns, e_r = energies[FermionSector.NS], energies[FermionSector.R]
    if e_r is not None and e_r < e_ns - consts.SECTOR_TIE_TOL * max(1.0, abs(e_ns)):
        chosen = FermionSector.R
    else:
        chosen = FermionSector.NS
    logger.debug("%s at N=%d uses sector %s", p, N, chosen.name)
    return chosen


def _finite_kernel(p: XYParams, N: int, ds: np.ndarray, sector: FermionSector) -> np.ndarray:
    phi = momenta(N, sector)
    energy = dispersion(p, phi)
    if np.any(energy < consts.SINGULAR_LAMBDA):
        raise exceptions.SingularMomentumError(f"{p} is gapless on a {sector.name} momentum at N={N}")
    even = (np.cos(phi) - p.lam) / energy
    odd = p.gamma * np.sin(phi) / energy
    angles = np.outer(ds, phi)
    real = (np.cos(angles) @ even + np.sin(angles) @ odd) / N
    imag = (np.sin(angles) @ even - np.cos(angles) @ odd) / N
    if np.max(np.abs(imag), initial=0.0) > consts.QUAD_TOL:
        raise exceptions.NumericError("finite kernel has an imaginary part")
    return real


def _breakpoints(gamma: float, lam: float) -> List[float]:
    points = {0.0, math.pi}
    if abs(lam) < 1.0:
        points.add(math.acos(lam))
    if gamma ** 2 < 1.0 and abs(lam / (1.0 - gamma ** 2)) < 1.0:
        points.add(math.acos(lam / (1.0 - gamma ** 2)))
    return sorted(points)


def _integrands(gamma: float, lam: float, a: float, b: float):
    """Even and odd parts of the kernel integrand on [a, b].

    On a gapless endpoint the integrand is replaced by its one-sided limit,
    taken from inside the interval.
    """
    nudge = 1e-9 * (b - a)

    def energy_at(phi: float) -> Tuple[float, float]:
        energy = math.hypot(math.cos(phi) - lam, gamma * math.sin(phi))
        if energy < consts.SINGULAR_LAMBDA:
            phi = phi + nudge if phi - a < b - phi else phi - nudge
            energy = math.hypot(math.cos(phi) - lam, gamma * math.sin(phi))
        return phi, energy

    def even(phi: float) -> float:
        phi, energy = energy_at(phi)
        return (math.cos(phi) - lam) / energy

    def odd(phi: float) -> float:
        phi, energy = energy_at(phi)
        return gamma * math.sin(phi) / energy

    return even, odd


def _weighted_quad(f, a: float, b: float, weight: str, d: int) -> float:
    """int_a^b f(phi) w(d phi) dphi with w = cos or sin, adaptive to QUAD_TOL."""
    if weight == "sin" and d == 0:
        return 0.0
    kwargs = dict(epsabs=consts.QUAD_TOL * 1e-2, epsrel=consts.QUAD_TOL, limit=consts.QUAD_LIMIT)
    if d != 0:
        kwargs.update(weight=weight, wvar=float(d))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, error = quad(f, a, b, **kwargs)
    if caught:
        if error > consts.QUAD_TOL:
            raise exceptions.NumericError(
                f"kernel quadrature on [{a:.6g}, {b:.6g}] at d={d}: {caught[0].message}"
            )
        logger.debug("quadrature warning at d=%d accepted, error %.3g", d, error)
    return value


def _imaginary_part(gamma: float, lam: float, d: int, cuts: List[float]) -> float:
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        for lo, hi in ((a, b), (-b, -a)):
            even, odd = _integrands(gamma, lam, lo, hi)
            total += _weighted_quad(even, lo, hi, "sin", d) - _weighted_quad(odd, lo, hi, "cos", d)
    return total / (2.0 * math.pi)


@functools.lru_cache(maxsize=65536)
def _thermodynamic_parts(gamma: float, lam: float, d: int) -> Tuple[float, float]:
    """(A, B) with g(d) = A + B and g(-d) = A - B, for d >= 0."""
    cuts = _breakpoints(gamma, lam)
    even_part = odd_part = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        even, odd = _integrands(gamma, lam, a, b)
        even_part += _weighted_quad(even, a, b, "cos", d)
        odd_part += _weighted_quad(odd, a, b, "sin", d)

    # the imaginary part cancels between the two half circles; it is checked
    # on the short separations, where a sign slip in the integrand shows first
    if d <= consts.IMAG_CHECK_MAX_D:
        imag = _imaginary_part(gamma, lam, d, cuts)
        if abs(imag) > consts.QUAD_TOL:
            raise exceptions.NumericError(f"kernel imaginary part {imag:.3g} at d={d}")
    return even_part / math.pi, odd_part / math.pi


def g_kernel(
    p: XYParams,
    d: int,
    size: Optional[int] = None,
    sector: FermionSector = FermionSector.AUTO,
) -> float:
    """Kernel value at separation `d`; `size=None` is the infinite chain."""
    if size is None:
        even, odd = _thermodynamic_parts(p.gamma, p.lam, abs(int(d)))
        return even + odd if d >= 0 else even - odd
    chosen = resolve_sector(p, size, sector)
    return float(_finite_kernel(p, size, np.array([d]), chosen)[0])


def block_correlation(
    p: XYParams,
    L: int,
    size: Optional[int] = None,
    sector: FermionSector = FermionSector.AUTO,
) -> CorrelationKernel:
    if L < 1:
        raise exceptions.DomainError("block size must be at least 1")
    ds = np.arange(L)
    if size is None:
        parts = np.array([_thermodynamic_parts(p.gamma, p.lam, int(d)) for d in ds])
        column, row = parts[:, 0] + parts[:, 1], parts[:, 0] - parts[:, 1]
    else:
        if L > size:
            raise exceptions.DomainError(f"block of {L} sites in a chain of {size}")
        chosen = resolve_sector(p, size, sector)
        column = _finite_kernel(p, size, ds, chosen)
        row = _finite_kernel(p, size, -ds, chosen)
    return CorrelationKernel.from_kernel(column, row)


def mode_spectrum(kernel: CorrelationKernel) -> BlockSpectrum:
    nus = numerics.singular_values(kernel.entries)
    if np.any(nus > 1.0 + consts.NU_FAIL_TOL):
        raise exceptions.ConsistencyError(f"mode occupation above one: {nus.max():.12g}")
    nus = np.where(nus > 1.0 - consts.NU_CLAMP_TOL, np.minimum(nus, 1.0), nus)
    nus = np.where(nus < consts.NU_CLAMP_TOL, np.maximum(nus, 0.0), nus)
    return BlockSpectrum(np.clip(nus, 0.0, 1.0))


def block_entropy(
    p: XYParams,
    L: int,
    size: Optional[int] = None,
    sector: FermionSector = FermionSector.AUTO,
) -> float:
    return mode_spectrum(block_correlation(p, L, size, sector)).entropy


def entropy_curve(p: XYParams, L_list: Sequence[int], size: Optional[int] = None) -> np.ndarray:
    return np.array([block_entropy(p, L, size) for L in L_list])


def entropy_scaling_fit(p: XYParams, L_list: Sequence[int], size: Optional[int] = None) -> FitResult:
    if len(L_list) < 4:
        raise exceptions.ContractViolation("a scaling fit needs at least four block sizes")
    entropies = entropy_curve(p, L_list, size)
    return numerics.linear_fit(np.log2(np.asarray(L_list, dtype=float)), entropies)


def saturation_entropy(p: XYParams) -> float:
    mass = fermi_analysis(p).mass
    if mass <= 0.0:
        raise exceptions.DomainError(f"{p} is critical, the entropy does not saturate")
    return math.log2(1.0 / mass) / 6.0


def central_charge_from_slope(slope: float) -> float:
    if slope < 0.0:
        raise exceptions.DomainError("entropy slopes are nonnegative")
    return 3.0 * slope


PAULI_X = sparse.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
PAULI_Y = sparse.csr_matrix(np.array([[0.0, -1.0j], [1.0j, 0.0]]))
PAULI_Z = sparse.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))


def site_operator(op: sparse.spmatrix, site: int, N: int) -> sparse.csr_matrix:
    """`op` acting on `site`; site 0 is the most significant bit."""
    left = sparse.identity(2 ** site, format="csr")
    right = sparse.identity(2 ** (N - site - 1), format="csr")
    return sparse.kron(sparse.kron(left, op, format="csr"), right, format="csr")


def xy_hamiltonian(p: XYParams, N: int, breaking_field: float = 0.0) -> sparse.csr_matrix:
    """Periodic spin hamiltonian; the breaking field couples to sum (-1)^j sx_j."""
    dim = 2 ** N
    H = sparse.csr_matrix((dim, dim), dtype=complex)
    sx = [site_operator(PAULI_X, j, N) for j in range(N)]
    sy = [site_operator(PAULI_Y, j, N) for j in range(N)]
    for j in range(N):
        k = (j + 1) % N
        H = H + (1.0 + p.gamma) / 4.0 * (sx[j] @ sx[k]) + (1.0 - p.gamma) / 4.0 * (sy[j] @ sy[k])
        H = H - p.lam / 2.0 * site_operator(PAULI_Z, j, N)
        if breaking_field:
            H = H - breaking_field / 2.0 * (-1) ** j * sx[j]
    if abs(H.imag).max() > 1e-14:
        raise exceptions.ConsistencyError("XY hamiltonian should be real")
    return H.real.tocsr()


def parity_indices(N: int, parity: int) -> np.ndarray:
    """Basis states with prod sz = `parity` (bit 1 is a down spin)."""
    index = np.arange(2 ** N)
    downs = np.array([bin(i).count("1") for i in index])
    return index[(downs % 2 == 0) == (parity > 0)]


def lowest_state(H: sparse.spmatrix) -> Tuple[float, np.ndarray]:
    """Ground energy and vector of a real symmetric sparse matrix."""
    dim = H.shape[0]
    if dim <= consts.DENSE_EIGH_MAX_DIM:
        values, vectors = numerics.hermitian_eigen(H.toarray())
        return float(values[0]), vectors[:, 0]
    values, vectors = eigsh(H, k=1, which="SA", tol=1e-13)
    return float(values[0]), vectors[:, 0]


def dense_oracle(
    p: XYParams,
    N: int,
    breaking_field: float = 0.0,
    sector: Optional[FermionSector] = FermionSector.AUTO,
) -> OracleResult:
    """Brute-force ground state of the periodic spin chain.

    Without a breaking field the lowest state of one parity sector is
    returned, NS for even and R for odd parity, with AUTO resolved as in
    block_entropy so both describe the same state. `sector=None` or a
    nonzero breaking field searches the whole space.
    """
    if N > consts.DENSE_MAX_N:
        raise exceptions.ResourceError(f"dense oracle is limited to N <= {consts.DENSE_MAX_N}")
    H = xy_hamiltonian(p, N, breaking_field)
    parity: Optional[int] = None
    if sector is not None and not breaking_field:
        parity = 1 if resolve_sector(p, N, sector) is FermionSector.NS else -1

    if parity is None:
        energy, state = lowest_state(H)
    else:
        index = parity_indices(N, parity)
        energy, sub = lowest_state(H[index][:, index])
        state = np.zeros(2 ** N)
        state[index] = sub
    state = state / np.linalg.norm(state)
    return OracleResult(energy, state, chain_entropies(state, N), parity)


def chain_entropies(state: np.ndarray, N: int, d: int = 2) -> np.ndarray:
    """Entropies of the first L sites for L = 1 .. N-1."""
    return np.array([
        entanglement.entanglement_entropy(entanglement.schmidt(state, d ** L, d ** (N - L)))
        for L in range(1, N)
    ])


def field_entropy_curve(
    gamma: float,
    lambdas: Sequence[float],
    N: int,
    L: int,
    breaking_field: float,
) -> List[Tuple[float, float, float]]:
    """(lam, symmetric entropy, broken entropy) along a field sweep."""
    rows = []
    for lam in lambdas:
        p = XYParams(gamma, lam)
        symmetric = dense_oracle(p, N).entropy(L)
        broken = dense_oracle(p, N, breaking_field=breaking_field).entropy(L)
        rows.append((float(lam), symmetric, broken))
    return rows
