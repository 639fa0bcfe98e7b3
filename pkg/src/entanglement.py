"""Bipartite entanglement and its fine-grained behaviour along RG flows.

Majorization is written x < y ("y is purer than x") and tested through the
descending partial sums. For the Ising chain the reduced state of a
half-infinite block is a product of independent fermionic modes with
energies fixed by complete elliptic integrals; the flow audits compare those
truncated spectra along a path in the field.
"""
from __future__ import annotations

import functools
import logging
import math
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore

import consts
import exceptions
import numerics

logger = logging.getLogger(__name__)


class ProbVector:
    def __init__(self, entries: Iterable[float]):
        entries = np.asarray(list(entries) if not isinstance(entries, np.ndarray) else entries, dtype=float)
        if entries.ndim != 1 or entries.size == 0:
            raise exceptions.ContractViolation("a probability vector is a non-empty 1d array")
        if np.any(entries < -consts.PROB_TOL):
            raise exceptions.NormalizationError("probabilities must be nonnegative")
        if abs(entries.sum() - 1.0) > consts.PROB_TOL:
            raise exceptions.NormalizationError(f"probabilities sum to {entries.sum():.15g}")
        self.entries = np.clip(entries, 0.0, None)

    def __len__(self) -> int:
        return self.entries.size

    def descending(self, length: Optional[int] = None) -> np.ndarray:
        ordered = np.sort(self.entries)[::-1]
        if length is not None and length > ordered.size:
            ordered = np.concatenate([ordered, np.zeros(length - ordered.size)])
        return ordered

    @property
    def entropy(self) -> float:
        return shannon_entropy(self)


class SchmidtDecomposition:
    def __init__(self, coefficients: np.ndarray):
        self.coefficients = np.asarray(coefficients, dtype=float)

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > consts.SCHMIDT_CUTOFF))

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients ** 2


class ModeDispersion:
    """omega(j, tau) for the modes of a reduced state along a flow."""

    def __init__(self, omega: Callable[[int, float], float], name: str = "custom"):
        self.omega = omega
        self.name = name

    def __call__(self, j: int, tau: float) -> float:
        value = self.omega(j, tau)
        if value < 0.0:
            raise exceptions.DomainError(f"{self.name} dispersion is negative at j={j}, tau={tau}")
        return value

    @classmethod
    def ising(cls, side: str = "above") -> ModeDispersion:
        """Ising modes with tau bound to the mass m = |1 - lam| on one side of lam = 1."""
        if side not in ("above", "below"):
            raise exceptions.ContractViolation("side is 'above' or 'below' the critical field")
        sign = 1.0 if side == "above" else -1.0
        return cls(lambda j, m: ising_mode_dispersion(1.0 + sign * m, j), name=f"ising-{side}")


def schmidt(state: np.ndarray, dimA: int, dimB: int) -> SchmidtDecomposition:
    state = np.asarray(state)
    if state.ndim != 1 or dimA * dimB != state.size:
        raise exceptions.ContractViolation(f"{dimA} x {dimB} does not split a vector of {state.size}")
    norm = np.linalg.norm(state)
    if abs(norm - 1.0) > consts.NORM_TOL:
        raise exceptions.NormalizationError(f"state norm is {norm:.12g}")
    return SchmidtDecomposition(numerics.singular_values(state.reshape(dimA, dimB)))


def entanglement_entropy(s: SchmidtDecomposition) -> float:
    return numerics.shannon_bits(s.probabilities)


def shannon_entropy(p: ProbVector) -> float:
    return numerics.shannon_bits(p.entries)


def _as_prob(x) -> ProbVector:
    return x if isinstance(x, ProbVector) else ProbVector(x)


def majorizes(x, y) -> bool:
    """True iff x < y, every descending partial sum of x bounded by that of y."""
    x, y = _as_prob(x), _as_prob(y)
    length = max(len(x), len(y))
    partial_x = np.cumsum(x.descending(length))
    partial_y = np.cumsum(y.descending(length))
    return bool(np.all(partial_x <= partial_y + consts.MAJORIZATION_TOL))


def strictly_majorizes(x, y) -> bool:
    return majorizes(x, y) and not majorizes(y, x)


def mode_probs(omega: float) -> ProbVector:
    if omega < 0.0:
        raise exceptions.DomainError("mode energies are nonnegative")
    if math.isinf(omega):
        return ProbVector([1.0, 0.0])
    boltzmann = math.exp(-omega)
    return ProbVector([1.0 / (1.0 + boltzmann), boltzmann / (1.0 + boltzmann)])


def doubly_stochastic_weights(omega: float, omega_tilde: float) -> Optional[Tuple[float, float]]:
    """Weights (p0, p1) of identity and swap taking mode_probs(omega_tilde) to mode_probs(omega).

    Returns None when no such mixture exists, which is the case exactly when
    omega_tilde < omega.
    """
    if omega_tilde == 0.0:
        raise exceptions.DomainError("omega_tilde = 0 makes the weights singular")
    a, b = math.exp(-omega_tilde), math.exp(-omega)
    prefactor = (1.0 + a) / ((1.0 + b) * -math.expm1(-2.0 * omega_tilde))
    p0 = prefactor * (1.0 - a * b)
    p1 = prefactor * (b - a)
    tol = consts.WEIGHT_TOL
    if -tol <= p0 <= 1.0 + tol and -tol <= p1 <= 1.0 + tol and abs(p0 + p1 - 1.0) <= tol:
        return p0, p1
    return None


def mix_permutations(weights: Tuple[float, float], probs: ProbVector) -> np.ndarray:
    p0, p1 = weights
    return p0 * probs.entries + p1 * probs.entries[::-1]


class FlowCheck:
    def __init__(self, quantities: dict, excluded: List[int]):
        self.quantities = quantities  # mode -> bracketed quantity
        self.excluded = excluded

    @property
    def holds(self) -> bool:
        return all(0.0 <= q <= 1.0 for q in self.quantities.values())

    def __bool__(self) -> bool:
        return self.holds


def infinitesimal_flow_check(
    disp: ModeDispersion, tau: float, dtau: float, modes: Iterable[int]
) -> FlowCheck:
    """Mode-by-mode majorization test for a step tau -> tau + dtau.

    The quantity (d omega~/d tau) dtau / (e^omega~ - e^-omega~) must lie in
    [0, 1]; the derivative is a central difference with step |dtau|/10.
    Modes with omega~ = 0 are left out and listed in `excluded`.
    """
    tau_tilde = tau + dtau
    step = abs(dtau) / 10.0
    quantities = {}
    excluded = []
    for j in modes:
        omega_tilde = disp(j, tau_tilde)
        if omega_tilde == 0.0:
            excluded.append(j)
            continue
        derivative = (disp(j, tau_tilde + step) - disp(j, tau_tilde - step)) / (2.0 * step)
        if omega_tilde > 700.0:
            quantities[j] = 0.0
        else:
            quantities[j] = derivative * dtau / (2.0 * math.sinh(omega_tilde))
    if excluded:
        logger.warning("zero modes %s excluded from the flow check", excluded)
    return FlowCheck(quantities, excluded)


@functools.lru_cache(maxsize=4096)
def ising_mode_dispersion(lam: float, j: int) -> float:
    if lam <= 0.0:
        raise exceptions.DomainError("the Ising dispersion needs lam > 0")
    if lam == 1.0:
        raise exceptions.DomainError("lam = 1 is the critical point, the mode spacing vanishes")
    if j < 0:
        raise exceptions.DomainError("mode indices start at 0")
    if lam > 1.0:
        k = 1.0 / lam
        return (2 * j + 1) * math.pi * numerics.elliptic_K(math.sqrt(1.0 - k * k)) / numerics.elliptic_K(k)
    if j == 0:
        return 0.0
    return 2 * j * math.pi * numerics.elliptic_K(math.sqrt(1.0 - lam * lam)) / numerics.elliptic_K(lam)


def truncated_spectrum(lam: float, M: int) -> ProbVector:
    if not 1 <= M <= consts.TRUNCATION_MAX_M:
        raise exceptions.ResourceError(f"M must be between 1 and {consts.TRUNCATION_MAX_M}")
    spectrum = functools.reduce(
        np.kron, (mode_probs(ising_mode_dispersion(lam, j)).entries for j in range(M))
    )
    return ProbVector(spectrum / spectrum.sum())


class AuditStep:
    def __init__(
        self,
        lam_from: float,
        lam_to: float,
        majorized: bool,
        strict: bool,
        entropy_from: float,
        entropy_to: float,
        weights: List[Optional[Tuple[float, float]]],
        reconstruction_error: float,
    ):
        self.lam_from = lam_from
        self.lam_to = lam_to
        self.majorized = majorized
        self.strict = strict
        self.entropy_from = entropy_from
        self.entropy_to = entropy_to
        self.weights = weights  # per mode, None where the mode is excluded or invalid
        self.reconstruction_error = reconstruction_error

    @property
    def passed(self) -> bool:
        return self.majorized and self.entropy_to <= self.entropy_from + consts.MAJORIZATION_TOL


class FlowAudit:
    def __init__(self, steps: List[AuditStep]):
        self.steps = steps

    @property
    def violations(self) -> List[AuditStep]:
        return [step for step in self.steps if not step.passed]

    @property
    def passed(self) -> bool:
        return not self.violations


def flow_majorization_audit(lambda_path: Sequence[float], M: int) -> FlowAudit:
    """Check that truncated spectra get purer at every step of a field path."""
    path = [float(lam) for lam in lambda_path]
    if not path:
        raise exceptions.DomainError("the field path is empty")
    if not (all(lam > 1.0 for lam in path) or all(0.0 < lam < 1.0 for lam in path)):
        raise exceptions.DomainError("the field path must stay on one side of lam = 1")
    steps = np.diff(path)
    if np.any(steps == 0.0) or (np.any(steps > 0) and np.any(steps < 0)):
        raise exceptions.DomainError("the field path must be strictly monotone")

    audit_steps = []
    for lam_from, lam_to in zip(path[:-1], path[1:]):
        before, after = truncated_spectrum(lam_from, M), truncated_spectrum(lam_to, M)
        weights: List[Optional[Tuple[float, float]]] = []
        worst = 0.0
        for j in range(M):
            omega, omega_tilde = ising_mode_dispersion(lam_from, j), ising_mode_dispersion(lam_to, j)
            pair = doubly_stochastic_weights(omega, omega_tilde) if omega_tilde > 0.0 else None
            weights.append(pair)
            if pair is not None:
                rebuilt = mix_permutations(pair, mode_probs(omega_tilde))
                worst = max(worst, float(np.max(np.abs(rebuilt - mode_probs(omega).entries))))
        majorized = majorizes(before, after)
        audit_steps.append(AuditStep(
            lam_from, lam_to,
            majorized=majorized,
            strict=majorized and not majorizes(after, before),
            entropy_from=before.entropy,
            entropy_to=after.entropy,
            weights=weights,
            reconstruction_error=worst,
        ))
        logger.debug("audit %.6g -> %.6g majorized=%s", lam_from, lam_to, majorized)
    return FlowAudit(audit_steps)


def ising_saturated_entropy(lam: float, M: int = 64) -> float:
    """Entropy of a very long block, two boundaries worth of corner modes.

    In the ordered phase the zero mode is the cat degree of freedom and adds
    one bit for the whole block instead of one per boundary.
    """
    total = 0.0
    start = 0 if lam > 1.0 else 1
    for j in range(start, M):
        total += 2.0 * shannon_entropy(mode_probs(ising_mode_dispersion(lam, j)))
    return total + (0.0 if lam > 1.0 else 1.0)


def kac_central_charge(m: int) -> Fraction:
    if int(m) != m or m < 3:
        raise exceptions.DomainError("the unitary series starts at m = 3")
    return 1 - Fraction(6, m * (m + 1))


def kac_weight(m: int, p: int, q: int) -> Fraction:
    if int(m) != m or m < 3:
        raise exceptions.DomainError("the unitary series starts at m = 3")
    if not 1 <= q <= p <= m - 1:
        raise exceptions.DomainError(f"Kac indices need 1 <= q <= p <= m - 1, got p={p}, q={q}")
    return Fraction(((m + 1) * p - m * q) ** 2 - 1, 4 * m * (m + 1))
