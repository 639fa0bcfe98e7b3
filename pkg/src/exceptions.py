class SpinLabError(Exception):
    """Base class for every error raised on purpose by spinlab.

    `exit_code` is what the command line returns when the error reaches it.
    """
    exit_code = 1


class ContractViolation(SpinLabError):
    """An input breaks the shape or symmetry contract of an operation."""


class DomainError(SpinLabError):
    """An argument lies outside the domain where the quantity is defined."""


class SingularMomentumError(DomainError):
    """The quasiparticle energy vanishes on a sampled momentum."""


class NumericError(SpinLabError):
    """A quadrature or eigensolver did not reach its accuracy contract."""


class ConsistencyError(SpinLabError):
    """A result violates a bound that holds for every valid input.

    This signals a bug upstream rather than bad input.
    """


class SolverError(SpinLabError):
    """The Bethe equations could not be solved to the required residual."""
    exit_code = 3

    def __init__(self, message: str, best_residual: float = float("inf")):
        super().__init__(message)
        self.best_residual = best_residual


class ResourceError(SpinLabError):
    """The request exceeds the sizes the dense or combinatorial paths accept."""


class ClusteringViolation(SpinLabError):
    """The dominant eigenvalue of a transfer matrix is not unique."""


class NormalizationError(SpinLabError):
    """A probability vector or state is not normalized."""


class ConfigError(SpinLabError):
    """Invalid run configuration; the message names the offending key."""
    exit_code = 2


class ValidationFailure(SpinLabError):
    """A checked law fell outside its tolerance."""
    exit_code = 2


class OutputError(SpinLabError):
    exit_code = 4


class TensorFileError(OutputError):
    """A tensor file does not follow the `d D` + blocks layout."""
