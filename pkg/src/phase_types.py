from enum import auto, Enum


class PhaseLabel(Enum):
    CRITICAL_XX = "critical-XX"
    CRITICAL_XY = "critical-XY"
    GAPPED_1FP = "gapped-1FP"
    GAPPED_2FP = "gapped-2FP"

    @property
    def is_critical(self) -> bool:
        return self in (PhaseLabel.CRITICAL_XX, PhaseLabel.CRITICAL_XY)


class FermionSector(Enum):
    NS = auto()  # antiperiodic momenta, even fermion parity
    R = auto()  # periodic momenta, odd fermion parity
    AUTO = auto()


class FixedPointKind(Enum):
    PRODUCT = "product"
    GHZ = "ghz"
    CLUSTER_VALENCE = "cluster_valence"
    W_TYPE = "w_type"
    DOMAIN_WALL = "domain_wall"
    SYMMETRIC_D2 = "symmetric_D2"
    NONE = "none"


class OutputFormat(Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"
