"""Module with common data types."""
import enum


class ExitStatus(enum.IntEnum):
    """Enumeration of the exit statuses of the command line interface."""

    OK = 0

    # Unknown subcommand, malformed flags
    USAGE = 1

    # Config validation failures, missing artifacts
    VALIDATION = 2

    # Dense cap, unitarity gate, branch singularity, near-bifurcation, ...
    NUMERICAL_GATE = 3


class ModelType(enum.Enum):
    """Enumeration of the models an experiment can run on."""

    SPIN_CHAIN = "spin-chain"
    KICKED_TOP = "kicked-top"
    CAT_MAP = "cat-map"


class ManifoldRegime(enum.Enum):
    """Number of periodic-orbit manifolds admitted by the torsion condition."""

    NONE = "none"
    SINGLE = "single"
    MULTIPLE = "multiple"


class OrbitStability(enum.Enum):
    """Classification of a periodic orbit from its monodromy eigenvalues."""

    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    MIXED = "mixed"
    # Some |ln|lambda|| below the marginal threshold
    NEAR_MARGINAL = "near-marginal"


class FormFactorRegime(enum.Enum):
    """Regime of the spectral form factor of the coupled cat chain."""

    # K ~ L^(T-N): very short times, L^T/T <~ N
    EXPONENTIAL = "exponential"
    # K ~ 2NT/(beta L^N)
    LINEAR = "linear"
    # K ~ K_RMT(NT/L^N)
    UNIVERSAL = "universal"
