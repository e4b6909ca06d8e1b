"""Exceptions raised by ``spacetime_duality``.

Each exception carries the :class:`~spacetime_duality.common.types.ExitStatus`
the command line interface exits with when it is not caught.
"""
import typing as ty

from .types import ExitStatus


class SpacetimeDualityError(Exception):
    """Base class of all errors raised by this package."""

    exit_status = ExitStatus.NUMERICAL_GATE


class ConfigValidationError(SpacetimeDualityError):
    """The experiment configuration is invalid.

    :param errors: list of field-level messages, e.g. ``["J: expected float"]``.
    """

    exit_status = ExitStatus.VALIDATION

    def __init__(self, errors: ty.Union[str, ty.List[str]]):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class MissingArtifactError(SpacetimeDualityError):
    """A run directory lacks an artifact needed by an export recipe."""

    exit_status = ExitStatus.VALIDATION


class DenseCapExceeded(SpacetimeDualityError):
    """A dense matrix would exceed the configured dimension cap."""

    def __init__(self, dimension: int, cap: int, suggestion: str = ""):
        self.dimension = dimension
        self.cap = cap
        self.suggestion = suggestion
        message = f"dense dimension {dimension} exceeds the cap {cap}"
        if suggestion:
            message += f" ({suggestion})"
        super().__init__(message)


class UnitarityGateError(SpacetimeDualityError):
    """A matrix that must be unitary is not, within tolerance."""


class BranchSingularityError(SpacetimeDualityError):
    """The half-spin dual parameters sit on a branch point or pole."""


class NearBifurcationError(SpacetimeDualityError):
    """The orbit has a monodromy eigenvalue too close to one."""


class QuadratureError(SpacetimeDualityError):
    """An adaptive quadrature did not reach the requested tolerance."""


class EigensolverError(SpacetimeDualityError):
    """The eigensolver did not converge or produced large residuals."""


class FitWindowError(SpacetimeDualityError):
    """A scaling fit was requested on too few points."""
