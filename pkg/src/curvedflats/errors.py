"""Exception types raised across the package.

Every error that aborts a pipeline carries enough context to locate the
offending input: a field name, a grid point, or a measured defect.
"""


class CurvedFlatsError(Exception):
    """Base class for all package errors."""


class ReorthonormalizationError(CurvedFlatsError):
    """The averaging iteration failed to contract toward the isometry group."""


class StepSizeError(CurvedFlatsError):
    """A one-step integrator was asked to take a step it cannot resolve."""

    def __init__(self, message, grid_point=None):
        self.grid_point = grid_point
        if grid_point is not None:
            message = f"{message} (grid point {grid_point})"
        super().__init__(message)


class GaugeStructureError(CurvedFlatsError):
    """A gauge field does not have the required exact block structure."""


class TripleInvariantError(CurvedFlatsError):
    """A frame column triple violates its pairing invariants."""

    def __init__(self, message, grid_point=None, defect=None):
        self.grid_point = grid_point
        self.defect = defect
        if grid_point is not None:
            message = f"{message} (worst grid point {grid_point}, defect {defect:.3e})"
        super().__init__(message)


class ChartSingularityError(CurvedFlatsError):
    """A light-cone point lies too close to the chart's hyperplane at infinity."""

    def __init__(self, message, grid_point=None):
        self.grid_point = grid_point
        if grid_point is not None:
            message = f"{message} (grid point {grid_point})"
        super().__init__(message)


class ConformalFactorFloorError(CurvedFlatsError):
    """The conformal factor dips below the configured floor where it is divided by."""


class ClosednessError(CurvedFlatsError):
    """A 1-form that should be closed has a plaquette circulation above threshold."""


class ResidualThresholdError(CurvedFlatsError):
    """An input field fails its residual gate for a downstream construction."""


class ConfigError(CurvedFlatsError):
    """A run configuration is malformed; `field` names the offending entry."""

    def __init__(self, message, field=None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
