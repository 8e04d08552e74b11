"""Exception types shared across the package."""


class MimolocError(Exception):
    """Base class for all package errors."""


class ConfigError(MimolocError):
    """A scenario file or configuration value is invalid. Carries the offending field."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class TargetMissing(MimolocError):
    """An operation needed the ground-truth target but the geometry has none."""


class DegenerateGeometry(MimolocError):
    """Geometry admits no information: target on an antenna, or singular Fisher matrix."""


class PatternMismatch(MimolocError):
    """A contamination pattern references antenna indices outside the geometry."""


class DimensionMismatch(MimolocError):
    """State / measurement vector lengths do not match the bound geometry."""


class UnderdeterminedScenario(MimolocError):
    """Fewer than 3 sum-range measurements: 2-D position plus ranges is unsolvable."""


class NonFiniteState(MimolocError):
    """An integrator update produced NaN/inf. Signals divergence.

    Carries the iteration index and the last finite state snapshot for debugging.
    """

    def __init__(self, iteration, last_state=None):
        self.iteration = iteration
        self.last_state = last_state
        super().__init__(f"state became non-finite at iteration {iteration}")


class Diverged(NonFiniteState):
    """A solve aborted because the dynamics diverged."""


class EmptyInput(MimolocError):
    """An aggregate was requested over an empty collection."""
