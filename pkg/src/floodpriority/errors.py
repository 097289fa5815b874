"""Exception hierarchy shared across the engine."""


class FloodPriorityError(Exception):
    """Base class for all engine errors."""


class ValidationError(FloodPriorityError):
    """Invalid input data or parameters. Maps to CLI exit code 2."""


class NotFoundError(FloodPriorityError):
    """Unknown id (tile, scenario, version, node, ...). CLI exit code 3."""


class StageError(FloodPriorityError):
    """Pipeline error wrapped with the stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
