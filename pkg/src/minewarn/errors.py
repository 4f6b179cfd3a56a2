"""Exception types shared across the package."""


class DataFormatError(ValueError):
    """Raised when a data, config, or model file cannot be parsed."""


class TrainingError(RuntimeError):
    """Raised when training hits non-finite numbers or an unsolvable system."""


class SplitMismatchError(ValueError):
    """Raised when two runs being compared did not see identical data."""
