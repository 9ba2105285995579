"""Exception and warning types shared across the package."""


class InvalidParameterError(ValueError):
    """A numeric input is non-finite or outside its admissible range."""


class OutOfRangeError(InvalidParameterError):
    """An input lies outside the validity range of an empirical model."""


class HpbwUndefinedError(ValueError):
    """The pattern never drops to half power, so no beamwidth exists."""


class ScenarioError(ValueError):
    """A scenario file or scenario object failed validation.

    ``line`` is the 1-based line number in the source file when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}".strip() if where else message)


class NumericWarning(RuntimeWarning):
    """Quadrature refinement disagreed by more than the accepted tolerance."""
