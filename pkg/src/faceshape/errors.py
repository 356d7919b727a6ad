"""Exception taxonomy shared by all faceshape modules."""


class FaceshapeError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(FaceshapeError):
    """A text input (landmark file, feature file, image) is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(FaceshapeError):
    """A sample violates a data invariant; message names the sample id."""

    def __init__(self, message: str, sample_id: str | None = None):
        if sample_id is not None:
            message = f"sample {sample_id!r}: {message}"
        super().__init__(message)
        self.sample_id = sample_id


class InvalidInput(FaceshapeError):
    """A precondition on an operation's arguments was violated."""


class DegenerateLandmarks(FaceshapeError):
    """A landmark configuration makes the feature formulas undefined."""


class NoHairlineFound(FaceshapeError):
    """The upward scan reached the top of the image without a color crossing."""


class NumericalFailure(FaceshapeError):
    """A non-finite value or gradient was encountered during optimization."""


class ModelFormatError(FaceshapeError):
    """A model file is truncated, corrupted, or has an unknown version."""


class GenerationFailed(FaceshapeError):
    """Synthetic data generation exhausted its retry budget."""
