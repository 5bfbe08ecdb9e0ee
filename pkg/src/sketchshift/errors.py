"""Exception hierarchy shared across the package."""


class SketchShiftError(Exception):
    """Base class for all library errors."""


class ParseError(SketchShiftError):
    """Malformed NDJSON line or binary stroke record."""


class EncodeError(SketchShiftError):
    """Sketch cannot be represented in the binary record layout."""


class FormatError(SketchShiftError):
    """Malformed embedding or model file.

    ``offset`` is the byte offset of the first violation when known.
    """

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class ValidationError(SketchShiftError):
    """An in-memory structure violates its invariants."""


class DimensionError(SketchShiftError):
    """Vector or raster dimensions do not match what the operation expects."""


class InsufficientPoints(SketchShiftError):
    """Fewer points than clusters requested."""


class EmptyModel(SketchShiftError):
    """Model contains no clusters."""


class UnknownCluster(SketchShiftError):
    """(category, local_index) not present in the model."""


class NoOtherCategory(SketchShiftError):
    """Matching needs at least one cluster outside the source category."""


class MissingSketch(SketchShiftError):
    """A referenced sketch id is absent from the store."""


class DuplicateId(SketchShiftError):
    """Two sketches share an id."""


class InvalidStrokes(SketchShiftError):
    """Empty or otherwise unusable stroke input."""
