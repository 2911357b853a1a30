"""Exception types shared across the package.

The CLI maps these onto exit codes (data errors -> 2, validation
failures -> 3); everything else is an ordinary programming error.
"""


class TrisearchError(Exception):
    """Base class for all package-specific errors."""


class DataFormatError(TrisearchError):
    """A dataset, store or query string could not be parsed."""


DIMENSION_NAMES = {1: "objects", 2: "attributes", 3: "conditions"}


class UnknownLabelError(DataFormatError):
    """A label does not exist in the dictionary of its dimension."""

    def __init__(self, label: str, dimension: int):
        self.label = label
        self.dimension = dimension
        name = DIMENSION_NAMES.get(dimension, "?")
        super().__init__(f"unknown label {label!r} in dimension {dimension} ({name})")


class IndexFileError(TrisearchError):
    """Base class for problems with the on-disk inverted index."""


class IndexHeaderError(IndexFileError):
    """The file is not an index file (bad magic) or has an unsupported version."""


class IndexCorruptionError(IndexFileError):
    """The file claims to be an index but its payload is inconsistent."""


class BruteForceCapError(TrisearchError):
    """The context is too large for the brute-force miner."""


class ValidationFailure(TrisearchError):
    """An invariant check in the validation suite did not hold."""
