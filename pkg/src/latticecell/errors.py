"""Exception types shared across the package."""


class LatticeCellError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(LatticeCellError, ValueError):
    """A bit vector or matrix does not match the expected dimensions."""


class CapacityError(LatticeCellError, ValueError):
    """An exhaustive procedure was asked to run beyond its size guard."""


class NotSplittableError(LatticeCellError, ValueError):
    """A context with fewer than two attributes cannot be split."""


class LabelingError(LatticeCellError, ValueError):
    """An object is missing a category label."""


class EmptyInputError(LatticeCellError, ValueError):
    """An operation that needs at least one element received none."""


class FormatError(LatticeCellError, ValueError):
    """A context, lattice, or model file is malformed."""


class CorpusError(LatticeCellError, OSError):
    """A corpus directory or document could not be ingested."""
