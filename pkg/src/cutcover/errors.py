"""Exception types shared across the package."""


class CutCoverError(Exception):
    """Base class for all package errors."""


class IncompleteTableError(CutCoverError):
    """An explicit requirement table was queried outside its domain."""

    def __init__(self, subset: int):
        super().__init__(f"requirement table has no entry for subset mask {subset:#x}")
        self.subset = subset


class FlavorMismatchError(CutCoverError):
    """An oracle of the wrong flavor was passed to a solver or routine."""


class NotUncrossableError(CutCoverError):
    """The requirement function violated uncrossability.

    Detected either directly (pair witness) or through overlapping
    minimal violated sets, which a run treats as proof of the same thing.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InfeasibleInstanceError(CutCoverError):
    """Some violated set has no graph edge crossing it at all."""

    def __init__(self, subset: int):
        super().__init__(
            f"no edge of the graph crosses violated set {subset:#x}; "
            "no cover can satisfy the requirement"
        )
        self.subset = subset


class SolverAbortError(CutCoverError):
    """An internal solver invariant failed; carries a state dump for diagnosis."""

    def __init__(self, message: str, dump=None):
        super().__init__(message)
        self.dump = dump


class EmbeddingError(CutCoverError):
    """A rotation system failed the Euler check or is otherwise not planar."""


class ExtractionError(CutCoverError):
    """A dual support set did not map to a usable flow path."""

    def __init__(self, message: str, subset: int | None = None):
        super().__init__(message)
        self.subset = subset


class CapExceededError(CutCoverError):
    """An exhaustive routine was asked to run beyond its configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap
