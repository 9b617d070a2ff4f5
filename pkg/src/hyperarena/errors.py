"""Exception hierarchy shared by all hyperarena modules."""


class HyperarenaError(Exception):
    """Base class for every error raised by this package."""


# block store
class ArenaExhausted(HyperarenaError):
    """The preallocated slot arena cannot hold the requested blocks."""


class BlockOverflow(HyperarenaError):
    """A list does not fit in the payload region of a block."""


class AlreadyChained(HyperarenaError):
    """The block's metadata slot already holds a next-block pointer."""


class CorruptChain(HyperarenaError):
    """A next-block pointer leaves the allocated region of the arena."""


# block manager / hypergraph
class NotFound(HyperarenaError, LookupError):
    """An entity ID (or an edge/vertex pair) is not present."""


class AlreadyFree(HyperarenaError):
    """A manager node was marked deleted twice."""


class NotFree(HyperarenaError):
    """Attempt to reassign a manager node that is still in use."""


class RankOutOfRange(HyperarenaError, IndexError):
    """Requested rank exceeds the number of available nodes."""


class Duplicate(HyperarenaError):
    """An ID or an (edge, vertex) pair appears where it must not."""


# triads / dynamic update
class IdenticalSets(HyperarenaError):
    """Two members of a hyperedge triple have equal vertex sets."""


class ClassCountMismatch(HyperarenaError):
    """The canonical triad class table does not have 26 entries."""


class MissingTimestamps(HyperarenaError):
    """Temporal counting was requested on edges without timestamps."""


class InconsistentState(HyperarenaError):
    """An incremental update drove a counter below zero."""


class OracleCapExceeded(HyperarenaError):
    """Reference hypergraph is too large for brute-force enumeration."""


# ingestion / benchmarking
class ParseError(HyperarenaError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CardinalityMismatch(HyperarenaError, ValueError):
    """nverts/simplices/times files of a dataset disagree."""


class InsufficientEdges(HyperarenaError):
    """Not enough live hyperedges to draw the requested deletions."""


class ConfigError(HyperarenaError, ValueError):
    pass


class VerificationFailed(HyperarenaError):
    def __init__(self, batch, component, expected, actual):
        self.batch = batch
        self.component = component
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"batch {batch}: {component} diverged "
            f"(recount={expected}, incremental={actual})"
        )
