"""Exception hierarchy shared by all modules."""


class EmError(Exception):
    """Base class for every error raised by this package."""


class GraphError(EmError, ValueError):
    """The input graph violates a structural invariant."""


class DuplicateEdge(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class UnbalancedSidesWarning(UserWarning):
    """Legal input, but a graph with n_left != n_right has no perfect matching."""


class NotPerfectMatching(EmError):
    pass


class CycleNotAlternating(EmError):
    pass


class NoPerfectMatching(EmError):
    pass


class NoPerfectMatchingThroughEdge(NoPerfectMatching):
    pass


class NotAWalk(EmError, ValueError):
    pass


class NotClosed(NotAWalk):
    pass


class TooLarge(EmError):
    pass


class CapExceeded(EmError):
    pass


class InvalidSpec(EmError, ValueError):
    pass


class ParseError(EmError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
