"""Exception hierarchy shared by the library and the command line."""


class MultiwebError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class InvalidEdge(MultiwebError, ValueError):
    exit_code = 2

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class InvalidArgument(MultiwebError, ValueError):
    exit_code = 2


class ResourceLimit(MultiwebError):
    exit_code = 3


class InfeasibleMultiplicity(MultiwebError, ValueError):
    exit_code = 2


class NotFeasible(MultiwebError, ValueError):
    exit_code = 2


class NoConvergence(MultiwebError):
    exit_code = 4


class WindowWraps(MultiwebError, ValueError):
    exit_code = 2


class InitFailure(MultiwebError):
    exit_code = 4
