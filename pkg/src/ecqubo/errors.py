"""Exception types shared across the package."""


class ECQuboError(Exception):
    """Base class for all package errors."""


class GraphError(ECQuboError, ValueError):
    """Invalid graph input: bad edge list, unknown builtin, bad parameters."""


class DisconnectedGraphError(GraphError):
    pass


class ConvergenceError(ECQuboError, RuntimeError):
    pass


class CapacityError(ECQuboError):
    """A solver guard refused a problem that is too large to enumerate."""
