"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class CliqueDensityError(Exception):
    """Base class for all package errors."""


class DomainError(CliqueDensityError, ValueError):
    """An argument lies outside the domain of a function."""


class BreakpointError(DomainError):
    """F_r is not differentiable at the requested edge density."""


class ParameterError(CliqueDensityError, ValueError):
    """Invalid (r, s, M) parameters for the analytic machinery."""


class FormatError(CliqueDensityError, ValueError):
    """Malformed graph data or file contents."""


class DegenerateLinkError(CliqueDensityError):
    """The link graph of a vertex with zero rooted degree was requested."""


class UnsupportedWeightsError(CliqueDensityError, ValueError):
    """A blow-up was requested for a graph with fractional edge weights."""


class LimitError(CliqueDensityError):
    """A hard resource limit (enumeration size, supported r) was exceeded."""


class NotStationaryError(CliqueDensityError):
    """A check that is only valid at stationary points was given a non-stationary graph."""


class DivergenceError(CliqueDensityError):
    """Non-finite values appeared during descent."""
