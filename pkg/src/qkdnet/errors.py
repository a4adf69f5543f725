"""Exception types shared across the package.

Everything derives from ValueError so that callers (and the CLI) can treat
any precondition violation uniformly.
"""


class NetworkParseError(ValueError):
    """Raised when a network text file is malformed.  Carries the line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DirectLinkError(ValueError):
    """Raised when the two endpoints are directly adjacent.

    A direct link means no intermediate vertex cut exists, so cut-based
    quantities are undefined for the pair.
    """


class InfeasibleError(ValueError):
    """Raised when more disjoint paths are requested than the cut order allows."""

    def __init__(self, message: str, cut_order: int):
        super().__init__(message)
        self.cut_order = cut_order


class SizeCapError(ValueError):
    """Raised when an exhaustive-enumeration routine is asked to exceed its cap."""


class ProtocolError(ValueError):
    """Raised when a key-relay protocol cannot run on the given network."""
