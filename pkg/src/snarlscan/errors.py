"""Exception types shared across the package.

Exit-code mapping used by the CLI: I/O and parse problems exit 2,
graph structure violations exit 3, classifier disagreements exit 1.
"""


class SnarlscanError(Exception):
    """Base class for all package errors."""

    exit_code = 3


class GfaParseError(SnarlscanError):
    """Malformed GFA record. Carries the 1-based line number."""

    exit_code = 2

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class GfaReferenceError(SnarlscanError):
    """A record references a segment that does not exist."""

    exit_code = 2


class StructureError(SnarlscanError):
    """A graph violates a structural invariant (bipartiteness, rooting, ids)."""

    exit_code = 3


class RootingError(StructureError):
    """Root missing or not all nodes reachable from it."""


class SizeLimitError(SnarlscanError):
    """A guarded operation refused to run on an oversized input."""

    exit_code = 3


class MalformedSnarlError(SnarlscanError):
    """A claimed snarl violates the separation criterion."""

    exit_code = 3


class CrosscheckMismatch(SnarlscanError):
    """The LCA and naive classifiers disagreed on at least one snarl."""

    exit_code = 1
