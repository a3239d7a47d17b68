"""Exception hierarchy shared by the library and the CLI.

The CLI maps these onto exit codes: input errors exit 1, domain or
hypothesis violations exit 2, internal invariant failures exit 3.
"""


class TribiasError(Exception):
    """Base class for all errors raised by this package."""


class GraphInputError(TribiasError, ValueError):
    """Malformed input: bad edge list, dimension mismatch, invalid spec."""


class DomainError(TribiasError, ValueError):
    """Arguments outside the domain where a formula or model is defined."""


class InvariantError(TribiasError, RuntimeError):
    """An internal consistency check failed; indicates a bug."""
