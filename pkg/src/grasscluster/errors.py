"""Exception types shared across the package."""


class GrassClusterError(Exception):
    """Base class for all package errors."""


class NotDivisible(GrassClusterError):
    """Exact Laurent division left a nonzero remainder."""


class LaurentViolation(GrassClusterError):
    """An exchange quotient failed to be a Laurent polynomial."""


class MissingVariable(GrassClusterError, KeyError):
    """An evaluation assignment lacks a variable that occurs in the polynomial."""


class ZeroToNegativePower(GrassClusterError, ZeroDivisionError):
    """A variable assigned zero occurs with a negative exponent."""


class NotMutable(GrassClusterError):
    """Mutation was requested in a frozen (or unknown) direction."""


class BadIndex(GrassClusterError, IndexError):
    """An index lies outside the allowed range."""


class BadArity(GrassClusterError, ValueError):
    """A function received the wrong number of indices."""


class NoExchange(GrassClusterError):
    """A label has no quadrilateral (2,4)-exchange in its collection."""


class Ambiguous(GrassClusterError):
    """A label admits more than one (2,4)-exchange."""


class SignConflict(GrassClusterError):
    """Sign propagation while building an exchange matrix was inconsistent."""


class CapExceeded(GrassClusterError):
    """A search hit its configured size cap."""


class ChartSingular(GrassClusterError, ZeroDivisionError):
    """A chart denominator vanishes at the requested point."""


class NotCrossing(GrassClusterError, ValueError):
    """Two index pairs were expected to cross but do not."""


class NotHomogeneous(GrassClusterError):
    """The terms of a polynomial carry different toral weights."""


class ParametersNotIncreasing(GrassClusterError, ValueError):
    """Vandermonde parameters must be positive and strictly increasing."""
