"""Exception hierarchy shared by all modules."""


class CJFError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 2


class InvalidInput(CJFError, ValueError):
    exit_code = 2


class NotPrimitive(InvalidInput):
    pass


class MissingAssertion(InvalidInput):
    """Primitivity cannot be checked and was not asserted by the caller."""


class OutOfDomain(InvalidInput):
    pass


class Underivable(CJFError):
    """A partial Zech backend cannot reach the requested exponent."""

    exit_code = 3


class CapExceeded(CJFError):
    exit_code = 3


class Timeout(CapExceeded):
    """A step budget ran out before the computation finished."""


class Unsupported(CJFError):
    exit_code = 3


class VerificationError(CJFError):
    exit_code = 4


class WrongLength(VerificationError):
    pass


class Inconsistent(VerificationError):
    pass


class NotConjugate(VerificationError):
    pass


class WrongOrder(VerificationError):
    pass


class InvalidQuadruple(VerificationError):
    pass


class OverlappingPairs(InvalidInput):
    pass


class DuplicateSuffix(InvalidInput):
    pass


class Overlap(VerificationError):
    pass


class CacheFormatError(InvalidInput):
    pass
