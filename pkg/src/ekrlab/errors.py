"""Exception types raised across ekrlab."""


class EKRError(Exception):
    pass


class InvalidParameters(EKRError, ValueError):
    pass


class UnsupportedUniverse(EKRError, ValueError):
    """Ground set too wide for the single-word class masks (n > 64)."""


class InvalidPair(EKRError, ValueError):
    pass


class InvalidFixedClasses(EKRError, ValueError):
    pass


class EmptyInput(EKRError, ValueError):
    pass


class OutOfRange(EKRError, ValueError):
    pass


class OutOfTheoremScope(EKRError, ValueError):
    pass


class TooLargeUniverse(EKRError, ValueError):
    pass


class IncompleteSearch(EKRError, RuntimeError):
    """Node cap reached before the search tree was exhausted."""


class InconclusiveThreshold(EKRError, RuntimeError):
    pass


class UnsupportedParams(EKRError, ValueError):
    pass


class NonMonotoneCriterion(EKRError, ValueError):
    pass
