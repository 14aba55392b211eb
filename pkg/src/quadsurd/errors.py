"""Exception hierarchy shared by the library and the command line."""


class SurdError(ValueError):
    """Base class for rejected (D, Q) inputs."""


class NotCoprime(SurdError):
    pass


class NotGreaterThanOne(SurdError):
    pass


class PerfectSquare(SurdError):
    pass


class InternalInvariantViolation(RuntimeError):
    """An exact-arithmetic invariant failed. Always a bug, never bad input."""


class PeriodNotFound(RuntimeError):
    pass


class TheoremViolation(Exception):
    """A numerical check of one of the unit/convergent theorems failed."""


class NotRegular(ValueError):
    pass


class BadDivisor(ValueError):
    pass


class NotRegularIndex(ValueError):
    pass
