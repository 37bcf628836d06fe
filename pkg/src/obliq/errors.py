"""Exception hierarchy shared by every module."""


class ObliqError(ValueError):
    """Base class for input or data problems detected by the library."""


class DegenerateSample(ObliqError):
    pass


class DegenerateStats(ObliqError):
    pass


class InvalidSlope(ObliqError):
    pass


class HorizontalUndefined(DegenerateStats):
    """Raised when S_xy = 0, so the x-on-y regression has no slope."""


class SignAmbiguous(DegenerateStats):
    pass


class DenominatorZero(DegenerateStats):
    pass


class RhoZero(DegenerateStats):
    pass


class OutOfRange(ObliqError):
    """A slope lies outside the admissible interval [ver, hor]."""


class NoConvergence(RuntimeError):
    pass
