"""Exception types raised across the package."""


class QWeylError(Exception):
    """Base class for every error raised by qweyl."""


# field construction and arithmetic
class NotPrime(QWeylError, ValueError):
    pass


class NoRootOfUnity(QWeylError, ValueError):
    pass


class HintNotPrimitive(QWeylError, ValueError):
    pass


class CtxMismatch(QWeylError, ValueError):
    pass


class DivisionByZero(QWeylError, ZeroDivisionError):
    pass


class UnsupportedOverThisField(QWeylError):
    """A root needed by the computation does not lie in the coefficient field."""


# matrices
class ShapeMismatch(QWeylError, ValueError):
    pass


class Singular(QWeylError, ValueError):
    pass


class NotNilpotent(QWeylError, ValueError):
    pass


# constructors and solutions
class BadLength(QWeylError, ValueError):
    pass


class ZeroParameter(QWeylError, ValueError):
    pass


class RangeError(QWeylError, ValueError):
    pass


class NotASolution(QWeylError, ValueError):
    pass


class WrongFamily(QWeylError, ValueError):
    pass


# reduction
class NotIrreducibleShape(QWeylError, ValueError):
    pass


class NoEigenvalueInField(QWeylError, ValueError):
    pass


class ZeroOffdiagonal(QWeylError, ValueError):
    pass


class CommutativePair(QWeylError, ValueError):
    pass


class Reducible(QWeylError, ValueError):
    pass


# census
class BudgetExceeded(QWeylError, RuntimeError):
    pass
