"""Exception hierarchy shared by the library and the CLI."""


class FgqcError(Exception):
    """Base class for all library errors."""


# finite fields
class NonPrimeCharacteristic(FgqcError, ValueError):
    pass


class FieldTooLarge(FgqcError, ValueError):
    pass


class DivisionByZero(FgqcError, ZeroDivisionError):
    pass


class NotASubfield(FgqcError, ValueError):
    pass


# geometry
class InvalidGeometry(FgqcError, ValueError):
    pass


class SamePoint(FgqcError, ValueError):
    pass


class NonPrimitiveOrbit(FgqcError, ValueError):
    pass


class GeometryTooLarge(FgqcError, ValueError):
    pass


# circulants
class SizeMismatch(FgqcError, ValueError):
    pass


class NotInvertible(FgqcError, ArithmeticError):
    """Raised when a circulant has no inverse modulo x^p - 1."""


class PivotNotInvertible(NotInvertible):
    pass


# keys
class KeyError_(FgqcError):
    """Base for key problems (named to avoid shadowing the builtin)."""


class NoInvertibleBlock(KeyError_):
    pass


class TooFewClasses(KeyError_, ValueError):
    pass


class BadBlockLength(KeyError_, ValueError):
    pass


class MalformedKey(KeyError_, ValueError):
    pass


class UnknownGeometry(MalformedKey):
    pass


# cipher
class LengthMismatch(FgqcError, ValueError):
    pass


class MalformedFrame(FgqcError, ValueError):
    def __init__(self, message, offset=None):
        super().__init__(message if offset is None else f"{message} (at byte offset {offset})")
        self.offset = offset


class DecodeFailure(FgqcError):
    """The belief-propagation decoder did not reach a codeword."""

    def __init__(self, message="decoder did not converge", iterations=None):
        super().__init__(message)
        self.iterations = iterations
