"""Exception hierarchy shared by every module.

All domain errors derive from :class:`ForgeError`; the CLI maps them to exit
code 2.
"""


class ForgeError(Exception):
    """Base class for domain errors."""


# scalars
class ZeroInversion(ForgeError, ZeroDivisionError):
    pass


class NotCyclotomic(ForgeError):
    pass


class BadGaloisIndex(ForgeError):
    pass


class FieldMismatch(ForgeError):
    pass


class FieldError(ForgeError, ValueError):
    """A scalar literal could not be parsed in the requested field."""


# tensors
class DimMismatch(ForgeError):
    pass


class SlotOutOfRange(ForgeError):
    pass


class DegreeMismatch(ForgeError):
    pass


class TypeArithmeticMismatch(ForgeError):
    pass


class DimensionOverflow(ForgeError):
    pass


# morphism calculus
class NotWellDefined(ForgeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class TargetNotLine(ForgeError):
    pass


class SingularMatrix(ForgeError):
    def __init__(self, message, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class ExpressionTypeError(ForgeError, TypeError):
    pass


# closure
class UnsupportedField(ForgeError):
    pass


class BudgetExceeded(ForgeError):
    pass


# identities
class WrongTensorType(ForgeError):
    pass


class NotAGrading(ForgeError):
    pass


# structures
class CocycleInvalid(ForgeError):
    pass


class WordNotRelator(ForgeError):
    pass


class NotAbelian(ForgeError):
    pass


class MissingDecomposition(ForgeError):
    pass


class ParamInvalid(ForgeError):
    pass


class InternalCheckFailed(ForgeError):
    pass


class NotTaftShaped(ForgeError):
    pass


# trace invariants
class ArityMismatch(ForgeError):
    pass


# file formats
class ParseError(ForgeError):
    pass


class SchemaError(ForgeError):
    pass
