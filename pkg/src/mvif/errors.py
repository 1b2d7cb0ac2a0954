"""Exception hierarchy shared by every module of the package."""


class MVIFError(Exception):
    """Base class for all errors raised by this package."""


class InvariantViolation(MVIFError):
    """An internal invariant failed; indicates a bug or an inconsistent setup."""


# finite fields

class NonPrimitivePolynomial(MVIFError):
    pass


class ReduciblePolynomial(MVIFError):
    pass


class DivisionByZero(MVIFError, ZeroDivisionError):
    pass


class CoefficientOutsideSubfield(InvariantViolation):
    pass


class NotFixedByFrobeniusPower(MVIFError):
    pass


# polynomials

class ArityMismatch(MVIFError, ValueError):
    pass


class TableParseError(MVIFError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


# cyclic codes

class BadOrder(MVIFError, ValueError):
    pass


class OverlappingCosets(MVIFError, ValueError):
    pass


class GeneratorNotOverSubfield(InvariantViolation):
    pass


class InjectivityViolated(InvariantViolation):
    def __init__(self, first, second, tuple_):
        self.first = first
        self.second = second
        self.tuple = tuple_
        super().__init__(
            f"patterns {first} and {second} share syndrome tuple {tuple_}"
        )


# interpolation and representations

class DuplicatePoints(MVIFError, ValueError):
    pass


class BudgetExceeded(MVIFError):
    pass


class HypothesisViolated(InvariantViolation):
    pass


class TargetInDefiningSet(MVIFError, ValueError):
    pass


class StructureTheoremViolated(InvariantViolation):
    pass


# decoding

class MissingArtifact(MVIFError, KeyError):
    def __init__(self, residue):
        self.residue = residue
        super().__init__(f"no artifact covers unknown syndrome residue {residue}")

    def __str__(self):
        return self.args[0]


class ZeroDerivativeAtRoot(MVIFError):
    pass
