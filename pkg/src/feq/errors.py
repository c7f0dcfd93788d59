"""Exception hierarchy shared by every module."""


class FeqError(Exception):
    """Base class for all package errors."""


class DivisionByZero(FeqError, ZeroDivisionError):
    pass


class BackendMismatch(FeqError, TypeError):
    pass


class Infeasible(FeqError, ArithmeticError):
    """A linear system has no solution.

    ``certificate`` is a row vector ``w`` with ``w @ M == 0`` and
    ``w @ rhs != 0``; ``column`` names the offending right-hand side when
    several were solved at once.
    """

    def __init__(self, certificate, column=0, message="system is inconsistent"):
        super().__init__(message)
        self.certificate = certificate
        self.column = column


class MalformedTable(FeqError, ValueError):
    pass


class UnknownSpec(FeqError, ValueError):
    pass


class NotAGroup(FeqError, TypeError):
    pass


class NotFinite(FeqError, TypeError):
    pass


class NotFormulaCarrier(FeqError, TypeError):
    pass


class RelationViolated(FeqError, ValueError):
    pass


class ZeroValueForCharacter(FeqError, ValueError):
    pass


class CarrierMismatch(FeqError, ValueError):
    pass


class BasePointInvalid(FeqError, ValueError):
    pass


class TransformationPropertyViolated(FeqError, ValueError):
    pass


class ConstraintViolated(FeqError, ValueError):
    def __init__(self, name, detail=""):
        super().__init__(f"constraint {name} violated" + (f": {detail}" if detail else ""))
        self.name = name


class WrongCarrierKind(FeqError, TypeError):
    pass


class AuxiliaryInvalid(FeqError, ValueError):
    pass


class InternalVerificationFailed(FeqError, AssertionError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ProbeInsufficient(FeqError, ValueError):
    pass


class RankNotFull(FeqError, ValueError):
    pass


class NotASolution(FeqError, ValueError):
    def __init__(self, report):
        super().__init__(f"tuple fails verification ({report.failure_count} failing pairs)")
        self.report = report


class Unclassifiable(FeqError, ValueError):
    def __init__(self, equation, reason=""):
        super().__init__(f"{equation}: no branch matches" + (f" ({reason})" if reason else ""))
        self.equation = equation
        self.reason = reason
