"""Exception hierarchy shared by all cibound modules."""


class CiboundError(Exception):
    """Base class for library errors."""


class InvalidInput(CiboundError, ValueError):
    pass


class DivisionByZero(CiboundError, ZeroDivisionError):
    pass


class FieldMismatch(CiboundError, TypeError):
    """Raised when elements or forms over different fields meet in one operation."""


class UnsupportedField(CiboundError, ValueError):
    pass


class CharMismatch(CiboundError, ValueError):
    pass


class FormSyntaxError(CiboundError, SyntaxError):
    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position}")
        self.text = text
        self.position = position


class InhomogeneousError(CiboundError, ValueError):
    def __init__(self, degrees):
        self.degrees = sorted(set(degrees))
        super().__init__(f"terms of mixed total degree: {self.degrees}")


class DegenerateDenominator(CiboundError, ArithmeticError):
    pass


class UnsupportedSize(CiboundError, ValueError):
    pass


class IntegralityViolation(CiboundError, AssertionError):
    pass


class OrbitBudgetExceeded(CiboundError, MemoryError):
    def __init__(self, budget, reached):
        super().__init__(f"orbit exceeded budget of {budget} elements (reached {reached})")
        self.budget = budget
        self.reached = reached


class InsufficientSmoothSamples(CiboundError, RuntimeError):
    def __init__(self, message, reports=None):
        super().__init__(message)
        self.reports = reports or []


class DivisibilityViolation(CiboundError, AssertionError):
    """A computed stabilizer order failed a divisibility check.

    Carries the offending form text and the report so the counterexample can be replayed.
    """

    def __init__(self, message, form_text=None, report=None):
        super().__init__(message)
        self.form_text = form_text
        self.report = report
