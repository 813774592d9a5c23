"""Exception types shared across the package."""


class WorkbenchError(Exception):
    """Base class for all errors raised by finsemi."""


class RangeError(WorkbenchError, ValueError):
    """A multiplication table entry (or table shape) is out of range."""


class AssociativityError(WorkbenchError, ValueError):
    def __init__(self, triple):
        self.triple = tuple(triple)
        i, j, k = self.triple
        super().__init__(f"(e{i}*e{j})*e{k} != e{i}*(e{j}*e{k})")


class NotACongruence(WorkbenchError, ValueError):
    pass


class NotAnIdeal(WorkbenchError, ValueError):
    pass


class SizeGuard(WorkbenchError, ValueError):
    """A construction parameter exceeds the supported size."""


class ParseError(WorkbenchError, ValueError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        where = f" at position {position}" if text else ""
        super().__init__(f"{message}{where}")


class UnboundVariable(WorkbenchError, KeyError):
    pass


class BudgetExceeded(WorkbenchError, RuntimeError):
    """An exhaustive check would exceed its configured cost budget."""


class NotAProductIdentity(WorkbenchError, ValueError):
    pass


class AlreadyRegular(WorkbenchError, ValueError):
    pass


class TrivialIdentity(WorkbenchError, ValueError):
    pass


class UnknownPreset(WorkbenchError, KeyError):
    pass
