"""Exception types shared across the package."""


class AtlError(Exception):
    """Base class for all errors raised by this package."""


class ModelParseError(AtlError):
    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class FormulaSyntaxError(AtlError):
    def __init__(self, message, pos=None, text=None):
        self.pos = pos
        self.message = message
        where = f"at position {pos}: " if pos is not None else ""
        super().__init__(where + message)


class DialectError(FormulaSyntaxError):
    """A well-formed construct that the selected dialect does not allow."""


class ResolutionError(AtlError):
    """A formula or strategy mentions an agent, state or move the structure lacks."""


class StructureError(AtlError):
    """Raised when an operation needs a valid structure and gets an invalid one."""


class BudgetExceeded(AtlError):
    def __init__(self, what, bound):
        self.bound = bound
        super().__init__(f"{what} exceeded budget of {bound}")


class StrategyError(AtlError):
    pass
