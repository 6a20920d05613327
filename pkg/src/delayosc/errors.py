"""Exception hierarchy shared by every delayosc module."""


class DelayOscError(Exception):
    """Base class for all errors raised by delayosc."""


class InvalidParameter(DelayOscError, ValueError):
    pass


class FrequencyMismatch(DelayOscError, ValueError):
    """Two trig parts at different frequencies were combined.

    The step recursion only ever produces one frequency, so this signals
    internal misuse rather than bad user input.
    """


class OutOfHorizon(DelayOscError, ValueError):
    pass


class ExpressionError(DelayOscError):
    """Base class for parse, identifier and evaluation failures."""


class ExprSyntaxError(ExpressionError):
    def __init__(self, message, offset, expected=None):
        self.offset = offset
        self.expected = expected
        detail = f"{message} at offset {offset}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)


class UnknownIdentifier(ExpressionError):
    def __init__(self, name, offset):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown identifier {name!r} at offset {offset}")


class EvalError(ExpressionError):
    pass
