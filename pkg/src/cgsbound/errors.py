"""Exception hierarchy shared across the package."""


class CGSError(Exception):
    """Base class for every error raised by :mod:`cgsbound`."""


class ParseError(CGSError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SelfLoopError(ParseError):
    pass


class TooSmallError(CGSError):
    pass


class DisconnectedSampleError(CGSError):
    pass


class NotConnectedError(CGSError):
    def __init__(self, message, vertex=None):
        self.vertex = vertex
        super().__init__(message)


class CapExceededError(CGSError):
    pass


class InvalidFlowError(CGSError):
    pass


class ConvergenceError(CGSError):
    pass


class ConstantVectorError(CGSError):
    pass


class NonPositiveDenominatorError(CGSError):
    pass
