"""
Exception hierarchy shared by the toolkit.
Each error carries the process exit code the command-line runners return.
"""


class CoreballError(Exception):
    """Base class for all toolkit errors"""
    exit_code = 2


class UsageError(CoreballError):
    """Invalid flags, flag combinations or configuration values"""
    exit_code = 1


class DataError(CoreballError):
    """Unreadable or malformed dataset and model files"""
    exit_code = 2


class ParseError(DataError):
    """Malformed LIBSVM line; always names the offending line number"""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"{message} at line {line_number}")
        self.line_number = line_number


class NonConvergenceError(CoreballError):
    """A solver hit its iteration cap before the stop test fired"""
    exit_code = 3

    def __init__(self, message: str, alpha=None, iterations: int = 0):
        super().__init__(message)
        self.alpha = alpha
        self.iterations = iterations


class DegenerateDirectionError(CoreballError):
    """Line search along a direction of zero length"""


class ConsistencyError(CoreballError):
    """Internal numerical contract violated (diagonal, radius, simplex)"""
