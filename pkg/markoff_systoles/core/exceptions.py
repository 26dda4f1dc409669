class MarkoffError(Exception):
    """Base class for every error raised by markoff_systoles"""
    pass

class EnvironmentConfigError(MarkoffError):
    """Raised when environment variables cannot be loaded or hold invalid values"""
    pass

class ValidationError(MarkoffError):
    """Raised when an internal consistency check fails"""
    pass

class InvalidSlopeError(MarkoffError):
    """Raised for the pair (0, 0), which is not a slope"""
    pass

class NotNeighborsError(MarkoffError):
    """Raised when two slopes are required to be Farey neighbors and are not"""
    pass

class NonFiniteInputError(MarkoffError):
    """Raised when a numeric input is nan or infinite"""
    pass

class DegenerateParameterError(MarkoffError):
    """Raised on excluded degenerate parameters (mu = 4, k = 2)"""
    pass

class DomainError(MarkoffError):
    """Raised when parameters fall outside the domain of a theorem"""
    pass

class PrecisionLossError(MarkoffError):
    """Raised when a region value exceeds the representable limit"""
    pass

class ReducibleTripleError(MarkoffError):
    """Raised when a trace triple lies on the reducible locus"""
    pass

class OffVarietyError(MarkoffError):
    """Raised when a point is required to lie on a variety and does not"""
    pass

class EllipticTraceError(MarkoffError):
    """Raised when a two-sided length is requested for a trace below 2"""
    pass

class InvalidInputError(MarkoffError):
    """Raised when a command-line literal cannot be parsed"""
    pass
