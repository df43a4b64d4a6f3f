"""
Error Hierarchy
===============

Every failure the library can raise derives from GegenbauerError so the CLI
can map it onto an exit code.
"""


class GegenbauerError(Exception):
    """Base class for all library errors"""


class ParameterError(GegenbauerError, ValueError):
    """A parameter combination is outside the admissible range"""


class DomainError(GegenbauerError, ValueError):
    """An argument lies outside the domain of an operation"""


class DivergentParameters(DomainError):
    """The series or integral diverges for these parameters"""


class QuadratureError(GegenbauerError, ArithmeticError):
    """Numerical integration failed"""


class ToleranceNotMet(QuadratureError):
    """Subdivision budget exhausted before reaching the requested tolerance"""


class NonFiniteIntegrand(QuadratureError):
    """The integrand returned inf or nan"""


class TailNotCertified(QuadratureError):
    """The tail majorant stays above tail_tol at the maximum cutoff"""


class SeriesNotConverged(GegenbauerError, ArithmeticError):
    """A series did not converge within its term budget"""


class QuotientError(GegenbauerError, ArithmeticError):
    """The shift-multiplier quotient is ill-conditioned or reference dependent"""


class CalibrationError(GegenbauerError):
    """A calibrated constant is missing, non-finite, or misses its ceiling"""


class DivergentNorm(GegenbauerError, ArithmeticError):
    """A weighted norm has no certified truncation domain"""


class DominationViolation(GegenbauerError):
    """M_G is positive where M_mu vanishes"""


class FixturesError(GegenbauerError):
    """The fixtures file is missing or belongs to another configuration"""
