"""Exception hierarchy.

Every error raised by the library derives from :class:`CrowngraftError`.  The
three middle classes map onto CLI exit codes (schema 2, domain 3, numerical 4).
"""


class CrowngraftError(Exception):
    exit_code = 1


class SchemaError(CrowngraftError, ValueError):
    exit_code = 2


class DomainError(CrowngraftError, ValueError):
    exit_code = 3


class NumericalError(CrowngraftError, ArithmeticError):
    exit_code = 4


# moebius
class DegenerateTriple(DomainError):
    pass


class DegenerateAxis(DomainError):
    pass


class DegenerateMap(DomainError):
    pass


# polygons and diagonals
class InvalidPolygon(DomainError):
    pass


class CoordOutOfRange(DomainError):
    pass


class CrossingDiagonals(DomainError):
    pass


class NotATriangulation(DomainError):
    pass


# grafting
class ConfigurationInvalid(DomainError):
    pass


class DegenerateQuadrilateral(DomainError):
    pass


# crowns
class NonPositiveBoundaryMeasure(DomainError):
    pass


class ShapeMismatch(DomainError):
    pass


class NotRealizable(DomainError):
    pass


# matching
class UnbalancedRows(DomainError):
    pass


class BasepointCollision(DomainError):
    pass


# ODE engine
class SeedRadiusTooSmall(NumericalError):
    pass


class StepFailure(NumericalError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NoConvergence(NumericalError):
    def __init__(self, sector, message=None):
        super().__init__(message or f"tip estimate for sector {sector} did not stabilize")
        self.sector = sector


class CriticalPointOnStencil(NumericalError):
    pass
