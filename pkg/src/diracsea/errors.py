"""Exception hierarchy shared by all modules.

Domain errors (bad physical input) and numerical failures are kept in
separate branches so the CLI can map them to distinct exit codes.
"""


class DomainError(ValueError):
    """Invalid physical input (masses, generation count, feasibility)."""


class DegenerateMasses(DomainError):
    pass


class WrongGenerationCount(DomainError):
    pass


class Infeasible(DomainError):
    pass


class NonPositiveC0(DomainError):
    pass


class PreconditionViolation(DomainError):
    pass


class BadFrameVector(DomainError):
    pass


class DegenerateZ(DomainError):
    pass


class UnsupportedFactor(DomainError):
    pass


class DegreeMismatch(DomainError):
    pass


class NumericalFailure(RuntimeError):
    """Quadrature / fitting / branch evaluation did not meet its tolerance."""


class QuadratureFailure(NumericalFailure):
    pass


class FitFailure(NumericalFailure):
    pass


class BranchFailure(NumericalFailure):
    pass
