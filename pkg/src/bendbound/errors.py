"""Exception hierarchy shared by every module of the package."""


class BendboundError(Exception):
    """Base class for all errors raised by bendbound."""


class DomainError(BendboundError, ValueError):
    """An input lies outside the domain of a formula.

    ``threshold`` names the violated bound (e.g. ``"sech(L)/2"``) so the CLI
    can report it.
    """

    def __init__(self, message, threshold=None, limit=None):
        super().__init__(message)
        self.threshold = threshold
        self.limit = limit


class DisjointError(BendboundError):
    """Two half-planes (or half-spaces) have no exterior angle."""


class CriticalPointError(BendboundError):
    """The derivative of a map vanishes at an evaluation point."""


class BudgetExceeded(BendboundError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class TangencyError(BendboundError):
    """An arc endpoint sits on a leaf and crossing cannot be decided."""


class InvalidLamination(BendboundError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotStackedError(BendboundError):
    def __init__(self, message, leaves=None):
        super().__init__(message)
        self.leaves = leaves


class NotGoodError(BendboundError):
    """Consecutive half-planes of a partition do not intersect."""


class SingularityError(BendboundError):
    """A dual shape-operator eigenvalue equals -1."""


class RejectionBudgetExceeded(BendboundError):
    pass


class ConfigInvalid(BendboundError):
    pass


class QuadratureNonConvergent(BendboundError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
