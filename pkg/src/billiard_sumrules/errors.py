"""Exception hierarchy shared by all modules."""


class SumRuleError(Exception):
    """Base class for every error raised by this package."""


class ParameterOutOfRange(SumRuleError, ValueError):
    pass


class PointOutsideReference(SumRuleError, ValueError):
    pass


class CoincidentPoints(SumRuleError, ValueError):
    pass


class OnSymmetryAxis(SumRuleError, ValueError):
    pass


class UnsupportedCombination(SumRuleError, ValueError):
    pass


class MismatchedLeadingOrder(SumRuleError, ValueError):
    pass


class IllConditionedFit(SumRuleError, ValueError):
    pass


class BasisTooSmall(SumRuleError, ValueError):
    pass


class NonConvergence(SumRuleError, RuntimeError):
    pass


class RootBracketFailure(SumRuleError, RuntimeError):
    pass


class EigensolverFailure(SumRuleError, RuntimeError):
    pass
