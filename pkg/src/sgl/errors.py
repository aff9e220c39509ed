"""Exception hierarchy for sgl.

Domain errors are deliberately fine-grained so the service layer can map
them onto exit codes without string matching: input-level problems
(bad intervals, bad hypotheses) terminate with code 1, while
certification or containment failures — where a result exists but the
claim does not hold — terminate with code 2.
"""


class SglError(Exception):
    """Base class for everything raised on purpose."""


class InvalidInterval(SglError):
    pass


class InvalidPeriod(SglError):
    pass


class InvalidArity(SglError):
    pass


class HypothesisViolated(SglError):
    pass


class OutOfRange(SglError):
    pass


class NumericalFailure(SglError):
    pass


class IllConditioned(SglError):
    """Linear algebra gave up beyond the documented regularization.

    Carries ``condition_estimate`` when one is available.
    """

    def __init__(self, msg, condition_estimate=None):
        super().__init__(msg)
        self.condition_estimate = condition_estimate


class BudgetExceeded(SglError):
    """A search ran out of its explicit budget.

    ``best`` holds the best value achieved before giving up (a residual,
    an observed sup, ...) so callers can report partial progress.
    """

    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


class DegenerateTranslates(SglError):
    pass


class StepsDependent(SglError):
    pass


class SpectrumMismatch(SglError):
    pass


class NoCertificate(SglError):
    """A certification claim failed; the offending value rides along."""

    def __init__(self, msg, value=None):
        super().__init__(msg)
        self.value = value


class NonInterpolating(SglError):
    pass


class NotContraction(SglError):
    pass


class ContainmentViolation(SglError):
    pass


class InvalidTrials(SglError):
    pass


class ConfigError(SglError):
    """Config file problem; ``line`` is the 1-based offending line number."""

    def __init__(self, msg, line=None):
        super().__init__(msg)
        self.line = line
