"""Exception types raised by the silence-interval toolkit."""


class SilenceError(ValueError):
    """Base class for precondition failures."""


class InvalidParameterError(SilenceError):
    """A parameter violates an operation's precondition."""


class NullMassError(SilenceError):
    """An interval carries (numerically) zero probability mass."""


class InfeasibleError(SilenceError):
    """The requested probability mass cannot be collected."""


class SupportSamplingError(RuntimeError):
    """The density vanishes where its declared support says it should not."""
