"""Exception types shared across the kernel."""


class KernelError(Exception):
    """Base class for all kernel errors."""


class InputError(KernelError):
    """Malformed or inconsistent input (bad fixture, bad witness, ...)."""


class PrecisionExhausted(KernelError):
    """The working precision is too small to decide a question."""


class ApparentZero(PrecisionExhausted):
    """An element is indistinguishable from zero at its precision."""


class DivisionByApparentZero(ApparentZero):
    pass


class NotASquare(KernelError):
    pass


class IllConditioned(PrecisionExhausted):
    """A zero/nonzero decision fell inside the ambiguity band."""


class NotDivisible(KernelError):
    """A Jacobian point has no half."""


class DivergenceSuspected(KernelError):
    """A recursion or subdivision exceeded its depth cap."""


class StoppingRuleUnmet(DivergenceSuspected):
    pass


class FixtureMissing(InputError):
    """A global-data fixture file is not available."""


class InternalMismatch(KernelError):
    """Two independent computations of the same quantity disagree."""
