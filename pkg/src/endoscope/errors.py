"""Shared exception types."""


class PrecisionError(ArithmeticError):
    """A query needs more p-adic digits than are guaranteed.

    Raised instead of ever returning a silently wrong answer; callers may
    retry with a larger working precision K.
    """


class VerificationError(Exception):
    """An identity that the theory guarantees failed to check out.

    This always indicates a bug (or a genuinely bad input), never a tolerance
    issue: all comparisons behind it are exact.
    """
