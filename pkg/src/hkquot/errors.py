"""Exception types shared across the package.

The CLI maps these onto process exit codes: precondition violations and
parse problems exit 2, failed suite assertions exit 3, undecided solves
exit 4.
"""

from __future__ import annotations


class DimensionMismatchError(ValueError):
    """Input sizes are inconsistent with the weight system."""


class PreconditionError(ValueError):
    """A documented operation precondition does not hold."""


class BoundExceededError(RuntimeError):
    """An enumeration exceeded its configured bound."""


class UndecidedError(RuntimeError):
    """The solver could not reach a certificate-backed verdict.

    Raised for strictly semistable points whose orbit does not meet the
    moment-map zero level: the infimum is finite but not attained, so
    neither convergence nor a destabilizing certificate exists.
    """
