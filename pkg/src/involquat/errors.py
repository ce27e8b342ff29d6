"""Exception hierarchy.

Precondition failures and theorem-backed negatives are kept apart: the
former raise a subclass of :class:`PreconditionViolated`, the latter are
returned as :class:`involquat.quatconstruct.NoSubalgebra` values.
"""

from __future__ import annotations


class InvolquatError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(InvolquatError, ZeroDivisionError):
    pass


class FieldMismatch(InvolquatError, TypeError):
    pass


class NoAutomorphism(InvolquatError):
    pass


class UnsupportedField(InvolquatError, ValueError):
    pass


class SizeMismatch(InvolquatError, ValueError):
    pass


class InvalidInvolution(InvolquatError, ValueError):
    pass


class PreconditionViolated(InvolquatError, ValueError):
    """An input does not satisfy the hypotheses of the requested operation.

    ``condition`` names the failed relation, e.g. ``"ue=0"``.
    """

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class NotSquareCentral(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("u^2=lambda^2", detail)


class NotIdempotent(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("e^2=e", detail)


class NotMetabolic(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("e metabolic", detail)


class NotHyperbolic(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("e hyperbolic", detail)


class ScalarInput(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("u not in F", detail)


class NotSymmetric(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("tau(x)=x", detail)


class SquareNotCentral(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("x^2 in F", detail)


class ExceptionalCase(PreconditionViolated):
    """Requested construction lies in the char 2 / orthogonal exception."""

    def __init__(self, detail: str = "char 2 and sigma orthogonal"):
        super().__init__("exceptional case", detail)


class FieldTooLarge(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("brute force needs GF(2), n<=4", detail)


class Infeasible(PreconditionViolated):
    def __init__(self, kind: str, detail: str = ""):
        self.kind = kind
        super().__init__(f"infeasible {kind}", detail)


class CertificationError(InvolquatError, AssertionError):
    """A construction failed its own post-condition check (internal bug)."""
