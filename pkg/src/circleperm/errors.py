"""Exception types shared across the package.

Validation failures that are *data* (e.g. parameter violation lists) are
returned as values; exceptions are reserved for contract violations.
"""


class CirclepermError(Exception):
    """Base class for all package errors."""


class NotPrime(CirclepermError):
    pass


class NotMonic(CirclepermError):
    pass


class NotIrreducible(CirclepermError):
    """Raised with a nontrivial factor of the rejected modulus.

    Attributes:
        factor: coefficient list (least degree first) of a proper divisor.
    """

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class CtxMismatch(CirclepermError):
    pass


class DivisionByZero(CirclepermError, ZeroDivisionError):
    pass


class ZeroInput(CirclepermError):
    pass


class CapExceeded(CirclepermError):
    pass


class SizeMismatch(CirclepermError):
    pass


class BetaNotOnCircle(CirclepermError):
    pass


class DeltaInSubfield(CirclepermError):
    pass


class IndeterminateForm(CirclepermError):
    """0/0 during projective evaluation; input was not gcd-reduced."""


class InvalidParams(CirclepermError):
    """Construction parameters violate a family's constraint system.

    Attributes:
        violations: list of human-readable condition strings.
    """

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class LimitExceeded(CirclepermError):
    pass


class NotInstantiable(CirclepermError):
    pass
