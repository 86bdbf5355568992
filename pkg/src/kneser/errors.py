"""Exception hierarchy.  The CLI maps these onto exit code 2."""


class KneserError(Exception):
    """Base class for precondition failures."""


class DimensionMismatchError(KneserError):
    pass


class NotSublatticeError(KneserError):
    pass


class OddLatticeError(KneserError):
    """Input is not an even integral lattice."""


class UnknownLatticeError(KneserError):
    pass


class NotPositiveDefiniteError(KneserError):
    pass


class PrimeDividesDiscriminantError(KneserError):
    def __init__(self, p, disc):
        super().__init__(f"prime {p} divides discriminant {disc}")
        self.p = p
        self.disc = disc


class NotPrimeError(KneserError):
    pass


class VectorDivisibleError(KneserError):
    """The neighbor vector lies in pL."""


class NotIsotropicError(KneserError):
    """Q(v) is not divisible by p^2 (or Q(v) is not 0 mod p for a lift)."""


class NoClosedFormError(KneserError):
    pass


class NotTernaryError(KneserError):
    pass


class BadReductionError(KneserError):
    pass


class IncompleteClassSetError(KneserError):
    """A neighbor was found that matches no class of the class set."""


class TooManyPointsError(KneserError):
    pass
