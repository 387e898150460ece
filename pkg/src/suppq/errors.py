"""Exception types shared across the package."""


class SuppqError(Exception):
    """Base class for all suppq errors."""


class ZeroInput(SuppqError, ValueError):
    """An operation that needs a non-zero integer or rational got zero."""


class FactorizationLimitExceeded(SuppqError):
    """The unfactored cofactor is beyond the configured factorization method."""


class EmptyRange(SuppqError, ValueError):
    """A prime range [lo, hi] with lo < 2 or lo > hi."""


class NotSublattice(SuppqError, ValueError):
    """Index requested for a lattice that is not contained in the other."""


class RankMismatch(SuppqError, ValueError):
    """Lattice index is infinite because the ranks differ."""


class BadReduction(SuppqError, ValueError):
    """Reduction mod p requested at a prime of bad reduction."""


class ZeroElement(SuppqError, ValueError):
    """Multiplicative order of 0 mod p requested."""


class TorsionPoint(SuppqError, ValueError):
    """Decomposition requested for a point of finite order."""


class TorsionInput(SuppqError, ValueError):
    """A construction that needs infinite-order points got a torsion point."""


class SingularMatrix(SuppqError, ValueError):
    """Square integer matrix with zero determinant where an isogeny is needed."""


class PointNotOnCurve(SuppqError, ValueError):
    """A point that does not satisfy the curve equation."""


class PrimeTooLarge(SuppqError, ValueError):
    """Prime beyond the documented scan limit."""


class NoSquareRootOfMinusOne(SuppqError, ValueError):
    """-1 is not a square mod p (p is not 1 mod 4)."""


class WrongCurve(SuppqError, ValueError):
    """Operation defined only on a specific curve model."""


class DiscreteLogLimitExceeded(SuppqError):
    """Exact mode needs discrete logs at a prime beyond the BSGS limit."""


class SpecSyntaxError(SuppqError, ValueError):
    """Unparseable group, curve or point specification string."""
