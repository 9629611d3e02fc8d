"""Exception types raised across the package.

Everything derives from :class:`WalshForgeError`, which is itself a
``ValueError`` so callers that do not care about the fine-grained class can
catch the usual builtin.
"""


class WalshForgeError(ValueError):
    """Base class for all errors raised by this package."""


# --- finite field construction and arithmetic ---------------------------

class UnsupportedDegree(WalshForgeError):
    """Extension degree outside the supported range 1..20."""


class ReducibleModulus(WalshForgeError):
    """Supplied modulus polynomial factors over GF(2)."""


class NonPrimitiveModulus(WalshForgeError):
    """Modulus is irreducible but x is not a primitive element."""


class FieldMismatch(WalshForgeError):
    """Operation mixing elements of two different fields."""


class DivisionByZero(WalshForgeError, ZeroDivisionError):
    """Multiplicative inverse (or negative power) of zero."""


class NonDivisorSubfield(WalshForgeError):
    """Subfield degree does not divide the extension degree."""


class OddDegree(WalshForgeError):
    """Operation needs a quadratic extension n = 2m."""


class ZeroInput(WalshForgeError):
    """Zero passed where a nonzero element is required."""


class OmegaInSubfield(WalshForgeError):
    """Moebius parameterization needs omega outside GF(2^m)."""


class NotCoprime(WalshForgeError):
    """Integer has no inverse modulo the given modulus."""


# --- Boolean function analysis ------------------------------------------

class ElementOutOfRange(WalshForgeError):
    """Support point is not an element of the field."""


class DegreeTooLarge(WalshForgeError):
    """Requested computation is out of practical bounds for this n."""


# --- construction specs ---------------------------------------------------

class GcdConditionViolated(WalshForgeError):
    """Exponent construction violates its gcd/parity side condition."""


class InvalidSpec(WalshForgeError):
    """Construction spec failed validation (or could not be parsed)."""


class NotTwoToOne(WalshForgeError):
    """Composed map is not 2-to-1: some image point has a preimage
    count other than 0 or 2."""


class Eps1Zero(WalshForgeError):
    """Trace quantity of the epsilon parameters requested with eps1 = 0."""


# --- oracles ---------------------------------------------------------------

class ZeroPoint(WalshForgeError):
    """Spectrum/Weil-sum relation is only stated for a != 0."""


class EvenDegree(WalshForgeError):
    """Closed-form cubic sum needs odd extension degree."""


class PatternMismatch(WalshForgeError):
    """Coefficients do not match a supported projective-equation shape."""


class OddAmbientDegree(WalshForgeError):
    """Unit-circle Walsh evaluation needs n = 2m."""


class NotQuadratic(WalshForgeError):
    """Polynomial has no genuine quadratic part."""


class ZeroB(WalshForgeError):
    """Quadratic Walsh evaluation needs b != 0."""


class GcdViolation(WalshForgeError):
    """Linearized root bound requires gcd(k, n) = 1."""


class HypothesisViolated(WalshForgeError):
    """Theorem case parameters do not satisfy the stated hypotheses."""


class PromiseFailed(WalshForgeError):
    """Measured spectrum contradicts the promised value set/histogram."""
