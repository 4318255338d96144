"""Exact rational arithmetic backend.

All probabilities in this package are exact rationals; there are no
floating-point tolerances anywhere. gmpy2's mpq is used when available
because it is several times faster in the simulation inner loops; the
stdlib Fraction is a drop-in replacement otherwise. Both reduce to lowest
terms, interoperate in comparisons and hashing, and print as ``p/q``.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover - gmpy2 is a normal install here
    Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)


def rat_str(x) -> str:
    """Serialize a rational as ``p/q`` (bare ``p`` when the value is integral)."""
    return str(x)


def parse_rat(text: str):
    """Parse a ``p/q`` or bare-integer string back into a rational."""
    return Rat(Fraction(text.strip()))


def decimal_str(x, digits: int = 6) -> str:
    """Exact fixed-point rendering of a non-negative rational.

    Computed with integer arithmetic (round half up), so the output does not
    depend on the rational backend or on binary float rounding.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    num = int(x.numerator) * 10**digits
    den = int(x.denominator)
    q, r = divmod(num, den)
    if 2 * r >= den:
        q += 1
    s = str(q).rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]
