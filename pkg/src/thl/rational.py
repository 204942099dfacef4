"""Exact rational scalars.

gmpy2.mpq is used when available (C-backed, much faster at scale); the
stdlib Fraction is a drop-in fallback.  Both normalize to lowest terms
with a positive denominator, so string forms like "-1/2" and "3" are
identical between the two backends.
"""

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as Q

QZERO = Q(0)
QONE = Q(1)


def q(value):
    """Coerce an int, "p/q" string, or rational to the scalar type."""
    if isinstance(value, int):
        return Q(value)
    return Q(value)


def parse_q(text):
    """Parse a "p/q" or "p" string.  Raises ValueError on junk or zero denominator."""
    try:
        return Q(text.strip())
    except ZeroDivisionError:
        raise ValueError(f"zero denominator in rational {text!r}")
    except Exception:
        raise ValueError(f"not a rational: {text!r}")


def qstr(value):
    """Canonical "p/q" (or "p" when the denominator is 1) form."""
    return str(value)
