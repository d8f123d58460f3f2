from fractions import Fraction
from math import isqrt, sqrt


def as_fraction(x):
    """Coerce ints, Fractions, exact floats and "p/q" or decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def exact_sqrt(q):
    """Square root of a nonnegative rational; a Fraction when q is a rational square."""
    if isinstance(q, Fraction):
        if q < 0:
            raise ValueError("negative radicand")
        n, d = q.numerator, q.denominator
        rn, rd = isqrt(n), isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return sqrt(n / d) if n < 2**1000 else sqrt(float(q))
    return sqrt(q)


def format_number(x):
    """Rationals as "p/q" (or "p"), anything else as a decimal string."""
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def parse_number(s):
    """Inverse of format_number: "p/q" and integers become Fractions."""
    if isinstance(s, (int, Fraction)):
        return Fraction(s)
    if isinstance(s, float):
        return s
    s = s.strip()
    if "/" in s or s.lstrip("-").isdigit():
        return Fraction(s)
    return float(s)
