from fractions import Fraction
from numbers import Integral, Real

import numpy as np
import sympy as spy


def isExactNumber(value):
    return isinstance(value, (Fraction, Integral)) and not isinstance(value, bool)


def isFraction(text):
    try:
        Fraction(str(text).strip())
        return True
    except (ValueError, ZeroDivisionError):
        return False


def parseNumber(value):
    """Turns user input into the number type the toolkit computes with

    Args:
        value (int | Fraction | float | str | sympy number): "p/q" and decimal
            strings are read exactly, Python floats stay floats

    Returns:
        Fraction | float: Fraction for exact input, float otherwise
    """
    if isinstance(value, bool):
        raise ValueError(f"{value!r} is not a number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (Integral, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{value!r} is not a number or a p/q fraction") from None
    if isinstance(value, spy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, spy.Basic):
        if not value.is_real:
            raise ValueError(f"{value} is not a real number")
        return float(value)
    if isinstance(value, (Real, np.floating)):
        return float(value)
    raise ValueError(f"{value!r} is not a number")


def unifyNumbers(values):
    """Parses a batch of numbers and puts them in one mode.

    Returns the converted list and True when every value is exact. A single float
    drops the whole batch to float mode.
    """
    parsed = [parseNumber(v) for v in values]
    exact = all(isinstance(v, Fraction) for v in parsed)
    if not exact:
        parsed = [float(v) for v in parsed]
    return parsed, exact


def parseNumberList(text):
    # "3/4, 1/4" or "0.75 0.25"
    parts = [p for p in text.replace(",", " ").split() if p]
    if not parts:
        raise ValueError("empty number list")
    return [parseNumber(p) for p in parts]


def toSympy(value):
    if isinstance(value, spy.Basic):
        return value
    if isinstance(value, Fraction):
        return spy.Rational(value.numerator, value.denominator)
    if isinstance(value, Integral):
        return spy.Integer(int(value))
    return spy.Float(float(value))


def fromSympy(value):
    # Rationals come back as Fractions; algebraic numbers stay symbolic
    if isinstance(value, spy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, spy.Float):
        return float(value)
    return value


def formatCompact(value):
    """Short machine-friendly form: p/q for exact values, 12 significant digits otherwise."""
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, Integral):
        return str(int(value))
    if isinstance(value, spy.Basic):
        return str(value)
    return f"{float(value):.12g}"


def formatNumber(value):
    """Human form used in tables: p/q followed by a decimal approximation

    Args:
        value (Fraction | float | sympy expression): the quantity to print

    Returns:
        string: "71/304 (0.233552631579)" for exact values, "0.25" for floats
    """
    if value is None:
        return "-"
    compact = formatCompact(value)
    if isinstance(value, (Fraction, Integral, spy.Basic)):
        decimal = f"{float(value):.12g}"
        if decimal != compact:
            return f"{compact} ({decimal})"
    return compact


def formatVector(values):
    return "(" + ", ".join(formatCompact(v) for v in values) + ")"
