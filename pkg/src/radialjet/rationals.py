"""Formatting and parsing of exact rationals as "p/q" strings.

All machine-readable output in this package prints rationals in lowest
terms with an explicit denominator ("3/2", "1/1", "-7/4"); parsing also
accepts bare integers ("3") and decimal literals ("0.5"), both of which
are exact.
"""

from __future__ import annotations

from fractions import Fraction


def format_rational(x) -> str:
    """Render a rational number as "p/q" in lowest terms."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", "p", or a decimal literal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc
