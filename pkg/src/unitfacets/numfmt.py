"""Numeric text formatting and tolerance helpers used across layers."""

from __future__ import annotations

import math

#: Relative tolerance used for value equality throughout the system.
REL_TOL = 1e-9


def shortest_decimal(value: float) -> str:
    """Shortest decimal string that round-trips the binary value.

    Python's repr is already shortest-round-trip; integral values drop
    the trailing ".0" so 25.0 renders as "25".
    """
    text = repr(float(value))
    if text.endswith(".0"):
        text = text[:-2]
    return text


def values_close(a: float, b: float) -> bool:
    """Equality within REL_TOL relative, floored at 1 for tiny magnitudes:
    |a - b| <= REL_TOL * max(|a|, |b|, 1)."""
    return abs(a - b) <= REL_TOL * max(abs(a), abs(b), 1.0)


def parse_decimal(text: str) -> float:
    """Parse decimal text into a finite float; rejects NaN/inf spellings."""
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {text!r}")
    return value
