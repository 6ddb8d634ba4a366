"""Small shared helpers: bitmask iteration, exact rationals, canonical JSON."""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError


def bits(mask: int):
    """Yield the indices of set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def frac_floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def frac_ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"not a rational number: {text!r}") from exc


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact separators, trailing newline.

    Every report the package emits goes through here so that identical
    inputs produce byte-identical output regardless of dict build order.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"
