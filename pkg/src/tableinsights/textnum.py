"""Number and token utilities shared by the scoring, matching, and metric code.

Canonical numeric formatting is half-even rounding to at most two decimals
with trailing zeros trimmed; every module that prints or compares numbers
goes through the helpers here so the surface forms always agree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal

# A mention starts a new number; a digit or dot right before the sign means
# we are inside a range like 1960-2022 and the sign is a dash, not a minus.
NUMBER_RE = re.compile(r"(?<![\d.])-?\d+(?:\.\d+)?")

_TOKEN_RE = re.compile(r"\d+(?:\.\d+)?|\w+")

STOPWORDS = frozenset(
    """a an and are as at be by for from in is it of on or over than the to
    was were with""".split()
)


@dataclass(frozen=True)
class NumberMention:
    """One number surfaced in text, with its printed decimal precision."""

    surface: str
    value: float
    precision: int


def round_half_even(value: float, places: int) -> float:
    """Round to `places` decimals with banker's rounding on the shortest repr."""
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_EVEN))


def format_number(value: float) -> str:
    """Canonical surface form: half-even to <= 2 decimals, zeros trimmed."""
    quantized = Decimal(repr(value)).quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN)
    text = format(quantized, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        return "0"
    return text


def parse_number(surface: str) -> NumberMention:
    value = float(surface)
    _, _, frac = surface.partition(".")
    return NumberMention(surface=surface, value=value, precision=len(frac))


def extract_number_mentions(text: str) -> list[NumberMention]:
    """All numbers in reading order, ranges split into their endpoints."""
    return [parse_number(m.group()) for m in NUMBER_RE.finditer(text)]


def mention_matches(value: float, mention: NumberMention) -> bool:
    """True when `value` rounded to the mention's precision equals it."""
    return round_half_even(value, mention.precision) == mention.value


def tokenize(text: str) -> list[str]:
    """Lowercase tokens; decimals stay whole, punctuation acts as separator."""
    return _TOKEN_RE.findall(text.lower())


def is_number_token(token: str) -> bool:
    return bool(re.fullmatch(r"-?\d+(?:\.\d+)?", token))


def inflections(token: str) -> set[str]:
    """The token plus naive singular/plural variants."""
    forms = {token, token + "s", token + "es"}
    if token.endswith("es") and len(token) > 3:
        forms.add(token[:-2])
    if token.endswith("s") and len(token) > 2:
        forms.add(token[:-1])
    return forms


def tokens_equal(a: str, b: str) -> bool:
    """Case-folded equality with singular/plural tolerance."""
    if a == b:
        return True
    return b in inflections(a) or a in inflections(b)
