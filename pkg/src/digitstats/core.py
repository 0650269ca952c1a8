"""Exact digit expansions in integer bases and re-readable digit streams.

A number x in [0, 1) is handled through its digit string in base s: either
as a lazily produced :class:`DigitStream` or, for rationals, as the
eventually periodic :class:`RadixExpansion`. All arithmetic is unbounded
integer arithmetic; values round-trip bit-exactly.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Iterator

from .errors import DomainError

__all__ = [
    "Radix",
    "DigitStream",
    "RadixExpansion",
    "expand_rational",
    "evaluate_expansion",
    "with_prefix",
    "format_expansion",
    "parse_expansion",
]


@dataclass(frozen=True)
class Radix:
    """Integer base s >= 2; digits are drawn from {0, ..., s-1}."""

    s: int

    def __post_init__(self) -> None:
        if not isinstance(self.s, int) or self.s < 2:
            raise DomainError(f"base must be an integer >= 2, got {self.s!r}")

    @property
    def alphabet(self) -> range:
        return range(self.s)


def base_value(base: int | Radix) -> int:
    """Normalize an int or Radix to a validated plain int base."""
    if isinstance(base, Radix):
        return base.s
    return Radix(base).s


def _check_digit(digit: int, base: int) -> None:
    if not isinstance(digit, int) or not 0 <= digit < base:
        raise DomainError(f"digit {digit!r} out of range for base {base}")


class DigitStream:
    """A deterministic digit sequence that can be re-read from the start.

    ``length`` is None for unbounded streams. Each call to ``iter()``
    produces an independent iterator starting at the first digit, so a
    single stream instance may serve several readers; the digits seen are
    identical on every pass.
    """

    __slots__ = ("base", "length", "_factory")

    def __init__(
        self,
        base: int | Radix,
        factory: Callable[[], Iterator[int]],
        length: int | None = None,
    ) -> None:
        self.base = base_value(base)
        if length is not None and (not isinstance(length, int) or length < 0):
            raise DomainError(f"length must be a nonnegative int or None, got {length!r}")
        self.length = length
        self._factory = factory

    def __iter__(self) -> Iterator[int]:
        return self._factory()

    def take(self, count: int) -> list[int]:
        """First `count` digits (fewer if the stream is shorter)."""
        if count < 0:
            raise DomainError("count must be >= 0")
        return list(itertools.islice(self, count))

    @classmethod
    def from_digits(cls, digits: Iterable[int], base: int | Radix) -> "DigitStream":
        b = base_value(base)
        data = tuple(digits)
        for d in data:
            _check_digit(d, b)
        return cls(b, lambda: iter(data), len(data))

    @classmethod
    def constant(cls, digit: int, base: int | Radix) -> "DigitStream":
        b = base_value(base)
        _check_digit(digit, b)
        return cls(b, lambda: itertools.repeat(digit), None)

    @classmethod
    def from_function(
        cls,
        position_to_digit: Callable[[int], int],
        base: int | Radix,
        length: int | None = None,
    ) -> "DigitStream":
        """Stream whose digit at 1-based position n is position_to_digit(n)."""
        b = base_value(base)

        def factory() -> Iterator[int]:
            positions = itertools.count(1) if length is None else range(1, length + 1)
            return (position_to_digit(n) for n in positions)

        return cls(b, factory, length)

    @classmethod
    def from_expansion(cls, expansion: "RadixExpansion") -> "DigitStream":
        """Unbounded stream: the preperiod once, then the period forever."""

        def factory() -> Iterator[int]:
            yield from expansion.preperiod
            while True:
                yield from expansion.period

        return cls(expansion.base, factory, None)


@dataclass(frozen=True)
class RadixExpansion:
    """Eventually periodic expansion ``0.<preperiod>(<period>)`` in `base`.

    The canonical form is enforced on construction:

    * the period is non-empty, and a terminating value carries period
      ``(0,)`` rather than an empty one;
    * the period is never the digit base-1 repeated, which is the
      non-canonical twin of a terminating expansion;
    * the period is primitive (not a power of a shorter word);
    * the preperiod does not end with the last period digit, since such a
      suffix could be rotated into the period.
    """

    base: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self) -> None:
        b = base_value(self.base)
        object.__setattr__(self, "base", b)
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        for d in self.preperiod:
            _check_digit(d, b)
        for d in self.period:
            _check_digit(d, b)
        if not self.period:
            raise DomainError("period must be non-empty; use (0,) for terminating expansions")
        if all(d == b - 1 for d in self.period):
            raise DomainError(f"period of all {b - 1}s is the non-canonical twin representation")
        n = len(self.period)
        for width in range(1, n):
            if n % width == 0 and self.period == self.period[:width] * (n // width):
                raise DomainError(f"period {self.period} is a repetition of {self.period[:width]}")
        if self.preperiod and self.preperiod[-1] == self.period[-1]:
            raise DomainError("preperiod suffix could be absorbed into the period")


def expand_rational(p: int, q: int, base: int | Radix) -> RadixExpansion:
    """Expand p/q in [0, 1) by exact long division.

    Remainder-cycle detection yields the canonical form directly: the
    preperiod is minimal, the period is primitive, and a reduced
    denominator whose primes all divide the base terminates with period
    ``(0,)``. Each of the preperiod and period is shorter than the reduced
    denominator.

    The endpoint x = 1 is rejected: it has no digit string starting "0.",
    so this package works on [0, 1).
    """
    b = base_value(base)
    if not isinstance(p, int) or not isinstance(q, int):
        raise DomainError(f"p and q must be integers, got p={p!r}, q={q!r}")
    if q < 1 or p < 0:
        raise DomainError(f"need p >= 0 and q >= 1, got p={p}, q={q}")
    if p >= q:
        if p == q:
            raise DomainError("x = 1 has no expansion starting '0.'; only [0, 1) is supported")
        raise DomainError(f"{p}/{q} lies outside [0, 1]")
    g = gcd(p, q)
    p, q = p // g, q // g
    digits: list[int] = []
    first_seen: dict[int, int] = {}
    remainder = p
    while remainder != 0 and remainder not in first_seen:
        first_seen[remainder] = len(digits)
        remainder *= b
        digits.append(remainder // q)
        remainder %= q
    if remainder == 0:
        return RadixExpansion(b, tuple(digits), (0,))
    start = first_seen[remainder]
    return RadixExpansion(b, tuple(digits[:start]), tuple(digits[start:]))


def evaluate_expansion(expansion: RadixExpansion) -> Fraction:
    """Exact value: the preperiod sum plus the geometric tail of the period."""
    b = expansion.base
    pre_value = 0
    for d in expansion.preperiod:
        pre_value = pre_value * b + d
    per_value = 0
    for d in expansion.period:
        per_value = per_value * b + d
    m = len(expansion.preperiod)
    length = len(expansion.period)
    return Fraction(pre_value, b**m) + Fraction(per_value, (b**length - 1) * b**m)


def with_prefix(prefix: Iterable[int], tail: DigitStream) -> DigitStream:
    """Stream emitting the `prefix` digits, then `tail` unchanged."""
    pre = tuple(prefix)
    for d in pre:
        _check_digit(d, tail.base)
    length = None if tail.length is None else tail.length + len(pre)

    def factory() -> Iterator[int]:
        return itertools.chain(pre, tail)

    return DigitStream(tail.base, factory, length)


def format_expansion(expansion: RadixExpansion) -> str:
    """Render as ``0.<preperiod>(<period>)_<base>``, e.g. ``0.2(1)_3``.

    Bases above 10 need multi-character digits, which are comma separated.
    """
    if expansion.base <= 10:
        pre = "".join(str(d) for d in expansion.preperiod)
        per = "".join(str(d) for d in expansion.period)
    else:
        pre = ",".join(str(d) for d in expansion.preperiod)
        per = ",".join(str(d) for d in expansion.period)
    return f"0.{pre}({per})_{expansion.base}"


_EXPANSION_RE = re.compile(r"0\.([0-9,]*)\(([0-9,]+)\)_([0-9]+)\Z")


def parse_expansion(text: str) -> RadixExpansion:
    """Inverse of :func:`format_expansion`, bit-exact."""
    match = _EXPANSION_RE.match(text.strip())
    if match is None:
        raise DomainError(f"cannot parse expansion {text!r}")
    pre_text, per_text, base_text = match.groups()
    b = int(base_text)
    if b <= 10:
        if "," in pre_text or "," in per_text:
            raise DomainError("comma-separated digits are only used for bases above 10")
        pre = tuple(int(c) for c in pre_text)
        per = tuple(int(c) for c in per_text)
    else:
        pre = tuple(int(tok) for tok in pre_text.split(",") if tok != "")
        per = tuple(int(tok) for tok in per_text.split(",") if tok != "")
    return RadixExpansion(b, pre, per)
