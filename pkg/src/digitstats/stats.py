"""Running digit statistics and finite-depth limit diagnostics.

For a digit stream of x in base s, the depth-n counts N_i, relative
frequencies v_i = N_i/n, and digit mean r_n = (1/n) * sum of the first n
digits are kept as exact rationals, so the identity r_n = sum(i * v_i)
holds with zero tolerance at every depth. Whether the v_i or r_n converge
as n grows can only be judged from finitely many samples; classify_limit
gives a conservative verdict (Converged, Oscillating, or Undetermined)
that is evidence, not proof.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .core import DigitStream, RadixExpansion
from .errors import DomainError, Infeasible
from .rationals import coerce_rational, decimal_str, ratio_str

__all__ = [
    "PartialStats",
    "FrequencyProfile",
    "Converged",
    "Oscillating",
    "Undetermined",
    "ConvergenceVerdict",
    "running_stats",
    "mean_from_frequencies",
    "exact_frequencies_rational",
    "solve_ternary_system",
    "classify_limit",
    "geometric_checkpoints",
    "stats_to_csv",
    "stats_to_json",
]


@dataclass(frozen=True)
class PartialStats:
    """Digit statistics of one stream prefix.

    ``truncated`` marks rows produced because the stream ended before the
    requested depth was reached.
    """

    base: int
    n: int
    counts: tuple[int, ...]
    truncated: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "counts", tuple(self.counts))
        if self.base < 2 or len(self.counts) != self.base:
            raise DomainError(f"counts must have one entry per digit of base {self.base}")
        if self.n < 1 or any(c < 0 for c in self.counts) or sum(self.counts) != self.n:
            raise DomainError(f"counts {self.counts} do not sum to depth {self.n}")

    @property
    def freqs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(i * c for i, c in enumerate(self.counts)), self.n)


@dataclass(frozen=True)
class FrequencyProfile:
    """A target digit-frequency vector (tau_0, ..., tau_{s-1})."""

    base: int
    tau: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tau", tuple(coerce_rational(t) for t in self.tau))
        if self.base < 2 or len(self.tau) != self.base:
            raise DomainError(f"tau must have one entry per digit of base {self.base}")
        if any(t < 0 for t in self.tau):
            raise DomainError(f"frequencies must be nonnegative, got {self.tau}")
        if sum(self.tau) != 1:
            raise DomainError(f"frequencies must sum to 1, got sum {sum(self.tau)}")

    @property
    def theta(self) -> Fraction:
        """Digit mean forced by the profile; always in [0, base-1]."""
        return mean_from_frequencies(self)


@dataclass(frozen=True)
class Converged:
    """Tail window spread is within `tolerance`; `value` is its midpoint."""

    value: Fraction
    depth: int
    tolerance: Fraction


@dataclass(frozen=True)
class Oscillating:
    """Tail window shows repeated excursions between two separated levels."""

    liminf_estimate: Fraction
    limsup_estimate: Fraction
    witness_depths: tuple[int, ...]


@dataclass(frozen=True)
class Undetermined:
    """Too few samples, or neither convergence nor oscillation is evident."""

    depth: int


ConvergenceVerdict = Union[Converged, Oscillating, Undetermined]


def running_stats(stream: DigitStream, checkpoints: Sequence[int]) -> list[PartialStats]:
    """Statistics of `stream` at each checkpoint depth, in one pass.

    If the stream ends before the last checkpoint, the final row reports
    the statistics at the actual length with ``truncated=True``.
    """
    marks = list(checkpoints)
    if not marks:
        raise DomainError("checkpoints must be non-empty")
    if any(not isinstance(m, int) or m < 1 for m in marks):
        raise DomainError(f"checkpoints must be integers >= 1, got {marks}")
    if any(later <= earlier for earlier, later in zip(marks, marks[1:])):
        raise DomainError(f"checkpoints must be strictly ascending, got {marks}")

    base = stream.base
    counts = [0] * base
    rows: list[PartialStats] = []
    next_mark = 0
    n = 0
    for digit in stream:
        if not 0 <= digit < base:
            raise DomainError(f"digit {digit!r} out of range for base {base}")
        counts[digit] += 1
        n += 1
        if n == marks[next_mark]:
            rows.append(PartialStats(base, n, tuple(counts)))
            next_mark += 1
            if next_mark == len(marks):
                return rows
    # stream exhausted with checkpoints unserved
    if rows and rows[-1].n == n:
        rows[-1] = replace(rows[-1], truncated=True)
        return rows
    if n == 0:
        raise DomainError("stream produced no digits")
    rows.append(PartialStats(base, n, tuple(counts), truncated=True))
    return rows


def mean_from_frequencies(profile: FrequencyProfile) -> Fraction:
    """The digit mean sum(i * tau_i) determined by a frequency vector."""
    return sum((i * t for i, t in enumerate(profile.tau)), Fraction(0))


def exact_frequencies_rational(expansion: RadixExpansion) -> FrequencyProfile:
    """Exact digit frequencies of a rational from its period.

    Preperiod digits are finitely many and do not affect the limit, so
    tau_i is the share of digit i within one period.
    """
    length = len(expansion.period)
    tau = tuple(
        Fraction(sum(1 for d in expansion.period if d == i), length)
        for i in range(expansion.base)
    )
    return FrequencyProfile(expansion.base, tau)


def solve_ternary_system(v0, r) -> tuple[Fraction, Fraction]:
    """The unique ternary (v1, v2) with v0+v1+v2 = 1 and v1 + 2*v2 = r.

    Solving the two linear equations gives v1 = 2 - 2*v0 - r and
    v2 = r - 1 + v0. When either lands outside [0, 1] no frequency vector
    realizes the (v0, r) pair and Infeasible is raised.
    """
    v0 = coerce_rational(v0)
    r = coerce_rational(r)
    if not 0 <= v0 <= 1:
        raise DomainError(f"v0 must lie in [0, 1], got {v0}")
    if not 0 <= r <= 2:
        raise DomainError(f"r must lie in [0, 2] for base 3, got {r}")
    v1 = 2 - 2 * v0 - r
    v2 = r - 1 + v0
    if not 0 <= v1 <= 1:
        raise Infeasible(f"no ternary frequency vector has v0={v0}, r={r}: v1={v1} is outside [0, 1]")
    if not 0 <= v2 <= 1:
        raise Infeasible(f"no ternary frequency vector has v0={v0}, r={r}: v2={v2} is outside [0, 1]")
    return v1, v2


def _ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)


def classify_limit(
    samples: Sequence[tuple[int, Fraction]],
    gap: Fraction = Fraction(1, 1000),
    tail_fraction: Fraction = Fraction(1, 2),
) -> ConvergenceVerdict:
    """Judge a sampled sequence as Converged, Oscillating, or Undetermined.

    Only the tail window (the last `tail_fraction` of the samples, at
    least 2) is examined, so early transients are ignored:

    * spread of the window <= gap: Converged at the window midpoint;
    * otherwise samples are classified against two hysteresis thresholds
      `gap` apart around the window midpoint, and consecutive same-side
      samples collapse into one excursion keeping the most extreme depth
      as witness; at least two excursions per side: Oscillating;
    * anything else (including fewer than 4 samples): Undetermined.
    """
    gap = coerce_rational(gap)
    tail_fraction = coerce_rational(tail_fraction)
    if gap <= 0:
        raise DomainError(f"gap must be positive, got {gap}")
    if not 0 < tail_fraction <= 1:
        raise DomainError(f"tail_fraction must lie in (0, 1], got {tail_fraction}")
    points = [(depth, coerce_rational(value)) for depth, value in samples]
    depths = [depth for depth, _ in points]
    if any(b <= a for a, b in zip(depths, depths[1:])):
        raise DomainError("sample depths must be strictly ascending")
    if len(points) < 4:
        return Undetermined(depth=depths[-1] if depths else 0)

    tail_len = max(2, min(len(points), _ceil_fraction(tail_fraction * len(points))))
    tail = points[-tail_len:]
    lo = min(value for _, value in tail)
    hi = max(value for _, value in tail)
    if hi - lo <= gap:
        return Converged(value=(hi + lo) / 2, depth=tail[-1][0], tolerance=gap)

    mid = (hi + lo) / 2
    t_high = mid + gap / 2
    t_low = mid - gap / 2
    runs: list[tuple[str, int, Fraction]] = []
    for depth, value in tail:
        if value >= t_high:
            side = "high"
        elif value <= t_low:
            side = "low"
        else:
            continue
        if runs and runs[-1][0] == side:
            _, _, extreme = runs[-1]
            if (side == "high" and value > extreme) or (side == "low" and value < extreme):
                runs[-1] = (side, depth, value)
        else:
            runs.append((side, depth, value))
    high_runs = sum(1 for side, _, _ in runs if side == "high")
    low_runs = len(runs) - high_runs
    if high_runs >= 2 and low_runs >= 2:
        witnesses = tuple(sorted(depth for _, depth, _ in runs))
        return Oscillating(liminf_estimate=lo, limsup_estimate=hi, witness_depths=witnesses)
    return Undetermined(depth=tail[-1][0])


def geometric_checkpoints(start: int, factor, max_depth: int, extra: Iterable[int] = ()) -> list[int]:
    """Depths start, start*factor, ... capped at and including max_depth.

    Geometric spacing matches phenomena whose breakpoints grow by a
    constant ratio; `extra` merges caller-supplied special depths.
    """
    factor = coerce_rational(factor)
    if start < 1 or max_depth < start:
        raise DomainError(f"need 1 <= start <= max_depth, got start={start}, max_depth={max_depth}")
    if factor <= 1:
        raise DomainError(f"factor must exceed 1, got {factor}")
    depths = set()
    current = Fraction(start)
    while current <= max_depth:
        depths.add(current.numerator // current.denominator)
        current *= factor
    depths.add(max_depth)
    for depth in extra:
        if not isinstance(depth, int) or depth < 1:
            raise DomainError(f"extra checkpoint {depth!r} must be an integer >= 1")
        if depth <= max_depth:
            depths.add(depth)
    return sorted(depths)


def _stats_base(rows: Sequence[PartialStats]) -> int:
    if not rows:
        raise DomainError("no statistics rows to export")
    base = rows[0].base
    if any(row.base != base for row in rows):
        raise DomainError("statistics rows mix bases")
    return base


def stats_to_csv(rows: Sequence[PartialStats]) -> str:
    """CSV with `n,N0..,v0..,r` columns plus decimal twins and a truncation flag."""
    base = _stats_base(rows)
    header = (
        ["n"]
        + [f"N{i}" for i in range(base)]
        + [f"v{i}" for i in range(base)]
        + ["r"]
        + [f"v{i}_dec" for i in range(base)]
        + ["r_dec", "truncated"]
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [row.n]
            + [str(c) for c in row.counts]
            + [ratio_str(v) for v in row.freqs]
            + [ratio_str(row.mean)]
            + [decimal_str(v) for v in row.freqs]
            + [decimal_str(row.mean), str(row.truncated).lower()]
        )
    return out.getvalue()


def stats_to_json(rows: Sequence[PartialStats]) -> str:
    """JSON mirror of the CSV columns."""
    base = _stats_base(rows)
    payload = {
        "base": base,
        "rows": [
            {
                "n": row.n,
                "counts": list(row.counts),
                "freqs": [ratio_str(v) for v in row.freqs],
                "freqs_decimal": [decimal_str(v) for v in row.freqs],
                "mean": ratio_str(row.mean),
                "mean_decimal": decimal_str(row.mean),
                "truncated": row.truncated,
            }
            for row in rows
        ],
    }
    return json.dumps(payload, indent=2) + "\n"
