"""Constructors for digit streams with prescribed statistics.

Four families of machinery:

* floor-indicator generators (`beatty_indicator`, `beatty_construct`)
  placing digit 0 at density `a` via increments of the floor sequence
  [n*a], plus the greedy `quota_construct` which guarantees every digit's
  running count stays within 2 of its target share;
* `floor_weighted_average` w_n = ([k*x] + ... + [n*x]) / (n(n+1)/2), the
  triangular-weighted average that tends to x for a fixed x;
* `build_oscillating_schedule`, which switches a value sequence between
  x1 and x2 exactly when the running floor-weighted average crosses
  x1 + eps from above or x2 - eps from below, so the average oscillates
  forever instead of converging;
* the block construction (`construct_mean_without_frequency`) emitting
  per block k a run of [k*alpha_k] zeros, [k*beta_k] ones, [k*gamma_k]
  twos with alpha following the oscillating schedule; its digit mean
  converges to theta while the frequency of digit 0 oscillates; and
  `no_mean_example` (paired runs of 2^m zeros then 2^m ones), whose digit
  mean has no limit at all.

All parameters are exact rationals and all floors are exact integer
division.
"""

from __future__ import annotations

import csv
import io
import itertools
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterator

from .core import DigitStream
from .errors import DomainError, Infeasible
from .rationals import coerce_rational, ratio_str
from .stats import FrequencyProfile

__all__ = [
    "beatty_indicator",
    "beatty_construct",
    "quota_construct",
    "floor_weighted_average",
    "OscillationSchedule",
    "build_oscillating_schedule",
    "BlockSpec",
    "construct_mean_without_frequency",
    "block_digit_stream",
    "block_boundaries",
    "blockspec_to_csv",
    "no_mean_example",
    "no_mean_zero_run_ends",
    "no_mean_one_run_ends",
]


def _floor(value: Fraction) -> int:
    return value.numerator // value.denominator


def beatty_indicator(a, n: int) -> int:
    """Increment d_n = [(n+1)*a] - [n*a] of the floor sequence; 0 or 1."""
    a = coerce_rational(a)
    if not 0 <= a <= 1:
        raise DomainError(f"a must lie in [0, 1], got {a}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return _floor((n + 1) * a) - _floor(n * a)


def beatty_construct(a, b, count: int) -> list[int]:
    """Ternary digits from two floor indicators, digit 0 at density `a`.

    Position n gets digit 0 when the indicator of `a` fires there, else
    digit 1 or 2 as the indicator of `b` is 0 or 1. The count of zeros is
    controlled within 2 of n*a at every depth; the counts of digits 1 and
    2 are NOT guaranteed to track b and 1-a-b, because the digit-0 rule
    wins whenever both indicators fire (a measured fidelity gap, e.g.
    a = b = 0 yields all 1s against a target of all 2s). Use
    quota_construct when every digit's frequency must be guaranteed.
    """
    a = coerce_rational(a)
    b = coerce_rational(b)
    if a < 0 or b < 0 or a + b > 1:
        raise DomainError(f"need a >= 0, b >= 0, a + b <= 1, got a={a}, b={b}")
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    ap, aq = a.numerator, a.denominator
    bp, bq = b.numerator, b.denominator
    digits = []
    floor_a = ap // aq
    floor_b = bp // bq
    for n in range(1, count + 1):
        next_a = ((n + 1) * ap) // aq
        next_b = ((n + 1) * bp) // bq
        if next_a - floor_a == 1:
            digits.append(0)
        elif next_b - floor_b == 0:
            digits.append(1)
        else:
            digits.append(2)
        floor_a = next_a
        floor_b = next_b
    return digits


def quota_construct(profile: FrequencyProfile, count: int) -> list[int]:
    """Greedy quota digits: every count stays within 2 of its target.

    At step m the digit with the largest deficit m*tau_i - N_i(m-1) is
    emitted, ties broken by the smallest digit. The deficit of the chosen
    digit is the maximum of quantities averaging to 0, hence >= 0 before
    the step and > -1 after; a standard quota argument keeps
    |N_i(m) - m*tau_i| <= 2 for every digit and every depth.
    """
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    # integer deficits: scale by the common denominator of the targets
    scale = lcm(*(t.denominator for t in profile.tau))
    weights = [t.numerator * (scale // t.denominator) for t in profile.tau]
    counts = [0] * profile.base
    digits = []
    for m in range(1, count + 1):
        best = 0
        best_deficit = m * weights[0] - counts[0] * scale
        for i in range(1, profile.base):
            deficit = m * weights[i] - counts[i] * scale
            if deficit > best_deficit:
                best = i
                best_deficit = deficit
        counts[best] += 1
        digits.append(best)
    return digits


def floor_weighted_average(x, k: int, n: int) -> Fraction:
    """([k*x] + [(k+1)*x] + ... + [n*x]) / (n(n+1)/2), exactly.

    For k = 1 and fixed x the value is sandwiched in (x - 2/(n+1), x],
    so it converges to x as n grows.
    """
    x = coerce_rational(x)
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if k > n:
        raise DomainError(f"need k <= n, got k={k}, n={n}")
    p, q = x.numerator, x.denominator
    total = sum((j * p) // q for j in range(k, n + 1))
    return Fraction(total, n * (n + 1) // 2)


@dataclass(frozen=True)
class OscillationSchedule:
    """A value sequence alternating x1-runs and x2-runs, x1 first.

    ``breakpoints[i]`` is the last index of run i+1; the floor-weighted
    average of the values, taken at a breakpoint, sits below x1 + epsilon
    at x1-run ends and above x2 - epsilon at x2-run ends
    (``w_at_breakpoints`` records it). Values are defined for positions
    1..horizon.
    """

    x1: Fraction
    x2: Fraction
    epsilon: Fraction
    horizon: int
    breakpoints: tuple[int, ...]
    w_at_breakpoints: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.w_at_breakpoints):
            raise DomainError("one w value is required per breakpoint")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise DomainError("breakpoints must be strictly ascending")
        if self.breakpoints and self.breakpoints[-1] > self.horizon:
            raise DomainError("breakpoints cannot exceed the horizon")

    def value_at(self, n: int) -> Fraction:
        """The run value at position n: x1 in odd runs, x2 in even runs."""
        if not 1 <= n <= self.horizon:
            raise DomainError(f"position {n} outside 1..{self.horizon}")
        finished_runs = bisect_left(self.breakpoints, n)
        return self.x1 if finished_runs % 2 == 0 else self.x2

    def values(self) -> Iterator[Fraction]:
        """All values for positions 1..horizon in order."""
        previous = 0
        value = self.x1
        for end in self.breakpoints:
            for _ in range(previous, end):
                yield value
            previous = end
            value = self.x2 if value == self.x1 else self.x1
        for _ in range(previous, self.horizon):
            yield value


def build_oscillating_schedule(x1, x2, epsilon, horizon: int) -> OscillationSchedule:
    """Switch between x1 and x2 so the floor-weighted average oscillates.

    Starting with value x1, the current run ends at the least n whose
    average w_n = (sum of [j * value_j]) / (n(n+1)/2) falls strictly below
    x1 + epsilon (for x1-runs) or rises strictly above x2 - epsilon (for
    x2-runs); the next run then uses the other value. Because the average
    of a constant-x tail is dragged toward x, each hunt terminates, so w_n
    crosses the two bands forever and never converges: consecutive
    breakpoint averages differ by more than x2 - x1 - 2*epsilon.
    """
    x1 = coerce_rational(x1)
    x2 = coerce_rational(x2)
    epsilon = coerce_rational(epsilon)
    if not 0 < x1 < x2:
        raise DomainError(f"need 0 < x1 < x2, got x1={x1}, x2={x2}")
    if not 0 < epsilon < (x2 - x1) / 2:
        raise DomainError(
            f"epsilon must lie in (0, (x2-x1)/2) so that x1+eps < x2-eps, got {epsilon}"
        )
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    low = x1 + epsilon
    high = x2 - epsilon
    current = x1
    numerator_sum = 0
    breakpoints: list[int] = []
    w_values: list[Fraction] = []
    for n in range(1, horizon + 1):
        numerator_sum += (n * current.numerator) // current.denominator
        weight = n * (n + 1) // 2
        # strict comparisons via integer cross-multiplication
        if current == x1:
            if numerator_sum * low.denominator < weight * low.numerator:
                breakpoints.append(n)
                w_values.append(Fraction(numerator_sum, weight))
                current = x2
        else:
            if numerator_sum * high.denominator > weight * high.numerator:
                breakpoints.append(n)
                w_values.append(Fraction(numerator_sum, weight))
                current = x1
    return OscillationSchedule(
        x1=x1,
        x2=x2,
        epsilon=epsilon,
        horizon=horizon,
        breakpoints=tuple(breakpoints),
        w_at_breakpoints=tuple(w_values),
    )


@dataclass(frozen=True)
class BlockSpec:
    """Run lengths per block of the mean-without-frequency construction.

    Row k (1-based) is ([k*alpha_k], [k*beta_k], [k*gamma_k]): the counts
    of digits 0, 1, 2 emitted by block k, where beta_k = 2 - 2*alpha_k -
    theta and gamma_k = alpha_k - 1 + theta, so that alpha+beta+gamma = 1
    and beta + 2*gamma = theta identically. Rows are validated against
    those formulas on construction; zero-length runs are allowed.
    """

    theta: Fraction
    alphas: tuple[Fraction, ...]
    rows: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if len(self.alphas) != len(self.rows):
            raise DomainError("one alpha is required per row")
        for k, (alpha, row) in enumerate(zip(self.alphas, self.rows), start=1):
            beta = 2 - 2 * alpha - self.theta
            gamma = alpha - 1 + self.theta
            if beta < 0 or gamma < 0 or alpha < 0:
                raise DomainError(f"block {k}: run densities ({alpha}, {beta}, {gamma}) negative")
            expected = (_floor(k * alpha), _floor(k * beta), _floor(k * gamma))
            if tuple(row) != expected:
                raise DomainError(f"block {k}: row {row} does not match floors {expected}")

    @property
    def blocks(self) -> int:
        return len(self.rows)


def construct_mean_without_frequency(
    theta, x1, x2, epsilon, blocks: int
) -> tuple[BlockSpec, DigitStream]:
    """Ternary stream with digit mean theta but no digit-0 frequency.

    Block k emits [k*alpha_k] zeros, [k*beta_k] ones, [k*gamma_k] twos,
    with alpha_k following the oscillating schedule on {x1, x2}. The mean
    of the first n digits tends to theta, while the frequency of digit 0
    measured at run-end block boundaries oscillates between roughly x1
    and x2 and so has no limit.

    theta = 0 or 2 is infeasible, not merely out of range: a ternary mean
    of 0 forces the frequency of digit 0 to 1, and a mean of 2 forces the
    frequency of digit 2 to 1, so every such stream has full frequencies.
    x1 and x2 must lie strictly inside (max(0, 1-theta), (2-theta)/2) to
    keep the run densities beta_k and gamma_k positive.
    """
    theta = coerce_rational(theta)
    x1 = coerce_rational(x1)
    x2 = coerce_rational(x2)
    if theta == 0:
        raise Infeasible("theta = 0 forces the frequency of digit 0 to exist (and equal 1)")
    if theta == 2:
        raise Infeasible("theta = 2 forces the frequency of digit 2 to exist (and equal 1)")
    if not 0 < theta < 2:
        raise DomainError(f"theta must lie in (0, 2) for ternary digits, got {theta}")
    window_low = max(Fraction(0), 1 - theta)
    window_high = (2 - theta) / 2
    if not window_low < x1 < x2 < window_high:
        raise DomainError(
            f"x1, x2 must satisfy {window_low} < x1 < x2 < {window_high}, got x1={x1}, x2={x2}"
        )
    if blocks < 1:
        raise DomainError(f"blocks must be >= 1, got {blocks}")
    schedule = build_oscillating_schedule(x1, x2, epsilon, horizon=blocks)
    alphas = tuple(schedule.values())
    rows = []
    for k, alpha in enumerate(alphas, start=1):
        beta = 2 - 2 * alpha - theta
        gamma = alpha - 1 + theta
        rows.append((_floor(k * alpha), _floor(k * beta), _floor(k * gamma)))
    spec = BlockSpec(theta=theta, alphas=alphas, rows=tuple(rows))
    return spec, block_digit_stream(spec)


def block_digit_stream(spec: BlockSpec) -> DigitStream:
    """The ternary stream emitting each block's zeros, then ones, then twos."""
    total = sum(z + o + t for z, o, t in spec.rows)

    def factory() -> Iterator[int]:
        for zeros, ones, twos in spec.rows:
            yield from itertools.repeat(0, zeros)
            yield from itertools.repeat(1, ones)
            yield from itertools.repeat(2, twos)

    return DigitStream(3, factory, total)


def block_boundaries(spec: BlockSpec) -> tuple[int, ...]:
    """Cumulative digit depth at the end of each block."""
    depths = []
    depth = 0
    for zeros, ones, twos in spec.rows:
        depth += zeros + ones + twos
        depths.append(depth)
    return tuple(depths)


def blockspec_to_csv(spec: BlockSpec) -> str:
    """CSV rows `k,a_k1,a_k2,a_k3,alpha_k` (alpha as p/q)."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k", "a_k1", "a_k2", "a_k3", "alpha_k"])
    for k, (alpha, row) in enumerate(zip(spec.alphas, spec.rows), start=1):
        writer.writerow([k, row[0], row[1], row[2], ratio_str(alpha)])
    return out.getvalue()


def no_mean_example(count: int) -> list[int]:
    """First `count` digits of paired runs: 2^m zeros then 2^m ones.

    The running digit mean dips toward 1/3 at the end of each 0-run and
    returns to exactly 1/2 at the end of each 1-run, so it has no limit
    even though a mean is the weakest digit statistic.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    digits: list[int] = []
    m = 0
    while len(digits) < count:
        run = 1 << m
        digits.extend([0] * run)
        digits.extend([1] * run)
        m += 1
    return digits[:count]


def no_mean_zero_run_ends(max_depth: int) -> list[int]:
    """Depths 3*2^m - 2 ending each 0-run, up to max_depth."""
    if max_depth < 1:
        raise DomainError(f"max_depth must be >= 1, got {max_depth}")
    depths = []
    m = 0
    while 3 * (1 << m) - 2 <= max_depth:
        depths.append(3 * (1 << m) - 2)
        m += 1
    return depths


def no_mean_one_run_ends(max_depth: int) -> list[int]:
    """Depths 2^(m+2) - 2 ending each 1-run, up to max_depth."""
    if max_depth < 1:
        raise DomainError(f"max_depth must be >= 1, got {max_depth}")
    depths = []
    m = 0
    while 4 * (1 << m) - 2 <= max_depth:
        depths.append(4 * (1 << m) - 2)
        m += 1
    return depths
