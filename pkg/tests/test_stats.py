"""Tests for running statistics, the frequency/mean algebra, and verdicts."""

import json
import random
from fractions import Fraction

import pytest

from digitstats import (
    Converged,
    DigitStream,
    DomainError,
    FrequencyProfile,
    Infeasible,
    Oscillating,
    PartialStats,
    Undetermined,
    classify_limit,
    exact_frequencies_rational,
    expand_rational,
    floor_weighted_average,
    geometric_checkpoints,
    mean_from_frequencies,
    no_mean_example,
    running_stats,
    solve_ternary_system,
    stats_to_csv,
    stats_to_json,
    uniform_digits,
)


def test_partial_stats_fields():
    stats = PartialStats(3, 4, (2, 1, 1))
    assert stats.freqs == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    assert stats.mean == Fraction(3, 4)


def test_partial_stats_validation():
    with pytest.raises(DomainError):
        PartialStats(3, 4, (2, 1))  # wrong arity
    with pytest.raises(DomainError):
        PartialStats(3, 4, (2, 1, 2))  # counts exceed depth


def test_running_stats_cycle_example():
    stream = DigitStream.from_digits([0, 1, 2, 0, 1, 2], 3)
    row = running_stats(stream, [3])[0]
    assert row.counts == (1, 1, 1)
    assert row.freqs == (Fraction(1, 3),) * 3
    assert row.mean == 1


def test_running_stats_constant_stream():
    row = running_stats(DigitStream.constant(2, 3), [10])[0]
    assert row.freqs[2] == 1
    assert row.mean == 2


def test_running_stats_no_mean_prefix():
    # third 0-run ends at depth 10; count the literal prefix by hand
    prefix = [0, 1, 0, 0, 1, 1, 0, 0, 0, 0]
    assert no_mean_example(10) == prefix
    row = running_stats(DigitStream.from_digits(prefix, 2), [10])[0]
    assert row.mean == Fraction(3, 10)


def test_running_stats_truncation():
    stream = DigitStream.from_digits([0, 1, 0, 1, 1], 2)
    rows = running_stats(stream, [3, 10])
    assert [(r.n, r.truncated) for r in rows] == [(3, False), (5, True)]
    # exhaustion exactly at a checkpoint flags that checkpoint instead
    rows = running_stats(stream, [3, 5, 10])
    assert [(r.n, r.truncated) for r in rows] == [(3, False), (5, True)]


def test_running_stats_checkpoint_validation():
    stream = DigitStream.constant(0, 2)
    for bad in ([], [0, 2], [3, 3], [5, 2]):
        with pytest.raises(DomainError):
            running_stats(stream, bad)
    with pytest.raises(DomainError):
        running_stats(DigitStream.from_digits([], 2), [1])


def test_identity_fuzz_exact():
    # r_n = sum(i * v_i) and sum(v_i) = 1 must hold with zero tolerance
    rng = random.Random(99)
    for trial in range(100):
        base = rng.choice([2, 3, 5, 10])
        digits = uniform_digits(base, 1000, seed=trial)
        stream = DigitStream.from_digits(digits, base)
        for row in running_stats(stream, [1, 7, 100, 999, 1000]):
            assert sum(row.freqs) == 1
            assert row.mean == sum(i * v for i, v in enumerate(row.freqs))


def test_mean_from_frequencies_known_values():
    third = Fraction(1, 3)
    assert mean_from_frequencies(FrequencyProfile(3, (third, third, third))) == 1
    assert mean_from_frequencies(FrequencyProfile(3, (1, 0, 0))) == 0
    assert mean_from_frequencies(FrequencyProfile(3, (0, 0, 1))) == 2


def test_theta_stays_in_range():
    rng = random.Random(5)
    for _ in range(50):
        base = rng.randint(2, 6)
        weights = [rng.randint(0, 9) for _ in range(base)]
        if sum(weights) == 0:
            weights[0] = 1
        tau = [Fraction(w, sum(weights)) for w in weights]
        profile = FrequencyProfile(base, tuple(tau))
        assert 0 <= profile.theta <= base - 1


def test_frequency_profile_validation():
    with pytest.raises(DomainError):
        FrequencyProfile(3, (Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(DomainError):
        FrequencyProfile(3, (Fraction(3, 2), Fraction(-1, 2), 0))


def test_exact_frequencies_rational():
    assert exact_frequencies_rational(expand_rational(1, 2, 3)).tau == (0, 1, 0)
    profile = exact_frequencies_rational(expand_rational(1, 4, 3))
    assert profile.tau == (Fraction(1, 2), 0, Fraction(1, 2))
    assert profile.theta == 1
    # the canonical terminating form, not the all-2 tail
    profile = exact_frequencies_rational(expand_rational(1, 3, 3))
    assert profile.tau == (1, 0, 0)
    assert profile.theta == 0


def test_solve_ternary_system_known_values():
    assert solve_ternary_system(Fraction(1, 3), 1) == (Fraction(1, 3), Fraction(1, 3))
    assert solve_ternary_system(0, 2) == (0, 1)
    assert solve_ternary_system(Fraction(1, 2), Fraction(4, 5)) == (
        Fraction(1, 5),
        Fraction(3, 10),
    )


def test_solve_ternary_system_infeasible():
    with pytest.raises(Infeasible):
        solve_ternary_system(Fraction(9, 10), Fraction(3, 2))  # v1 = -13/10


def test_solve_ternary_system_domain():
    with pytest.raises(DomainError):
        solve_ternary_system(Fraction(3, 2), 1)
    with pytest.raises(DomainError):
        solve_ternary_system(Fraction(1, 2), Fraction(5, 2))


def test_solve_ternary_system_round_trip():
    rng = random.Random(11)
    for _ in range(50):
        a, b, c = (rng.randint(0, 20) for _ in range(3))
        total = a + b + c
        if total == 0:
            a = total = 1
        v = [Fraction(x, total) for x in (a, b, c)]
        assert solve_ternary_system(v[0], v[1] + 2 * v[2]) == (v[1], v[2])


def test_checkpoint_transport_bound():
    # v1 = 2 - 2*v0 - r at every depth, so checkpoint-to-checkpoint moves
    # of v1 are controlled by those of v0 and r
    digits = uniform_digits(3, 2000, seed=17)
    rows = running_stats(DigitStream.from_digits(digits, 3), [10, 40, 160, 640, 2000])
    for earlier in rows:
        for later in rows:
            dv1 = abs(later.freqs[1] - earlier.freqs[1])
            assert dv1 <= 2 * abs(later.freqs[0] - earlier.freqs[0]) + abs(
                later.mean - earlier.mean
            )


def test_classify_limit_constant():
    samples = [(n, Fraction(2, 7)) for n in (1, 2, 4, 8, 16)]
    verdict = classify_limit(samples)
    assert isinstance(verdict, Converged)
    assert verdict.value == Fraction(2, 7)
    assert verdict.depth == 16


def test_classify_limit_converging_average():
    x = Fraction(1, 3)
    depths = geometric_checkpoints(100, 2, 10**4)
    samples = [(n, floor_weighted_average(x, 1, n)) for n in depths]
    verdict = classify_limit(samples)
    assert isinstance(verdict, Converged)
    assert abs(verdict.value - x) <= verdict.tolerance


def test_classify_limit_oscillation():
    samples = [(n, Fraction(n % 2)) for n in range(1, 9)]
    verdict = classify_limit(samples)
    assert isinstance(verdict, Oscillating)
    assert verdict.limsup_estimate - verdict.liminf_estimate == 1
    assert len(verdict.witness_depths) >= 4


def test_classify_limit_monotone_drift_is_undetermined():
    samples = [(n, Fraction(n, 8)) for n in range(1, 9)]
    assert isinstance(classify_limit(samples), Undetermined)


def test_classify_limit_few_samples():
    assert isinstance(classify_limit([(1, Fraction(0)), (2, Fraction(1))]), Undetermined)


def test_classify_limit_validation():
    samples = [(n, Fraction(0)) for n in (1, 2, 3, 4)]
    with pytest.raises(DomainError):
        classify_limit(samples, gap=0)
    with pytest.raises(DomainError):
        classify_limit(samples, tail_fraction=0)
    with pytest.raises(DomainError):
        classify_limit([(2, Fraction(0)), (1, Fraction(0))])


def test_geometric_checkpoints():
    assert geometric_checkpoints(10, 2, 100) == [10, 20, 40, 80, 100]
    assert geometric_checkpoints(10, 2, 80) == [10, 20, 40, 80]
    assert geometric_checkpoints(4, Fraction(3, 2), 20) == [4, 6, 9, 13, 20]
    assert geometric_checkpoints(10, 2, 50, extra=[15, 999]) == [10, 15, 20, 40, 50]
    with pytest.raises(DomainError):
        geometric_checkpoints(10, 1, 100)
    with pytest.raises(DomainError):
        geometric_checkpoints(0, 2, 100)


def test_stats_csv_layout():
    rows = running_stats(DigitStream.from_digits([0, 1, 2, 0], 3), [2, 4])
    text = stats_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "n,N0,N1,N2,v0,v1,v2,r,v0_dec,v1_dec,v2_dec,r_dec,truncated"
    first = lines[1].split(",")
    assert first[0] == "2"
    assert first[1:4] == ["1", "1", "0"]
    assert first[4] == "1/2"
    assert first[12] == "false"


def test_stats_json_mirror():
    rows = running_stats(DigitStream.from_digits([0, 1, 2, 0], 3), [2, 4])
    payload = json.loads(stats_to_json(rows))
    assert payload["base"] == 3
    assert payload["rows"][0]["counts"] == [1, 1, 0]
    assert payload["rows"][0]["mean"] == "1/2"
    assert payload["rows"][1]["truncated"] is False


def test_stats_export_rejects_empty():
    with pytest.raises(DomainError):
        stats_to_csv([])
