import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oblivisort import algorithms as alg
from oblivisort.core import ContractError, RngStream, TaggedElement, keys_of, tag
from oblivisort.metrics import adversarial_input, count_inversions, random_permutation, sorted_input
from oblivisort.schedule import AnnealingSchedule, practical_schedule, schedule_cost, terminator_only
from oblivisort.trace import Trace

import reference as ref


def keys_perm(n, seed):
    return random_permutation(n, RngStream(seed, 1))


def expected_spin_adversarial(n):
    """Exact E[comparisons] for CheckSorted spin on the adjacent-swap input.

    Pairs are fixed independently, each with per-round probability
    p = 1 - (1 - 1/(n-1))**2, so rounds = max of n/2 iid geometric(p).
    Returns (mean, standard deviation) in comparisons.
    """
    q = (1 - 1 / (n - 1)) ** 2
    m = n // 2
    mean = second = 0.0
    k = 0
    while True:
        tail = 1 - (1 - q**k) ** m
        mean += tail
        second += (2 * k + 1) * tail
        k += 1
        if tail < 1e-16:
            break
    return mean * n, math.sqrt(second - mean * mean) * n


def harmonic(m):
    return sum(1 / i for i in range(1, m + 1))


# --- kernels against the list-based reference ---------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(0, 2**64 - 1))
def test_spin_round_matches_reference(n, seed):
    a = keys_perm(n, seed)
    b = list(a)
    ra, rb = RngStream(seed), RngStream(seed)
    rec, ops = Trace(n), []
    assert alg.spin_round(a, ra, rec) == ref.spin_round(b, rb, ops)
    assert a == b
    assert list(rec) == ops
    assert ra.getstate() == rb.getstate()


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 50), st.integers(1, 4), st.integers(0, 2**64 - 1))
def test_annealing_pass_matches_reference(n, temp, reps, seed):
    a = keys_perm(n, seed)
    b = list(a)
    ra, rb = RngStream(seed), RngStream(seed)
    rec, ops = Trace(n), []
    assert alg.annealing_pass(a, temp, reps, ra, rec) == ref.annealing_pass(b, temp, reps, rb, ops)
    assert a == b
    assert list(rec) == ops
    assert ra.getstate() == rb.getstate()


@pytest.mark.parametrize("n", [2, 3, 17, 64])
def test_annealing_sort_matches_reference(n):
    sched = practical_schedule(n)
    a = keys_perm(n, n)
    b = list(a)
    rec, ops = Trace(n), []
    report = alg.annealing_sort(a, sched, RngStream(11), rec)
    assert report.comparisons == ref.annealing_sort(b, sched, RngStream(11), ops)
    assert a == b
    assert list(rec) == ops


# --- spin_round ----------------------------------------------------------------

def test_spin_round_two_cells():
    a = tag([2, 1])
    rec = Trace(2)
    assert alg.spin_round(a, RngStream(5), rec) == (2, 1)
    assert list(rec) == [(1, 2), (1, 2)]
    assert keys_of(a) == [1, 2]


def test_spin_round_sorted_input():
    a = sorted_input(8)
    assert alg.spin_round(a, RngStream(8)) == (8, 0)
    assert a == sorted_input(8)


def test_spin_round_needs_two_cells():
    with pytest.raises(ContractError):
        alg.spin_round(tag([1]), RngStream(0))


def test_spin_round_resolution_probability():
    n, rounds = 16, 10_000
    rng = RngStream(2024)
    resolved = 0
    for _ in range(rounds):
        a = adversarial_input(n)
        alg.spin_round(a, rng)
        resolved += sum(1 for k in range(0, n, 2) if a[k].key < a[k + 1].key)
    trials = rounds * n // 2
    p = 2 / (n - 1) - 1 / (n - 1) ** 2
    assert p >= 1 / (n - 1)
    sigma = math.sqrt(p * (1 - p) / trials)
    assert abs(resolved / trials - p) < 3 * sigma


# --- spin_the_bottle_sort --------------------------------------------------------

def test_spin_single_cell():
    report = alg.spin_the_bottle_sort(tag([7]), RngStream(0))
    assert report.comparisons == 0 and report.sorted


def test_spin_zero_budget():
    a = tag([3, 1, 2])
    report = alg.spin_the_bottle_sort(a, RngStream(0), alg.FixedBudget(0))
    assert report.comparisons == 0 and not report.sorted
    assert keys_of(a) == [3, 1, 2]


def test_fixed_budget_rejects_negative():
    with pytest.raises(ContractError):
        alg.FixedBudget(-1)


def test_default_spin_budget():
    assert alg.default_spin_budget(256) == math.ceil(4 * 256 + 2 * 256 * math.log(256))
    assert alg.default_spin_budget(1) == 0


def test_spin_adversarial_mean_cost():
    n = 64
    means = [alg.spin_the_bottle_sort(adversarial_input(n), RngStream(s)).comparisons for s in range(30)]
    mean = float(np.mean(means))
    lower = n * (n - 1) * harmonic(n // 4) / 2 - n * n / 2
    assert lower / 2 <= mean <= 2 * lower
    exact, sd = expected_spin_adversarial(n)
    assert abs(mean - exact) < 4 * sd / math.sqrt(30)


def test_expected_spin_adversarial_oracle_small_case():
    # n=4: two pairs; P(pair open after k rounds) = q**k with q = (2/3)**2
    q = (2 / 3) ** 2
    rounds = sum(1 - (1 - q**k) ** 2 for k in range(2000))
    assert expected_spin_adversarial(4)[0] == pytest.approx(4 * rounds, rel=1e-12)
    # closed form of E[max of two geometrics]: 2/p - 1/(1 - q**2)
    p = 1 - q
    assert rounds == pytest.approx(2 / p - 1 / (1 - q * q), rel=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_check_sorted_always_sorts(seed):
    a = keys_perm(48, seed)
    report = alg.spin_the_bottle_sort(a, RngStream(seed))
    assert report.sorted and report.final_inversions == 0
    assert report.comparisons == 48 * report.rounds
    assert report.scan_comparisons == 47 * (report.rounds + 1)


def test_mean_inversions_nonincreasing_over_rounds():
    n, seeds, rounds = 64, 100, 150
    history = np.zeros((seeds, rounds + 1))
    for s in range(seeds):
        a = keys_perm(n, 1000 + s)
        rng = RngStream(s)
        history[s, 0] = count_inversions(a)
        for j in range(rounds):
            alg.spin_round(a, rng)
            history[s, j + 1] = count_inversions(a)
    mean = history.mean(axis=0)
    live = mean[:-1] > 0
    assert (mean[1:][live] <= mean[:-1][live]).all()


# --- annealing ---------------------------------------------------------------------

def test_annealing_pass_unit_temperature_is_shaker_pass():
    n = 12
    a = keys_perm(n, 3)
    expected = list(a)
    for i in range(n - 1):
        if expected[i + 1] < expected[i]:
            expected[i], expected[i + 1] = expected[i + 1], expected[i]
    for i in range(n - 1, 0, -1):
        if expected[i] < expected[i - 1]:
            expected[i], expected[i - 1] = expected[i - 1], expected[i]
    rng = RngStream(77)
    rec = Trace(n)
    alg.annealing_pass(a, 1, 1, rng, rec)
    assert a == expected
    assert rng.position == 0
    assert list(rec) == [(i, i + 1) for i in range(1, n)] + [(i - 1, i) for i in range(n, 1, -1)]


def test_annealing_pass_single_adjacent_inversion():
    a = tag([2, 1, 3, 4, 5, 6, 7, 8])
    assert alg.annealing_pass(a, 1, 1, RngStream(0)) == (14, 1)
    assert keys_of(a) == list(range(1, 9))


def test_annealing_pass_structural_count():
    for seed in range(3):
        assert alg.annealing_pass(keys_perm(16, seed), 16, 4, RngStream(42))[0] == 120


@pytest.mark.parametrize("temp,reps", [(0, 1), (1, 0)])
def test_annealing_pass_contract(temp, reps):
    with pytest.raises(ContractError):
        alg.annealing_pass(tag([2, 1]), temp, reps, RngStream(0))


def test_annealing_terminator_only():
    a = keys_perm(10, 1)
    before = list(a)
    report = alg.annealing_sort(a, terminator_only(), RngStream(0))
    assert report.comparisons == 0 and a == before


def test_annealing_rejects_invalid_schedule():
    with pytest.raises(ContractError):
        alg.annealing_sort(tag([2, 1]), AnnealingSchedule(((1, 1), (2, 1), (0, 0))), RngStream(0))


schedules = st.lists(st.tuples(st.integers(1, 40), st.integers(1, 3)), max_size=6).map(
    lambda es: AnnealingSchedule(tuple(sorted(es, reverse=True)) + ((0, 0),)))


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 50), schedules, st.integers(0, 2**64 - 1))
def test_structural_counts(n, schedule, seed):
    a = keys_perm(n, seed)
    report = alg.annealing_sort(a, schedule, RngStream(seed))
    assert report.comparisons == schedule_cost(schedule, n) == 2 * (n - 1) * schedule.total_repetitions()
    assert report.rounds == len(schedule.active())
    assert report.swaps <= report.comparisons
    assert report.sorted == (report.final_inversions == 0)
    assert sorted(a) == sorted(keys_perm(n, seed))

    b = keys_perm(n, seed)
    comps, _ = alg.spin_round(b, RngStream(seed))
    assert comps == n
    for temp, reps in schedule.active()[:2]:
        assert alg.annealing_pass(b, temp, reps, RngStream(seed))[0] == 2 * (n - 1) * reps


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=30), st.integers(0, 2**32))
def test_duplicates_sorted_by_key_then_origin(keys, seed):
    a = tag(keys)
    report = alg.annealing_sort(a, practical_schedule(len(keys), 6), RngStream(seed))
    if report.sorted:
        assert a == sorted(tag(keys))


# --- guess sort ---------------------------------------------------------------------

def test_guess_sorted_input_stops_at_first_check():
    report = alg.guess_sort(sorted_input(20), RngStream(0), 10_000)
    assert report.comparisons <= 20 and report.sorted


def test_guess_zero_budget():
    report = alg.guess_sort(tag([2, 1, 3]), RngStream(0), 0)
    assert report.comparisons == 0 and not report.sorted


def test_guess_budget_is_respected():
    report = alg.guess_sort(keys_perm(30, 1), RngStream(1), 45)
    assert report.comparisons <= 45


def test_guess_mean_cost():
    n = 32
    means = np.mean([alg.guess_sort(keys_perm(n, s), RngStream(s)).comparisons for s in range(30)])
    target = n * n * math.log(n)
    assert target / 3 <= means <= 3 * target


# --- bubble and oracle ---------------------------------------------------------------

def test_bubble_reverse():
    report = alg.bubble_sort(tag(range(8, 0, -1)))
    assert report.comparisons == ref.bubble_comparisons(list(range(8, 0, -1))) == 56
    assert report.sorted


def test_bubble_sorted_input():
    report = alg.bubble_sort(sorted_input(9))
    assert report.rounds == 1 and report.swaps == 0 and report.comparisons == 8


@given(st.lists(st.integers(-20, 20), max_size=40))
def test_bubble_matches_reference_and_oracle(keys):
    a = tag(keys)
    report = alg.bubble_sort(a)
    assert a == alg.oracle_sort(tag(keys))
    if len(keys) >= 2:
        assert report.comparisons == ref.bubble_comparisons(tag(keys))
    assert report.swaps == report.initial_inversions


def test_oracle_sort_orders_by_key_then_origin():
    a = [TaggedElement(2, 1), TaggedElement(1, 2), TaggedElement(2, 3), TaggedElement(1, 4)]
    assert alg.oracle_sort(a) == [TaggedElement(1, 2), TaggedElement(1, 4), TaggedElement(2, 1), TaggedElement(2, 3)]


def test_plain_values_sort_in_place():
    a = [3, 1, 2, 1]
    alg.annealing_sort(a, practical_schedule(4), RngStream(0))
    assert a == [1, 1, 2, 3]


def test_recorder_width_must_match():
    with pytest.raises(ContractError):
        alg.annealing_sort(tag([2, 1]), practical_schedule(2), RngStream(0), Trace(3))
