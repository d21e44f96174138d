import math

import numpy as np
import pytest

from ppzcsp import analysis, generators, kernels
from ppzcsp.formula import Formula, is_satisfied
from ppzcsp.generators import GenSpec
from ppzcsp.solver import (
    SolveReport,
    block_randomness,
    brute_solve,
    ppz_run,
    ppz_solve,
    schoening_run,
    schoening_solve,
)

FORCED = Formula.from_lists(3, 1, [[(1, 2)], [(1, 3)]])
UNSAT = Formula.from_lists(2, 2, [[(1, 1)], [(1, 2), (2, 1)], [(1, 2), (2, 2)]])
CONTRADICTION = Formula.from_lists(2, 2, [[]])


def test_forced_single_variable():
    rng = np.random.default_rng(0)
    for _ in range(20):
        out = ppz_run(FORCED, [1], rng)
        assert out.result == (1,)
        assert out.allowed_sizes == (1,)
    assert ppz_solve(FORCED, 1, seed=3).found == (1,)


def test_worked_example_last_variable_forced(example):
    # pi'' = (y, z, x): whenever y and z are both set to 1, only 1 remains for x
    rng = np.random.default_rng(5)
    seen = 0
    for _ in range(300):
        out = ppz_run(example, [2, 3, 1], rng)
        assert out.success
        if out.result[1:] == (1, 1):
            seen += 1
            assert out.allowed_sizes == (3, 3, 1)
    assert seen > 0


def test_contradiction_fails():
    rng = np.random.default_rng(1)
    for _ in range(50):
        out = ppz_run(CONTRADICTION, [1, 2], rng)
        assert out.result is None
    report = ppz_solve(CONTRADICTION, 500, seed=1)
    assert report == SolveReport(None, 500, 0, 1)


def test_allowed_sizes_in_range(example):
    rng = np.random.default_rng(2)
    for _ in range(50):
        out = ppz_run(example, list(rng.permutation(3) + 1), rng)
        assert all(1 <= s <= 3 for s in out.allowed_sizes)


def test_bad_permutation(example):
    with pytest.raises(ValueError):
        ppz_run(example, [1, 1, 2], np.random.default_rng())


def test_one_sided_error_many_trials():
    assert brute_solve(UNSAT) is None
    report = ppz_solve(UNSAT, 10_000, seed=9)
    assert report.found is None and report.successes == 0
    rng = np.random.default_rng(9)
    assert all(schoening_run(UNSAT, 6, rng) is None for _ in range(200))


def test_solve_soundness_and_counts():
    F = generators.uniform_random(GenSpec(3, 3, 6, 12, seed=4))
    report = ppz_solve(F, 5000, seed=2)
    assert report.successes <= report.trials_run == 5000
    assert (report.found is not None) == (report.successes >= 1)
    if report.found is not None:
        assert is_satisfied(F, report.found)


def test_stop_early_is_worker_independent():
    F = generators.unique_planted(GenSpec(2, 3, 7, 28, seed=1))
    a = ppz_solve(F, 20_000, seed=5, stop_early=True)
    b = ppz_solve(F, 20_000, seed=5, stop_early=True, workers=3)
    assert a == b
    assert a.found == (1,) * 7 and a.successes == 1
    full = ppz_solve(F, 20_000, seed=5)
    assert full.successes >= 1 and full.found == a.found


def test_determinism_across_workers():
    F = generators.uniform_random(GenSpec(3, 3, 6, 10, seed=8))
    reports = {ppz_solve(F, 3 * 4096 + 17, seed=42, workers=w) for w in (1, 2, 4)}
    assert len(reports) == 1


@pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
def test_backends_agree_on_solve(backend):
    F = generators.uniform_random(GenSpec(3, 2, 5, 9, seed=3))
    assert ppz_solve(F, 3000, seed=1, backend=backend) == ppz_solve(F, 3000, seed=1)


def test_planted_unique_amplified():
    """n=6, d=2, k=3 with 10 * 2^(2n/3) trials: success rate >= 0.9 over 50 repetitions."""
    F = generators.unique_planted(GenSpec(2, 3, 6, 24, seed=0))
    trials = 10 * 2 ** (2 * 6 // 3)
    wins = sum(ppz_solve(F, trials, seed=rep).found is not None for rep in range(50))
    assert wins / 50 >= 0.9


def test_fixed_permutation_return_probability(example):
    """With pi fixed, the frequency of returning alpha matches prod 1/|S(x,pi,alpha)|."""
    alpha = (1, 1, 1)
    pi = (2, 1, 3)
    expected = math.prod(1 / len(analysis.allowed_set(example, alpha, pi, x)) for x in pi)
    assert math.isclose(expected, 1 / 18)
    trials = 100_000
    _, uniforms = block_randomness(77, 0, trials, 3)
    perms = np.tile(np.array(pi) - 1, (trials, 1))
    ok, assign = kernels.ppz_batch(kernels.flatten(example), perms, uniforms)
    hits = int(np.sum(ok & np.all(assign == alpha, axis=1)))
    sigma = math.sqrt(expected * (1 - expected) / trials)
    assert abs(hits / trials - expected) <= 3 * sigma


def test_schoening_trivial_cases():
    rng = np.random.default_rng(0)
    empty = Formula(3, 4)
    a = schoening_run(empty, 0, rng)
    assert a is not None and len(a) == 4
    assert schoening_run(CONTRADICTION, 10, rng) is None
    with pytest.raises(ValueError):
        schoening_run(empty, -1, rng)


def test_schoening_matches_exact_walk_probability():
    F = generators.unique_planted(GenSpec(2, 3, 5, 20, seed=3))
    steps = 3 * F.n
    exact = analysis.schoening_exact_success(F, steps)
    restarts = 20_000
    rng = np.random.default_rng(123)
    wins = 0
    for _ in range(restarts):
        a = schoening_run(F, steps, rng)
        if a is not None:
            assert is_satisfied(F, a)
            wins += 1
    sigma = math.sqrt(exact * (1 - exact) / restarts)
    assert abs(wins / restarts - exact) <= 3 * sigma
    report = schoening_solve(F, 1000, seed=1)
    assert report.found == (1,) * 5


def test_brute_solve(example):
    assert brute_solve(example) == (1, 1, 1)
    assert brute_solve(CONTRADICTION) is None
    assert brute_solve(Formula(2, 1)) == (1,)
