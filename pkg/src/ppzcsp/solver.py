"""ppz for (d,k)-CSP, a repeated-trial driver, a Schoening baseline and brute force."""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from ppzcsp import kernels
from ppzcsp.formula import (
    Assignment,
    Formula,
    _check_cap,
    all_assignments,
    is_satisfied,
    substitute,
    unit_forbidden,
)

# trials per RNG block; block b of seed s always gets stream SeedSequence([s, b])
BLOCK_SIZE = 4096


@dataclass(frozen=True)
class TrialOutcome:
    result: Optional[Assignment]
    allowed_sizes: tuple[int, ...]

    @property
    def success(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class SolveReport:
    found: Optional[Assignment]
    trials_run: int
    successes: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "found": list(self.found) if self.found is not None else None,
            "trials": self.trials_run,
            "successes": self.successes,
            "seed": self.seed,
        }


def check_permutation(pi: Sequence[int], n: int) -> None:
    if sorted(pi) != list(range(1, n + 1)):
        raise ValueError(f"{tuple(pi)} is not a permutation of 1..{n}")


def ppz_run(F: Formula, pi: Sequence[int], rng: np.random.Generator) -> TrialOutcome:
    """One pass of ppz along ``pi`` (1-based variables).

    Draws ``n`` uniforms from ``rng`` up front; step ``i`` takes the
    ``floor(u_i * |S|)``-th allowed value, so the compiled batch kernel
    reproduces this run exactly given the same uniforms.
    """
    check_permutation(pi, F.n)
    u = rng.random(F.n)
    current = F
    alpha = [0] * F.n
    sizes = []
    for i, x in enumerate(pi):
        forbidden = unit_forbidden(current, x)
        allowed = [c for c in range(1, F.d + 1) if c not in forbidden]
        if not allowed:
            return TrialOutcome(None, tuple(sizes))
        sizes.append(len(allowed))
        b = allowed[min(int(u[i] * len(allowed)), len(allowed) - 1)]
        alpha[x - 1] = b
        current = substitute(current, x, b)
    result = tuple(alpha)
    if not is_satisfied(F, result):
        return TrialOutcome(None, tuple(sizes))
    return TrialOutcome(result, tuple(sizes))


def block_stream(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed & (2**64 - 1), block]))


def block_randomness(seed: int, block: int, size: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform permutations (0-based rows) and step uniforms for one block of trials."""
    rng = block_stream(seed, block)
    perms = rng.random((size, n)).argsort(axis=1, kind="stable")
    uniforms = rng.random((size, n))
    return perms, uniforms


def _block_sizes(trials: int) -> list[int]:
    full, rest = divmod(trials, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _run_block(args) -> tuple[int, int, Optional[Assignment]]:
    """Returns (successes, index of first success or -1, first assignment)."""
    flat, seed, block, size, backend = args
    perms, uniforms = block_randomness(seed, block, size, flat.n)
    ok, assign = kernels.ppz_batch(flat, perms, uniforms, backend=backend)
    hits = np.flatnonzero(ok)
    if hits.size == 0:
        return 0, -1, None
    first = int(hits[0])
    return int(hits.size), first, tuple(int(v) for v in assign[first])


def run_blocks(F: Formula, trials: int, seed: int, workers: int = 1,
               backend: str | None = None) -> Iterator[tuple[int, int, int, Optional[Assignment]]]:
    """Yield ``(block, successes, first_hit, first_assignment)`` in block order."""
    flat = kernels.flatten(F)
    sizes = _block_sizes(trials)
    jobs = [(flat, seed, b, s, backend) for b, s in enumerate(sizes)]
    if workers <= 1 or len(jobs) <= 1:
        for b, job in enumerate(jobs):
            yield (b, *_run_block(job))
        return
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for b, res in enumerate(pool.map(_run_block, jobs)):
            yield (b, *res)


def ppz_solve(F: Formula, trials: int, seed: int = 0, stop_early: bool = False,
              workers: int = 1, backend: str | None = None) -> SolveReport:
    """Repeat ppz with fresh uniform permutations; deterministic in (F, trials, seed).

    With ``stop_early`` the report counts trials up to and including the
    first success, whatever the worker count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    successes = 0
    found = None
    run = 0
    for b, hits, first, assignment in run_blocks(F, trials, seed, workers, backend):
        size = min(BLOCK_SIZE, trials - b * BLOCK_SIZE)
        if stop_early and hits:
            return SolveReport(assignment, run + first + 1, 1, seed)
        run += size
        successes += hits
        if found is None and assignment is not None:
            found = assignment
    return SolveReport(found, run, successes, seed)


def schoening_run(F: Formula, steps: int, rng: np.random.Generator) -> Optional[Assignment]:
    """Random walk from a uniform start, at most ``steps`` flips.

    Each flip repairs the first violated constraint (file order): one of its
    literals ``x != c`` is picked uniformly and ``x`` moves to one of the
    other ``d - 1`` values.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    F = F.normalize()
    a = [int(v) for v in rng.integers(1, F.d + 1, size=F.n)]
    for step in range(steps + 1):
        violated = next((con for con in F.constraints if not con.is_satisfied(a)), None)
        if violated is None:
            return tuple(a)
        if step == steps or not violated.literals or F.d < 2:
            return None
        lit = violated.literals[int(rng.integers(len(violated.literals)))]
        x = lit.var - 1
        other = int(rng.integers(1, F.d))
        a[x] = other if other < a[x] else other + 1
    return None


def schoening_solve(F: Formula, restarts: int, seed: int = 0, steps: int | None = None) -> SolveReport:
    """Restarted walks of length ``steps`` (default ``3n``); stops at the first success."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    steps = 3 * F.n if steps is None else steps
    for i in range(restarts):
        rng = block_stream(seed, i)
        result = schoening_run(F, steps, rng)
        if result is not None:
            return SolveReport(result, i + 1, 1, seed)
    return SolveReport(None, restarts, 0, seed)


def brute_solve(F: Formula) -> Optional[Assignment]:
    """Lexicographically first satisfying assignment, or None."""
    _check_cap(F)
    if F.has_empty_constraint():
        return None
    return next((a for a in all_assignments(F) if is_satisfied(F, a)), None)


def uniform_permutation(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    return tuple(int(v) + 1 for v in rng.permutation(n))


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))
