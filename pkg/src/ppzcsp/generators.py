"""Instance generators. Value 1 is always the planted value."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ppzcsp.formula import Constraint, Formula, Literal, sat_set

MAX_RETRIES = 1000


@dataclass(frozen=True)
class GenSpec:
    d: int
    k: int
    n: int
    m: int = 0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.d < 1 or self.k < 1 or self.n < 1:
            raise ValueError(f"need d, k, n >= 1, got {self}")
        if self.m < 0:
            raise ValueError("m must be >= 0")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence(self.seed & (2**64 - 1)))


def _critical(x: int, c: int, side: list[int]) -> Constraint:
    return Constraint((Literal(x, c), *(Literal(y, 1) for y in side)))


def _planted_extras(spec: GenSpec, rng: np.random.Generator) -> list[Constraint]:
    """``spec.m`` random width-k constraints, each with some literal value != 1."""
    out = []
    width = min(spec.k, spec.n)
    while len(out) < spec.m:
        vars_ = rng.choice(np.arange(1, spec.n + 1), size=width, replace=False)
        vals = rng.integers(1, spec.d + 1, size=width)
        if np.all(vals == 1):
            continue
        out.append(Constraint(tuple(Literal(int(v), int(c)) for v, c in zip(vars_, vals))))
    return out


def planted_random(spec: GenSpec) -> Formula:
    """One critical constraint per (x, c != 1), side variables drawn fresh each time.

    ``spec.m`` extra random constraints satisfied by the all-1 assignment are
    appended.
    """
    if spec.n < spec.k:
        raise ValueError(f"need n >= k, got n={spec.n}, k={spec.k}")
    rng = spec.rng()
    others = lambda x: np.array([y for y in range(1, spec.n + 1) if y != x])  # noqa: E731
    cons = []
    for x in range(1, spec.n + 1):
        for c in range(2, spec.d + 1):
            side = rng.choice(others(x), size=spec.k - 1, replace=False)
            cons.append(_critical(x, c, [int(y) for y in side]))
    cons += _planted_extras(spec, rng)
    return Formula(spec.d, spec.n, tuple(cons))


def distinct_critical(spec: GenSpec) -> Formula:
    """Like ``planted_random`` but the (d-1)(k-1) side variables of each x are pairwise distinct."""
    need = (spec.d - 1) * (spec.k - 1)
    if spec.n < 1 + need:
        raise ValueError(f"need n >= 1 + (d-1)(k-1) = {1 + need}, got n={spec.n}")
    rng = spec.rng()
    cons = []
    w = spec.k - 1
    for x in range(1, spec.n + 1):
        pool = np.array([y for y in range(1, spec.n + 1) if y != x])
        side = [int(y) for y in rng.choice(pool, size=need, replace=False)]
        for i, c in enumerate(range(2, spec.d + 1)):
            cons.append(_critical(x, c, side[i * w:(i + 1) * w]))
    cons += _planted_extras(spec, rng)
    return Formula(spec.d, spec.n, tuple(cons))


def unique_planted(spec: GenSpec, generator=planted_random, max_retries: int = MAX_RETRIES) -> Formula:
    """Regenerate with seed, seed+1, ... until all-1 is the only solution."""
    for i in range(max_retries):
        F = generator(replace(spec, seed=spec.seed + i))
        if len(sat_set(F)) == 1:
            return F
    raise RuntimeError(f"no uniquely satisfiable instance within {max_retries} seeds from {spec}")


def constant_X_chain(n: int) -> Formula:
    """Boolean chain with pairs (x_i, y_i) = variables (2i-1, 2i); value 1 is true.

    Per pair: (x v y) & (x v -y) & (-x v y), whose unique model is x = y = true.
    """
    if n < 0 or n % 2:
        raise ValueError(f"n must be even, got {n}")
    cons = []
    for i in range(n // 2):
        x, y = 2 * i + 1, 2 * i + 2
        cons.append(Constraint((Literal(x, 2), Literal(y, 2))))
        cons.append(Constraint((Literal(x, 2), Literal(y, 1))))
        cons.append(Constraint((Literal(x, 1), Literal(y, 2))))
    return Formula(2, n, tuple(cons))


def uniform_random(spec: GenSpec) -> Formula:
    """``m`` constraints over ``k`` distinct uniform variables with uniform values."""
    if spec.k > spec.n:
        raise ValueError(f"need k <= n, got k={spec.k}, n={spec.n}")
    rng = spec.rng()
    cons = []
    for _ in range(spec.m):
        vars_ = rng.choice(np.arange(1, spec.n + 1), size=spec.k, replace=False)
        vals = rng.integers(1, spec.d + 1, size=spec.k)
        cons.append(Constraint(tuple(Literal(int(v), int(c)) for v, c in zip(vars_, vals))))
    return Formula(spec.d, spec.n, tuple(cons))
