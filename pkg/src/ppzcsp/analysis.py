"""Exact and Monte Carlo analysis of ppz on small formulas.

Exact quantities average over all ``n!`` variable orders. The allowed set of
``x`` along a fixed satisfying assignment only depends on which variables
precede ``x``, so most routines enumerate predecessor subsets (bitmasks over
0-based variables) and weight them, which is the same average regrouped.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ppzcsp import kernels
from ppzcsp.bounds import G_closed_form
from ppzcsp.formula import (
    Assignment,
    Formula,
    SizeError,
    _check_cap,
    all_assignments,
    is_satisfied,
    looseness,
    sat_set,
    substitute_partial,
    unit_forbidden,
)
from ppzcsp.solver import check_permutation, run_blocks

MAX_EXACT_N = 8
TOL = 1e-12


def _require_satisfying(F: Formula, alpha: Sequence[int]) -> None:
    if not is_satisfied(F, alpha):
        raise ValueError(f"{tuple(alpha)} does not satisfy the formula")


def _require_small(F: Formula, limit: int = MAX_EXACT_N) -> None:
    if F.n > limit:
        raise SizeError(f"exact enumeration needs n <= {limit}, got n={F.n}")


def allowed_set(F: Formula, alpha: Sequence[int], pi: Sequence[int], x: int) -> frozenset[int]:
    """S(x, pi, alpha): set the pi-prefix before ``x`` as in alpha, keep the non-forbidden values."""
    _require_satisfying(F, alpha)
    check_permutation(pi, F.n)
    prefix = list(pi)[: list(pi).index(x)]
    reduced = substitute_partial(F, {y: alpha[y - 1] for y in prefix})
    forbidden = unit_forbidden(reduced, x)
    values = frozenset(c for c in range(1, F.d + 1) if c not in forbidden)
    assert alpha[x - 1] in values
    return values


class _Forcing:
    """For each variable, the (value, predecessor mask) pairs that forbid that value.

    Value ``c`` is forbidden for ``x`` once every variable of ``mask`` precedes
    ``x``: the constraint then reduces to the unit ``(x != c)``.
    """

    def __init__(self, F: Formula, alpha: Sequence[int]):
        self.d = F.d
        self.n = F.n
        rules: list[list[tuple[int, int]]] = [[] for _ in range(F.n)]
        for con in F.normalize().constraints:
            for lit in con.literals:
                mask = 0
                for other in con.literals:
                    if other is lit:
                        continue
                    if other.var == lit.var or alpha[other.var - 1] != other.value:
                        break
                    mask |= 1 << (other.var - 1)
                else:
                    assert alpha[lit.var - 1] != lit.value, "alpha violates a constraint"
                    rules[lit.var - 1].append((lit.value, mask))
        self.rules = rules
        self._cache: dict[tuple[int, int], int] = {}

    def size(self, x0: int, mask: int) -> int:
        """|S(x, pi, alpha)| for 0-based ``x0`` preceded exactly by ``mask``."""
        key = (x0, mask)
        s = self._cache.get(key)
        if s is None:
            forbidden = {c for c, need in self.rules[x0] if need & mask == need}
            s = self._cache[key] = self.d - len(forbidden)
        return s

    def value_allowed(self, x0: int, mask: int, c: int) -> bool:
        return not any(v == c and need & mask == need for v, need in self.rules[x0])


def _predecessor_weights(n: int) -> list[Fraction]:
    """P[x is preceded by a given set of size t] under a uniform permutation."""
    return [Fraction(math.factorial(t) * math.factorial(n - 1 - t), math.factorial(n)) for t in range(n)]


def _masks_without(n: int, x0: int):
    bit = 1 << x0
    for mask in range(1 << n):
        if not mask & bit:
            yield mask


def exact_return_prob(F: Formula, alpha: Sequence[int], method: str = "subsets") -> Fraction:
    """Pr[ppz returns alpha] averaged over all orders, as an exact fraction.

    ``method="permutations"`` walks all ``n!`` orders and multiplies the
    ``1/|S|`` factors; ``"subsets"`` accumulates the same sum over prefixes.
    """
    _require_satisfying(F, alpha)
    _require_small(F)
    n = F.n
    forcing = _Forcing(F, alpha)
    if method == "permutations":
        products: Counter[int] = Counter()
        for perm in itertools.permutations(range(n)):
            mask, prod = 0, 1
            for x0 in perm:
                prod *= forcing.size(x0, mask)
                mask |= 1 << x0
            products[prod] += 1
        total = sum((Fraction(cnt, p) for p, cnt in products.items()), Fraction(0))
        return total / math.factorial(n)
    if method != "subsets":
        raise ValueError(f"unknown method {method!r}")
    # weight[mask] = sum over orders of mask of the product of 1/|S| factors
    weight: list[Fraction] = [Fraction(0)] * (1 << n)
    weight[0] = Fraction(1)
    for mask in range(1 << n):
        w = weight[mask]
        if not w:
            continue
        for x0 in range(n):
            if not mask >> x0 & 1:
                weight[mask | 1 << x0] += w / forcing.size(x0, mask)
    return weight[-1] / math.factorial(n)


def expected_log_S(F: Formula, alpha: Sequence[int], x: int) -> float:
    """E over uniform orders of log2 |S(x, pi, alpha)|."""
    _require_satisfying(F, alpha)
    _require_small(F)
    return _expected_log_sizes(F, alpha)[x - 1]


def _expected_log_sizes(F: Formula, alpha: Sequence[int]) -> list[float]:
    n = F.n
    forcing = _Forcing(F, alpha)
    weights = _predecessor_weights(n) if n else []
    out = []
    for x0 in range(n):
        counts: Counter[int] = Counter()
        for mask in _masks_without(n, x0):
            counts[(forcing.size(x0, mask), mask.bit_count())] += 1
        out.append(math.fsum(float(weights[t] * cnt) * math.log2(s) for (s, t), cnt in counts.items()))
    return out


def prob_value_allowed(F: Formula, alpha: Sequence[int], x: int, c: int) -> Fraction:
    """Pr over orders that ``c`` is in S(x, pi, alpha)."""
    _require_satisfying(F, alpha)
    _require_small(F)
    n, x0 = F.n, x - 1
    forcing = _Forcing(F, alpha)
    weights = _predecessor_weights(n)
    return sum(
        (weights[mask.bit_count()] for mask in _masks_without(n, x0) if forcing.value_allowed(x0, mask, c)),
        Fraction(0),
    )


@dataclass
class ExactReport:
    per_assignment: dict[Assignment, Fraction]
    total: Fraction
    per_variable_logS: dict[tuple[Assignment, int], float] = field(default_factory=dict)


def exact_report(F: Formula) -> ExactReport:
    _require_small(F)
    per_assignment = {}
    logs = {}
    for alpha in sat_set(F):
        per_assignment[alpha] = exact_return_prob(F, alpha)
        for x0, v in enumerate(_expected_log_sizes(F, alpha)):
            logs[(alpha, x0 + 1)] = v
    total = sum(per_assignment.values(), Fraction(0))
    return ExactReport(per_assignment, total, logs)


def exact_success_prob(F: Formula, method: str = "assignments", backend: str | None = None) -> float:
    """Pr[ppz succeeds] over a uniform order and its own coin flips.

    ``"assignments"`` sums exact per-assignment return probabilities over
    sat(F); ``"branches"`` runs a weighted DFS over every random branch of
    every order and keeps only satisfying leaves.
    """
    _require_small(F)
    if method == "assignments":
        return float(sum((exact_return_prob(F, a) for a in sat_set(F)), Fraction(0)))
    if method != "branches":
        raise ValueError(f"unknown method {method!r}")
    _check_cap(F)
    flat = kernels.flatten(F)
    per_perm = [kernels.branch_success(flat, perm, backend) for perm in itertools.permutations(range(F.n))]
    return math.fsum(per_perm) / math.factorial(F.n)


def success_lower_bound(F: Formula) -> float:
    """2^(-n G(d,k)) with ``k`` the formula's own maximum width."""
    return 2.0 ** (-F.n * G_closed_form(F.d, max(F.k, 1)).exponent)


@dataclass
class Record:
    instance: str
    alpha: Optional[Assignment]
    exact: float
    bound: float

    @property
    def gap(self) -> float:
        return self.exact - self.bound

    @property
    def holds(self) -> bool:
        return self.gap >= -TOL

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "alpha": list(self.alpha) if self.alpha is not None else None,
            "exact": self.exact,
            "bound": self.bound,
            "gap": self.gap,
            "holds": self.holds,
        }


def verify_proposition1(F: Formula, name: str = "") -> list[Record]:
    """Per satisfying alpha: exact return probability vs 2^(-sum_x E log2|S|)."""
    _require_small(F, 7)
    out = []
    for alpha in sat_set(F):
        exact = float(exact_return_prob(F, alpha))
        bound = 2.0 ** -math.fsum(_expected_log_sizes(F, alpha))
        out.append(Record(name, alpha, exact, bound))
    return out


def verify_success_bound(F: Formula, name: str = "") -> Record:
    return Record(name, None, exact_success_prob(F), success_lower_bound(F))


@dataclass
class KraftReport:
    total: Fraction
    count: int

    @property
    def holds(self) -> bool:
        return self.total >= 1 - Fraction(1, 10**12)

    def to_dict(self) -> dict:
        return {"sum": float(self.total), "exact": str(self.total), "solutions": self.count, "holds": self.holds}


def verify_kraft(F: Formula) -> KraftReport:
    """Sum over sat(F) of prod_x 1/looseness(alpha, x)."""
    _check_cap(F, 10**6)
    sols = sat_set(F)
    if not sols:
        raise ValueError("formula is unsatisfiable")
    total = Fraction(0)
    for alpha in sols:
        denom = 1
        for x in range(1, F.n + 1):
            denom *= looseness(F, alpha, x)
        total += Fraction(1, denom)
    return KraftReport(total, len(sols))


@dataclass
class OneValueRecord:
    alpha: Assignment
    x: int
    c: int
    prob: Fraction
    k: int

    @property
    def holds(self) -> bool:
        return float(self.prob) <= 1 - 1 / self.k + TOL


def verify_one_value_bound(F: Formula) -> list[OneValueRecord]:
    """For each alpha, x and each c with alpha[x -> c] unsatisfying: Pr[c in S] <= 1 - 1/k."""
    _require_small(F, 7)
    k = max(F.k, 1)
    out = []
    for alpha in sat_set(F):
        for x in range(1, F.n + 1):
            switched = list(alpha)
            for c in range(1, F.d + 1):
                switched[x - 1] = c
                if not is_satisfied(F, switched):
                    out.append(OneValueRecord(alpha, x, c, prob_value_allowed(F, alpha, x, c), k))
    return out


@dataclass(frozen=True)
class Estimate:
    successes: int
    trials: int

    @property
    def p(self) -> float:
        return self.successes / self.trials

    @property
    def stderr(self) -> float:
        p = self.p
        return math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self) -> dict:
        return {"successes": self.successes, "trials": self.trials, "estimate": self.p, "stderr": self.stderr}


def monte_carlo_success(F: Formula, trials: int, seed: int = 0, workers: int = 1,
                        backend: str | None = None) -> Estimate:
    """Fraction of successful ppz trials under fresh uniform orders."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    hits = sum(h for _, h, _, _ in run_blocks(F, trials, seed, workers, backend))
    return Estimate(hits, trials)


def schoening_exact_success(F: Formula, steps: int) -> float:
    """Exact success probability of one ``solver.schoening_run`` walk.

    Propagates the state distribution over all ``d^n`` assignments, with
    satisfying states absorbing.
    """
    _check_cap(F, 4096)
    F = F.normalize()
    d, n = F.d, F.n
    states = list(all_assignments(F))
    index = {a: i for i, a in enumerate(states)}
    N = len(states)
    sat = np.array([is_satisfied(F, a) for a in states])
    T = np.zeros((N, N))
    for i, a in enumerate(states):
        if sat[i]:
            continue
        violated = next(con for con in F.constraints if not con.is_satisfied(a))
        if not violated.literals or d < 2:
            continue  # walk gives up
        w = 1.0 / (len(violated.literals) * (d - 1))
        for lit in violated.literals:
            for c in range(1, d + 1):
                if c != a[lit.var - 1]:
                    b = list(a)
                    b[lit.var - 1] = c
                    T[i, index[tuple(b)]] += w
    dist = np.full(N, 1.0 / N)
    won = dist[sat].sum()
    for _ in range(steps):
        dist = np.where(sat, 0.0, dist) @ T
        won += dist[sat].sum()
    return float(won)
