"""Randomized property suites run by ``ppzcsp verify``."""

from __future__ import annotations

import math
from typing import Callable, Iterator

import numpy as np

from ppzcsp import analysis, bounds, generators, submodular as sm
from ppzcsp.formula import Formula
from ppzcsp.generators import GenSpec
from ppzcsp.solver import brute_solve
from ppzcsp.submodular import LemmaReport

P_GRID = [i / 10 for i in range(11)]


def satisfiable_corpus(count: int, seed: int = 0, max_d: int = 3, max_k: int = 3,
                       max_n: int = 6) -> Iterator[tuple[str, Formula]]:
    """Cycle planted / distinct_critical / uniform_random, keeping satisfiable ones."""
    rng = np.random.default_rng(seed)
    made = 0
    i = 0
    while made < count:
        kind = ("planted", "distinct", "uniform")[i % 3]
        i += 1
        d = int(rng.integers(2, max_d + 1))
        k = int(rng.integers(2, max_k + 1))
        s = int(rng.integers(2**32))
        if kind == "distinct":
            lo = 1 + (d - 1) * (k - 1)
            if lo > max_n:
                d, k, lo = 2, 2, 2
            n = int(rng.integers(max(lo, 3), max_n + 1))
            F = generators.distinct_critical(GenSpec(d, k, n, int(rng.integers(0, 2 * n)), s))
        elif kind == "planted":
            n = int(rng.integers(max(k, 3), max_n + 1))
            F = generators.planted_random(GenSpec(d, k, n, int(rng.integers(0, 3 * n)), s))
        else:
            n = int(rng.integers(max(k, 3), max_n + 1))
            F = generators.uniform_random(GenSpec(d, k, n, int(rng.integers(1, 4 * n)), s))
            if brute_solve(F) is None:
                continue
        made += 1
        yield f"{kind}(d={d},k={k},n={n},seed={s})", F


def _report(name: str, checks: int, failures: list[str]) -> LemmaReport:
    return LemmaReport(name, not failures, checks, "; ".join(failures[:3]))


def suite_bounds(seed: int = 0, mc_samples: int = 10**6) -> list[LemmaReport]:
    out = []
    fails = []
    checks = 0
    for d in range(2, 9):
        for k in range(2, 7):
            q, c = bounds.G_quadrature(d, k).exponent, bounds.G_closed_form(d, k).exponent
            checks += 1
            if abs(q - c) > 1e-8:
                fails.append(f"G({d},{k}): quad {q} vs beta {c}")
    out.append(_report("G dual-method (quadrature vs beta)", checks, fails))

    rng = np.random.default_rng(seed)
    fails, checks = [], 0
    for d, k, r in [(2, 3, 0.5), (3, 3, 0.3), (5, 4, 0.7), (6, 4, 0.9), (8, 6, 0.85)]:
        q = 1 - r ** (k - 1)
        samples = np.log2(1 + rng.binomial(d - 1, q, size=mc_samples))
        mean, se = samples.mean(), samples.std(ddof=1) / math.sqrt(mc_samples)
        exact = bounds.g_of_r(d, k, r)
        checks += 1
        if abs(mean - exact) > 4 * se + 1e-15:
            fails.append(f"g({d},{k},{r}): MC {mean} vs {exact}")
    out.append(_report("g(d,k,r) Monte Carlo consistency", checks, fails))

    fails, checks = [], 0
    for d in range(1, 11):
        for k in range(1, 9):
            g = bounds.G(d, k)
            checks += 1
            if not (-1e-15 <= g <= math.log2(d) + 1e-12 and g <= bounds.suboptimal_exponent(d, k) + 1e-10):
                fails.append(f"G({d},{k})={g}")
    out.append(_report("0 <= G <= min(log2 d, suboptimal)", checks, fails))
    return out


def suite_analysis(seed: int = 0, count: int = 20) -> list[LemmaReport]:
    thm, prop, one, kraft = [], [], [], []
    n_prop = n_one = 0
    for name, F in satisfiable_corpus(count, seed):
        rec = analysis.verify_success_bound(F, name)
        if not rec.holds:
            thm.append(f"{name}: {rec.exact} < {rec.bound}")
        for r in analysis.verify_proposition1(F, name):
            n_prop += 1
            if not r.holds:
                prop.append(f"{name} alpha={r.alpha}")
        for r in analysis.verify_one_value_bound(F):
            n_one += 1
            if not r.holds:
                one.append(f"{name} x={r.x} c={r.c} p={r.prob}")
        if not analysis.verify_kraft(F).holds:
            kraft.append(name)
    return [
        _report("success probability >= 2^(-nG)", count, thm),
        _report("return probability >= 2^(-sum E log2|S|)", n_prop, prop),
        _report("Pr[c in S] <= 1 - 1/k", n_one, one),
        _report("Kraft-type inequality", count, kraft),
    ]


def suite_submodular(seed: int = 0, cases: int = 100, specs: int = 100, r_points: int = 11) -> list[LemmaReport]:
    rng = np.random.default_rng(seed)
    out = []
    or_ok = all(sm.is_submodular(sm.OR(m)) and sm.is_monotone(sm.OR(m)) for m in range(1, 6))
    and_check = sm.is_submodular(sm.AND(2))
    and_ok = not and_check and and_check.witness == ((0, 1), (1, 0))
    out.append(_report("OR monotone+submodular, AND witness", 2, [] if or_ok and and_ok else [str(and_check)]))

    fails = []
    for t in range(cases):
        m = int(rng.integers(1, 5))
        f = sm.random_submodular(m, rng, monotone=bool(t % 2))
        rep = sm.verify_gluing_lemma(f, sm.random_gluing(m, rng), P_GRID)
        if not rep.holds:
            fails.append(rep.detail)
    out.append(_report("gluing lemma", cases, fails))

    fails = []
    for _ in range(cases):
        m = int(rng.integers(1, 5))
        f = sm.random_submodular(m, rng)
        f = sm.CubeFunction(m, f.table - f.table.min())
        rep = sm.verify_concave_composition(f, math.sqrt)
        if not rep.holds:
            fails.append(rep.detail)
    out.append(_report("concave composition", cases, fails))

    fails, checks = [], 0
    for d in range(1, 5):
        for ell in range(1, d + 1):
            for k in (2, 3):
                f = sm.build_worstcase_f(d, k, ell)
                checks += 1
                if not (sm.is_monotone(f) and sm.is_submodular(f)):
                    fails.append(f"(d={d},k={k},ell={ell})")
    out.append(_report("worst-case f monotone+submodular", checks, fails))

    out.append(independence_sweep(rng, specs, r_points))
    return out


def independence_sweep(rng: np.random.Generator, specs: int, r_points: int) -> LemmaReport:
    """Random (d, k, ell, gluing) with d <= 4, k <= 3 over an r grid; identity gluings must be tight."""
    fails = []
    grid = np.linspace(0.0, 1.0, r_points)
    checks = 0
    for _ in range(specs):
        d = int(rng.integers(2, 5))
        k = int(rng.integers(2, 4))
        ell = int(rng.integers(1, d + 1))
        gluing = sm.random_gluing((d - ell) * (k - 1), rng)
        for r in grid:
            rec = sm.verify_independence_worst_case(sm.WorstCaseSpec(d, k, ell, gluing, float(r)))
            checks += 1
            if not rec.holds:
                fails.append(f"d={d},k={k},ell={ell},rep={gluing.rep},r={r}: {rec.left} > {rec.right}")
            elif gluing.is_identity() and abs(rec.left - rec.right) > 1e-12:
                fails.append(f"no-gluing equality broken at d={d},k={k},ell={ell},r={r}")
    return _report("independence is worst case", checks, fails)


SUITES: dict[str, Callable[..., list[LemmaReport]]] = {
    "bounds": suite_bounds,
    "analysis": suite_analysis,
    "submodular": suite_submodular,
}


def run_suite(name: str, seed: int = 0) -> list[LemmaReport]:
    if name == "all":
        return [r for suite in SUITES.values() for r in suite(seed=seed)]
    try:
        return SUITES[name](seed=seed)
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from all, {', '.join(SUITES)}") from None
