"""Real functions on the boolean cube: monotonicity, submodularity, gluing.

Coordinates are numbered ``1..m``. Tables are stored in lexicographic order
of the input tuple (``itertools.product`` order), so coordinate ``i`` is bit
``m - i`` of the table index.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

TOL = 1e-12
MAX_ARITY = 20
MAX_SUBMODULAR_ARITY = 12

Bits = tuple[int, ...]


class PreconditionError(ValueError):
    pass


class Check(NamedTuple):
    holds: bool
    witness: Optional[tuple[Bits, Bits]] = None

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True, eq=False)
class CubeFunction:
    m: int
    table: np.ndarray

    def __post_init__(self) -> None:
        if not 0 <= self.m <= MAX_ARITY:
            raise ValueError(f"arity must be in 0..{MAX_ARITY}, got {self.m}")
        table = np.asarray(self.table, dtype=float)
        if table.shape != (1 << self.m,):
            raise ValueError(f"table must have length 2^{self.m}")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_callable(cls, m: int, fn: Callable[[Bits], float]) -> "CubeFunction":
        return cls(m, np.array([fn(bits) for bits in itertools.product((0, 1), repeat=m)], dtype=float))

    @classmethod
    def constant(cls, m: int, value: float) -> "CubeFunction":
        return cls(m, np.full(1 << m, float(value)))

    def bits(self, index: int) -> Bits:
        return tuple((index >> (self.m - 1 - i)) & 1 for i in range(self.m))

    def index(self, bits: Sequence[int]) -> int:
        out = 0
        for b in bits:
            out = out << 1 | (1 if b else 0)
        return out

    def __call__(self, *bits: int) -> float:
        return float(self.table[self.index(bits)])

    def __add__(self, other: "CubeFunction") -> "CubeFunction":
        if other.m != self.m:
            raise ValueError("arity mismatch")
        return CubeFunction(self.m, self.table + other.table)

    def compose(self, h: Callable[[float], float]) -> "CubeFunction":
        return CubeFunction(self.m, np.array([h(float(v)) for v in self.table]))

    def coordinate_bit(self, i: int) -> int:
        if not 1 <= i <= self.m:
            raise ValueError(f"coordinate {i} out of range 1..{self.m}")
        return 1 << (self.m - i)


def OR(m: int) -> CubeFunction:
    return CubeFunction.from_callable(m, lambda b: float(any(b)))


def AND(m: int) -> CubeFunction:
    return CubeFunction.from_callable(m, lambda b: float(all(b)))


def XOR(m: int) -> CubeFunction:
    return CubeFunction.from_callable(m, lambda b: float(sum(b) % 2))


def is_monotone(f: CubeFunction, tol: float = TOL) -> Check:
    """Checks every single-bit-flip edge, which suffices by transitivity."""
    idx = np.arange(1 << f.m)
    for shift in range(f.m):
        bit = 1 << shift
        lower = idx[(idx & bit) == 0]
        bad = np.flatnonzero(f.table[lower] > f.table[lower | bit] + tol)
        if bad.size:
            lo = int(lower[bad[0]])
            return Check(False, (f.bits(lo), f.bits(lo | bit)))
    return Check(True)


def is_submodular(f: CubeFunction, tol: float = TOL) -> Check:
    """f(x) + f(y) >= f(x & y) + f(x | y) over all pairs."""
    if f.m > MAX_SUBMODULAR_ARITY:
        raise ValueError(f"exhaustive submodularity check limited to m <= {MAX_SUBMODULAR_ARITY}")
    t = f.table
    ys = np.arange(1 << f.m)
    for x in range(1 << f.m):
        y = ys[x + 1:]
        bad = np.flatnonzero(t[x] + t[y] < t[x & y] + t[x | y] - tol)
        if bad.size:
            return Check(False, (f.bits(x), f.bits(int(y[bad[0]]))))
    return Check(True)


def glue(f: CubeFunction, i: int, j: int) -> CubeFunction:
    """Replace input coordinate ``j`` by a copy of coordinate ``i`` (i < j)."""
    if not 1 <= i < j <= f.m:
        raise ValueError(f"need 1 <= i < j <= {f.m}, got i={i}, j={j}")
    bi, bj = f.coordinate_bit(i), f.coordinate_bit(j)
    idx = np.arange(1 << f.m)
    src = np.where(idx & bi, idx | bj, idx & ~bj)
    return CubeFunction(f.m, f.table[src])


@dataclass(frozen=True)
class GluingMap:
    """``rep[i - 1]`` is the representative coordinate of coordinate ``i``."""

    rep: tuple[int, ...]

    def __post_init__(self) -> None:
        for i, r in enumerate(self.rep, start=1):
            if not 1 <= r <= i:
                raise ValueError(f"rep({i}) = {r} must lie in 1..{i}")
            if self.rep[r - 1] != r:
                raise ValueError(f"rep(rep({i})) != rep({i})")

    @classmethod
    def identity(cls, m: int) -> "GluingMap":
        return cls(tuple(range(1, m + 1)))

    @classmethod
    def from_groups(cls, m: int, groups: Sequence[Sequence[int]]) -> "GluingMap":
        rep = list(range(1, m + 1))
        for group in groups:
            lo = min(group)
            for i in group:
                rep[i - 1] = lo
        return cls(tuple(rep))

    @property
    def m(self) -> int:
        return len(self.rep)

    def groups(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for i, r in enumerate(self.rep, start=1):
            out.setdefault(r, []).append(i)
        return list(out.values())

    def is_identity(self) -> bool:
        return all(r == i for i, r in enumerate(self.rep, start=1))


def random_gluing(m: int, rng: np.random.Generator, p_glue: float = 0.5) -> GluingMap:
    rep: list[int] = []
    for i in range(1, m + 1):
        if i > 1 and rng.random() < p_glue:
            rep.append(rep[int(rng.integers(i - 1))])
        else:
            rep.append(i)
    return GluingMap(tuple(rep))


def apply_gluing(f: CubeFunction, gluing: GluingMap) -> CubeFunction:
    """The glued restriction: a gluing step ``glue(rep(j), j)`` per non-representative ``j``."""
    if gluing.m != f.m:
        raise ValueError("gluing arity mismatch")
    for j, r in enumerate(gluing.rep, start=1):
        if r != j:
            f = glue(f, r, j)
    return f


def expect(f: CubeFunction, p: float, gluing: Optional[GluingMap] = None) -> float:
    """E[f] when each gluing group gets one independent Bernoulli(p) bit."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    groups = gluing.groups() if gluing is not None else [[i] for i in range(1, f.m + 1)]
    if gluing is not None and gluing.m != f.m:
        raise ValueError("gluing arity mismatch")
    masks = [sum(f.coordinate_bit(i) for i in g) for g in groups]
    terms = []
    for choice in itertools.product((0, 1), repeat=len(groups)):
        index = 0
        ones = 0
        for bit, mask in zip(choice, masks):
            if bit:
                index |= mask
                ones += 1
        weight = p**ones * (1 - p) ** (len(groups) - ones)
        if weight:
            terms.append(weight * f.table[index])
    return math.fsum(terms)


def random_submodular(m: int, rng: np.random.Generator, monotone: bool = True, terms: int = 4) -> CubeFunction:
    """A sum of weighted ORs over random coordinate subsets plus a constant.

    Non-monotone variants add a linear part with signed coefficients, which
    keeps submodularity.
    """
    table = np.full(1 << m, float(rng.normal()))
    f = CubeFunction(m, table)
    for _ in range(terms):
        if m == 0:
            break
        size = int(rng.integers(1, m + 1))
        subset = rng.choice(np.arange(1, m + 1), size=size, replace=False)
        w = float(rng.exponential())
        mask = sum(f.coordinate_bit(int(i)) for i in subset)
        table = table + w * ((np.arange(1 << m) & mask) != 0)
    if not monotone and m:
        coef = rng.normal(size=m)
        lin = np.array([sum(c * b for c, b in zip(coef, f.bits(i))) for i in range(1 << m)])
        table = table + lin
    return CubeFunction(m, table)


@dataclass
class LemmaReport:
    name: str
    holds: bool
    checks: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.holds else "FAIL"
        return f"[{status}] {self.name}: {self.checks} checks" + (f" ({self.detail})" if self.detail else "")


def verify_gluing_lemma(f: CubeFunction, gluing: GluingMap, p_grid: Sequence[float]) -> LemmaReport:
    """E[f] with independent bits >= E[f] with glued bits, for each p in the grid."""
    if not is_submodular(f):
        raise PreconditionError("gluing lemma needs a submodular function")
    for p in p_grid:
        free, glued = expect(f, p), expect(f, p, gluing)
        if free < glued - TOL:
            return LemmaReport("gluing", False, len(p_grid), f"p={p}: {free} < {glued}")
    return LemmaReport("gluing", True, len(p_grid))


def verify_concave_composition(f: CubeFunction, h: Callable[[float], float]) -> LemmaReport:
    """h o f stays monotone and submodular for monotone submodular f and concave nondecreasing h."""
    if not is_monotone(f):
        raise PreconditionError("f must be monotone")
    if not is_submodular(f):
        raise PreconditionError("f must be submodular")
    lo, hi = float(f.table.min()), float(f.table.max())
    grid = np.linspace(lo, hi, 65)
    hv = np.array([h(float(t)) for t in grid])
    if not np.all(np.isfinite(hv)):
        raise PreconditionError("h must be finite on the range of f")
    if hi > lo:
        slopes = np.diff(hv) / np.diff(grid)
        if np.any(slopes < -1e-9) or np.any(np.diff(slopes) > 1e-7 * max(1.0, float(np.abs(slopes).max()))):
            raise PreconditionError("h must be nondecreasing and concave on the range of f")
    g = f.compose(h)
    mono, sub = is_monotone(g), is_submodular(g)
    detail = ""
    if not mono:
        detail = f"not monotone at {mono.witness}"
    elif not sub:
        detail = f"not submodular at {sub.witness}"
    return LemmaReport("concave-composition", bool(mono and sub), 2, detail)


def worstcase_coordinates(d: int, k: int, ell: int) -> list[tuple[int, int]]:
    """Coordinate order (c, j) for c = ell+1..d, j = 1..k-1."""
    return [(c, j) for c in range(ell + 1, d + 1) for j in range(1, k)]


def build_worstcase_f(d: int, k: int, ell: int) -> CubeFunction:
    """log2(ell + sum_c OR(block c)); block c holds the k-1 'comes after x' bits of value c."""
    if not 1 <= ell <= d or k < 1:
        raise ValueError(f"need 1 <= ell <= d and k >= 1, got d={d}, k={k}, ell={ell}")
    m = (d - ell) * (k - 1)
    if m > MAX_ARITY:
        raise ValueError(f"arity {m} exceeds {MAX_ARITY}")
    w = k - 1

    def fn(bits: Bits) -> float:
        ors = sum(any(bits[b * w:(b + 1) * w]) for b in range(d - ell))
        return math.log2(ell + ors)

    return CubeFunction.from_callable(m, fn)


@dataclass(frozen=True)
class WorstCaseSpec:
    d: int
    k: int
    ell: int
    gluing: GluingMap
    r: float

    def __post_init__(self) -> None:
        if not 1 <= self.ell <= self.d or self.k < 1:
            raise ValueError("need 1 <= ell <= d and k >= 1")
        if self.gluing.m != (self.d - self.ell) * (self.k - 1):
            raise ValueError("gluing must cover (d - ell)(k - 1) coordinates")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("r must lie in [0, 1]")


def independent_side(d: int, k: int, ell: int, r: float) -> float:
    """E[log2(ell + B)] with B ~ Binomial(d - ell, 1 - r^(k-1))."""
    q = 1 - r ** (k - 1)
    n = d - ell
    return math.fsum(
        math.log2(ell + b) * math.comb(n, b) * q**b * (1 - q) ** (n - b) for b in range(n + 1)
    )


@dataclass
class WorstCaseRecord:
    spec: WorstCaseSpec
    left: float
    right: float

    @property
    def holds(self) -> bool:
        return self.left <= self.right + TOL


def verify_independence_worst_case(spec: WorstCaseSpec) -> WorstCaseRecord:
    """Glued (shared side variables) expectation vs the independent one, at π(x) = r.

    Each glued group is one side variable, which comes after ``x`` with
    probability ``1 - r``.
    """
    f = build_worstcase_f(spec.d, spec.k, spec.ell)
    left = expect(f, 1 - spec.r, spec.gluing)
    right = independent_side(spec.d, spec.k, spec.ell, spec.r)
    return WorstCaseRecord(spec, left, right)
