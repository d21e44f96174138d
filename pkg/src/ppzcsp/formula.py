"""(d,k)-CSP formulas over disequality literals.

A formula has ``n`` variables numbered ``1..n`` taking values in ``1..d``.
Each constraint is a disjunction of literals ``x != c``. Assignments are
plain tuples of length ``n`` (``a[x - 1]`` is the value of variable ``x``);
partial assignments are dicts ``{var: value}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

# hard cap on the number of assignments any brute-force routine will visit
BRUTE_FORCE_CAP = 10**7

Assignment = tuple[int, ...]


class FormulaParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class SizeError(ValueError):
    """Instance too large for an exhaustive routine."""


class Literal(NamedTuple):
    var: int
    value: int

    def __str__(self) -> str:
        return f"x{self.var} != {self.value}"


@dataclass(frozen=True)
class Constraint:
    literals: tuple[Literal, ...] = ()

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.literals)

    def normalized(self) -> "Constraint":
        return Constraint(tuple(dict.fromkeys(self.literals)))

    def is_satisfied(self, a: Sequence[int]) -> bool:
        return any(a[lit.var - 1] != lit.value for lit in self.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "()"
        return "(" + " v ".join(map(str, self.literals)) + ")"


@dataclass(frozen=True)
class Formula:
    d: int
    n: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 1:
            raise ValueError(f"domain size must be >= 1, got {self.d}")
        if self.n < 0:
            raise ValueError(f"variable count must be >= 0, got {self.n}")
        for con in self.constraints:
            for lit in con.literals:
                if not 1 <= lit.var <= self.n:
                    raise ValueError(f"variable {lit.var} out of range 1..{self.n}")
                if not 1 <= lit.value <= self.d:
                    raise ValueError(f"value {lit.value} out of range 1..{self.d}")

    @classmethod
    def from_lists(cls, d: int, n: int, constraints: Iterable[Iterable[tuple[int, int]]]) -> "Formula":
        """Build from nested ``(var, value)`` pairs."""
        return cls(d, n, tuple(Constraint(tuple(Literal(v, c) for v, c in con)) for con in constraints))

    @property
    def k(self) -> int:
        """Maximum constraint width after removing duplicate literals."""
        return max((len(c.normalized()) for c in self.constraints), default=0)

    @property
    def m(self) -> int:
        return len(self.constraints)

    def normalize(self) -> "Formula":
        return Formula(self.d, self.n, tuple(c.normalized() for c in self.constraints))

    def has_empty_constraint(self) -> bool:
        return any(not c.literals for c in self.constraints)

    def __str__(self) -> str:
        if not self.constraints:
            return "T"
        return " & ".join(map(str, self.constraints))


def parse(text: str) -> Formula:
    """Parse the line-oriented ``p csp <d> <n> <m>`` instance format."""
    header = None
    constraints: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        tokens = line.split()
        if tokens[0] == "p":
            if header is not None:
                raise FormulaParseError(lineno, "duplicate header")
            if len(tokens) != 5 or tokens[1] != "csp":
                raise FormulaParseError(lineno, f"malformed header {line!r}")
            try:
                d, n, m = (int(t) for t in tokens[2:])
            except ValueError:
                raise FormulaParseError(lineno, f"non-integer header field in {line!r}") from None
            if d < 1 or n < 0 or m < 0:
                raise FormulaParseError(lineno, f"invalid header values in {line!r}")
            header = (d, n, m)
            continue
        if header is None:
            raise FormulaParseError(lineno, "constraint before header")
        d, n, _ = header
        if tokens[-1] != "0":
            raise FormulaParseError(lineno, "constraint line must end with 0")
        lits = []
        for tok in tokens[:-1]:
            var_s, sep, val_s = tok.partition("!=")
            if not sep:
                raise FormulaParseError(lineno, f"bad literal token {tok!r}")
            try:
                var, val = int(var_s), int(val_s)
            except ValueError:
                raise FormulaParseError(lineno, f"non-integer token {tok!r}") from None
            if not 1 <= var <= n:
                raise FormulaParseError(lineno, f"variable {var} out of range for n={n}")
            if not 1 <= val <= d:
                raise FormulaParseError(lineno, f"value {val} out of range for d={d}")
            lits.append(Literal(var, val))
        constraints.append(Constraint(tuple(lits)))
    if header is None:
        raise FormulaParseError(0, "missing 'p csp' header")
    d, n, m = header
    if len(constraints) != m:
        raise FormulaParseError(0, f"header declares {m} constraints, found {len(constraints)}")
    return Formula(d, n, tuple(constraints))


def serialize(F: Formula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p csp {F.d} {F.n} {F.m}")
    for con in F.constraints:
        lines.append(" ".join([f"{lit.var}!={lit.value}" for lit in con.literals] + ["0"]))
    return "\n".join(lines) + "\n"


def _check_var_value(F: Formula, x: int, c: int) -> None:
    if not 1 <= x <= F.n:
        raise ValueError(f"variable {x} out of range 1..{F.n}")
    if not 1 <= c <= F.d:
        raise ValueError(f"value {c} out of range 1..{F.d}")


def substitute(F: Formula, x: int, c: int) -> Formula:
    """Return ``F[x -> c]``: drop satisfied constraints, strip ``x != c``."""
    _check_var_value(F, x, c)
    out = []
    for con in F.constraints:
        if any(lit.var == x and lit.value != c for lit in con.literals):
            continue
        out.append(Constraint(tuple(lit for lit in con.literals if lit.var != x)))
    return Formula(F.d, F.n, tuple(out))


def substitute_partial(F: Formula, beta: Mapping[int, int]) -> Formula:
    for x, c in beta.items():
        _check_var_value(F, x, c)
    out = []
    for con in F.constraints:
        if any(lit.var in beta and beta[lit.var] != lit.value for lit in con.literals):
            continue
        out.append(Constraint(tuple(lit for lit in con.literals if lit.var not in beta)))
    return Formula(F.d, F.n, tuple(out))


def is_satisfied(F: Formula, a: Sequence[int]) -> bool:
    if len(a) != F.n:
        raise ValueError(f"assignment has length {len(a)}, expected {F.n}")
    return all(con.is_satisfied(a) for con in F.constraints)


def _check_cap(F: Formula, cap: int = BRUTE_FORCE_CAP) -> None:
    if F.d**F.n > cap:
        raise SizeError(f"{F.d}^{F.n} assignments exceeds the cap of {cap}")


def all_assignments(F: Formula) -> Iterator[Assignment]:
    return itertools.product(range(1, F.d + 1), repeat=F.n)


def sat_set(F: Formula, cap: int = BRUTE_FORCE_CAP) -> list[Assignment]:
    """All satisfying assignments in lexicographic order, by exhaustive search."""
    _check_cap(F, cap)
    if F.has_empty_constraint():
        return []
    return [a for a in all_assignments(F) if is_satisfied(F, a)]


def unit_forbidden(F: Formula, x: int) -> set[int]:
    """Values ``c`` such that ``F`` contains the unit constraint ``(x != c)``."""
    if not 1 <= x <= F.n:
        raise ValueError(f"variable {x} out of range 1..{F.n}")
    out = set()
    for con in F.constraints:
        distinct = set(con.literals)
        if len(distinct) == 1:
            (lit,) = distinct
            if lit.var == x:
                out.add(lit.value)
    return out


def looseness(F: Formula, a: Sequence[int], x: int) -> int:
    """Number of values for ``x`` that keep ``a`` satisfying."""
    if not is_satisfied(F, a):
        raise ValueError("looseness is only defined for satisfying assignments")
    if not 1 <= x <= F.n:
        raise ValueError(f"variable {x} out of range 1..{F.n}")
    count = 0
    switched = list(a)
    for c in range(1, F.d + 1):
        switched[x - 1] = c
        count += is_satisfied(F, switched)
    return count


def critical_constraint(F: Formula, a: Sequence[int], x: int, c: int) -> Optional[Constraint]:
    """First constraint (file order) satisfied by ``a`` but violated by ``a[x -> c]``.

    Such a constraint necessarily contains ``(x != c)`` and all its other
    literals are falsified by ``a``. Returns None when ``a[x -> c]`` satisfies F.
    """
    if not is_satisfied(F, a):
        raise ValueError("critical constraints are defined for satisfying assignments")
    _check_var_value(F, x, c)
    switched = list(a)
    switched[x - 1] = c
    for con in F.constraints:
        if not con.is_satisfied(switched):
            return con
    return None
