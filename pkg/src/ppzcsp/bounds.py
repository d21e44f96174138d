"""Success-probability exponents for ppz on (d,k)-CSP, plus comparison bounds.

All exponents are base-2 and per variable: a bound ``2^(-n * e)``.
``g(d,k,r)`` is ``E[log2(1 + B)]`` with ``B ~ Binomial(d-1, 1 - r^(k-1))``
and ``G(d,k)`` is its integral over ``r`` in [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from scipy import integrate

DEFAULT_TOL = 1e-10

# ppz column as printed in the comparison table of the source analysis
PUBLISHED_PPZ_BASES = {(2, 3): 1.588, (3, 3): 2.077, (5, 4): 3.672, (6, 4): 4.33}
PUBLISHED_SCHOENING_BASES = {(2, 3): 1.334, (3, 3): 2.0, (5, 4): 3.75, (6, 4): 4.5}


@dataclass(frozen=True)
class BoundValue:
    exponent: float
    method: str
    error: float = 0.0

    @property
    def base(self) -> float:
        return 2.0**self.exponent


def _check_dk(d: int, k: int) -> None:
    if d < 1 or k < 1:
        raise ValueError(f"need d, k >= 1, got d={d}, k={k}")


def g_of_r(d: int, k: int, r: float) -> float:
    _check_dk(d, k)
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    q = r ** (k - 1)  # probability that one value stays forbidden
    return math.fsum(
        math.log2(1 + j) * math.comb(d - 1, j) * (1 - q) ** j * q ** (d - 1 - j) for j in range(1, d)
    )


def G_quadrature(d: int, k: int, tol: float = DEFAULT_TOL) -> BoundValue:
    """Integrate ``g_of_r`` over [0, 1] with adaptive Gauss-Kronrod (QUADPACK)."""
    _check_dk(d, k)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if d == 1 or k == 1:
        return BoundValue(0.0, "quadrature")
    value, err = integrate.quad(lambda r: g_of_r(d, k, r), 0.0, 1.0, epsabs=tol, epsrel=0.0, limit=200)
    return BoundValue(value, "quadrature", err)


def log_beta(a: float, b: float) -> float:
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def G_closed_form(d: int, k: int) -> BoundValue:
    """``G`` via ``u = r^(k-1)``: each term becomes a Beta integral.

    int_0^1 (1-u)^j u^(d-1-j) (1/(k-1)) u^(1/(k-1) - 1) du
        = Beta(j + 1, d - 1 - j + 1/(k-1)) / (k-1)
    """
    _check_dk(d, k)
    if d == 1 or k == 1:
        return BoundValue(0.0, "beta-closed-form")
    s = 1.0 / (k - 1)
    terms = (
        math.log2(1 + j) * math.exp(math.log(math.comb(d - 1, j)) + log_beta(j + 1, d - 1 - j + s)) * s
        for j in range(1, d)
    )
    return BoundValue(math.fsum(terms), "beta-closed-form")


def G_rational_coefficients(d: int, k: int) -> list[Fraction]:
    """Exact ``w_j`` with ``G(d,k) = sum_j w_j log2(1 + j)``.

    Expands ``(1 - r^(k-1))^j`` binomially, so only valid for integer k.
    """
    _check_dk(d, k)
    out = []
    for j in range(d):
        if k == 1:
            out.append(Fraction(1 if j == 0 else 0))
            continue
        e = (k - 1) * (d - 1 - j)
        integral = sum(
            (Fraction((-1) ** i * math.comb(j, i), e + (k - 1) * i + 1) for i in range(j + 1)), Fraction(0)
        )
        out.append(math.comb(d - 1, j) * integral)
    return out


def G(d: int, k: int) -> float:
    return G_closed_form(d, k).exponent


def suboptimal_exponent(d: int, k: int) -> float:
    """Exponent from bounding E log2|S| by log2 E|S| in the unique case."""
    _check_dk(d, k)
    return math.log2((d * (k - 1) + 1) / k)


def schoening_base(d: int, k: int) -> Fraction:
    _check_dk(d, k)
    if d * (k - 1) == 0:
        raise ValueError(f"Schoening bound undefined for d={d}, k={k}")
    return Fraction(d * (k - 1), k)


def schoening_exponent(d: int, k: int) -> float:
    return math.log2(schoening_base(d, k))


def sig(x: Optional[float], digits: int = 4) -> str:
    """Round to ``digits`` significant digits, trailing zeros dropped."""
    if x is None:
        return "-"
    return f"{x:.{digits}g}"


@dataclass(frozen=True)
class TableRow:
    d: int
    k: int
    schoening: Optional[Fraction]
    ppz_exponent: float
    suboptimal_exponent: float

    @property
    def ppz(self) -> float:
        return 2.0**self.ppz_exponent

    @property
    def suboptimal(self) -> float:
        return 2.0**self.suboptimal_exponent

    @property
    def published_ppz(self) -> Optional[float]:
        return PUBLISHED_PPZ_BASES.get((self.d, self.k))

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "k": self.k,
            "schoening_base": float(self.schoening) if self.schoening is not None else None,
            "schoening": sig(float(self.schoening)) if self.schoening is not None else None,
            "G": self.ppz_exponent,
            "ppz_base": self.ppz,
            "ppz": sig(self.ppz),
            "suboptimal_base": self.suboptimal,
            "suboptimal": sig(self.suboptimal),
            "published_ppz": self.published_ppz,
        }


def comparison_table(pairs: Iterable[tuple[int, int]]) -> list[TableRow]:
    rows = []
    for d, k in pairs:
        try:
            sch: Optional[Fraction] = schoening_base(d, k)
        except ValueError:
            sch = None
        rows.append(TableRow(d, k, sch, G(d, k), suboptimal_exponent(d, k)))
    return rows


def format_table(rows: Iterable[TableRow]) -> str:
    header = ("(d,k)", "Schoening", "ppz 2^G", "suboptimal", "published ppz")
    lines = [header]
    for row in rows:
        lines.append((
            f"({row.d},{row.k})",
            sig(float(row.schoening)) + "^-n" if row.schoening is not None else "undefined",
            sig(row.ppz) + "^-n",
            sig(row.suboptimal) + "^-n",
            f"{row.published_ppz}^-n" if row.published_ppz is not None else "-",
        ))
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in lines)
