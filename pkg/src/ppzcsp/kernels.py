"""Hot loops behind a backend switch.

The compiled ``_ckernels`` extension is used when importable; otherwise the
pure-Python ``_pykernels`` module. Set ``PPZCSP_PURE_PYTHON=1`` to force the
fallback. Both backends produce bit-identical results.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from ppzcsp import _pykernels
from ppzcsp.formula import Formula

if os.environ.get("PPZCSP_PURE_PYTHON"):
    _ckernels = None
else:
    try:
        from ppzcsp import _ckernels
    except ImportError:  # extension not built
        _ckernels = None

BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    BACKENDS["cython"] = _ckernels
BACKEND = "cython" if _ckernels is not None else "python"


def get_backend(name: str | None = None):
    name = name or BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


class FlatFormula(NamedTuple):
    d: int
    n: int
    lit_con: np.ndarray
    lit_val: np.ndarray
    con_len: np.ndarray
    occ_start: np.ndarray
    occ_lit: np.ndarray

    def args(self) -> tuple:
        return (self.d, self.n, self.lit_con, self.lit_val, self.con_len, self.occ_start, self.occ_lit)


def flatten(F: Formula) -> FlatFormula:
    """Pack a normalized copy of ``F`` into int64 arrays with 0-based variables."""
    F = F.normalize()
    lit_con, lit_val, lit_var, con_len = [], [], [], []
    for ci, con in enumerate(F.constraints):
        con_len.append(len(con.literals))
        for lit in con.literals:
            lit_con.append(ci)
            lit_val.append(lit.value)
            lit_var.append(lit.var - 1)
    order = sorted(range(len(lit_var)), key=lambda i: (lit_var[i], i))
    counts = np.bincount(np.asarray(lit_var, dtype=np.int64), minlength=F.n) if lit_var else np.zeros(F.n, np.int64)
    occ_start = np.zeros(F.n + 1, dtype=np.int64)
    np.cumsum(counts, out=occ_start[1:])
    as_i64 = lambda xs: np.ascontiguousarray(xs, dtype=np.int64)  # noqa: E731
    return FlatFormula(
        F.d, F.n, as_i64(lit_con), as_i64(lit_val), as_i64(con_len), occ_start, as_i64(order)
    )


def ppz_batch(flat: FlatFormula, perms: np.ndarray, uniforms: np.ndarray, backend: str | None = None):
    """Run one ppz trial per row of ``perms`` (0-based variable order).

    ``uniforms[t, i]`` in [0, 1) picks the value at step ``i``: the
    ``floor(u * |S|)``-th allowed value in increasing order. Returns
    ``(success, assignments)``; assignment rows are valid where successful.
    """
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    uniforms = np.ascontiguousarray(uniforms, dtype=np.float64)
    B = perms.shape[0]
    success = np.zeros(B, dtype=np.uint8)
    assign = np.zeros((B, flat.n), dtype=np.int64)
    get_backend(backend).ppz_batch(*flat.args(), perms, uniforms, success, assign)
    return success.astype(bool), assign


def branch_success(flat: FlatFormula, perm, backend: str | None = None) -> float:
    """Exact success probability of ppz for one fixed permutation, by full branch DFS."""
    perm = np.ascontiguousarray(perm, dtype=np.int64)
    return get_backend(backend).branch_success(*flat.args(), perm)
