import math

import numpy as np
import pytest
from hypothesis import given, settings

from ppzcsp import kernels
from ppzcsp.solver import block_randomness, ppz_run
from strategies import formulas

BACKENDS = sorted(kernels.BACKENDS)


def test_backend_selected():
    assert kernels.BACKEND in kernels.BACKENDS


@pytest.mark.skipif("cython" not in kernels.BACKENDS, reason="extension not built")
def test_cython_backend_is_default_when_built():
    assert kernels.BACKEND == "cython"


def test_flatten_layout(example):
    flat = kernels.flatten(example)
    assert flat.con_len.tolist() == [2, 2]
    assert flat.occ_start.tolist() == [0, 2, 3, 4]
    # variable 1 occurs in both constraints, variable 2 in the first, variable 3 in the second
    assert [flat.lit_con[i] for i in flat.occ_lit] == [0, 1, 0, 1]
    assert [flat.lit_val[i] for i in flat.occ_lit] == [2, 3, 1, 1]


@settings(max_examples=60, deadline=None)
@given(formulas(max_n=5))
def test_batch_matches_reference_run(F):
    """The batch kernel reproduces ppz_run given the same permutation and uniforms."""
    perms, uniforms = block_randomness(11, 0, 16, F.n)
    flat = kernels.flatten(F)
    for backend in BACKENDS:
        ok, assign = kernels.ppz_batch(flat, perms, uniforms, backend=backend)
        for t in range(16):
            pi = [int(v) + 1 for v in perms[t]]

            class Fixed:
                def random(self, n, _u=uniforms[t]):
                    return _u

            ref = ppz_run(F, pi, Fixed())
            assert ok[t] == ref.success
            if ref.success:
                assert tuple(assign[t]) == ref.result


@settings(max_examples=40, deadline=None)
@given(formulas(max_n=4))
def test_branch_dfs_backends_identical(F):
    flat = kernels.flatten(F)
    perm = np.arange(F.n)[::-1]
    values = {b: kernels.branch_success(flat, perm, backend=b) for b in BACKENDS}
    assert len(set(values.values())) == 1
    assert 0.0 <= values[BACKENDS[0]] <= 1.0


def test_branch_dfs_by_hand(example):
    flat = kernels.flatten(example)
    assert math.isclose(kernels.branch_success(flat, [0, 1, 2]), 1.0)
    # (x != 1) & (x != 2) & (x != 3): never satisfiable, DFS finds no allowed value
    from ppzcsp.formula import Formula
    dead = Formula.from_lists(3, 1, [[(1, 1)], [(1, 2)], [(1, 3)]])
    assert kernels.branch_success(kernels.flatten(dead), [0]) == 0.0


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
