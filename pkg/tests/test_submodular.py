import itertools
import math

import numpy as np
import pytest
from scipy.integrate import quad

from ppzcsp import bounds
from ppzcsp.submodular import (
    AND,
    OR,
    XOR,
    CubeFunction,
    GluingMap,
    PreconditionError,
    WorstCaseSpec,
    apply_gluing,
    build_worstcase_f,
    expect,
    glue,
    independent_side,
    is_monotone,
    is_submodular,
    random_gluing,
    random_submodular,
    verify_concave_composition,
    verify_gluing_lemma,
    verify_independence_worst_case,
)

P_GRID = np.linspace(0, 1, 11)


def brute_expect(f, p, gluing):
    """Oracle: enumerate all 2^m inputs, zero weight unless glued bits agree."""
    total = 0.0
    groups = gluing.groups()
    for bits in itertools.product((0, 1), repeat=f.m):
        if any(len({bits[i - 1] for i in g}) > 1 for g in groups):
            continue
        ones = sum(bits[g[0] - 1] for g in groups)
        total += p**ones * (1 - p) ** (len(groups) - ones) * f(*bits)
    return total


def test_layout():
    f = CubeFunction.from_callable(3, lambda b: 4 * b[0] + 2 * b[1] + b[2])
    assert list(f.table) == list(range(8))
    assert f(1, 0, 1) == 5
    assert f.coordinate_bit(1) == 4
    with pytest.raises(ValueError):
        f.coordinate_bit(4)
    with pytest.raises(ValueError):
        CubeFunction(2, np.zeros(3))


def test_monotone_examples():
    assert is_monotone(OR(2))
    check = is_monotone(XOR(2))
    assert not check and check.witness == ((1, 0), (1, 1))
    assert XOR(2)(*check.witness[0]) > XOR(2)(*check.witness[1])
    assert is_monotone(CubeFunction.constant(3, -2.5))


def test_submodular_examples():
    for m in range(1, 7):
        assert is_submodular(OR(m))
    check = is_submodular(AND(2))
    assert not check and check.witness == ((0, 1), (1, 0))
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.normal(size=5)
        assert is_submodular(CubeFunction.from_callable(5, lambda b: float(np.dot(a, b))))
    with pytest.raises(ValueError):
        is_submodular(CubeFunction.constant(13, 0))


def test_glue_examples():
    assert np.all(glue(XOR(2), 1, 2).table == 0)
    proj = glue(OR(2), 1, 2)
    for a, b in itertools.product((0, 1), repeat=2):
        assert proj(a, b) == a
    for i, j in [(2, 2), (2, 1), (0, 1), (1, 3)]:
        with pytest.raises(ValueError):
            glue(OR(2), i, j)


def test_glue_preserves_submodularity():
    rng = np.random.default_rng(1)
    for _ in range(500):
        m = int(rng.integers(2, 5))
        f = random_submodular(m, rng, monotone=bool(rng.integers(2)))
        assert is_submodular(f)
        i, j = sorted(rng.choice(np.arange(1, m + 1), size=2, replace=False))
        assert is_submodular(glue(f, int(i), int(j)))


def test_sum_closure():
    rng = np.random.default_rng(2)
    for _ in range(100):
        f, g = random_submodular(4, rng, False), random_submodular(4, rng, False)
        assert is_submodular(f + g)


def test_gluing_map():
    g = GluingMap.from_groups(4, [[1, 3], [2, 4]])
    assert g.rep == (1, 2, 1, 2)
    assert g.groups() == [[1, 3], [2, 4]]
    assert GluingMap.identity(3).is_identity()
    with pytest.raises(ValueError):
        GluingMap((1, 3, 3))
    with pytest.raises(ValueError):
        GluingMap((1, 1, 2))
    rng = np.random.default_rng(3)
    for _ in range(50):
        GluingMap(random_gluing(6, rng).rep)


def test_expect_examples():
    assert expect(OR(2), 0.5) == pytest.approx(0.75)
    assert expect(OR(2), 0.5, GluingMap((1, 1))) == pytest.approx(0.5)
    for p in P_GRID:
        assert expect(CubeFunction.constant(3, 2.5), p) == pytest.approx(2.5)
    with pytest.raises(ValueError):
        expect(OR(2), 1.5)


def test_expect_matches_enumeration():
    rng = np.random.default_rng(4)
    for _ in range(100):
        m = int(rng.integers(1, 6))
        f = CubeFunction(m, rng.normal(size=1 << m))
        gl = random_gluing(m, rng)
        p = float(rng.random())
        assert expect(f, p, gl) == pytest.approx(brute_expect(f, p, gl), abs=1e-12)
        # glued expectation is the plain expectation of the glued function
        assert expect(f, p, gl) == pytest.approx(expect(apply_gluing(f, gl), p, gl), abs=1e-12)


def test_gluing_lemma_or3():
    gl = GluingMap.from_groups(3, [[1, 3]])
    assert verify_gluing_lemma(OR(3), gl, [0, 0.25, 0.5, 0.75, 1]).holds
    for p in (0.0, 1.0):
        assert expect(OR(3), p) == expect(OR(3), p, gl)


def test_gluing_lemma_random():
    rng = np.random.default_rng(5)
    for _ in range(500):
        m = int(rng.integers(1, 5))
        f = random_submodular(m, rng)
        assert verify_gluing_lemma(f, random_gluing(m, rng), P_GRID).holds


def test_gluing_needs_submodularity():
    gl = GluingMap((1, 1))
    assert expect(AND(2), 0.5) == pytest.approx(0.25)
    assert expect(AND(2), 0.5, gl) == pytest.approx(0.5)
    with pytest.raises(PreconditionError):
        verify_gluing_lemma(AND(2), gl, [0.5])


def test_concave_composition():
    f = CubeFunction.from_callable(3, lambda b: 1 + sum(b))
    assert verify_concave_composition(f, math.log2).holds
    assert verify_concave_composition(OR(3), lambda t: t).holds
    rng = np.random.default_rng(6)
    for _ in range(200):
        m = int(rng.integers(1, 5))
        g = random_submodular(m, rng)
        shifted = CubeFunction(m, g.table - g.table.min())
        assert verify_concave_composition(shifted, math.sqrt).holds


def test_concave_composition_preconditions():
    with pytest.raises(PreconditionError):
        verify_concave_composition(XOR(2), math.sqrt)
    with pytest.raises(PreconditionError):
        verify_concave_composition(AND(2), math.sqrt)
    f = CubeFunction.from_callable(2, lambda b: sum(b))
    with pytest.raises(PreconditionError):
        verify_concave_composition(f, lambda t: t * t)
    with pytest.raises(PreconditionError):
        verify_concave_composition(f, lambda t: -t)


def test_worstcase_f_examples():
    f = build_worstcase_f(2, 2, 1)
    assert f.m == 1 and f(0) == 0 and f(1) == 1
    f = build_worstcase_f(3, 3, 1)
    assert f.m == 4 and f(1, 1, 1, 1) == pytest.approx(math.log2(3))
    assert f(1, 0, 0, 0) == 1 and f(0, 0, 0, 0) == 0
    g = build_worstcase_f(4, 3, 2)
    assert is_submodular(g) and is_monotone(g)
    with pytest.raises(ValueError):
        build_worstcase_f(3, 3, 0)


def test_independence_no_gluing_is_equality():
    for d, k, ell in [(2, 2, 1), (3, 3, 1), (4, 3, 2), (3, 4, 2), (5, 2, 1)]:
        m = (d - ell) * (k - 1)
        for r in P_GRID:
            rec = verify_independence_worst_case(WorstCaseSpec(d, k, ell, GluingMap.identity(m), float(r)))
            assert rec.left == pytest.approx(rec.right, abs=1e-12)


def test_independence_glued_grid():
    # glue the first side bit of value 2 with the first side bit of value 3
    gl = GluingMap.from_groups(4, [[1, 3]])
    for r in np.linspace(0, 1, 101):
        assert verify_independence_worst_case(WorstCaseSpec(3, 3, 1, gl, float(r))).holds


def test_independence_r_zero():
    for d, k, ell in [(3, 3, 1), (4, 2, 2), (5, 3, 3)]:
        m = (d - ell) * (k - 1)
        rec = verify_independence_worst_case(WorstCaseSpec(d, k, ell, random_gluing(m, np.random.default_rng(d)), 0.0))
        assert rec.left == pytest.approx(math.log2(d))
        assert rec.right == pytest.approx(math.log2(d))


def test_independence_random():
    rng = np.random.default_rng(7)
    for _ in range(200):
        d, k = int(rng.integers(2, 5)), int(rng.integers(2, 4))
        ell = int(rng.integers(1, d + 1))
        m = (d - ell) * (k - 1)
        spec = WorstCaseSpec(d, k, ell, random_gluing(m, rng), float(rng.random()))
        assert verify_independence_worst_case(spec).holds


def test_worstcase_spec_validation():
    with pytest.raises(ValueError):
        WorstCaseSpec(3, 3, 1, GluingMap.identity(3), 0.5)
    with pytest.raises(ValueError):
        WorstCaseSpec(3, 3, 1, GluingMap.identity(4), 1.5)


def test_independent_side_integrates_to_G():
    """With ell = 1 the independent side is g(r), whose integral is G."""
    for d, k in [(2, 3), (3, 3), (5, 4)]:
        val, _ = quad(lambda r: independent_side(d, k, 1, r), 0, 1, epsabs=1e-12)
        assert val == pytest.approx(bounds.G(d, k), abs=1e-9)
        for r in (0.1, 0.5, 0.9):
            assert independent_side(d, k, 1, r) == pytest.approx(bounds.g_of_r(d, k, r), abs=1e-14)
