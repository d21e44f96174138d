from hypothesis import strategies as st

from ppzcsp.formula import Constraint, Formula, Literal


@st.composite
def formulas(draw, max_d=3, max_n=5, max_m=6, max_k=3, min_n=0):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(min_n, max_n))
    if n == 0:
        return Formula(d, 0, ())
    lit = st.builds(Literal, st.integers(1, n), st.integers(1, d))
    cons = draw(st.lists(st.lists(lit, min_size=1, max_size=max_k), max_size=max_m))
    return Formula(d, n, tuple(Constraint(tuple(c)) for c in cons))


@st.composite
def formula_and_assignment(draw, **kw):
    F = draw(formulas(**kw))
    a = tuple(draw(st.lists(st.integers(1, F.d), min_size=F.n, max_size=F.n)))
    return F, a
