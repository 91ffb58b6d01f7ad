from hypothesis import settings, strategies as st

from ncfield.opalg import GENERATORS, GaussianRational, ParamExpr, canonicalize, param

settings.register_profile("ci", max_examples=60, deadline=None)
settings.load_profile("ci")

SYMS = ("hbar", "l0", "m", "kappa")

small_int = st.integers(-3, 3)
gaussian = st.tuples(small_int, small_int).filter(lambda t: t != (0, 0)).map(lambda t: GaussianRational(*t))
words = st.lists(st.sampled_from(GENERATORS), max_size=4)


@st.composite
def param_exprs(draw, max_terms=2):
    out = ParamExpr()
    for _ in range(draw(st.integers(1, max_terms))):
        term = ParamExpr.const(draw(gaussian))
        for s in draw(st.lists(st.sampled_from(SYMS), max_size=2)):
            term = term * param(s, draw(st.integers(-1, 2)))
        out = out + term
    return out


@st.composite
def op_exprs(draw, max_terms=3, symbolic=False):
    raw = []
    for _ in range(draw(st.integers(0, max_terms))):
        c = draw(param_exprs(1)) if symbolic else draw(gaussian)
        raw.append((c, draw(words)))
    return canonicalize(raw)
