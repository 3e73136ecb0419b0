from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sbo.exact import MultiPoly
from sbo.forms import PolyForm, basis

settings.register_profile(
    "sbo", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("sbo")

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def polys(draw, nvars, max_degree=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.lists(st.integers(0, max_degree), min_size=nvars, max_size=nvars)))
        if sum(exp) <= max_degree:
            terms[exp] = draw(rationals)
    return MultiPoly(nvars, terms)


@st.composite
def forms(draw, dim=None, deg=None, max_degree=3):
    m = draw(st.integers(2, 4)) if dim is None else dim
    i = draw(st.integers(0, m)) if deg is None else deg
    comps = {}
    for I in draw(st.lists(st.sampled_from(basis(m, i)), max_size=3, unique=True)):
        comps[I] = draw(polys(m, max_degree))
    return PolyForm(m, i, comps)


def frac(s):
    return Fraction(s)
