"""Hypothesis strategies for fields, polynomials, rational functions and forms."""

from hypothesis import strategies as st

from charp.differentials import DifferentialForm
from charp.field import make_field
from charp.poly import Polynomial, RationalFunction

FIELD_PARAMS = [(3, 1), (5, 1), (7, 1), (11, 1), (3, 2), (5, 2), (7, 2)]

fields = st.sampled_from(FIELD_PARAMS).map(lambda pk: make_field(*pk))


@st.composite
def elements(draw, field):
    return field.from_code(draw(st.integers(0, field.order - 1)))


@st.composite
def polynomials(draw, field, max_degree=4, nonzero=False):
    n = draw(st.integers(0, max_degree))
    coeffs = [draw(elements(field)) for _ in range(n + 1)]
    f = Polynomial(field, coeffs)
    if nonzero and f.is_zero():
        f = Polynomial(field, [1])
    return f


@st.composite
def rational_functions(draw, field, max_degree=3, nonzero=False):
    num = draw(polynomials(field, max_degree, nonzero=nonzero))
    den = draw(polynomials(field, max_degree, nonzero=True))
    return RationalFunction(num, den)


@st.composite
def forms(draw, field=None, max_degree=3):
    field = field or draw(fields)
    return DifferentialForm(draw(rational_functions(field, max_degree, nonzero=True)))


@st.composite
def field_and(draw, builder, **kw):
    field = draw(fields)
    return field, draw(builder(field, **kw))
