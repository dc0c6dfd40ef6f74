"""Hypothesis builders for small random differential polynomials and operators."""
from fractions import Fraction

from hypothesis import strategies as st

from classical_w.diffpoly import DiffPoly, DVar
from classical_w.opalg import OpSeries

GL2_GENS = ("E[1,1]", "E[1,2]", "E[2,1]", "E[2,2]")
GL2_LOWER = ("E[1,1]", "E[2,1]", "E[2,2]")

coefficients = st.builds(Fraction, st.integers(-3, 3), st.integers(1, 3))


@st.composite
def diff_polys(draw, gens=GL2_GENS, max_terms=3, max_degree=2, max_der=2):
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        factors = {}
        for _ in range(draw(st.integers(0, max_degree))):
            v = DVar(draw(st.sampled_from(gens)), draw(st.integers(0, max_der)))
            factors[v] = factors.get(v, 0) + 1
        terms.append((draw(coefficients), factors))
    return DiffPoly.from_terms(terms)


@st.composite
def diff_ops(draw, gens=GL2_LOWER, max_order=2):
    coeffs = {k: draw(diff_polys(gens=gens, max_terms=2)) for k in range(draw(st.integers(0, max_order)) + 1)}
    return OpSeries(coeffs)
