from fractions import Fraction

import pytest
from hypothesis import given, settings

from classical_w.diffpoly import DiffPoly
from classical_w.lie_core import build_spec
from classical_w.opalg import (
    OpMatrix,
    OpSeries,
    PseudoInputError,
    ShapeError,
    chain_expansion,
    coldet,
    constant_term,
    from_right_coefficients,
    gbinom,
    lambda_shift,
    leading_minors,
    minor_expansion,
    op_mul,
    right_coefficients,
    trailing_minors,
)
from classical_w.wgen import build_matrix, determinant

from oracles import column_determinant, row_determinant
from strategies import diff_ops

V = DiffPoly.var
D = OpSeries.d_power(1)


def first(gen: str) -> OpSeries:
    return OpSeries.first_order(V(gen))


def test_gbinom():
    assert gbinom(3, 2) == 3
    assert gbinom(2, 3) == 0
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 2) == 3


def test_d_times_function():
    got = op_mul(D, OpSeries.from_poly(V("E[2,2]")))
    assert got == OpSeries({1: V("E[2,2]"), 0: V("E[2,2]", 1)})


def test_first_order_product():
    got = op_mul(first("E[1,1]"), first("E[2,2]"))
    expected = OpSeries({
        2: DiffPoly.one(),
        1: V("E[1,1]") + V("E[2,2]"),
        0: V("E[1,1]") * V("E[2,2]") + V("E[2,2]", 1),
    })
    assert got == expected
    assert not got.truncated


def test_inverse_d_series():
    got = op_mul(OpSeries.d_power(-1, depth=4), OpSeries.from_poly(V("F[2,1]"), 4))
    expected = OpSeries({-1 - s: V("F[2,1]", s).scale((-1) ** s) for s in range(4)}, depth=4)
    assert got == expected
    assert got.truncated


def test_inverse_d_on_constant_is_exact():
    got = op_mul(OpSeries.d_power(-1), OpSeries.scalar(5))
    assert got == OpSeries.d_power(-1, 5)
    assert not got.truncated


def test_d_and_inverse_cancel():
    assert op_mul(D, OpSeries.d_power(-1)) == OpSeries.scalar(1)


def test_constant_term():
    assert constant_term(D) == 0
    assert constant_term(first("E[1,1]")) == V("E[1,1]")
    assert constant_term(op_mul(OpSeries.d_power(2), OpSeries.from_poly(V("E[1,1]")))) == V("E[1,1]", 2)
    with pytest.raises(PseudoInputError):
        constant_term(OpSeries.d_power(-1))


def test_lambda_shift():
    op = op_mul(first("E[1,1]"), first("E[2,2]"))
    assert lambda_shift(op) == {2: DiffPoly.one(), 1: V("E[1,1]") + V("E[2,2]"),
                                0: V("E[1,1]") * V("E[2,2]") + V("E[2,2]", 1)}


def test_right_coefficients():
    # d E = E d + E'  so  E d = d E - E'
    op = OpSeries({1: V("E[1,1]")})
    assert right_coefficients(op) == {1: V("E[1,1]"), 0: -V("E[1,1]", 1)}
    op = op_mul(first("E[1,1]"), op_mul(D, first("E[2,2]")))
    assert from_right_coefficients(right_coefficients(op)) == op


def test_coldet_small():
    one = OpMatrix.from_rows([[first("E[1,1]")]])
    assert coldet(one) == first("E[1,1]")
    gl2 = build_matrix(build_spec("A", 2))
    expected = OpSeries({
        2: DiffPoly.one(),
        1: V("E[1,1]") + V("E[2,2]"),
        0: V("E[1,1]") * V("E[2,2]") + V("E[2,2]", 1) - V("E[2,1]"),
    })
    assert coldet(gl2) == expected


def test_two_by_two_formula():
    m = build_matrix(build_spec("A", 2))
    a11, a21, a22 = m.entry(1, 1), m.entry(2, 1), m.entry(2, 2)
    assert coldet(m) == op_mul(a11, a22) - a21


@pytest.mark.parametrize("kind,n", [("A", 3), ("A", 4), ("B", 1), ("C", 1), ("C", 2)])
def test_coldet_matches_permutation_sums(kind, n):
    m = build_matrix(build_spec(kind, n))
    det = coldet(m)
    assert column_determinant(m) == det
    assert row_determinant(m) == det


def test_d2_determinant_matches_permutation_sums():
    spec = build_spec("D", 2)
    m = build_matrix(spec, 8)
    det = determinant(spec, 4)
    by_rows, by_columns = row_determinant(m), column_determinant(m)
    for k in range(3, -5, -1):
        assert by_rows.coeff(k) == det.coeff(k), k
        assert by_columns.coeff(k) == det.coeff(k), k


@pytest.mark.parametrize("kind,n", [("A", 3), ("B", 1), ("B", 2), ("C", 2)])
def test_minor_expansion_for_every_split(kind, n):
    m = build_matrix(build_spec(kind, n))
    det = coldet(m)
    for p in range(m.size + 1):
        assert minor_expansion(m, p) == det


def test_trailing_minors_end_at_determinant():
    m = build_matrix(build_spec("A", 3))
    assert trailing_minors(m)[-1] == leading_minors(m)[-1]


@pytest.mark.parametrize("kind,n", [("A", 3), ("B", 1), ("C", 2)])
def test_chain_expansion(kind, n):
    m = build_matrix(build_spec(kind, n))
    assert chain_expansion(m) == coldet(m)


def test_shape_errors():
    zero = OpSeries()
    bad = OpMatrix.from_rows([[D, zero, OpSeries.scalar(1)], [zero, D, zero], [zero, zero, D]])
    with pytest.raises(ShapeError):
        coldet(bad)
    not_central = OpMatrix.from_rows([[D, D], [zero, D]])
    with pytest.raises(ShapeError):
        coldet(not_central)
    with pytest.raises(ShapeError):
        OpMatrix.from_rows([[D, zero]])
    with pytest.raises(ShapeError):
        minor_expansion(build_matrix(build_spec("A", 2)), 3)


def test_modified_entries_use_superdiagonal():
    m = build_matrix(build_spec("B", 1))
    # superdiagonal (1,1,-1): a~_31 = a_31 * 1 * (-1)
    assert m.modified(3, 1) == m.entry(3, 1).scale(-1)
    assert m.superdiagonal(2) == -1


@settings(max_examples=200, deadline=None)
@given(diff_ops(), diff_ops(), diff_ops())
def test_associativity(a, b, c):
    assert op_mul(op_mul(a, b), c) == op_mul(a, op_mul(b, c))


@settings(max_examples=200, deadline=None)
@given(diff_ops(), diff_ops())
def test_differential_products_are_exact(a, b):
    product = op_mul(a, b)
    assert product.is_differential()
    assert not product.truncated


def test_scalar_arithmetic():
    x = first("E[1,1]")
    assert x * Fraction(1, 2) + x.scale(Fraction(1, 2)) == x
    assert (x - x).is_zero()
