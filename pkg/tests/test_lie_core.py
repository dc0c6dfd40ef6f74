import dataclasses
from fractions import Fraction

import pytest

from classical_w.lie_core import (
    CARTAN,
    MINUS,
    PLUS,
    GeneratorNameError,
    LieElement,
    RankError,
    build_spec,
    canonical_gen,
    classical_element,
    matrix_commutator,
    parse_gen,
)

E = LieElement.basis


def test_gl2_bracket(gl2):
    assert gl2.bracket(E("E[1,2]"), E("E[2,1]")) == E("E[1,1]") - E("E[2,2]")


def test_gl3_bracket():
    spec = build_spec("A", 3)
    assert spec.bracket(E("E[1,2]"), E("E[2,3]")) == E("E[1,3]")


def test_bracket_with_itself_vanishes(suite_spec):
    for g in suite_spec.basis:
        assert not suite_spec.bracket(E(g), E(g))


def test_o3_bracket_and_form():
    spec = build_spec("B", 1)
    # F_{22} = F_{2,2'} vanishes in o_3
    assert spec.bracket(E("F[1,2]"), E("F[2,1]")) == E("F[1,1]")
    assert spec.form_value(E("F[1,2]"), E("F[2,1]")) == 1


def test_g2_values(g2):
    assert g2.bracket(E("Xa"), E("Ya")) == E("Ha")
    assert g2.bracket(E("Xa"), E("Xb")) == E("Xab")
    assert g2.form_value(E("Xa"), E("Ya")) == -1
    assert g2.form_value(E("Xb"), E("Yb")) == -3


def test_g2_ignores_rank():
    assert build_spec("G2") is build_spec("G2", 5)


def test_triangular_decomposition(suite_spec):
    parts = {suite_spec.part_of(g) for g in suite_spec.basis}
    assert CARTAN in parts and parts <= {PLUS, CARTAN, MINUS}
    assert len(suite_spec.basis_of_part(PLUS)) == len(suite_spec.basis_of_part(MINUS))


def test_jacobi(suite_spec):
    br = suite_spec.bracket
    basis = [E(g) for g in suite_spec.basis]
    for a in basis:
        for b in basis:
            ab = br(a, b)
            for c in basis:
                assert not (br(ab, c) + br(br(b, c), a) + br(br(c, a), b))


def test_form_invariant_and_symmetric(suite_spec):
    br, form = suite_spec.bracket, suite_spec.form_value
    basis = [E(g) for g in suite_spec.basis]
    for a in basis:
        for b in basis:
            assert form(a, b) == form(b, a)
            for c in basis:
                assert form(br(a, b), c) == form(a, br(b, c))


def test_chevalley_relations(suite_spec):
    s = suite_spec
    rank = len(s.chevalley_e)
    for i in range(rank):
        for j in range(rank):
            h_i = s.cartan_coords[i]
            expected = h_i if i == j else LieElement()
            assert s.bracket(s.chevalley_e[i], s.chevalley_f[j]) == expected
            assert s.bracket(h_i, s.chevalley_e[j]) == s.chevalley_e[j] * s.cartan_matrix[i][j]
            assert s.bracket(h_i, s.chevalley_f[j]) == s.chevalley_f[j] * -s.cartan_matrix[i][j]
            assert s.form_value(s.chevalley_e[i], s.chevalley_f[j]) == (s.epsilons[i] if i == j else 0)


def test_symmetrized_cartan_matrix(suite_spec):
    a, eps = suite_spec.cartan_matrix, suite_spec.epsilons
    rank = len(a)
    for i in range(rank):
        for j in range(rank):
            assert Fraction(a[i][j]) / eps[i] == Fraction(a[j][i]) / eps[j]


def test_principal_sl2(suite_spec):
    s = suite_spec
    assert s.bracket(s.e, s.f) == s.h
    assert s.bracket(s.h, s.e) == s.e * 2
    assert s.bracket(s.h, s.f) == s.f * -2


@pytest.mark.parametrize("kind,n", [("B", 1), ("B", 2), ("C", 1), ("C", 2), ("D", 2), ("D", 3)])
def test_matrix_realization_reproduces_brackets(kind, n):
    spec = build_spec(kind, n)
    for a in spec.basis:
        for b in spec.basis:
            lhs = spec.matrix_of(spec.bracket(E(a), E(b)))
            rhs = matrix_commutator(spec.matrix_of(E(a)), spec.matrix_of(E(b)))
            assert lhs == {k: v for k, v in rhs.items() if v}


def test_sp4_bracket_against_matrices():
    spec = build_spec("C", 2)
    x, y = classical_element("C", 2, 1, 2), classical_element("C", 2, 2, 4)
    table = spec.bracket(x, y)
    via_matrices = spec.from_matrix(matrix_commutator(spec.matrix_of(x), spec.matrix_of(y)))
    assert table == via_matrices
    assert table


def test_principal_nilpotent_forms():
    assert build_spec("A", 3).f == E("E[2,1]") + E("E[3,2]")
    assert build_spec("B", 2).f == E("F[2,1]") + E("F[3,2]")
    assert build_spec("C", 2).f == E("F[2,1]") + classical_element("C", 2, 3, 2, Fraction(1, 2))
    assert build_spec("D", 3).f == E("F[2,1]") + E("F[3,2]") + classical_element("D", 3, 4, 2)
    assert build_spec("G2").f == E("Ya") + E("Yb")


def test_rho_gen(gl2, g2):
    assert gl2.rho_gen("E[1,2]") == (None, 1)
    assert gl2.rho_gen("E[2,1]") == ("E[2,1]", 0)
    assert g2.rho_gen("Xb") == (None, -3)


def test_canonical_representatives():
    # F_{ij} = -F_{j'i'} in o_N
    assert classical_element("B", 2, 5, 4) == -E("F[2,1]")
    assert not classical_element("D", 2, 1, 4)
    # sp_N keeps F_{i,i'} and folds the sign eps_i eps_j
    assert classical_element("C", 2, 1, 4) == E("F[1,4]")
    assert classical_element("C", 2, 4, 2) == E("F[3,1]")


def test_canonical_gen_folds_and_rejects():
    o5 = build_spec("B", 2)
    assert canonical_gen(o5, "F[5,4]") == (-1, "F[2,1]")
    assert canonical_gen(o5, "F[2,1]") == (1, "F[2,1]")
    assert canonical_gen(build_spec("C", 2), "F[4,2]") == (1, "F[3,1]")
    assert canonical_gen(build_spec("G2"), "Ya2b") == (1, "Ya2b")
    with pytest.raises(GeneratorNameError):
        canonical_gen(o5, "F[3,3]")
    with pytest.raises(GeneratorNameError):
        canonical_gen(build_spec("D", 2), "F[1,4]")
    with pytest.raises(GeneratorNameError):
        canonical_gen(build_spec("A", 2), "E[3,3]")
    with pytest.raises(GeneratorNameError):
        canonical_gen(o5, "E[1,1]")


def test_cartan_coords_are_set_at_construction(suite_spec):
    s = suite_spec
    assert s.cartan_coords == tuple(s.bracket(e, f) for e, f in zip(s.chevalley_e, s.chevalley_f))
    assert all(s.cartan_coords)
    with pytest.raises(dataclasses.FrozenInstanceError):
        s.cartan_coords = ()


def test_f_power_basis_lengths(suite_spec):
    expected = {"A": suite_spec.rank, "B": suite_spec.rank, "C": suite_spec.rank,
                "D": suite_spec.rank, "G2": 2}
    assert len(suite_spec.f_power_basis) == expected[suite_spec.kind]
    assert all(v for v in suite_spec.f_power_basis)


@pytest.mark.parametrize("kind,n", [("A", 0), ("B", 0), ("C", 0), ("D", 1), ("E", 6)])
def test_rank_errors(kind, n):
    with pytest.raises(RankError):
        build_spec(kind, n)


def test_parse_gen():
    assert parse_gen("F[3,1]") == ("F", 3, 1)
    assert parse_gen("Ya2b") == ("G", "Ya2b")
    with pytest.raises(GeneratorNameError):
        parse_gen("Z[1,1]")
