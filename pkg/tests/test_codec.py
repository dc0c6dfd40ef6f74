import json
from fractions import Fraction

import pytest

from classical_w.codec import (
    DecodeError,
    certificate_to_dict,
    format_fraction,
    format_generator_set,
    format_lambda,
    format_op,
    format_poly,
    format_var,
    generator_set_from_dict,
    generator_set_to_dict,
    lambda_from_dict,
    lambda_to_dict,
    lie_from_dict,
    lie_to_dict,
    op_from_dict,
    op_to_dict,
    parse_fraction,
    poly_for_spec,
    poly_from_dict,
    poly_to_dict,
)
from classical_w.diffpoly import DiffPoly, DVar
from classical_w.lie_core import LieElement, build_spec
from classical_w.opalg import OpSeries, op_mul
from classical_w.pva import LambdaPoly
from classical_w.wgen import generators, verify_membership

V = DiffPoly.var


def test_fractions():
    assert format_fraction(Fraction(3)) == "3/1"
    assert format_fraction(Fraction(-1, 2)) == "-1/2"
    assert parse_fraction("-1/2") == Fraction(-1, 2)
    assert parse_fraction(4) == 4


@pytest.mark.parametrize("value", [True, 1.5, None, "1/0", "half"])
def test_bad_fractions(value):
    with pytest.raises(DecodeError):
        parse_fraction(value)


def test_lie_element_payload():
    x = LieElement({"E[1,1]": 2, "E[2,1]": Fraction(-1, 3)})
    payload = lie_to_dict(x)
    assert payload == {"coeffs": {"E[1,1]": "2/1", "E[2,1]": "-1/3"}}
    assert lie_from_dict(payload) == x


def test_poly_payload():
    p = V("E[2,2]", 1, 2)
    assert poly_to_dict(p) == {
        "monomials": [{"coeff": "2/1", "vars": [{"gen": "E[2,2]", "der": 1, "pow": 1}]}]
    }
    assert poly_to_dict(DiffPoly()) == {"monomials": []}
    assert poly_from_dict(poly_to_dict(V("E[1,1]") ** 2 - 1)) == V("E[1,1]") ** 2 - 1


@pytest.mark.parametrize(
    "payload",
    [
        {},
        {"monomials": "x"},
        {"monomials": [{"coeff": "1/1", "vars": [{"gen": "Z[1,1]", "der": 0, "pow": 1}]}]},
        {"monomials": [{"coeff": "1/1", "vars": [{"gen": "E[1,1]", "der": -1, "pow": 1}]}]},
        {"monomials": [{"coeff": "1/1", "vars": [{"gen": "E[1,1]", "der": 0, "pow": 0}]}]},
        {"monomials": [{"coeff": 0.5, "vars": []}]},
    ],
)
def test_poly_decode_errors(payload):
    with pytest.raises(DecodeError):
        poly_from_dict(payload)


def test_lambda_payload():
    x = LambdaPoly({0: V("E[1,1]"), 2: DiffPoly.one()})
    assert lambda_from_dict(lambda_to_dict(x)) == x
    with pytest.raises(DecodeError):
        lambda_from_dict({"lambda_coeffs": {"-1": {"monomials": []}}})


def test_op_payload_keeps_truncation():
    op = op_mul(OpSeries.d_power(-1, depth=2), OpSeries.from_poly(V("F[2,1]"), 2))
    payload = op_to_dict(op)
    assert payload["truncation"] == 2
    assert payload["truncated"] is True
    assert sorted(payload["terms"]) == ["-1", "-2"]
    back = op_from_dict(payload)
    assert back == op and back.truncated and back.depth == 2
    with pytest.raises(DecodeError):
        op_from_dict({"terms": {}, "truncation": 0})


def test_generator_set_payload():
    gs = generators(build_spec("A", 2))
    payload = generator_set_to_dict(gs)
    assert sorted(payload) == ["designated", "kind", "rank", "truncation", "w", "y"]
    assert payload["kind"] == "A" and payload["rank"] == 2
    assert sorted(payload["w"]) == ["1", "2"]
    assert payload["designated"] == [1, 2]
    assert payload["y"] is None
    kind, rank, items = generator_set_from_dict(json.loads(json.dumps(payload)))
    assert (kind, rank) == ("A", 2)
    assert items == gs.items()


def test_d_type_payload_marks_y():
    payload = generator_set_to_dict(generators(build_spec("D", 2)))
    assert payload["designated"] == [2, "y"]
    assert payload["y"] is not None
    _, _, items = generator_set_from_dict(payload)
    assert items[-1][0] == "y"


def test_generator_set_decode_errors():
    with pytest.raises(DecodeError):
        generator_set_from_dict({"kind": "A", "rank": "2", "w": {}})
    with pytest.raises(DecodeError):
        generator_set_from_dict({"kind": "A", "rank": 2, "w": {"two": {"monomials": []}}})
    with pytest.raises(DecodeError):
        generator_set_from_dict([])


def test_certificate_payload():
    spec = build_spec("A", 2)
    cert = verify_membership(spec, V("E[2,1]"))
    payload = certificate_to_dict("x", cert)
    assert payload["passed"] is False
    assert payload["checked"] == ["E[1,2]"]
    assert payload["witness"]["gen"] == "E[1,2]"
    assert payload["witness"]["residual"] == lambda_to_dict(
        LambdaPoly({0: V("E[1,1]") - V("E[2,2]"), 1: DiffPoly.one()}))
    ok = certificate_to_dict("w2", verify_membership(spec, generators(spec).w[2]))
    assert ok["passed"] is True and ok["witness"] is None


def test_text_rendering():
    w2 = generators(build_spec("A", 2)).w[2]
    assert format_poly(w2) == "-E[2,1] + E[2,2]' + E[1,1] * E[2,2]"
    assert format_poly(DiffPoly()) == "0"
    assert format_poly(V("E[1,1]", 0, Fraction(1, 2)) + 3) == "3 + 1/2 * E[1,1]"
    assert format_var(DVar("F[1,1]", 3)) == "F[1,1]^(3)"
    assert format_var(DVar("F[1,1]", 2)) == "F[1,1]''"
    assert format_lambda(LambdaPoly({0: V("E[1,1]") - V("E[2,2]"), 1: DiffPoly.one()})) == "lambda + E[1,1] - E[2,2]"


def test_op_rendering():
    op = OpSeries({2: DiffPoly.one(), 0: V("E[1,1]")})
    assert format_op(op) == "d^2 + E[1,1]"
    truncated = op_mul(OpSeries.d_power(-1, depth=2), OpSeries.from_poly(V("F[2,1]"), 2))
    assert format_op(truncated) == "F[2,1] * d^-1 - F[2,1]' * d^-2 + O(d^-3)"


def test_generator_set_text_marks_designated():
    text = format_generator_set(generators(build_spec("B", 1)))
    lines = text.splitlines()
    assert lines[0] == "B1"
    assert lines[1].startswith("* w2 = ")
    assert lines[2].startswith("  w3 = ")


def test_poly_for_spec_folds_signs():
    o5 = build_spec("B", 2)
    p = V("F[5,4]", 1) * V("F[1,1]") + V("F[2,1]")
    assert poly_for_spec(o5, p) == -(V("F[2,1]", 1) * V("F[1,1]")) + V("F[2,1]")
    w2 = generators(build_spec("A", 2)).w[2]
    assert poly_for_spec(build_spec("A", 2), w2) == w2


@pytest.mark.parametrize("kind,n,gen", [("A", 2, "E[3,3]"), ("B", 2, "F[3,3]"), ("D", 2, "F[2,3]"), ("G2", 2, "E[1,1]")])
def test_poly_for_spec_rejects_foreign_names(kind, n, gen):
    with pytest.raises(DecodeError, match=r"\$\.w2"):
        poly_for_spec(build_spec(kind, n), V(gen), "$.w2")
