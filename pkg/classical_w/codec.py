"""
JSON payloads and text rendering for the library's value types.

Rationals are always written as "p/q" strings so that the output is exact and
byte-for-byte reproducible.
"""
import logging
from fractions import Fraction

from .diffpoly import DiffPoly, DVar
from .lie_core import LieElement, canonical_gen, parse_gen

logger = logging.getLogger(__name__)


class DecodeError(ValueError):
    pass


def format_fraction(c: Fraction) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def parse_fraction(value, path: str = "$") -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DecodeError(f"{path}: expected a \"p/q\" string, got {value!r}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise DecodeError(f"{path}: invalid rational {value!r}") from e


def _expect(payload, kind, path: str):
    if not isinstance(payload, kind):
        raise DecodeError(f"{path}: expected {kind.__name__}, got {type(payload).__name__}")
    return payload


def _gen_name(value, path: str) -> str:
    _expect(value, str, path)
    try:
        parse_gen(value)
    except ValueError as e:
        raise DecodeError(f"{path}: {e}") from e
    return value


def _int_field(obj: dict, key: str, path: str, default=None) -> int:
    value = obj.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise DecodeError(f"{path}.{key}: expected an integer, got {value!r}")
    return value


# -- LieElement ---------------------------------------------------------


def lie_to_dict(x: LieElement) -> dict:
    return {"coeffs": {g: format_fraction(c) for g, c in x.items()}}


def lie_from_dict(payload, path: str = "$") -> LieElement:
    coeffs = _expect(_expect(payload, dict, path).get("coeffs"), dict, f"{path}.coeffs")
    return LieElement({_gen_name(g, f"{path}.coeffs"): parse_fraction(c, f"{path}.coeffs.{g}")
                       for g, c in coeffs.items()})


# -- DiffPoly -----------------------------------------------------------


def poly_to_dict(p: DiffPoly) -> dict:
    monomials = []
    for mono, c in p.sorted_terms():
        monomials.append({
            "coeff": format_fraction(c),
            "vars": [{"gen": v.gen, "der": v.der, "pow": power} for v, power in mono],
        })
    return {"monomials": monomials}


def poly_from_dict(payload, path: str = "$") -> DiffPoly:
    monomials = _expect(_expect(payload, dict, path).get("monomials"), list, f"{path}.monomials")
    pairs = []
    for k, entry in enumerate(monomials):
        here = f"{path}.monomials[{k}]"
        _expect(entry, dict, here)
        c = parse_fraction(entry.get("coeff"), f"{here}.coeff")
        factors = {}
        for j, var in enumerate(_expect(entry.get("vars", []), list, f"{here}.vars")):
            vpath = f"{here}.vars[{j}]"
            _expect(var, dict, vpath)
            der = _int_field(var, "der", vpath, 0)
            power = _int_field(var, "pow", vpath, 1)
            if der < 0 or power < 1:
                raise DecodeError(f"{vpath}: derivative order must be >= 0 and power >= 1")
            v = DVar(_gen_name(var.get("gen"), f"{vpath}.gen"), der)
            factors[v] = factors.get(v, 0) + power
        pairs.append((c, factors))
    return DiffPoly.from_terms(pairs)


def poly_for_spec(spec, p: DiffPoly, path: str = "$") -> DiffPoly:
    """
    Rewrite `p` over the canonical basis of `spec`, folding B/C/D pairs F[i,j]
    onto their representative with its sign.
    """
    images = {}
    for gen in sorted(p.gens()):
        try:
            images[gen] = canonical_gen(spec, gen)
        except ValueError as e:
            raise DecodeError(f"{path}: {e}") from e

    def image(v: DVar):
        sign, name = images[v.gen]
        if (sign, name) == (1, v.gen):
            return None
        return DiffPoly.var(name, v.der, sign)

    return p.substitute(image)


# -- LambdaPoly / OpSeries ---------------------------------------------


def lambda_to_dict(x) -> dict:
    return {"lambda_coeffs": {str(k): poly_to_dict(c) for k, c in x.items()}}


def lambda_from_dict(payload, path: str = "$"):
    from .pva import LambdaPoly
    coeffs = _expect(_expect(payload, dict, path).get("lambda_coeffs"), dict, f"{path}.lambda_coeffs")
    out = {}
    for k, c in coeffs.items():
        try:
            degree = int(k)
        except ValueError as e:
            raise DecodeError(f"{path}.lambda_coeffs: bad degree {k!r}") from e
        if degree < 0:
            raise DecodeError(f"{path}.lambda_coeffs: negative degree {degree}")
        out[degree] = poly_from_dict(c, f"{path}.lambda_coeffs.{k}")
    return LambdaPoly(out)


def op_to_dict(a) -> dict:
    return {
        "terms": {str(k): poly_to_dict(c) for k, c in a.items()},
        "truncation": a.depth,
        "truncated": a.truncated,
    }


def op_from_dict(payload, path: str = "$"):
    from .opalg import OpSeries
    _expect(payload, dict, path)
    terms = _expect(payload.get("terms"), dict, f"{path}.terms")
    depth = _int_field(payload, "truncation", path)
    if depth < 1:
        raise DecodeError(f"{path}.truncation: must be >= 1")
    out = {}
    for k, c in terms.items():
        try:
            degree = int(k)
        except ValueError as e:
            raise DecodeError(f"{path}.terms: bad degree {k!r}") from e
        out[degree] = poly_from_dict(c, f"{path}.terms.{k}")
    return OpSeries(out, depth, bool(payload.get("truncated", False)))


# -- generator sets and certificates -----------------------------------


def generator_set_to_dict(gs) -> dict:
    return {
        "kind": gs.kind,
        "rank": gs.rank,
        "w": {str(k): poly_to_dict(p) for k, p in sorted(gs.w.items())},
        "y": None if gs.y is None else poly_to_dict(gs.y),
        "designated": list(gs.designated),
        "truncation": gs.depth,
    }


def generator_set_from_dict(payload, path: str = "$") -> tuple:
    """(kind, rank, [(label, DiffPoly), ...]) in label order."""
    _expect(payload, dict, path)
    kind = _expect(payload.get("kind"), str, f"{path}.kind")
    rank = _int_field(payload, "rank", path)
    w = _expect(payload.get("w", {}), dict, f"{path}.w")
    items = []
    for key in sorted(w, key=lambda s: (len(s), s)):
        if not key.isdigit():
            raise DecodeError(f"{path}.w: bad index {key!r}")
        items.append((f"w{key}", poly_from_dict(w[key], f"{path}.w.{key}")))
    if payload.get("y") is not None:
        items.append(("y", poly_from_dict(payload["y"], f"{path}.y")))
    return kind, rank, items


def certificate_to_dict(label: str, cert) -> dict:
    witness = None
    if cert.witness is not None:
        gen, residual = cert.witness
        witness = {"gen": gen, "residual": lambda_to_dict(residual)}
    return {
        "label": label,
        "passed": cert.passed,
        "checked": [gen for gen, _ in cert.checks],
        "witness": witness,
    }


# -- text ---------------------------------------------------------------


def format_var(v: DVar) -> str:
    if v.der <= 2:
        return v.gen + "'" * v.der
    return f"{v.gen}^({v.der})"


def format_poly(p: DiffPoly) -> str:
    if not p:
        return "0"
    parts = []
    for mono, c in p.sorted_terms():
        factors = [format_var(v) if power == 1 else f"{format_var(v)}^{power}" for v, power in mono]
        if not factors:
            parts.append(str(c))
        elif c == 1:
            parts.append(" * ".join(factors))
        elif c == -1:
            parts.append("-" + " * ".join(factors))
        else:
            parts.append(f"{c} * " + " * ".join(factors))
    return " + ".join(parts).replace("+ -", "- ")


def _wrap(p: DiffPoly) -> str:
    text = format_poly(p)
    return f"({text})" if len(p) > 1 else text


def format_lambda(x) -> str:
    if not x:
        return "0"
    parts = []
    for k, c in sorted(x.items(), reverse=True):
        if k == 0:
            parts.append(format_poly(c))
        else:
            power = "lambda" if k == 1 else f"lambda^{k}"
            parts.append(power if c == 1 else f"{_wrap(c)} * {power}")
    return " + ".join(parts).replace("+ -", "- ")


def format_op(a) -> str:
    if not a:
        return "0"
    parts = []
    for k, c in a.items():
        if k == 0:
            parts.append(format_poly(c))
        else:
            power = "d" if k == 1 else f"d^{k}"
            parts.append(power if c == 1 else f"{_wrap(c)} * {power}")
    text = " + ".join(parts).replace("+ -", "- ")
    if a.truncated:
        text += f" + O(d^{-a.depth - 1})"
    return text


def format_generator_set(gs) -> str:
    lines = [f"{gs.kind}{'' if gs.kind == 'G2' else gs.rank}"]
    for label, p in gs.items():
        mark = "*" if label in {l for l, _ in gs.designated_items()} else " "
        lines.append(f"{mark} {label} = {format_poly(p)}")
    return "\n".join(lines)
