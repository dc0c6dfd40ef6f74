"""
Lambda-bracket engine on V(g).

The base bracket {X_lambda Y} = [X,Y] + (X|Y) lambda is extended by
sesquilinearity in both slots and by the Leibniz rule.
"""
import logging
from fractions import Fraction
from functools import lru_cache
from math import comb

from .diffpoly import DiffPoly, DVar, mono_drop, mono_mul, rho_hom
from .lie_core import PLUS, LieAlgebraSpec, LieElement

logger = logging.getLogger(__name__)


class LambdaPoly:
    """Polynomial in lambda with DiffPoly coefficients: {degree: DiffPoly}."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self._coeffs = {k: c for k, c in sorted((coeffs or {}).items()) if c}

    @classmethod
    def constant(cls, p: DiffPoly, degree: int = 0) -> "LambdaPoly":
        return cls({degree: p})

    def items(self):
        return self._coeffs.items()

    def coeff(self, k: int) -> DiffPoly:
        return self._coeffs.get(k, DiffPoly())

    def degree(self) -> int:
        return max(self._coeffs, default=-1)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        out = dict(self._coeffs)
        for k, c in other.items():
            out[k] = out[k] + c if k in out else c
        return LambdaPoly(out)

    def __neg__(self) -> "LambdaPoly":
        return LambdaPoly({k: -c for k, c in self.items()})

    def __sub__(self, other: "LambdaPoly") -> "LambdaPoly":
        return self + (-other)

    def scale(self, c) -> "LambdaPoly":
        return LambdaPoly({k: v.scale(c) for k, v in self.items()})

    def mul_poly(self, p: DiffPoly) -> "LambdaPoly":
        return LambdaPoly({k: v * p for k, v in self.items()})

    def times_lambda(self, power: int) -> "LambdaPoly":
        return LambdaPoly({k + power: v for k, v in self.items()})

    def map(self, fn) -> "LambdaPoly":
        return LambdaPoly({k: fn(v) for k, v in self.items()})

    def d(self) -> "LambdaPoly":
        return self.map(DiffPoly.d)

    def lambda_plus_d(self, s: int) -> "LambdaPoly":
        """(lambda + d)^s applied, d acting on the coefficients."""
        out = {}
        deriv = self
        for t in range(s + 1):
            for k, c in deriv.items():
                deg = k + s - t
                term = c.scale(comb(s, t))
                out[deg] = out[deg] + term if deg in out else term
            deriv = deriv.d()
        return LambdaPoly(out)

    def skew(self) -> "LambdaPoly":
        """Substitute lambda -> -lambda - d, d acting on the coefficients."""
        out = {}
        for n, r in self.items():
            deriv = r
            for t in range(n + 1):
                deg = n - t
                term = deriv.scale((-1) ** n * comb(n, t))
                out[deg] = out[deg] + term if deg in out else term
                deriv = deriv.d()
        return LambdaPoly(out)

    def __eq__(self, other):
        if not isinstance(other, LambdaPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        from .codec import format_lambda
        return f"LambdaPoly({format_lambda(self)})"


def _lambda_power_of_poly(x: DiffPoly, n: int) -> LambdaPoly:
    """(lambda + d)^n x as a lambda-polynomial."""
    return LambdaPoly.constant(x).lambda_plus_d(n)


@lru_cache(maxsize=None)
def bracket_base(spec: LieAlgebraSpec, x: str, y: str) -> LambdaPoly:
    """{X_lambda Y} = [X, Y] + (X|Y) lambda on basis generators."""
    commutator = spec.bracket_table.get((x, y), LieElement())
    pairing = spec.form_table.get((x, y), Fraction(0))
    return LambdaPoly({0: DiffPoly.from_lie(commutator), 1: DiffPoly.const(pairing)})


@lru_cache(maxsize=None)
def _var_var(spec: LieAlgebraSpec, v: DVar, w: DVar) -> LambdaPoly:
    """{X^{(r)}_lambda Y^{(s)}} = (-lambda)^r (lambda + d)^s {X_lambda Y}."""
    out = bracket_base(spec, v.gen, w.gen)
    if not out:
        return out
    out = out.lambda_plus_d(w.der)
    if v.der:
        out = out.times_lambda(v.der).scale((-1) ** v.der)
    return out


def bracket_var_left(spec: LieAlgebraSpec, v: DVar, p: DiffPoly) -> LambdaPoly:
    acc = {}
    for mono, c in p.items():
        for w, power in mono:
            partner = _var_var(spec, v, w)
            if not partner:
                continue
            rest = mono_drop(mono, w)
            weight = c * power
            for deg, coeff_poly in partner.items():
                bucket = acc.setdefault(deg, {})
                for m2, c2 in coeff_poly.items():
                    m = mono_mul(m2, rest)
                    bucket[m] = bucket.get(m, Fraction(0)) + c2 * weight
    return LambdaPoly({deg: DiffPoly(bucket) for deg, bucket in acc.items()})


def _bracket_mono(spec: LieAlgebraSpec, mono: tuple, b: DiffPoly, memo: dict) -> LambdaPoly:
    if mono in memo:
        return memo[mono]
    first = mono[0][0]
    rest = mono_drop(mono, first)
    head = bracket_var_left(spec, first, b)
    if not rest:
        memo[mono] = head
        return head
    tail = _bracket_mono(spec, rest, b, memo)
    c_part = DiffPoly.var(first.gen, first.der)
    d_part = DiffPoly({rest: 1})
    out = LambdaPoly()
    # {cd_lambda b} = sum_n q_n (lambda+d)^n d + sum_n q'_n (lambda+d)^n c
    for n, q in head.items():
        out = out + _lambda_power_of_poly(d_part, n).mul_poly(q)
    for n, q in tail.items():
        out = out + _lambda_power_of_poly(c_part, n).mul_poly(q)
    memo[mono] = out
    return out


def bracket(spec: LieAlgebraSpec, a: DiffPoly, b: DiffPoly) -> LambdaPoly:
    """{A_lambda B} for arbitrary differential polynomials."""
    memo = {}
    total = LambdaPoly()
    for mono, c in a.items():
        if not mono:
            continue
        total = total + _bracket_mono(spec, mono, b, memo).scale(c)
    return total


def rho_bracket(spec: LieAlgebraSpec, x: str, p: DiffPoly) -> LambdaPoly:
    """rho{X_lambda P}; P lies in the W-algebra iff this vanishes for every X in n_+."""
    if spec.part_of(x) != PLUS:
        raise ValueError(f"{x} is not a positive generator of {spec.name}")
    raw = bracket_var_left(spec, DVar(x, 0), p)
    return raw.map(lambda c: rho_hom(spec, c))
