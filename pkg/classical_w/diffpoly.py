"""
Differential polynomial algebra V(a): polynomials in the symbols X^{(r)} with
the derivation X^{(r)} -> X^{(r+1)}, plus the homomorphisms rho and phi.
"""
import logging
from fractions import Fraction
from typing import Callable, NamedTuple

from .lie_core import CARTAN, MINUS, PLUS, LieAlgebraSpec, LieElement, gen_sort_key

logger = logging.getLogger(__name__)


class ProjectionError(ValueError):
    pass


class DVar(NamedTuple):
    gen: str
    der: int = 0


def var_key(v: DVar) -> tuple:
    return (gen_sort_key(v[0]), v[1])


def _sort_mono(factors: dict) -> tuple:
    return tuple(sorted(((v, p) for v, p in factors.items() if p), key=lambda item: var_key(item[0])))


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    factors = dict(a)
    for v, p in b:
        factors[v] = factors.get(v, 0) + p
    return _sort_mono(factors)


def mono_key(mono: tuple) -> tuple:
    return tuple((var_key(v), p) for v, p in mono)


def mono_degree(mono: tuple) -> int:
    return sum(p for _, p in mono)


def mono_drop(mono: tuple, v: DVar) -> tuple:
    """Remove one factor v from the monomial."""
    out = []
    for w, p in mono:
        if w == v:
            if p > 1:
                out.append((w, p - 1))
        else:
            out.append((w, p))
    return tuple(out)


class DiffPoly:
    """
    Sparse polynomial: {monomial: Fraction}, a monomial being a sorted tuple of
    (DVar, power) pairs. The empty monomial is the constant term.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        self._terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "DiffPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def zero(cls) -> "DiffPoly":
        return cls()

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls.const(1)

    @classmethod
    def var(cls, gen: str, der: int = 0, coeff=1) -> "DiffPoly":
        return cls({((DVar(gen, der), 1),): Fraction(coeff)})

    @classmethod
    def from_lie(cls, element: LieElement, der: int = 0) -> "DiffPoly":
        return cls({((DVar(g, der), 1),): c for g, c in element.items()})

    @classmethod
    def from_terms(cls, pairs) -> "DiffPoly":
        """Build from (coeff, {DVar: power}) pairs, combining duplicates."""
        out = {}
        for c, factors in pairs:
            mono = _sort_mono(dict(factors))
            out[mono] = out.get(mono, Fraction(0)) + Fraction(c)
        return cls(out)

    # -- inspection -----------------------------------------------------

    def items(self):
        return self._terms.items()

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda item: (mono_degree(item[0]), mono_key(item[0])))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def gens(self) -> set:
        return {v.gen for v in self.variables()}

    def max_der(self) -> int:
        return max((v.der for v in self.variables()), default=-1)

    def degree(self) -> int:
        return max((sum(p for _, p in m) for m in self._terms), default=-1)

    def linear_part(self, der: int = 0) -> LieElement:
        """Degree-one terms with derivative order `der`, as a Lie element."""
        out = {}
        for m, c in self._terms.items():
            if len(m) == 1 and m[0][1] == 1 and m[0][0].der == der:
                out[m[0][0].gen] = c
        return LieElement(out)

    # -- ring operations ------------------------------------------------

    @staticmethod
    def _coerce(other) -> "DiffPoly":
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m, Fraction(0)) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return DiffPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "DiffPoly":
        c = Fraction(c)
        if not c:
            return DiffPoly()
        return DiffPoly({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        if not self._terms or not other._terms:
            return DiffPoly()
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return DiffPoly(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("Negative powers are not polynomials")
        out = DiffPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = DiffPoly.const(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        from .codec import format_poly
        return f"DiffPoly({format_poly(self)})"

    # -- differential structure -----------------------------------------

    def d(self) -> "DiffPoly":
        out = {}
        for m, c in self._terms.items():
            for v, p in m:
                factors = dict(m)
                factors[v] = p - 1
                up = DVar(v.gen, v.der + 1)
                factors[up] = factors.get(up, 0) + 1
                mono = _sort_mono(factors)
                out[mono] = out.get(mono, Fraction(0)) + c * p
        return DiffPoly(out)

    def derivative(self, k: int) -> "DiffPoly":
        out = self
        for _ in range(k):
            out = out.d()
        return out

    def partial(self, v: DVar) -> "DiffPoly":
        out = {}
        for m, c in self._terms.items():
            factors = dict(m)
            p = factors.get(v, 0)
            if not p:
                continue
            factors[v] = p - 1
            mono = _sort_mono(factors)
            out[mono] = out.get(mono, Fraction(0)) + c * p
        return DiffPoly(out)

    def substitute(self, image: Callable[[DVar], "DiffPoly | None"]) -> "DiffPoly":
        """
        Algebra homomorphism defined on variables. `image(v)` returning None
        keeps v unchanged.
        """
        cache = {}
        total = DiffPoly()
        for m, c in self._terms.items():
            kept = []
            term = DiffPoly.const(c)
            for v, p in m:
                if v not in cache:
                    cache[v] = image(v)
                img = cache[v]
                if img is None:
                    kept.append((v, p))
                    continue
                term = term * (img ** p)
                if not term:
                    break
            if not term:
                continue
            if kept:
                term = term * DiffPoly({tuple(kept): Fraction(1)})
            total = total + term
        return total


def d(p: DiffPoly) -> DiffPoly:
    return p.d()


def partial(p: DiffPoly, v: DVar) -> DiffPoly:
    return p.partial(v)


def rho_hom(spec: LieAlgebraSpec, p: DiffPoly) -> DiffPoly:
    """
    X^{(r)} -> pi_p(X)^{(r)} + [r == 0] (f|X). Variables of p map to themselves
    because (f|p) = 0.
    """
    def image(v: DVar):
        projected, shift = spec.rho_gen(v.gen)
        if projected is not None and (v.der > 0 or not shift):
            return None
        out = DiffPoly() if projected is None else DiffPoly.var(projected, v.der)
        if v.der == 0 and shift:
            out = out + shift
        return out

    return p.substitute(image)


def phi_hom(spec: LieAlgebraSpec, p: DiffPoly) -> DiffPoly:
    """Projection V(p) -> V(h) killing n_-."""
    def image(v: DVar):
        which = spec.part_of(v.gen)
        if which == PLUS:
            raise ProjectionError(f"phi is undefined on the positive generator {v.gen}")
        if which == MINUS:
            return DiffPoly()
        return None

    return p.substitute(image)


def cartan_only(spec: LieAlgebraSpec, p: DiffPoly) -> bool:
    return all(spec.part_of(g) == CARTAN for g in p.gens())
