"""
Images in V(h): Miura products, screening operators, and the gl_n special
elements used by the lambda-bracket identities.
"""
import concurrent.futures
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from types import MappingProxyType

from .config import DEFAULT_TRUNCATION, DEFAULT_WORKERS
from .diffpoly import DiffPoly, DVar, phi_hom
from .lie_core import CARTAN, LieAlgebraSpec, LieElement, build_spec, classical_element, g2_diagonal
from .opalg import OpSeries, constant_term, lambda_shift, op_mul
from .pva import LambdaPoly, bracket
from .wgen import GeneratorSet, h_family, operator_order

logger = logging.getLogger(__name__)


class ScreeningDepthError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MiuraResult:
    kind: str
    rank: int
    operator: OpSeries
    w_tilde: MappingProxyType
    y_tilde: DiffPoly | None = None
    tail_ok: bool = True


@dataclass(frozen=True)
class ScreeningOp:
    index: int
    epsilon: Fraction
    h: LieElement
    direction: MappingProxyType
    coefficients: tuple

    @property
    def depth(self) -> int:
        return len(self.coefficients) - 1


@dataclass(frozen=True)
class ScreeningResult:
    label: str
    index: int
    residual: DiffPoly

    @property
    def annihilated(self) -> bool:
        return not self.residual


def _factor(element: LieElement, depth: int) -> OpSeries:
    return OpSeries.first_order(DiffPoly.from_lie(element), depth)


def miura_factors(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> list:
    """First-order factors whose product is the image of the determinant under phi."""
    kind, n = spec.kind, spec.rank
    if kind == "A":
        return [_factor(LieElement.basis(f"E[{i},{i}]"), depth) for i in range(1, n + 1)]
    if kind == "G2":
        diag = g2_diagonal()
        return ([_factor(x, depth) for x in diag] + [OpSeries.d_power(1, depth=depth)]
                + [_factor(-x, depth) for x in reversed(diag)])
    size = spec.rep_size
    factors = [_factor(classical_element(kind, n, j, j), depth) for j in range(1, size + 1)]
    if kind == "D":
        factors.insert(n, OpSeries.d_power(-1, depth=depth))
    return factors


def _product(factors: list, depth: int) -> OpSeries:
    out = OpSeries.scalar(1, depth)
    for x in factors:
        out = op_mul(out, x)
    return out


@lru_cache(maxsize=None)
def miura_product(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> MiuraResult:
    n = spec.rank
    work = depth + n if spec.kind == "D" else depth
    factors = miura_factors(spec, work)
    op = _product(factors, work).with_depth(depth)
    top = operator_order(spec)
    first = 1 if spec.kind == "A" else 2
    w = MappingProxyType({k: op.coeff(top - k) for k in range(first, top + 1)})
    if spec.kind != "D":
        return MiuraResult(spec.kind, n, op, w)
    y = constant_term(_product(factors[:n], work))
    tail_ok = True
    deriv = y
    for s in range(depth):
        if op.coeff(-s - 1) != (y * deriv).scale((-1) ** (n + s)):
            logger.error("Miura tail coefficient at d^%d differs for %s", -s - 1, spec.name)
            tail_ok = False
        deriv = deriv.d()
    return MiuraResult(spec.kind, n, op, w, y, tail_ok)


def g2_quartic_relation(result: MiuraResult) -> DiffPoly:
    """w~_4 - w~_2^2 / 4 - 3 w~_2'' for g_2; zero when the relation holds."""
    w2, w4 = result.w_tilde[2], result.w_tilde[4]
    return w4 - (w2 * w2).scale(Fraction(1, 4)) - w2.derivative(2).scale(3)


def phi_mismatches(spec: LieAlgebraSpec, gs: GeneratorSet) -> list:
    """Labels whose phi image differs from the Miura coefficient."""
    miura = miura_product(spec, gs.depth)
    bad = []
    for k, p in sorted(gs.w.items()):
        if phi_hom(spec, p) != miura.w_tilde[k]:
            bad.append(f"w{k}")
    if gs.y is not None and phi_hom(spec, gs.y) != miura.y_tilde:
        bad.append("y")
    if bad:
        logger.debug("phi disagrees with the Miura product on %s", ", ".join(bad))
    return bad


def phi_agreement(spec: LieAlgebraSpec, gs: GeneratorSet) -> bool:
    return not phi_mismatches(spec, gs)


def _alpha(spec: LieAlgebraSpec, gen: str, e_i: LieElement) -> Fraction:
    """alpha_i(H) from [H, e_i] = alpha_i(H) e_i."""
    image = spec.bracket(LieElement.basis(gen), e_i)
    lead = e_i.gens()[0]
    return image.coeff(lead) / e_i.coeff(lead)


def _screening_coefficients(h: DiffPoly, epsilon: Fraction, depth: int) -> tuple:
    # V_p = -(1/eps) sum_{r<p} C(p-1, r) V_r h^{(p-1-r)}
    derivs = [h]
    while len(derivs) < depth:
        derivs.append(derivs[-1].d())
    coeffs = [DiffPoly.one()]
    for p in range(1, depth + 1):
        total = DiffPoly()
        for r in range(p):
            total = total + (coeffs[r] * derivs[p - 1 - r]).scale(comb(p - 1, r))
        coeffs.append(total.scale(-1 / epsilon))
    return tuple(coeffs)


def build_screenings(spec: LieAlgebraSpec, depth: int) -> list:
    if depth < 0:
        raise ScreeningDepthError(f"Screening depth must be non-negative, got {depth}")
    cartan = spec.basis_of_part(CARTAN)
    out = []
    for i, (e_i, h_i, eps) in enumerate(zip(spec.chevalley_e, spec.cartan_coords, spec.epsilons), start=1):
        direction = {g: a for g in cartan if (a := _alpha(spec, g, e_i))}
        coeffs = _screening_coefficients(DiffPoly.from_lie(h_i), eps, depth)
        out.append(ScreeningOp(i, eps, h_i, MappingProxyType(direction), coeffs))
    return out


def apply_screening(s: ScreeningOp, q: DiffPoly) -> DiffPoly:
    """sum_r V_r sum_H alpha(H) dQ/dH^{(r)}."""
    top = q.max_der()
    if top > s.depth:
        raise ScreeningDepthError(f"Target has derivatives of order {top}, screening stops at {s.depth}")
    total = DiffPoly()
    for r in range(top + 1):
        inner = DiffPoly()
        for g, a in s.direction.items():
            inner = inner + q.partial(DVar(g, r)).scale(a)
        if inner:
            total = total + s.coefficients[r] * inner
    return total


def screening_sweep(spec: LieAlgebraSpec, targets: list, workers: int = DEFAULT_WORKERS) -> list:
    """
    Apply every screening to every (label, polynomial) target; results come
    back target-major, in input order.
    """
    depth = max((max(p.max_der(), 0) for _, p in targets), default=0)
    screenings = build_screenings(spec, depth)
    grid = [(label, p, s) for label, p in targets for s in screenings]

    def run(item):
        label, p, s = item
        residual = apply_screening(s, p)
        if residual:
            logger.debug("Screening %d leaves %s nonzero", s.index, label)
        return ScreeningResult(label, s.index, residual)

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, grid))
    return [run(item) for item in grid]


def miura_targets(result: MiuraResult) -> list:
    out = [(f"w{k}", p) for k, p in sorted(result.w_tilde.items())]
    if result.y_tilde is not None:
        out.append(("y", result.y_tilde))
    return out


def elementary_operators(n: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """
    [E_0, ..., E_n] with (u + x_1) ... (u + x_n) = sum_m E_m u^{n-m},
    x_i = d + E_ii.
    """
    ops = [OpSeries.scalar(1, depth)] + [OpSeries(depth=depth) for _ in range(n)]
    for i in range(1, n + 1):
        x = _factor(LieElement.basis(f"E[{i},{i}]"), depth)
        for m in range(i, 0, -1):
            ops[m] = ops[m] + op_mul(ops[m - 1], x)
    return ops


def special_elements_glN(n: int) -> tuple:
    """(C, P, [e~_0, ..., e~_n]) for gl_n."""
    diag = [f"E[{i},{i}]" for i in range(1, n + 1)]
    c = DiffPoly()
    p = DiffPoly()
    for i, g in enumerate(diag, start=1):
        c = c + DiffPoly.var(g)
        p = p - (DiffPoly.var(g) ** 2).scale(Fraction(1, 2)) - DiffPoly.var(g, 1, n - i)
    etilde = [constant_term(op) for op in elementary_operators(n)]
    return c, p, etilde


def elementary_shifted(n: int) -> list:
    """[e~+_0, ..., e~+_n]: d -> d + lambda before taking the constant term."""
    return [LambdaPoly(lambda_shift(op)) for op in elementary_operators(n)]


def special_identity_residuals(n: int) -> dict:
    """
    {("C", m): ..., ("P", m): ...} residuals of
    {C_lambda e~_m} = e~+_m - e~_m and
    {P_lambda e~_m} = e~+_{m+1} - e~_{m+1} - (d + n lambda) e~_m, for 1 <= m <= n.
    Only nonzero residuals are returned.
    """
    spec = build_spec("A", n)
    c, p, etilde = special_elements_glN(n)
    plus = elementary_shifted(n)
    etilde = etilde + [DiffPoly()]
    plus = plus + [LambdaPoly()]
    out = {}
    for m in range(1, n + 1):
        lhs = bracket(spec, c, etilde[m])
        rhs = plus[m] - LambdaPoly.constant(etilde[m])
        if lhs != rhs:
            out[("C", m)] = lhs - rhs
        lhs = bracket(spec, p, etilde[m])
        shift = LambdaPoly({0: etilde[m].d(), 1: etilde[m].scale(n)})
        rhs = plus[m + 1] - LambdaPoly.constant(etilde[m + 1]) - shift
        if lhs != rhs:
            out[("P", m)] = lhs - rhs
    return out


def _geometric_products(factors: list, up_to: int, depth: int) -> list:
    """Degree-m parts of prod_i (1 - t x_i)^{-1}, in factor order."""
    series = [OpSeries.scalar(1, depth)] + [OpSeries(depth=depth) for _ in range(up_to)]
    for x in factors:
        for m in range(1, up_to + 1):
            series[m] = series[m] + op_mul(series[m - 1], x)
    return series


def phi_h_family(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """
    Ordered-product formula for phi(h_m) in type D:
    half the sum of the two series omitting a_{n'n'} and a_{nn} respectively.
    """
    if spec.kind != "D":
        raise ValueError(f"{spec.name} is not of type D")
    n = spec.rank
    a = {j: _factor(classical_element("D", n, j, j), depth) for j in range(1, 2 * n + 1)}
    primes = [a[2 * n + 1 - i] for i in range(1, n + 1)]
    unprimed = [a[i] for i in range(n, 0, -1)]
    without_nprime = _geometric_products(primes[:-1] + unprimed, up_to, depth)
    without_n = _geometric_products(primes + unprimed[1:], up_to, depth)
    return [(x + y).scale(Fraction(1, 2)) for x, y in zip(without_nprime, without_n)]


def phi_h_family_check(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> bool:
    """phi applied to the coefficients of h_0 .. h_up_to against the ordered-product formula."""
    expected = phi_h_family(spec, up_to, depth)
    actual = [h.map_coefficients(lambda c: phi_hom(spec, c)) for h in h_family(spec, up_to, depth)]
    ok = True
    for m, (x, y) in enumerate(zip(actual, expected)):
        if x != y:
            logger.debug("phi(h_%d) differs from the ordered-product formula for %s", m, spec.name)
            ok = False
    return ok
