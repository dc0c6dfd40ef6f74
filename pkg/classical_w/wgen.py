"""
Generators of the principal classical W-algebras from operator determinants,
the e_m / h_m families, membership certificates and the MacMahon identity.
"""
import concurrent.futures
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

from .config import DEFAULT_TRUNCATION, DEFAULT_WORKERS
from .diffpoly import DiffPoly
from .lie_core import (
    PLUS,
    GeneratorNameError,
    LieAlgebraSpec,
    LieElement,
    classical_element,
    g2_diagonal,
    rep_prime,
)
from .opalg import (
    OpMatrix,
    OpSeries,
    coldet,
    constant_term,
    gbinom,
    leading_minors,
    op_mul,
    right_coefficients,
    trailing_minors,
)
from .pva import rho_bracket

logger = logging.getLogger(__name__)


class GeneratorError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    kind: str
    rank: int
    w: MappingProxyType
    y: DiffPoly | None
    designated: tuple
    operator: OpSeries
    depth: int

    def items(self) -> list:
        """(label, polynomial) pairs: "w2", "w3", ..., then "y" for type D."""
        out = [(f"w{k}", p) for k, p in sorted(self.w.items())]
        if self.y is not None:
            out.append(("y", self.y))
        return out

    def designated_items(self) -> list:
        out = []
        for d in self.designated:
            out.append(("y", self.y) if d == "y" else (f"w{d}", self.w[d]))
        return out


@dataclass(frozen=True)
class MembershipCertificate:
    passed: bool
    checks: tuple
    witness: tuple | None = None


@dataclass(frozen=True)
class DTypeReport:
    y: tuple
    ybar: tuple
    parity_ok: bool
    tail: tuple
    tail_ok: bool
    truncated: bool = field(default=False)


def _poly(element: LieElement, depth: int) -> OpSeries:
    return OpSeries.from_poly(DiffPoly.from_lie(element), depth)


def _entry(element: LieElement, diagonal: bool, depth: int, d_coeff=1) -> OpSeries:
    out = {0: DiffPoly.from_lie(element)}
    if diagonal:
        out[1] = DiffPoly.const(d_coeff)
    return OpSeries(out, depth)


def matrix_size(spec: LieAlgebraSpec) -> int:
    n = spec.rank
    return {"A": n, "B": 2 * n + 1, "C": 2 * n, "D": 2 * n + 1, "G2": 7}[spec.kind]


def operator_order(spec: LieAlgebraSpec) -> int:
    """Leading d-degree of the determinant."""
    n = spec.rank
    return {"A": n, "B": 2 * n + 1, "C": 2 * n, "D": 2 * n - 1, "G2": 7}[spec.kind]


def family_bound(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> int:
    if spec.kind == "D":
        return 2 * spec.rank - 1 + depth
    return operator_order(spec)


def build_matrix(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> OpMatrix:
    kind, n = spec.kind, spec.rank
    if kind == "A":
        return _gl_matrix(n, depth)
    if kind in ("B", "C"):
        return _bc_matrix(kind, n, depth)
    if kind == "D":
        return _d_matrix(n, depth)
    return _g2_matrix(depth)


def _gl_matrix(n: int, depth: int) -> OpMatrix:
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            if i >= j:
                row.append(_entry(LieElement.basis(f"E[{i},{j}]"), i == j, depth))
            elif j == i + 1:
                row.append(OpSeries.scalar(1, depth))
            else:
                row.append(OpSeries(depth=depth))
        rows.append(row)
    return OpMatrix.from_rows(rows)


def _bc_matrix(kind: str, n: int, depth: int) -> OpMatrix:
    size = 2 * n + 1 if kind == "B" else 2 * n
    rows = []
    for i in range(1, size + 1):
        row = []
        for j in range(1, size + 1):
            if i >= j:
                row.append(_entry(classical_element(kind, n, i, j), i == j, depth))
            elif j == i + 1:
                row.append(OpSeries.scalar(1 if i <= n else -1, depth))
            else:
                row.append(OpSeries(depth=depth))
        rows.append(row)
    return OpMatrix.from_rows(rows)


def _d_matrix(n: int, depth: int) -> OpMatrix:
    """
    The (2n+1) x (2n+1) matrix with d^{-1} in the middle. Matrix rows/columns
    n+2 .. 2n+1 carry the indices n' .. 1'.
    """
    size = 2 * n + 1
    F = lambda i, j: classical_element("D", n, i, j)
    zero = OpSeries(depth=depth)
    rows = [[zero] * size for _ in range(size)]

    def put(r, c, value):
        rows[r - 1][c - 1] = value

    def index(r):
        return r if r <= n else r - 1

    for r in range(1, n + 1):
        for c in range(1, r + 1):
            if r == n and c < n:
                put(r, c, _poly(F(n, c) - F(rep_prime("D", n, n), c), depth))
            else:
                put(r, c, _entry(F(r, c), r == c, depth))
        if r < n:
            put(r, r + 1, OpSeries.scalar(1, depth))
    put(n, n + 2, OpSeries.d_power(1, -2, depth))
    put(n + 1, n + 1, OpSeries.d_power(-1, depth=depth))
    for r in range(n + 2, size + 1):
        i = index(r)
        for c in range(1, n + 1):
            put(r, c, _poly(F(i, c), depth))
        if r == n + 2:
            put(r, n + 2, _entry(F(i, i), True, depth))
        else:
            k = 2 * n + 2 - r
            kp = rep_prime("D", n, k)
            nn = rep_prime("D", n, n)
            put(r, n + 2, _poly(F(kp, nn) - F(kp, n), depth))
        for c in range(n + 3, r + 1):
            put(r, c, _entry(F(i, index(c)), r == c, depth))
        if r < size:
            put(r, r + 1, OpSeries.scalar(-1, depth))
    return OpMatrix.from_rows(rows)


def _g2_matrix(depth: int) -> OpMatrix:
    t, tt, ff = Fraction(1, 3), Fraction(2, 3), Fraction(4, 9)
    Y = lambda g, c=1: _poly(LieElement.basis(g, c), depth)
    f1, f2, f3 = g2_diagonal()
    zero = OpSeries(depth=depth)
    one = OpSeries.scalar(1, depth)
    minus = OpSeries.scalar(-1, depth)
    d = OpSeries.d_power(1, depth=depth)
    rows = [
        [_entry(f1, True, depth), one, zero, zero, zero, zero, zero],
        [Y("Yb", t), _entry(f2, True, depth), one, zero, zero, zero, zero],
        [Y("Yab", t), Y("Ya"), _entry(f3, True, depth), one, zero, zero, zero],
        [Y("Ya2b", ff), Y("Yab", -tt), Y("Yb", tt), d, minus, zero, zero],
        [Y("Ya3b", -ff), Y("Ya2b", ff), zero, Y("Yb", -tt), _entry(-f3, True, depth), minus, zero],
        [Y("Y2a3b", ff), zero, Y("Ya2b", -ff), Y("Yab", tt), Y("Ya", -1), _entry(-f2, True, depth), minus],
        [zero, Y("Y2a3b", -ff), Y("Ya3b", ff), Y("Ya2b", -ff), Y("Yab", -t), Y("Yb", -t), _entry(-f1, True, depth)],
    ]
    return OpMatrix.from_rows(rows)


@dataclass(frozen=True)
class DTypePieces:
    lead: tuple
    trail: tuple
    operator: OpSeries


@lru_cache(maxsize=None)
def d_type_pieces(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> DTypePieces:
    """
    D = D_n d^{-1} D~_n + 2 sum_{j,k} (-1)^{n-j} D_{j-1} F_{k'j} D~_{k-1}.
    """
    if spec.kind != "D":
        raise GeneratorError(f"{spec.name} is not of type D")
    n = spec.rank
    # factors right of d^{-1} have order <= n
    work = depth + n
    m = build_matrix(spec, work)
    lead = leading_minors(m.submatrix(1, n))
    trail = trailing_minors(m.submatrix(n + 2, n))
    total = op_mul(op_mul(lead[n], OpSeries.d_power(-1, depth=work)), trail[n])
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            middle = classical_element("D", n, rep_prime("D", n, k), j)
            if not middle:
                continue
            term = op_mul(op_mul(lead[j - 1], OpSeries.from_poly(DiffPoly.from_lie(middle), work)), trail[k - 1])
            total = total + term.scale(2 if (n - j) % 2 == 0 else -2)
    total = total.with_depth(depth)
    logger.debug("Assembled D-type operator for n=%d (truncated=%s)", n, total.truncated)
    return DTypePieces(tuple(lead), tuple(trail), total)


def determinant(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> OpSeries:
    if spec.kind == "D":
        return d_type_pieces(spec, depth).operator
    return coldet(build_matrix(spec, depth))


def _designated(spec: LieAlgebraSpec) -> tuple:
    n = spec.rank
    if spec.kind == "A":
        return tuple(range(1, n + 1))
    if spec.kind in ("B", "C"):
        return tuple(range(2, 2 * n + 1, 2))
    if spec.kind == "D":
        return tuple(range(2, 2 * n - 1, 2)) + ("y",)
    return (2, 6)


@lru_cache(maxsize=None)
def generators(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> GeneratorSet:
    op = determinant(spec, depth)
    top = operator_order(spec)
    if op.max_degree() != top or op.coeff(top) != DiffPoly.one():
        raise GeneratorError(f"Determinant for {spec.name} is not monic of order {top}")
    first = 1 if spec.kind == "A" else 2
    if first == 2 and op.coeff(top - 1):
        raise GeneratorError(f"Nonzero w_1 for {spec.name}: {op.coeff(top - 1)!r}")
    w = {k: op.coeff(top - k) for k in range(first, top + 1)}
    y = None
    if spec.kind == "D":
        report = d_type_structure(spec, depth)
        if not report.tail_ok:
            raise GeneratorError(f"Pseudo-differential tail mismatch for {spec.name}")
        y = report.y[-1]
    logger.info("Generators for %s: %d coefficients", spec.name, len(w) + (y is not None))
    return GeneratorSet(spec.kind, spec.rank, MappingProxyType(w), y, _designated(spec), op, depth)


@lru_cache(maxsize=None)
def d_type_structure(spec: LieAlgebraSpec, depth: int = DEFAULT_TRUNCATION) -> DTypeReport:
    """y_i, y~_i, the parity relation y~_i = (-1)^i y_i and the d^{-1} tail."""
    n = spec.rank
    pieces = d_type_pieces(spec, depth)
    d_n, dbar_n = pieces.lead[n], pieces.trail[n]
    ys = tuple(d_n.coeff(n - i) for i in range(1, n + 1))
    right = right_coefficients(dbar_n)
    ybars = tuple(right.get(n - i, DiffPoly()) for i in range(1, n + 1))
    parity_ok = all(yb == y.scale((-1) ** i) for i, (y, yb) in enumerate(zip(ys, ybars), start=1))
    y_n = constant_term(d_n)
    tail = []
    tail_ok = True
    deriv = y_n
    for s in range(depth):
        expected = (y_n * deriv).scale((-1) ** (n + s))
        actual = pieces.operator.coeff(-s - 1)
        tail.append((s, expected, actual))
        if expected != actual:
            tail_ok = False
            logger.error("Tail coefficient at d^%d differs for %s", -s - 1, spec.name)
        deriv = deriv.d()
    return DTypeReport(ys, ybars, parity_ok, tuple(tail), tail_ok, pieces.operator.truncated)


def verify_membership(spec: LieAlgebraSpec, p: DiffPoly, workers: int = DEFAULT_WORKERS) -> MembershipCertificate:
    """rho{X_lambda P} = 0 for every positive basis generator X."""
    foreign = sorted(g for g in p.gens() if not spec.has_generator(g))
    if foreign:
        raise GeneratorNameError(f"{spec.name} has no generators {foreign}")
    positives = spec.basis_of_part(PLUS)
    if workers > 1 and len(positives) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda x: rho_bracket(spec, x, p), positives))
    else:
        results = [rho_bracket(spec, x, p) for x in positives]
    checks = tuple(zip(positives, results))
    witness = next(((x, r) for x, r in checks if r), None)
    if witness is not None:
        logger.debug("Membership fails in %s at %s", spec.name, witness[0])
    return MembershipCertificate(witness is None, checks, witness)


def verify_generator_set(spec: LieAlgebraSpec, gs: GeneratorSet, workers: int = DEFAULT_WORKERS) -> list:
    """[(label, certificate)] for every coefficient of the set, in order."""
    labelled = gs.items()
    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as ex:
            certs = list(ex.map(lambda item: verify_membership(spec, item[1]), labelled))
    else:
        certs = [verify_membership(spec, p) for _, p in labelled]
    return [(label, cert) for (label, _), cert in zip(labelled, certs)]


def _ratio(lin: LieElement, v: LieElement) -> Fraction | None:
    """c with lin = c * v and c != 0, else None."""
    if not lin or not v:
        return None
    g = v.gens()[0]
    c = lin.coeff(g) / v.coeff(g)
    return c if c and lin == v * c else None


def leading_part_check(spec: LieAlgebraSpec, gs: GeneratorSet) -> dict:
    """
    {label: ratio or None}: the degree-one, derivative-free part of each
    designated generator against the matching centralizer basis vector.
    """
    out = {}
    for (label, p), v in zip(gs.designated_items(), spec.f_power_basis):
        out[label] = _ratio(p.linear_part(0), v)
    return out


def e_family(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """
    [e_0, ..., e_up_to] from e(t) = t^N D(d + t^{-1}):
    e_m = sum_d c_d C(d, m - N + d) d^{m - N + d}.
    """
    bound = family_bound(spec, depth)
    if up_to > bound:
        raise GeneratorError(f"e_m for {spec.name} is available up to m={bound}, not {up_to}")
    op = determinant(spec, depth)
    top = operator_order(spec)
    out = []
    for m in range(up_to + 1):
        coeffs = {}
        for deg, c in op.items():
            j = m - top + deg
            b = gbinom(deg, j) if j >= 0 else 0
            if b:
                coeffs[j] = coeffs[j] + c.scale(b) if j in coeffs else c.scale(b)
        out.append(OpSeries(coeffs, depth))
    return out


def h_family(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """h(t) e(-t) = 1: h_m = sum_{k>=1} (-1)^{k+1} h_{m-k} e_k."""
    e = e_family(spec, up_to, depth)
    h = [OpSeries.scalar(1, depth)]
    for m in range(1, up_to + 1):
        total = OpSeries(depth=depth)
        for k in range(1, m + 1):
            term = op_mul(h[m - k], e[k])
            total = total + (term if k % 2 == 1 else -term)
        h.append(total)
    return h


def h_family_right(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """e(-t) h(t) = 1, the right inverse."""
    e = e_family(spec, up_to, depth)
    h = [OpSeries.scalar(1, depth)]
    for m in range(1, up_to + 1):
        total = OpSeries(depth=depth)
        for k in range(1, m + 1):
            term = op_mul(e[k], h[m - k])
            total = total + (term if k % 2 == 1 else -term)
        h.append(total)
    return h


def _modified_matrix(spec: LieAlgebraSpec) -> OpMatrix:
    if spec.kind == "D":
        raise GeneratorError("Chain formulas need the almost-lower-triangular matrix; type D has none")
    m = build_matrix(spec)
    m.check_shape()
    return m


def e_family_combinatorial(spec: LieAlgebraSpec, up_to: int) -> list:
    """
    e_m as a sum over blocks (i_1 >= j_1), (i_2 >= j_2), ... with
    i_k < j_{k+1}, weight (-1)^{sum(i_k - j_k)}, product a~_{i_1 j_1} a~_{i_2 j_2} ...
    """
    m = _modified_matrix(spec)
    n = m.size
    memo = {}

    def suffix(left: int, lower: int) -> OpSeries:
        if left == 0:
            return OpSeries.scalar(1)
        key = (left, lower)
        if key in memo:
            return memo[key]
        total = OpSeries()
        for j in range(lower + 1, n + 1):
            for i in range(j, min(n, j + left - 1) + 1):
                a = m.modified(i, j)
                if not a:
                    continue
                rest = suffix(left - (i - j + 1), i)
                if not rest:
                    continue
                term = op_mul(a, rest)
                total = total + (term if (i - j) % 2 == 0 else -term)
        memo[key] = total
        return total

    return [suffix(k, 0) for k in range(up_to + 1)]


def h_family_combinatorial(spec: LieAlgebraSpec, up_to: int) -> list:
    """
    h_m as a sum over blocks (i_1 >= j_1), (i_2 >= j_2), ... with
    i_k >= j_{k+1}, product a~_{i_1 j_1} a~_{i_2 j_2} ...
    """
    m = _modified_matrix(spec)
    n = m.size
    memo = {}

    def suffix(left: int, bound: int) -> OpSeries:
        if left == 0:
            return OpSeries.scalar(1)
        key = (left, bound)
        if key in memo:
            return memo[key]
        total = OpSeries()
        for j in range(1, bound + 1):
            for i in range(j, min(n, j + left - 1) + 1):
                a = m.modified(i, j)
                if not a:
                    continue
                rest = suffix(left - (i - j + 1), i)
                if rest:
                    total = total + op_mul(a, rest)
        memo[key] = total
        return total

    return [suffix(k, n) for k in range(up_to + 1)]


def macmahon_check(spec: LieAlgebraSpec, degree: int, depth: int = DEFAULT_TRUNCATION) -> bool:
    """sum_k (-1)^k h_{m-k} e_k = 0 for 1 <= m <= degree."""
    return not macmahon_residuals(spec, degree, depth)


def macmahon_residuals(spec: LieAlgebraSpec, degree: int, depth: int = DEFAULT_TRUNCATION) -> dict:
    """{m: nonzero residual operator}; empty when the identity holds."""
    e = e_family(spec, degree, depth)
    if spec.kind == "D":
        h = h_family_right(spec, degree, depth)
    else:
        h = h_family_combinatorial(spec, degree)
    failures = {}
    for m in range(1, degree + 1):
        total = OpSeries(depth=depth)
        for k in range(m + 1):
            term = op_mul(h[m - k], e[k])
            total = total + (term if k % 2 == 0 else -term)
        if total:
            logger.debug("MacMahon residual at m=%d for %s", m, spec.name)
            failures[m] = total
    return failures


def coefficient_family(op: OpSeries) -> dict:
    """{i: x_i} with op = sum_i x_i d^i."""
    return {k: c for k, c in op.items()}


def h_constants(spec: LieAlgebraSpec, up_to: int, depth: int = DEFAULT_TRUNCATION) -> list:
    """
    [h_{0,0}, ..., h_{up_to,0}], the constant terms of the h-family.
    Only defined for the classical types, where each constant term lies in W(g).
    """
    if spec.kind == "G2":
        raise GeneratorError("h-constants are only defined for types A, B, C and D")
    return [constant_term(h) for h in h_family(spec, up_to, depth)]
