"""
Operators over V(p): V(p)[d] and its pseudo-differential extension, and column
determinants of almost-lower-triangular operator matrices.

Coefficients always sit to the left of the powers of d. Pseudo-differential
series are cut below degree -depth; the `truncated` flag records whether
anything nonzero was cut.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from .config import DEFAULT_TRUNCATION
from .diffpoly import DiffPoly

logger = logging.getLogger(__name__)


class ShapeError(ValueError):
    pass


class PseudoInputError(ValueError):
    pass


def gbinom(k: int, s: int) -> int:
    """Binomial coefficient C(k, s) for any integer k."""
    if s < 0:
        return 0
    if k >= 0:
        return comb(k, s) if s <= k else 0
    return (-1) ** s * comb(s - k - 1, s)


class OpSeries:
    __slots__ = ("_coeffs", "depth", "truncated")

    def __init__(self, coeffs: dict | None = None, depth: int = DEFAULT_TRUNCATION, truncated: bool = False):
        kept = {}
        for k, c in (coeffs or {}).items():
            if not c:
                continue
            if k < -depth:
                truncated = True
                continue
            kept[k] = c
        self._coeffs = {k: kept[k] for k in sorted(kept, reverse=True)}
        self.depth = depth
        self.truncated = truncated

    @classmethod
    def scalar(cls, c, depth: int = DEFAULT_TRUNCATION) -> "OpSeries":
        return cls({0: DiffPoly.const(c)}, depth)

    @classmethod
    def from_poly(cls, p: DiffPoly, depth: int = DEFAULT_TRUNCATION) -> "OpSeries":
        return cls({0: p}, depth)

    @classmethod
    def d_power(cls, k: int, coeff=1, depth: int = DEFAULT_TRUNCATION) -> "OpSeries":
        return cls({k: DiffPoly.const(coeff)}, depth)

    @classmethod
    def first_order(cls, p: DiffPoly, depth: int = DEFAULT_TRUNCATION) -> "OpSeries":
        """d + p"""
        return cls({1: DiffPoly.one(), 0: p}, depth)

    def items(self):
        return self._coeffs.items()

    def coeff(self, k: int) -> DiffPoly:
        return self._coeffs.get(k, DiffPoly())

    def max_degree(self) -> int | None:
        return next(iter(self._coeffs), None)

    def min_degree(self) -> int | None:
        return min(self._coeffs, default=None)

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def is_differential(self) -> bool:
        low = self.min_degree()
        return low is None or low >= 0

    def central_constant(self) -> Fraction | None:
        """The scalar c if the operator is multiplication by a constant c, else None."""
        if not self._coeffs:
            return Fraction(0)
        if set(self._coeffs) == {0} and self._coeffs[0].is_constant():
            return self._coeffs[0].constant_value()
        return None

    def __add__(self, other: "OpSeries") -> "OpSeries":
        out = dict(self._coeffs)
        for k, c in other.items():
            out[k] = out[k] + c if k in out else c
        return OpSeries(out, min(self.depth, other.depth), self.truncated or other.truncated)

    def __neg__(self) -> "OpSeries":
        return OpSeries({k: -c for k, c in self.items()}, self.depth, self.truncated)

    def __sub__(self, other: "OpSeries") -> "OpSeries":
        return self + (-other)

    def scale(self, c) -> "OpSeries":
        return OpSeries({k: v.scale(c) for k, v in self.items()}, self.depth, self.truncated)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, DiffPoly):
            other = OpSeries.from_poly(other, self.depth)
        if not isinstance(other, OpSeries):
            return NotImplemented
        return op_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, DiffPoly):
            return op_mul(OpSeries.from_poly(other, self.depth), self)
        return NotImplemented

    def map_coefficients(self, fn) -> "OpSeries":
        return OpSeries({k: fn(v) for k, v in self.items()}, self.depth, self.truncated)

    def with_depth(self, depth: int) -> "OpSeries":
        return OpSeries(dict(self._coeffs), depth, self.truncated)

    def __eq__(self, other):
        if not isinstance(other, OpSeries):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        from .codec import format_op
        return f"OpSeries({format_op(self)})"


def op_mul(a: OpSeries, b: OpSeries) -> OpSeries:
    """
    Product in V(p)((d^-1)) using d^k g = sum_s C(k, s) g^{(s)} d^{k-s},
    k any integer, kept down to degree -depth.
    """
    depth = min(a.depth, b.depth)
    truncated = a.truncated or b.truncated
    derivs = {}

    def deriv(j: int, s: int) -> DiffPoly:
        chain = derivs.setdefault(j, [b.coeff(j)])
        while len(chain) <= s:
            chain.append(chain[-1].d())
        return chain[s]

    out = {}
    for i, ai in a.items():
        for j, bj in b.items():
            s_top = i + j + depth
            if i >= 0:
                s_top = min(s_top, i)
            for s in range(0, s_top + 1):
                g = deriv(j, s)
                if not g:
                    break
                coeff = gbinom(i, s)
                if not coeff:
                    continue
                deg = i + j - s
                term = (ai * g).scale(coeff)
                out[deg] = out[deg] + term if deg in out else term
            s_next = max(s_top + 1, 0)
            if i < 0 or s_next <= i:
                dropped = bj if s_next == 0 else (None if bj.is_constant() else bj)
                if dropped:
                    truncated = True
    if truncated and not (a.truncated or b.truncated):
        logger.debug("Operator product truncated below degree -%d", depth)
    return OpSeries(out, depth, truncated)


def constant_term(a: OpSeries) -> DiffPoly:
    """The result of applying a differential operator to 1."""
    if not a.is_differential():
        raise PseudoInputError("constant_term needs a purely differential operator")
    return a.coeff(0)


def lambda_shift(a: OpSeries) -> dict:
    """Coefficients of lambda^k in (a with d -> d + lambda) applied to 1."""
    if not a.is_differential():
        raise PseudoInputError("lambda_shift needs a purely differential operator")
    return {k: c for k, c in a.items()}


def right_coefficients(a: OpSeries) -> dict:
    """{j: r_j} with a = sum_j d^j r_j."""
    if not a.is_differential():
        raise PseudoInputError("right_coefficients needs a purely differential operator")
    top = a.max_degree()
    if top is None:
        return {}
    out = {}
    for j in range(top + 1):
        total = DiffPoly()
        for k in range(j, top + 1):
            c = a.coeff(k)
            if c:
                total = total + c.derivative(k - j).scale((-1) ** (k - j) * comb(k, j))
        if total:
            out[j] = total
    return out


def from_right_coefficients(coeffs: dict, depth: int = DEFAULT_TRUNCATION) -> OpSeries:
    total = OpSeries(depth=depth)
    for j, r in coeffs.items():
        total = total + op_mul(OpSeries.d_power(j, depth=depth), OpSeries.from_poly(r, depth))
    return total


@dataclass(frozen=True)
class OpMatrix:
    rows: tuple

    @classmethod
    def from_rows(cls, rows) -> "OpMatrix":
        rows = tuple(tuple(r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ShapeError("Operator matrix must be square")
        return cls(rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> OpSeries:
        return self.rows[i - 1][j - 1]

    @property
    def almost_lower_triangular(self) -> bool:
        n = self.size
        return all(not self.entry(i, j) for i in range(1, n + 1) for j in range(i + 2, n + 1))

    @property
    def central_superdiagonal(self) -> bool:
        return all(self.entry(i, i + 1).central_constant() is not None for i in range(1, self.size))

    @property
    def differential(self) -> bool:
        return all(x.is_differential() for row in self.rows for x in row)

    def check_shape(self) -> None:
        if not self.almost_lower_triangular:
            raise ShapeError("Entries above the superdiagonal must vanish")
        if not self.central_superdiagonal:
            raise ShapeError("Superdiagonal entries must be central constants")
        if not self.differential:
            raise ShapeError("Entries must be purely differential operators")

    def superdiagonal(self, i: int) -> Fraction:
        return self.entry(i, i + 1).central_constant()

    def modified(self, i: int, j: int) -> OpSeries:
        """a~_ij = a_ij * a_{j,j+1} ... a_{i-1,i} for i >= j."""
        factor = Fraction(1)
        for l in range(j, i):
            factor *= self.superdiagonal(l)
        entry = self.entry(i, j)
        return entry if factor == 1 else entry.scale(factor)

    def submatrix(self, start: int, k: int) -> "OpMatrix":
        return OpMatrix(tuple(tuple(row[start - 1:start - 1 + k]) for row in self.rows[start - 1:start - 1 + k]))

    @property
    def depth(self) -> int:
        return min((x.depth for row in self.rows for x in row), default=DEFAULT_TRUNCATION)


def leading_minors(m: OpMatrix) -> list:
    """[D_0, ..., D_n]: D_k = sum_j (-1)^{k-j} D_{j-1} a~_{kj}."""
    m.check_shape()
    depth = m.depth
    minors = [OpSeries.scalar(1, depth)]
    for k in range(1, m.size + 1):
        total = OpSeries(depth=depth)
        for j in range(1, k + 1):
            a = m.modified(k, j)
            if not a:
                continue
            term = op_mul(minors[j - 1], a)
            total = total + (term if (k - j) % 2 == 0 else -term)
        minors.append(total)
    return minors


def trailing_minors(m: OpMatrix) -> list:
    """[D~_0, ..., D~_n] for the trailing k x k blocks, by the mirrored recurrence."""
    m.check_shape()
    n = m.size
    depth = m.depth
    minors = [OpSeries.scalar(1, depth)]
    for k in range(1, n + 1):
        start = n - k + 1
        total = op_mul(m.entry(start, start), minors[k - 1])
        for i in range(2, k + 1):
            a = m.modified(start + i - 1, start)
            if not a:
                continue
            term = op_mul(a, minors[k - i])
            total = total + (term if (1 + i) % 2 == 0 else -term)
        minors.append(total)
    return minors


def coldet(m: OpMatrix) -> OpSeries:
    det = leading_minors(m)[-1]
    logger.debug("Column determinant of size %d: degree %s, %d coefficients",
                 m.size, det.max_degree(), len(list(det.items())))
    return det


def minor_expansion(m: OpMatrix, p: int) -> OpSeries:
    """det = D_p D~_{n-p} + sum_{j<=p<i} (-1)^{i+j} D_{j-1} a~_ij D~_{n-i}."""
    n = m.size
    if not 0 <= p <= n:
        raise ShapeError(f"Split index {p} outside 0..{n}")
    lead = leading_minors(m)
    trail = trailing_minors(m)
    total = op_mul(lead[p], trail[n - p])
    for j in range(1, p + 1):
        for i in range(p + 1, n + 1):
            a = m.modified(i, j)
            if not a:
                continue
            term = op_mul(op_mul(lead[j - 1], a), trail[n - i])
            total = total + (term if (i + j) % 2 == 0 else -term)
    return total


def chain_expansion(m: OpMatrix) -> OpSeries:
    """
    Explicit sum over chains i_1 < ... < i_k < n:
    (-1)^{n-k-1} a~_{i_1,1} a~_{i_2,i_1+1} ... a~_{n,i_k+1}.
    """
    m.check_shape()
    n = m.size
    depth = m.depth
    total = OpSeries(depth=depth)
    for k in range(0, n):
        for chain in combinations(range(1, n), k):
            rows = list(chain) + [n]
            cols = [1] + [i + 1 for i in chain]
            term = OpSeries.scalar(1, depth)
            for r, c in zip(rows, cols):
                term = op_mul(term, m.modified(r, c))
                if not term:
                    break
            if term:
                total = total + (term if (n - k - 1) % 2 == 0 else -term)
    return total
