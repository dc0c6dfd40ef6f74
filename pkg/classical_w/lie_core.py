"""
Lie algebra data for gl_n, o_{2n+1}, sp_{2n}, o_{2n} and g_2.

Each LieAlgebraSpec carries the basis, structure constants, the invariant form,
the triangular decomposition, the principal sl2-triple and the Chevalley data.
Specs are built once per (kind, rank) and shared.
"""
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

logger = logging.getLogger(__name__)

KINDS = ("A", "B", "C", "D", "G2")
MIN_RANK = {"A": 1, "B": 1, "C": 1, "D": 2}

G2_LABELS = (
    "Xa", "Xb", "Xab", "Xa2b", "Xa3b", "X2a3b",
    "Ha", "Hb",
    "Ya", "Yb", "Yab", "Ya2b", "Ya3b", "Y2a3b",
)

PLUS, CARTAN, MINUS = "plus", "cartan", "minus"

_PAIR_RE = re.compile(r"^([EF])\[(\d+),(\d+)\]$")


class RankError(ValueError):
    pass


class EmbeddingError(RuntimeError):
    pass


class GeneratorNameError(ValueError):
    pass


def pair_name(letter: str, i: int, j: int) -> str:
    return f"{letter}[{i},{j}]"


@lru_cache(maxsize=None)
def parse_gen(name: str) -> tuple:
    """
    Split a generator name into its parts.
    "E[2,1]" -> ("E", 2, 1), "F[3,1]" -> ("F", 3, 1), "Ya2b" -> ("G", "Ya2b").
    """
    m = _PAIR_RE.match(name)
    if m:
        return (m.group(1), int(m.group(2)), int(m.group(3)))
    if name in G2_LABELS:
        return ("G", name)
    raise GeneratorNameError(f"Unrecognized generator name: {name!r}")


@lru_cache(maxsize=None)
def gen_sort_key(name: str) -> tuple:
    parsed = parse_gen(name)
    if parsed[0] == "G":
        return (1, G2_LABELS.index(name), 0)
    return (0, parsed[1], parsed[2])


class LieElement:
    """Finite linear combination of basis generators with rational coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs=None):
        clean = {}
        for gen, c in (coeffs or {}).items():
            c = Fraction(c)
            if c:
                clean[gen] = clean.get(gen, Fraction(0)) + c
        self._coeffs = {g: clean[g] for g in sorted(clean, key=gen_sort_key) if clean[g]}

    @classmethod
    def basis(cls, gen: str, coeff=1) -> "LieElement":
        return cls({gen: coeff})

    @classmethod
    def zero(cls) -> "LieElement":
        return cls()

    def items(self):
        return self._coeffs.items()

    def gens(self):
        return tuple(self._coeffs)

    def coeff(self, gen: str) -> Fraction:
        return self._coeffs.get(gen, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def __bool__(self):
        return bool(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def __add__(self, other: "LieElement") -> "LieElement":
        out = dict(self._coeffs)
        for g, c in other.items():
            out[g] = out.get(g, Fraction(0)) + c
        return LieElement(out)

    def __neg__(self) -> "LieElement":
        return LieElement({g: -c for g, c in self.items()})

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + (-other)

    def __mul__(self, scalar) -> "LieElement":
        scalar = Fraction(scalar)
        return LieElement({g: c * scalar for g, c in self.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LieElement):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self):
        return hash(tuple(self._coeffs.items()))

    def __repr__(self):
        if not self._coeffs:
            return "LieElement(0)"
        body = " + ".join(f"{c}*{g}" for g, c in self.items())
        return f"LieElement({body})"


# Sparse matrices of the defining representation: {(row, col): Fraction}, 1-based.

def _mat_add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + scale * v
        if not out[k]:
            del out[k]
    return out


def _mat_mul(a: dict, b: dict) -> dict:
    by_row = {}
    for (k, j), v in b.items():
        by_row.setdefault(k, []).append((j, v))
    out = {}
    for (i, k), u in a.items():
        for j, v in by_row.get(k, ()):
            out[(i, j)] = out.get((i, j), Fraction(0)) + u * v
    return {k: v for k, v in out.items() if v}


def _mat_trace(a: dict) -> Fraction:
    return sum((v for (i, j), v in a.items() if i == j), Fraction(0))


def matrix_commutator(a: dict, b: dict) -> dict:
    return _mat_add(_mat_mul(a, b), _mat_mul(b, a), scale=-1)


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    kind: str
    rank: int
    basis: tuple
    bracket_table: MappingProxyType
    form_table: MappingProxyType
    part: MappingProxyType
    f: LieElement
    e: LieElement
    h: LieElement
    cartan_matrix: tuple
    epsilons: tuple
    chevalley_e: tuple
    chevalley_f: tuple
    cartan_coords: tuple
    f_power_basis: tuple
    realization: MappingProxyType
    rep_size: int

    @property
    def simple_pos(self) -> tuple:
        """Generator ids of the simple positive root vectors."""
        return tuple(el.gens()[0] for el in self.chevalley_e)

    @property
    def name(self) -> str:
        return "G2" if self.kind == "G2" else f"{self.kind}{self.rank}"

    def position(self, gen: str) -> int:
        return self._positions()[gen]

    def has_generator(self, gen: str) -> bool:
        return gen in self._positions()

    def _positions(self) -> dict:
        cached = self.__dict__.get("_pos_cache")
        if cached is None:
            cached = {g: k for k, g in enumerate(self.basis)}
            object.__setattr__(self, "_pos_cache", cached)
        return cached

    def part_of(self, gen: str) -> str:
        return self.part[gen]

    def basis_of_part(self, which: str) -> tuple:
        return tuple(g for g in self.basis if self.part[g] == which)

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        out = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for g, c in self.bracket_table.get((a, b), LieElement()).items():
                    out[g] = out.get(g, Fraction(0)) + ca * cb * c
        return LieElement(out)

    def form_value(self, x: LieElement, y: LieElement) -> Fraction:
        total = Fraction(0)
        for a, ca in x.items():
            for b, cb in y.items():
                total += ca * cb * self.form_table.get((a, b), Fraction(0))
        return total

    def rho_gen(self, gen: str) -> tuple:
        projected = None if self.part[gen] == PLUS else gen
        return projected, self.form_value(self.f, LieElement.basis(gen))

    def matrix_of(self, x: LieElement) -> dict:
        out = {}
        for g, c in x.items():
            out = _mat_add(out, self.realization[g], scale=c)
        return out

    def from_matrix(self, m: dict) -> LieElement:
        """Re-express a matrix of the defining representation in the basis."""
        if self.kind == "G2":
            images = [self.realization[g] for g in self.basis]
            keys = sorted(set().union(*images, m))
            columns = [{k: img.get(k, Fraction(0)) for k in keys} for img in images]
            coords = _solve_in_span(columns, {k: m.get(k, Fraction(0)) for k in keys}, keys)
            return LieElement(dict(zip(self.basis, coords)))
        out = {}
        for g in self.basis:
            _, i, j = parse_gen(g)
            c = m.get((i, j), Fraction(0))
            if self.kind == "C" and j == self.rep_size + 1 - i:
                c = c / 2
            if c:
                out[g] = c
        element = LieElement(out)
        if self.matrix_of(element) != {k: v for k, v in m.items() if v}:
            raise EmbeddingError(f"Matrix does not lie in {self.name}")
        return element


def bracket(spec: LieAlgebraSpec, x: LieElement, y: LieElement) -> LieElement:
    return spec.bracket(x, y)


def form_value(spec: LieAlgebraSpec, x: LieElement, y: LieElement) -> Fraction:
    return spec.form_value(x, y)


def rho_gen(spec: LieAlgebraSpec, gen: str) -> tuple:
    return spec.rho_gen(gen)


def _solve_in_span(columns: list, target: dict, keys: list) -> list:
    """Exact Gauss-Jordan solve of sum_c x_c * columns[c] = target."""
    m = len(columns)
    rows = [[col[k] for col in columns] + [target[k]] for k in keys]
    r = 0
    for c in range(m):
        piv = next((k for k in range(r, len(rows)) if rows[k][c] != 0), None)
        if piv is None:
            raise EmbeddingError("Embedded basis images are linearly dependent")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                factor = rows[k][c]
                rows[k] = [a - factor * b for a, b in zip(rows[k], rows[r])]
        r += 1
    if any(rows[k][m] for k in range(r, len(rows))):
        raise EmbeddingError("Element leaves the span of the embedded basis")
    return [rows[k][m] for k in range(m)]


def _standard_cartan(n: int) -> list:
    return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]


def _cartan_coords(table: dict, chev_e, chev_f) -> tuple:
    """[e_i, f_i] for each Chevalley pair, read from the bracket table."""
    coords = []
    for ei, fi in zip(chev_e, chev_f):
        out = {}
        for a, ca in ei.items():
            for b, cb in fi.items():
                for g, c in table.get((a, b), LieElement()).items():
                    out[g] = out.get(g, Fraction(0)) + ca * cb * c
        coords.append(LieElement(out))
    return tuple(coords)


def _finish(kind, rank, basis, table, form, part, f, e, h, cartan, eps,
            chev_e, chev_f, fpow, realization, rep_size) -> LieAlgebraSpec:
    spec = LieAlgebraSpec(
        kind=kind,
        rank=rank,
        basis=tuple(basis),
        bracket_table=MappingProxyType(table),
        form_table=MappingProxyType(form),
        part=MappingProxyType(part),
        f=f,
        e=e,
        h=h,
        cartan_matrix=tuple(tuple(int(x) for x in row) for row in cartan),
        epsilons=tuple(Fraction(x) for x in eps),
        chevalley_e=tuple(chev_e),
        chevalley_f=tuple(chev_f),
        cartan_coords=_cartan_coords(table, chev_e, chev_f),
        f_power_basis=tuple(fpow),
        realization=MappingProxyType(realization),
        rep_size=rep_size,
    )
    logger.debug("Built %s: dim %d, %d positive generators", spec.name, len(basis),
                 len(spec.basis_of_part(PLUS)))
    return spec


def _trace_form(basis, realization, scale) -> dict:
    form = {}
    for a in basis:
        for b in basis:
            v = scale * _mat_trace(_mat_mul(realization[a], realization[b]))
            if v:
                form[(a, b)] = v
    return form


def _matrix_power(m: dict, k: int, size: int) -> dict:
    out = {(i, i): Fraction(1) for i in range(1, size + 1)}
    for _ in range(k):
        out = _mat_mul(out, m)
    return out


def _part_of_pair(i: int, j: int) -> str:
    if i < j:
        return PLUS
    if i == j:
        return CARTAN
    return MINUS


def _build_gl(n: int) -> LieAlgebraSpec:
    E = lambda i, j: pair_name("E", i, j)
    basis = [E(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    table = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                for l in range(1, n + 1):
                    out = {}
                    if j == k:
                        out[E(i, l)] = out.get(E(i, l), 0) + 1
                    if l == i:
                        out[E(k, j)] = out.get(E(k, j), 0) - 1
                    el = LieElement(out)
                    if el:
                        table[(E(i, j), E(k, l))] = el
    realization = {E(i, j): {(i, j): Fraction(1)} for i in range(1, n + 1) for j in range(1, n + 1)}
    form = _trace_form(basis, realization, Fraction(1))
    part = {E(i, j): _part_of_pair(i, j) for i in range(1, n + 1) for j in range(1, n + 1)}
    f = LieElement({E(i + 1, i): 1 for i in range(1, n)})
    e = LieElement({E(i, i + 1): i * (n - i) for i in range(1, n)})
    h = LieElement({E(i, i): n - 2 * i + 1 for i in range(1, n + 1)})
    chev_e = [LieElement.basis(E(i, i + 1)) for i in range(1, n)]
    chev_f = [LieElement.basis(E(i + 1, i)) for i in range(1, n)]
    f_matrix = {(i + 1, i): Fraction(1) for i in range(1, n)}
    fpow = []
    for k in range(n):
        m = _matrix_power(f_matrix, k, n)
        fpow.append(LieElement({E(i, j): v for (i, j), v in m.items()}))
    return _finish("A", n, basis, table, form, part, f, e, h, _standard_cartan(n - 1),
                   [1] * (n - 1), chev_e, chev_f, fpow, realization, n)


class _ClassicalIndex:
    """Index arithmetic for o_N and sp_N with i' = N + 1 - i."""

    def __init__(self, kind: str, n: int):
        self.kind = kind
        self.n = n
        self.size = 2 * n + 1 if kind == "B" else 2 * n

    def prime(self, i: int) -> int:
        return self.size + 1 - i

    def eps(self, i: int) -> int:
        return 1 if i <= self.n else -1

    def canonical(self, i: int, j: int):
        """
        (sign, (i, j)) with F_ij = sign * F_canonical, or None when F_ij vanishes.
        """
        ip, jp = self.prime(i), self.prime(j)
        if j == ip:
            if self.kind == "C":
                return 1, (i, j)
            return None
        sign = -self.eps(i) * self.eps(j) if self.kind == "C" else -1
        if (i, j) <= (jp, ip):
            return 1, (i, j)
        return sign, (jp, ip)

    def element(self, i: int, j: int, coeff=1) -> LieElement:
        found = self.canonical(i, j)
        if found is None:
            return LieElement()
        sign, (a, b) = found
        return LieElement({pair_name("F", a, b): sign * Fraction(coeff)})

    def pairs(self) -> list:
        out = []
        for i in range(1, self.size + 1):
            for j in range(1, self.size + 1):
                found = self.canonical(i, j)
                if found is not None and found[1] == (i, j):
                    out.append((i, j))
        return out

    def matrix(self, i: int, j: int) -> dict:
        ip, jp = self.prime(i), self.prime(j)
        sign = self.eps(i) * self.eps(j) if self.kind == "C" else 1
        return _mat_add({(i, j): Fraction(1)}, {(jp, ip): Fraction(1)}, scale=-sign)

    def bracket_pairs(self, ij: tuple, kl: tuple) -> LieElement:
        i, j = ij
        k, l = kl
        ip, jp = self.prime(i), self.prime(j)
        out = LieElement()
        if k == j:
            out = out + self.element(i, l)
        if i == l:
            out = out - self.element(k, j)
        sign = self.eps(i) * self.eps(j) if self.kind == "C" else 1
        if k == ip:
            out = out - self.element(jp, l, sign)
        if l == jp:
            out = out + self.element(k, ip, sign)
        return out


def _build_classical(kind: str, n: int) -> LieAlgebraSpec:
    idx = _ClassicalIndex(kind, n)
    F = idx.element
    pairs = idx.pairs()
    basis = [pair_name("F", i, j) for i, j in pairs]
    table = {}
    for ij in pairs:
        for kl in pairs:
            el = idx.bracket_pairs(ij, kl)
            if el:
                table[(pair_name("F", *ij), pair_name("F", *kl))] = el
    realization = {pair_name("F", i, j): idx.matrix(i, j) for i, j in pairs}
    form = _trace_form(basis, realization, Fraction(1, 2))
    part = {pair_name("F", i, j): _part_of_pair(i, j) for i, j in pairs}
    nprime = idx.prime(n)
    cartan = _standard_cartan(n)

    if kind == "B":
        f = _sum(F(i + 1, i) for i in range(1, n + 1))
        e = _sum(F(i, i + 1, i * (2 * n - i + 1)) for i in range(1, n + 1))
        h = _sum(F(i, i, 2 * (n - i + 1)) for i in range(1, n + 1))
        chev_e = [F(i, i + 1) for i in range(1, n)] + [F(n, n + 1, 2)]
        chev_f = [F(i + 1, i) for i in range(1, n + 1)]
        if n >= 2:
            cartan[n - 1][n - 2] = -2
        eps = [1] * (n - 1) + [2]
    elif kind == "C":
        f = _sum(F(i + 1, i) for i in range(1, n)) + F(nprime, n, Fraction(1, 2))
        e = _sum(F(i, i + 1, i * (2 * n - i)) for i in range(1, n)) + F(n, nprime, Fraction(n * n, 2))
        h = _sum(F(i, i, 2 * n - 2 * i + 1) for i in range(1, n + 1))
        chev_e = [F(i, i + 1) for i in range(1, n)] + [F(n, nprime, Fraction(1, 2))]
        chev_f = [F(i + 1, i) for i in range(1, n)] + [F(nprime, n, Fraction(1, 2))]
        if n >= 2:
            cartan[n - 2][n - 1] = -2
        eps = [1] * (n - 1) + [Fraction(1, 2)]
    else:
        f = _sum(F(i + 1, i) for i in range(1, n)) + F(nprime, n - 1)
        e = _sum(F(i, i + 1, i * (2 * n - i - 1)) for i in range(1, n - 1))
        e = e + (F(n - 1, n) + F(n - 1, nprime)) * Fraction(n * n - n, 2)
        h = _sum(F(i, i, 2 * (n - i)) for i in range(1, n))
        chev_e = [F(i, i + 1) for i in range(1, n)] + [F(n - 1, nprime)]
        chev_f = [F(i + 1, i) for i in range(1, n)] + [F(nprime, n - 1)]
        cartan[n - 1][n - 2] = 0
        cartan[n - 2][n - 1] = 0
        if n >= 3:
            cartan[n - 1][n - 3] = -1
            cartan[n - 3][n - 1] = -1
        eps = [1] * n

    size = idx.size
    f_matrix = {}
    for g, c in f.items():
        f_matrix = _mat_add(f_matrix, realization[g], scale=c)
    odd_count = n - 1 if kind == "D" else n
    fpow = []
    for j in range(1, odd_count + 1):
        m = _matrix_power(f_matrix, 2 * j - 1, size)
        out = {}
        for i, jj in pairs:
            c = m.get((i, jj), Fraction(0))
            if kind == "C" and jj == idx.prime(i):
                c = c / 2
            if c:
                out[pair_name("F", i, jj)] = c
        fpow.append(LieElement(out))
    if kind == "D":
        fpow.append(F(n, 1) - F(nprime, 1))
    return _finish(kind, n, basis, table, form, part, f, e, h, cartan, eps,
                   chev_e, chev_f, fpow, realization, size)


def _sum(elements) -> LieElement:
    total = LieElement()
    for el in elements:
        total = total + el
    return total


def g2_images() -> dict:
    """Images of the g_2 basis inside o_8 (i' = 9 - i)."""
    F = _ClassicalIndex("D", 4).element
    return {
        "Xa": -F(2, 3),
        "Xb": -F(1, 2) - F(3, 4) - F(3, 5),
        "Xab": -F(1, 3) + F(2, 4) + F(2, 5),
        "Xa2b": -F(1, 4) - F(1, 5) - F(2, 6),
        "Xa3b": F(1, 6),
        "X2a3b": -F(1, 7),
        "Ha": -F(2, 2) + F(3, 3),
        "Hb": -F(1, 1) + F(2, 2) - F(3, 3, 2),
        "Ya": F(3, 2),
        "Yb": F(2, 1) + F(4, 3) + F(5, 3),
        "Yab": F(3, 1) - F(4, 2) - F(5, 2),
        "Ya2b": F(4, 1) + F(5, 1) + F(6, 2),
        "Ya3b": -F(6, 1),
        "Y2a3b": F(7, 1),
    }


def g2_diagonal() -> tuple:
    """Cartan parts F~_11, F~_22, F~_33 of the g_2 determinant, in Ha, Hb."""
    return (
        LieElement({"Ha": -1, "Hb": Fraction(-2, 3)}),
        LieElement({"Ha": -1, "Hb": Fraction(-1, 3)}),
        LieElement({"Hb": Fraction(-1, 3)}),
    )


def classical_element(kind: str, n: int, i: int, j: int, coeff=1) -> LieElement:
    """F_ij of o_{2n+1}, sp_{2n} or o_{2n}, normalized to its canonical representative."""
    return _ClassicalIndex(kind, n).element(i, j, coeff)


def canonical_gen(spec: "LieAlgebraSpec", name: str) -> tuple:
    """
    (sign, name) with X_name = sign * X_canonical in `spec`.
    Raises GeneratorNameError for names outside the basis and for a vanishing F_{i,i'}.
    """
    parsed = parse_gen(name)
    sign = Fraction(1)
    if spec.kind in ("B", "C", "D") and parsed[0] == "F":
        _, i, j = parsed
        found = _ClassicalIndex(spec.kind, spec.rank).canonical(i, j)
        if found is None:
            raise GeneratorNameError(f"{name} vanishes in {spec.name}")
        sign, (a, b) = found
        sign, name = Fraction(sign), pair_name("F", a, b)
    if not spec.has_generator(name):
        raise GeneratorNameError(f"{name} is not a generator of {spec.name}")
    return sign, name


def rep_prime(kind: str, n: int, i: int) -> int:
    return _ClassicalIndex(kind, n).prime(i)


def _build_g2() -> LieAlgebraSpec:
    o8 = build_spec("D", 4)
    images = g2_images()
    basis = list(G2_LABELS)
    keys = list(o8.basis)
    columns = [{k: images[g].coeff(k) for k in keys} for g in basis]

    def re_express(el: LieElement) -> LieElement:
        stray = [g for g in el.gens() if g not in keys]
        if stray:
            raise EmbeddingError(f"Unexpected o_8 generators {stray}")
        coords = _solve_in_span(columns, {k: el.coeff(k) for k in keys}, keys)
        return LieElement(dict(zip(basis, coords)))

    table = {}
    for a in basis:
        for b in basis:
            try:
                el = re_express(o8.bracket(images[a], images[b]))
            except EmbeddingError as e:
                raise EmbeddingError(f"[{a},{b}] leaves the embedded g_2: {e}") from e
            if el:
                table[(a, b)] = el

    def ad_trace(a: str, b: str) -> Fraction:
        total = Fraction(0)
        for c in basis:
            inner = table.get((b, c), LieElement())
            for g, x in inner.items():
                total += x * table.get((a, g), LieElement()).coeff(c)
        return total

    killing = {(a, b): ad_trace(a, b) for a in basis for b in basis}
    scale = Fraction(-1) / killing[("Xa", "Ya")]
    form = {k: v * scale for k, v in killing.items() if v}
    part = {g: PLUS if g.startswith("X") else (CARTAN if g.startswith("H") else MINUS) for g in basis}
    el = LieElement.basis
    f = el("Ya") + el("Yb")
    e = el("Xa", -10) + el("Xb", -6)
    h = el("Ha", -10) + el("Hb", -6)
    chev_e = [el("Xa", -1), el("Xb", -1)]
    chev_f = [el("Ya"), el("Yb")]
    realization = {g: o8.matrix_of(images[g]) for g in basis}
    fpow = [f, el("Y2a3b")]
    return _finish("G2", 2, basis, table, form, part, f, e, h, [[2, -1], [-3, 2]], [1, 3],
                   chev_e, chev_f, fpow, realization, 8)


def build_spec(kind: str, n: int = 2) -> LieAlgebraSpec:
    """Shared spec for (kind, n); n is ignored for G2."""
    if kind not in KINDS:
        raise RankError(f"Unknown Lie type {kind!r}; expected one of {', '.join(KINDS)}")
    return _cached_spec(kind, 2 if kind == "G2" else n)


@lru_cache(maxsize=None)
def _cached_spec(kind: str, n: int) -> LieAlgebraSpec:
    if kind == "G2":
        return _build_g2()
    if not isinstance(n, int) or n < MIN_RANK[kind]:
        raise RankError(f"Rank {n} out of range for type {kind} (minimum {MIN_RANK[kind]})")
    if kind == "A":
        return _build_gl(n)
    return _build_classical(kind, n)
