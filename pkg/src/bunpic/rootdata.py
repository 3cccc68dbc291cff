"""Root data of split connected reductive groups.

A root datum of rank ``r`` is stored as two ``l x r`` integer matrices: the
rows of ``simple_roots`` are characters (coordinates dual to the chosen basis
of the cocharacter lattice) and the rows of ``simple_coroots`` are
cocharacters.  The Cartan matrix is ``C[i][j] = <coroot_i, root_j>``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import factorial, gcd, lcm
from typing import Any, Sequence

from .abelian import (
    FgAbGroup,
    IntMatrix,
    hnf_basis,
    kernel_basis,
    rank as matrix_rank,
    saturation,
    solve_columns,
)

__all__ = [
    "RootDatumError",
    "WeylCapExceeded",
    "SimpleFactor",
    "RootDatum",
    "DerivedLattices",
    "Pi1",
    "cartan_matrix",
    "build_classical",
    "build_torus",
    "build_gl",
    "build_sl",
    "build_pgl",
    "build_sp",
    "build_so",
    "product",
    "from_raw",
    "from_json",
    "to_json",
    "derived_lattices",
    "pi1",
    "weyl_reflections",
    "weyl_enumerate",
    "root_system",
]


class RootDatumError(ValueError):
    """Invalid root datum or invalid request for a named type."""


class WeylCapExceeded(RuntimeError):
    """Raised when Weyl group enumeration would exceed the given cap."""


VALID_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 4}
EXCEPTIONAL_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


def _check_type(series: str, rank: int) -> None:
    if series in VALID_MIN_RANK:
        if rank < VALID_MIN_RANK[series]:
            raise RootDatumError(f"type {series}{rank} is not a valid finite type")
    elif series in EXCEPTIONAL_RANKS:
        if rank not in EXCEPTIONAL_RANKS[series]:
            raise RootDatumError(f"type {series}{rank} is not a valid finite type")
    else:
        raise RootDatumError(f"unknown series {series!r}")


def cartan_matrix(series: str, rank: int) -> IntMatrix:
    """Cartan matrix ``C[i][j] = <coroot_i, root_j>`` in Bourbaki numbering."""
    series = series.upper()
    _check_type(series, rank)
    n = rank
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, cij=-1, cji=-1):
        C[i][j] = cij
        C[j][i] = cji

    if series in "ABCD":
        last = n - 1 if series != "D" else n - 2
        for i in range(last):
            bond(i, i + 1)
        if series == "B":
            C[n - 1][n - 2] = -2
        elif series == "C":
            C[n - 2][n - 1] = -2
        elif series == "D":
            bond(n - 3, n - 1)
    elif series == "E":
        for i, j in [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]:
            bond(i, j)
    elif series == "F":
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    else:  # G2
        bond(0, 1, -3, -1)
    return IntMatrix(C)


@dataclass(frozen=True)
class SimpleFactor:
    """One connected component of the Dynkin diagram."""

    indices: tuple[int, ...]
    series: str
    rank: int
    short_root_indices: tuple[int, ...]

    @property
    def type_label(self) -> tuple[str, int]:
        return (self.series, self.rank)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    @property
    def weyl_order(self) -> int:
        s, n = self.series, self.rank
        if s == "A":
            return factorial(n + 1)
        if s in "BC":
            return 2**n * factorial(n)
        if s == "D":
            return 2 ** (n - 1) * factorial(n)
        return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600, ("F", 4): 1152, ("G", 2): 12}[(s, n)]


def _components(C: IntMatrix) -> list[tuple[int, ...]]:
    l = C.nrows
    seen = [False] * l
    comps = []
    for start in range(l):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(l):
                if j != i and C[i, j] != 0 and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(tuple(sorted(comp)))
    return comps


def _symmetrizer(C: IntMatrix) -> tuple[int, ...]:
    """Positive primitive ``d`` per component with ``d_i C_ij = d_j C_ji``."""
    l = C.nrows
    d: list[Fraction | None] = [None] * l
    for comp in _components(C):
        d[comp[0]] = Fraction(1)
        stack = [comp[0]]
        while stack:
            i = stack.pop()
            for j in comp:
                if j == i or C[i, j] == 0:
                    continue
                want = d[i] * C[i, j] / C[j, i]
                if d[j] is None:
                    d[j] = want
                    stack.append(j)
                elif d[j] != want:
                    raise RootDatumError("Cartan matrix is not symmetrizable")
        den = lcm(*(d[i].denominator for i in comp))
        ints = [int(d[i] * den) for i in comp]
        g = gcd(*ints)
        for i, v in zip(comp, ints):
            d[i] = Fraction(v // g)
    return tuple(int(x) for x in d)


def _positive_definite(A: list[list[Fraction]]) -> bool:
    """Symmetric positive definiteness by exact Gaussian elimination."""
    A = [row[:] for row in A]
    n = len(A)
    for k in range(n):
        if A[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = A[i][k] / A[k][k]
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
    return True


def _classify(C: IntMatrix, comp: tuple[int, ...], d: tuple[int, ...]) -> SimpleFactor:
    l = len(comp)
    dmin = min(d[i] for i in comp)
    short = tuple(i for i in comp if d[i] == dmin)
    products = {C[i, j] * C[j, i] for i in comp for j in comp if i != j}
    if 3 in products:
        return SimpleFactor(comp, "G", 2, short)
    if 2 in products:
        if l == 2:
            series = "B"
        elif l == 4 and len(short) == 2:
            series = "F"
        elif len(short) == 1:
            series = "B"
        else:
            series = "C"
        return SimpleFactor(comp, series, l, short)
    # simply laced
    nbrs = {i: [j for j in comp if j != i and C[i, j] != 0] for i in comp}
    branch = [i for i in comp if len(nbrs[i]) == 3]
    if not branch:
        return SimpleFactor(comp, "A", l, comp)
    center = branch[0]
    arms = []
    for start in nbrs[center]:
        length, prev, cur = 1, center, start
        while True:
            nxt = [j for j in nbrs[cur] if j != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[0] == 1 and arms[1] == 1:
        return SimpleFactor(comp, "D", l, comp)
    if arms == [1, 2, 2]:
        return SimpleFactor(comp, "E", 6, comp)
    if arms == [1, 2, 3]:
        return SimpleFactor(comp, "E", 7, comp)
    if arms == [1, 2, 4]:
        return SimpleFactor(comp, "E", 8, comp)
    raise RootDatumError("Dynkin diagram is not of finite type")


@dataclass(frozen=True)
class RootDatum:
    """Split reductive root datum; validated on construction."""

    rank: int
    simple_roots: IntMatrix
    simple_coroots: IntMatrix
    label: str = field(default="", compare=False)

    def __post_init__(self):
        r = self.rank
        R, K = self.simple_roots, self.simple_coroots
        if r < 0:
            raise RootDatumError("rank must be nonnegative")
        if R.ncols != r or K.ncols != r:
            raise RootDatumError("roots and coroots must have rank-many columns")
        if R.nrows != K.nrows:
            raise RootDatumError("need as many simple coroots as simple roots")
        l = R.nrows
        if l > r:
            raise RootDatumError("semisimple rank exceeds rank")
        if matrix_rank(R) != l or matrix_rank(K) != l:
            raise RootDatumError("simple roots (or coroots) are linearly dependent")
        C = K @ R.T
        for i in range(l):
            if C[i, i] != 2:
                raise RootDatumError(f"<coroot_{i+1}, root_{i+1}> = {C[i, i]}, expected 2")
            for j in range(l):
                if i != j:
                    if C[i, j] > 0:
                        raise RootDatumError("positive off-diagonal Cartan entry")
                    if (C[i, j] == 0) != (C[j, i] == 0):
                        raise RootDatumError("Cartan matrix zero pattern is not symmetric")
        d = _symmetrizer(C)
        sym = [[Fraction(d[i] * C[i, j]) for j in range(l)] for i in range(l)]
        if not _positive_definite(sym):
            raise RootDatumError("Cartan matrix is not of finite type")
        if not self.label:
            object.__setattr__(self, "label", self._default_label())

    def _default_label(self) -> str:
        parts = [f.name for f in self.factors]
        central = self.rank - self.semisimple_rank
        if central:
            parts.append(f"T{central}")
        return "x".join(parts) if parts else "T0"

    @property
    def semisimple_rank(self) -> int:
        return self.simple_roots.nrows

    @cached_property
    def cartan(self) -> IntMatrix:
        return self.simple_coroots @ self.simple_roots.T

    @cached_property
    def symmetrizer(self) -> tuple[int, ...]:
        return _symmetrizer(self.cartan)

    @cached_property
    def factors(self) -> tuple[SimpleFactor, ...]:
        C, d = self.cartan, self.symmetrizer
        return tuple(_classify(C, comp, d) for comp in _components(C))

    @property
    def n_factors(self) -> int:
        return len(self.factors)

    @property
    def weyl_order(self) -> int:
        out = 1
        for f in self.factors:
            out *= f.weyl_order
        return out

    def is_torus(self) -> bool:
        return self.semisimple_rank == 0

    def __repr__(self) -> str:
        return f"RootDatum({self.label}, rank={self.rank})"


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def from_raw(rank: int, simple_roots, simple_coroots, label: str = "") -> RootDatum:
    def mat(m):
        if isinstance(m, IntMatrix):
            return m
        m = [list(r) for r in m]
        return IntMatrix(m, ncols=rank) if not m else IntMatrix(m)

    return RootDatum(rank, mat(simple_roots), mat(simple_coroots), label)


def build_classical(series: str, rank: int, isogeny: str = "sc") -> RootDatum:
    series = series.upper()
    C = cartan_matrix(series, rank)
    I = IntMatrix.identity(rank)
    if isogeny == "sc":
        return RootDatum(rank, C.T, I, f"{series}{rank}_sc")
    if isogeny == "ad":
        return RootDatum(rank, I, C, f"{series}{rank}_ad")
    raise RootDatumError(f"isogeny must be 'sc' or 'ad', got {isogeny!r}")


def build_torus(rank: int) -> RootDatum:
    return RootDatum(rank, IntMatrix.zeros(0, rank), IntMatrix.zeros(0, rank), f"T{rank}")


def _simple_differences(n: int) -> list[list[int]]:
    return [[(k == i) - (k == i + 1) for k in range(n)] for i in range(n - 1)]


def build_gl(n: int) -> RootDatum:
    if n < 1:
        raise RootDatumError("GL_n needs n >= 1")
    rows = _simple_differences(n)
    return from_raw(n, rows, rows, f"GL{n}")


def build_sl(n: int) -> RootDatum:
    if n < 2:
        raise RootDatumError("SL_n needs n >= 2")
    return build_classical("A", n - 1, "sc")


def build_pgl(n: int) -> RootDatum:
    if n < 2:
        raise RootDatumError("PGL_n needs n >= 2")
    return build_classical("A", n - 1, "ad")


def build_sp(n: int) -> RootDatum:
    """Sp_n for even ``n``."""
    if n < 2 or n % 2:
        raise RootDatumError("Sp_n needs an even n >= 2")
    m = n // 2
    return build_classical("A", 1, "sc") if m == 1 else build_classical("C", m, "sc")


def build_so(n: int) -> RootDatum:
    """Special orthogonal group SO_n in the standard diagonal torus coordinates."""
    if n < 2:
        raise RootDatumError("SO_n needs n >= 2")
    m = n // 2
    if n == 2:
        return build_torus(1)
    roots = _simple_differences(m)
    coroots = _simple_differences(m)
    last = [0] * m
    if n % 2:
        last[m - 1] = 1
        roots.append(last)
        coroots.append([2 * x for x in last])
    else:
        last[m - 2] = last[m - 1] = 1
        roots.append(last)
        coroots.append(list(last))
    return from_raw(m, roots, coroots, f"SO{n}")


def product(*rds: RootDatum) -> RootDatum:
    rank = sum(rd.rank for rd in rds)
    roots = IntMatrix.block_diag(*(rd.simple_roots for rd in rds))
    coroots = IntMatrix.block_diag(*(rd.simple_coroots for rd in rds))
    return RootDatum(rank, roots, coroots, "x".join(rd.label for rd in rds))


def from_json(obj: dict[str, Any]) -> RootDatum:
    """Build a root datum from its JSON description."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise RootDatumError("group description must be an object with a 'kind' field")
    kind = obj["kind"]

    def need(key):
        if key not in obj:
            raise RootDatumError(f"group kind {kind!r} requires field {key!r}")
        return obj[key]

    def count(key):
        v = need(key)
        if isinstance(v, bool) or not isinstance(v, int):
            raise RootDatumError(f"field {key!r} must be an integer")
        return v

    if kind == "classical":
        return build_classical(str(need("series")), count("rank"), obj.get("isogeny", "sc"))
    if kind == "torus":
        return build_torus(count("rank"))
    if kind == "gl":
        return build_gl(count("n"))
    if kind == "sl":
        return build_sl(count("n"))
    if kind == "pgl":
        return build_pgl(count("n"))
    if kind == "sp":
        return build_sp(count("n"))
    if kind == "so":
        return build_so(count("n"))
    if kind == "product":
        factors = need("factors")
        if not isinstance(factors, list) or not factors:
            raise RootDatumError("product needs a nonempty list of factors")
        return product(*(from_json(f) for f in factors))
    if kind == "raw":
        try:
            roots = [[int(x) for x in row] for row in need("roots")]
            coroots = [[int(x) for x in row] for row in need("coroots")]
        except (TypeError, ValueError) as exc:
            raise RootDatumError(f"raw roots/coroots must be integer matrices: {exc}") from None
        try:
            return from_raw(count("rank"), roots, coroots, obj.get("label", ""))
        except RootDatumError:
            raise
        except ValueError as exc:
            raise RootDatumError(str(exc)) from None
    raise RootDatumError(f"unknown group kind {kind!r}")


def to_json(rd: RootDatum) -> dict[str, Any]:
    return {
        "kind": "raw",
        "rank": rd.rank,
        "roots": rd.simple_roots.tolist(),
        "coroots": rd.simple_coroots.tolist(),
        "label": rd.label,
    }


# ---------------------------------------------------------------------------
# derived lattices and pi_1
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DerivedLattices:
    """Lattices attached to a root datum; all bases are HNF columns.

    ``ad_cocharL`` holds the fundamental coweights as the columns of
    ``ad_cocharL / ad_denominator`` (exact rational vectors of Λ⊗Q).
    """

    corootL: IntMatrix
    dG_cocharL: IntMatrix
    radical_cocharL: IntMatrix
    ab_charL: IntMatrix
    ad_cocharL: IntMatrix
    ad_denominator: int
    sc_charL: IntMatrix


def _inverse(C: IntMatrix) -> list[list[Fraction]]:
    n = C.nrows
    A = [[Fraction(C[i, j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        p = next(i for i in range(k, n) if A[i][k] != 0)
        A[k], A[p] = A[p], A[k]
        piv = A[k][k]
        A[k] = [x / piv for x in A[k]]
        for i in range(n):
            if i != k and A[i][k]:
                f = A[i][k]
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
    return [row[n:] for row in A]


def cartan_inverse(rd: RootDatum) -> list[list[Fraction]]:
    return _inverse(rd.cartan)


def fundamental_coweights(rd: RootDatum) -> list[list[Fraction]]:
    """Columns ``x_j`` of Λ⊗Q in the coroot span with ``<x_j, root_i> = δ_ij``."""
    Cinv = _inverse(rd.cartan)
    l, r = rd.semisimple_rank, rd.rank
    K = rd.simple_coroots
    # x_j = sum_i y_ij coroot_i with C^T y_j = e_j, i.e. y = C^{-T}
    return [[sum((K[i, a] * Cinv[j][i] for i in range(l)), Fraction(0)) for j in range(l)] for a in range(r)]


def derived_lattices(rd: RootDatum) -> DerivedLattices:
    r, l = rd.rank, rd.semisimple_rank
    corootL = hnf_basis(rd.simple_coroots.T) if l else IntMatrix.zeros(r, 0)
    dG = saturation(corootL)[0] if l else IntMatrix.zeros(r, 0)
    radical = kernel_basis(rd.simple_roots)
    ab = kernel_basis(rd.simple_coroots)
    X = fundamental_coweights(rd)
    den = lcm(1, *(x.denominator for row in X for x in row))
    ad = IntMatrix(([int(x * den) for x in row] for row in X), ncols=l)
    return DerivedLattices(corootL, dG, radical, ab, ad, den, IntMatrix.identity(l))


@dataclass(frozen=True)
class Pi1:
    group: FgAbGroup
    torsion_part: FgAbGroup
    free_quotient: FgAbGroup

    def exact(self) -> bool:
        """Torsion of π₁ matches the torsion part and the ranks match the quotient."""
        return (
            self.group.torsion == self.torsion_part.invariant_factors
            and self.torsion_part.free_rank == 0
            and self.group.free_rank == self.free_quotient.free_rank
            and self.free_quotient.is_free()
        )


def pi1(rd: RootDatum) -> Pi1:
    lat = derived_lattices(rd)
    r = rd.rank
    group = FgAbGroup.quotient(r, lat.corootL)
    rel = solve_columns(lat.dG_cocharL, lat.corootL) if lat.corootL.ncols else IntMatrix.zeros(0, 0)
    torsion = FgAbGroup(lat.dG_cocharL.ncols, rel)
    free = FgAbGroup.quotient(r, lat.dG_cocharL)
    out = Pi1(group, torsion, free)
    if not out.exact():
        raise AssertionError("fundamental group sequence failed to be exact")
    return out


# ---------------------------------------------------------------------------
# Weyl group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeylReflections:
    on_cochar: tuple[IntMatrix, ...]
    on_char: tuple[IntMatrix, ...]


def weyl_reflections(rd: RootDatum) -> WeylReflections:
    r = rd.rank
    I = IntMatrix.identity(r)
    cochar, char = [], []
    for a, ac in zip(rd.simple_roots.rows, rd.simple_coroots.rows):
        acol, accol = IntMatrix.column(a), IntMatrix.column(ac)
        cochar.append(I - accol @ acol.T)
        char.append(I - acol @ accol.T)
    return WeylReflections(tuple(cochar), tuple(char))


def weyl_enumerate(rd: RootDatum, cap: int = 10**6) -> list[IntMatrix]:
    """All Weyl group elements as matrices on Λ*, by closure under generators."""
    gens = weyl_reflections(rd).on_char
    start = IntMatrix.identity(rd.rank)
    seen = {start}
    out = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                v = s @ w
                if v not in seen:
                    if len(out) >= cap:
                        raise WeylCapExceeded(f"Weyl group has more than {cap} elements")
                    seen.add(v)
                    out.append(v)
                    nxt.append(v)
        frontier = nxt
    return out


def root_system(rd: RootDatum) -> set[tuple[int, ...]]:
    """All roots, as the closure of the simple roots under simple reflections."""
    gens = weyl_reflections(rd).on_char
    roots = set(rd.simple_roots.rows)
    frontier = list(roots)
    while frontier:
        nxt = []
        for a in frontier:
            for s in gens:
                b = s @ a
                if b not in roots:
                    roots.add(b)
                    nxt.append(b)
        frontier = nxt
    return roots
