"""Symmetric squares of character lattices and invariant bilinear forms.

``Sym²(Λ*)`` of a rank ``r`` lattice is stored in the basis ``χ_i·χ_j``
(``i <= j``, lexicographic).  A symmetric bilinear form on Λ is stored as its
Gram matrix, and as a coordinate vector it uses the same pair order with the
coordinates ``G_ii`` and ``G_ij`` (``i < j``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterator, Sequence

from .abelian import IntMatrix, hnf_basis, kernel_basis
from .rootdata import (
    RootDatum,
    SimpleFactor,
    _positive_definite,
    cartan_inverse,
    derived_lattices,
    from_raw,
    weyl_reflections,
)

__all__ = [
    "IntegralityError",
    "Sym2Element",
    "BilForm",
    "sym2_pairs",
    "sym2_dim",
    "pair_index",
    "b_map",
    "q_map",
    "b_matrix",
    "q_matrix",
    "sym2_action",
    "sc_datum",
    "Sym2Invariants",
    "sym2_invariants",
    "basic_inner_product",
    "semisimple_coords",
    "contraction",
    "contraction_matrix",
    "check_star",
    "find_lift",
]


class IntegralityError(ArithmeticError):
    """A value that must be integral came out fractional."""


@lru_cache(maxsize=None)
def sym2_pairs(r: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(r) for j in range(i, r))


def sym2_dim(r: int) -> int:
    return r * (r + 1) // 2


@lru_cache(maxsize=None)
def _pair_index(r: int) -> dict[tuple[int, int], int]:
    return {p: k for k, p in enumerate(sym2_pairs(r))}


def pair_index(r: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return _pair_index(r)[(i, j)]


@dataclass(frozen=True)
class Sym2Element:
    """The element ``Σ c_ij χ_i·χ_j`` of ``Sym²(Λ*)``."""

    rank: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != sym2_dim(self.rank):
            raise ValueError("coefficient vector has the wrong length")

    @classmethod
    def from_dict(cls, rank: int, coeffs: dict[tuple[int, int], int]) -> Sym2Element:
        v = [0] * sym2_dim(rank)
        for (i, j), c in coeffs.items():
            v[pair_index(rank, i, j)] += c
        return cls(rank, tuple(v))

    @classmethod
    def square(cls, chi: Sequence[int]) -> Sym2Element:
        """``χ·χ`` for a character given in coordinates."""
        r = len(chi)
        return cls(r, tuple((1 if i == j else 2) * chi[i] * chi[j] for i, j in sym2_pairs(r)))

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return zip(sym2_pairs(self.rank), self.coeffs)

    def __call__(self, x: Sequence[int]) -> int:
        """The quadratic form ``Q(x)``."""
        return sum(c * x[i] * x[j] for (i, j), c in self.items())

    def __add__(self, other: Sym2Element) -> Sym2Element:
        return Sym2Element(self.rank, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> Sym2Element:
        return Sym2Element(self.rank, tuple(-a for a in self.coeffs))

    def __mul__(self, k: int) -> Sym2Element:
        return Sym2Element(self.rank, tuple(k * a for a in self.coeffs))

    __rmul__ = __mul__

    def to_json(self) -> dict[str, str]:
        return {f"{i + 1},{j + 1}": str(c) for (i, j), c in self.items() if c}

    def __str__(self) -> str:
        return format_sym2(self.coeffs, self.rank)


def format_sym2(coeffs: Sequence[int], r: int, symbol: str = "x") -> str:
    terms = []
    for (i, j), c in zip(sym2_pairs(r), coeffs):
        if not c:
            continue
        mono = f"{symbol}{i + 1}^2" if i == j else f"{symbol}{i + 1}*{symbol}{j + 1}"
        terms.append((c, mono))
    if not terms:
        return "0"
    out = ""
    for k, (c, mono) in enumerate(terms):
        sign = "-" if c < 0 else ("+" if k else "")
        mag = "" if abs(c) == 1 else f"{abs(c)}*"
        out += (f" {sign} " if k else sign) + mag + mono
    return out


@dataclass(frozen=True)
class BilForm:
    """Symmetric bilinear form on Λ given by its Gram matrix."""

    gram: IntMatrix

    def __post_init__(self):
        if not self.gram.is_symmetric():
            raise ValueError("Gram matrix of a symmetric form must be symmetric")

    @property
    def rank(self) -> int:
        return self.gram.nrows

    @property
    def is_even(self) -> bool:
        return all(self.gram[i, i] % 2 == 0 for i in range(self.rank))

    def __call__(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(a * b for a, b in zip(x, self.gram @ y))

    def coords(self) -> tuple[int, ...]:
        return tuple(self.gram[i, j] for i, j in sym2_pairs(self.rank))

    @classmethod
    def from_coords(cls, r: int, v: Sequence[int]) -> BilForm:
        G = [[0] * r for _ in range(r)]
        for (i, j), c in zip(sym2_pairs(r), v):
            G[i][j] = G[j][i] = c
        return cls(IntMatrix(G, ncols=r))

    def is_positive_definite(self) -> bool:
        return _positive_definite([[Fraction(x) for x in row] for row in self.gram.rows])


def b_matrix(r: int) -> IntMatrix:
    """Matrix of ``b`` from Sym² coordinates to Bil^s coordinates."""
    return IntMatrix.diag([2 if i == j else 1 for i, j in sym2_pairs(r)])


def q_matrix(r: int) -> IntMatrix:
    """Matrix of ``q`` from Bil^s coordinates to Sym² coordinates."""
    return IntMatrix.diag([1 if i == j else 2 for i, j in sym2_pairs(r)])


def b_map(Q: Sym2Element) -> BilForm:
    """Polarization ``B(x, y) = Q(x + y) - Q(x) - Q(y)``."""
    return BilForm.from_coords(Q.rank, b_matrix(Q.rank) @ Q.coeffs)


def q_map(B: BilForm) -> Sym2Element:
    """The quadratic form ``x ↦ B(x, x)``."""
    return Sym2Element(B.rank, q_matrix(B.rank) @ B.coords())


def sym2_action(w: IntMatrix) -> IntMatrix:
    """Matrix on Sym² induced by the map of characters ``χ_j ↦ column j of w``.

    ``w`` may be rectangular (``r' x r``); the result is ``dim Sym²(r') x dim Sym²(r)``.
    """
    rt, rs = w.nrows, w.ncols
    tgt = sym2_pairs(rt)
    cols = []
    for i, j in sym2_pairs(rs):
        col = []
        for a, b in tgt:
            if a == b:
                col.append(w[a, i] * w[a, j])
            else:
                col.append(w[a, i] * w[b, j] + w[b, i] * w[a, j])
        cols.append(col)
    return IntMatrix.from_columns(cols, len(tgt))


def invariant_lattice(gens: Sequence[IntMatrix], dim: int) -> IntMatrix:
    """HNF basis of the vectors fixed by every matrix in ``gens``."""
    if not gens:
        return IntMatrix.identity(dim)
    I = IntMatrix.identity(dim)
    return kernel_basis(IntMatrix.vstack(*(g - I for g in gens)))


def sc_datum(rd: RootDatum) -> RootDatum:
    """Root datum of the simply connected cover of the derived group.

    Its cocharacter basis is the simple coroots, so characters are written in
    fundamental-weight coordinates.
    """
    l = rd.semisimple_rank
    return from_raw(l, rd.cartan.T, IntMatrix.identity(l), f"{rd.label}_sc")


@dataclass(frozen=True)
class Sym2Invariants:
    on_char: IntMatrix
    on_sc: IntMatrix


def sym2_invariants(rd: RootDatum) -> Sym2Invariants:
    """W-invariant lattices of ``Sym²(Λ*(T_G))`` and of ``Sym²`` of the weight lattice."""
    gens = [sym2_action(s) for s in weyl_reflections(rd).on_char]
    on_char = invariant_lattice(gens, sym2_dim(rd.rank))
    sc = sc_datum(rd)
    gens_sc = [sym2_action(s) for s in weyl_reflections(sc).on_char]
    on_sc = invariant_lattice(gens_sc, sym2_dim(sc.rank))
    return Sym2Invariants(on_char, on_sc)


def _embed(Q: Sym2Element, indices: Sequence[int], l: int) -> Sym2Element:
    return Sym2Element.from_dict(l, {(indices[i], indices[j]): c for (i, j), c in Q.items()})


def basic_inner_product(rd: RootDatum, factor: SimpleFactor) -> Sym2Element:
    """Normalized invariant quadratic form of one simple factor, on the weight lattice.

    The returned element lives in ``Sym²`` of the full weight lattice of the
    semisimple part and is supported on the factor's indices.
    """
    idx = factor.indices
    k = len(idx)
    sub = IntMatrix([[rd.cartan[i, j] for j in idx] for i in idx])
    local = from_raw(k, sub.T, IntMatrix.identity(k))
    inv = sym2_invariants(local).on_sc
    if inv.ncols != 1:
        raise AssertionError(f"invariant lattice of {factor.name} has rank {inv.ncols}, expected 1")
    Q = Sym2Element(k, inv.col(0))
    G = b_map(Q)
    if G.gram[0, 0] < 0:
        Q, G = -Q, b_map(-Q)
    diag = [G.gram[i, i] for i in range(k)]
    d = rd.symmetrizer
    # short coroots belong to the long roots
    dmax = max(d[i] for i in idx)
    short_coroot_values = {diag[a] for a, i in enumerate(idx) if d[i] == dmax}
    if short_coroot_values != {2} or min(diag) != 2:
        raise AssertionError(f"cannot normalize the invariant form of {factor.name}")
    if not G.is_positive_definite():
        raise AssertionError(f"invariant form of {factor.name} is not positive definite")
    return _embed(Q, idx, rd.semisimple_rank)


def semisimple_coords(rd: RootDatum, d: Sequence[int]) -> tuple[int, ...]:
    """Image of a cocharacter in Λ(T_ad), in fundamental-coweight coordinates."""
    return rd.simple_roots @ d


def contraction(rd: RootDatum, m: Sequence[int], Q: Sym2Element) -> tuple[int, ...]:
    """The character ``B_Q(d, -)`` on the coroot lattice, in fundamental weights.

    ``m`` is the element ``d`` of Λ(T_ad) in fundamental-coweight coordinates.
    """
    l = rd.semisimple_rank
    if len(m) != l or Q.rank != l:
        raise ValueError("dimension mismatch in contraction")
    Cinv = cartan_inverse(rd)
    # coroot coordinates of d: c = C^{-T} m
    c = [sum((Cinv[j][i] * m[j] for j in range(l)), Fraction(0)) for i in range(l)]
    G = b_map(Q).gram
    out = []
    for k in range(l):
        v = sum((c[i] * G[i, k] for i in range(l)), Fraction(0))
        if v.denominator != 1:
            raise IntegralityError("contraction is not integral on the coroot lattice")
        out.append(int(v))
    return tuple(out)


def contraction_matrix(rd: RootDatum, m: Sequence[int], basis: IntMatrix) -> IntMatrix:
    """Columns are the contractions of the Sym² vectors in ``basis`` (weight lattice)."""
    l = rd.semisimple_rank
    cols = [contraction(rd, m, Sym2Element(l, col)) for col in basis.columns()]
    return IntMatrix.from_columns(cols, l)


def check_star(rd: RootDatum, m: Sequence[int]) -> bool:
    """Every simple factor sees a nonzero component of ``m`` (coweight coordinates)."""
    return all(any(m[i] for i in f.indices) for f in rd.factors)


def _sort_key(v: Sequence[int]) -> tuple[int, ...]:
    # 0 < 1 < -1 < 2 < -2 < ...
    return tuple(2 * x - 1 if x > 0 else -2 * x for x in v)


def _shell(r: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield (0,) * r
        return
    for v in cartesian(range(-k, k + 1), repeat=r):
        if max(abs(x) for x in v) == k:
            yield v


def find_lift(rd: RootDatum, delta: Sequence[int], max_radius: int = 64) -> tuple[int, ...]:
    """Lift of the class of ``delta`` mod coroots satisfying the nonvanishing condition.

    Candidates are scanned by sup-norm; ties go to the smallest vector in the
    order ``0, 1, -1, 2, -2, ...`` applied coordinate-wise.
    """
    delta = tuple(delta)
    if len(delta) != rd.rank:
        raise ValueError("degree has the wrong length")
    if rd.is_torus():
        return delta
    H = derived_lattices(rd).corootL
    pivots = [(next(i for i, x in enumerate(c) if x), c) for c in H.columns()]

    def canon(v):
        v = list(v)
        for i, c in pivots:
            q = v[i] // c[i]
            if q:
                v = [a - q * b for a, b in zip(v, c)]
        return tuple(v)

    target = canon(delta)
    for k in range(max_radius + 1):
        hits = [
            v
            for v in _shell(rd.rank, k)
            if canon(v) == target and check_star(rd, semisimple_coords(rd, v))
        ]
        if hits:
            return min(hits, key=_sort_key)
    raise RuntimeError("no lift found within the search radius")
