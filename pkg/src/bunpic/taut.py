"""Tautological classes on the moduli of torus bundles.

A :class:`TautClass` is a formal integer combination of two kinds of atoms:

* ``Det(χ, ζ)``: the determinant of cohomology of ``L_χ(Σ ζ_j σ_j)``;
* ``Pair((χ, ζ), (χ', ζ'))``: the Deligne pairing of two such line bundles.

Atoms stay unevaluated.  :func:`normalize` rewrites a class into the free
basis of the relative Picard lattice for the genus regime at hand, killing
every atom pulled back from the moduli of curves (``χ = 0`` on all slots).

Basis order for ``g >= 1``: ``S_ik`` (pairs ``i <= k`` for ``g >= 2``,
``i < k`` for ``g = 1``), then ``M_ij`` row-major, then ``D_i``, where::

    S_ik = <(e_i,0),(e_k,0)>,  M_ij = <(e_i,0),(0,f_j)>,  D_i = L(e_i,0).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .abelian import (
    IntMatrix,
    NoIntegerSolution,
    hnf_basis,
    kernel_basis,
    lattice_preimage,
    same_lattice,
    snf,
    solve,
)
from .symforms import pair_index, sym2_dim, sym2_pairs

__all__ = [
    "RegimeError",
    "TautClass",
    "Det",
    "Pair",
    "parse_class",
    "RPicBasis",
    "rpic_basis",
    "normalize",
    "weight",
    "gamma",
    "weight_matrix",
    "gamma_matrix",
    "weight_g0",
    "g0_basis",
    "weyl_algebraic_action",
    "pullback_torus",
    "change_of_degree",
    "FiberData",
    "fiber_restriction_data",
]


class RegimeError(ValueError):
    """Operation not defined for this genus regime or shape mismatch."""


Vec = tuple[int, ...]


def _vec(v: Iterable[int]) -> Vec:
    return tuple(int(x) for x in v)


# ---------------------------------------------------------------------------
# formal classes
# ---------------------------------------------------------------------------

class TautClass:
    """Formal ``Z``-combination of ``Det`` and ``Pair`` atoms."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms: dict[tuple, int] = {k: v for k, v in (terms or {}).items() if v}

    @staticmethod
    def _pair_key(chi, zeta, chi2, zeta2) -> tuple:
        a, b = (_vec(chi), _vec(zeta)), (_vec(chi2), _vec(zeta2))
        return ("P",) + ((a, b) if a <= b else (b, a))

    def __add__(self, other: TautClass) -> TautClass:
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return TautClass(out)

    def __neg__(self) -> TautClass:
        return TautClass({k: -v for k, v in self.terms.items()})

    def __sub__(self, other: TautClass) -> TautClass:
        return self + (-other)

    def __mul__(self, k: int) -> TautClass:
        return TautClass({a: k * v for a, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, TautClass) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def atoms(self) -> Iterable[tuple[tuple, int]]:
        return sorted(self.terms.items())

    def shape(self) -> tuple[int, int] | None:
        """``(rank, n)`` read off the atoms, or ``None`` for the zero class."""
        for atom, _ in self.atoms():
            if atom[0] == "L":
                return len(atom[1]), len(atom[2])
            return len(atom[1][0]), len(atom[1][1])
        return None

    def map_characters(self, f) -> TautClass:
        out = TautClass()
        for atom, c in self.atoms():
            if atom[0] == "L":
                out = out + Det(f(atom[1]), atom[2]) * c
            else:
                (x, z), (y, u) = atom[1], atom[2]
                out = out + Pair(f(x), z, f(y), u) * c
        return out

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k, (atom, c) in enumerate(self.atoms()):
            if atom[0] == "L":
                body = f"L({_fmt(atom[1])}; {_fmt(atom[2])})"
            else:
                (x, z), (y, u) = atom[1], atom[2]
                body = f"P({_fmt(x)}, {_fmt(z)} | {_fmt(y)}, {_fmt(u)})"
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}*"
            parts.append((f" {sign} " if k else ("-" if c < 0 else "")) + mag + body)
        return "".join(parts)

    __repr__ = __str__


def _fmt(v: Sequence[int]) -> str:
    return "[" + ",".join(str(x) for x in v) + "]"


def Det(chi: Sequence[int], zeta: Sequence[int]) -> TautClass:
    return TautClass({("L", _vec(chi), _vec(zeta)): 1})


def Pair(chi: Sequence[int], zeta: Sequence[int], chi2: Sequence[int], zeta2: Sequence[int]) -> TautClass:
    return TautClass({TautClass._pair_key(chi, zeta, chi2, zeta2): 1})


_VEC = r"\[\s*(?:[+-]?\d+\s*(?:,\s*[+-]?\d+\s*)*)?\]"
_TERM = re.compile(
    r"\s*([+-])?\s*(?:(\d+)\s*\*\s*)?"
    rf"(?:L\(\s*({_VEC})\s*(?:;\s*({_VEC})\s*)?\)"
    rf"|P\(\s*({_VEC})\s*(?:,\s*({_VEC})\s*)?\|\s*({_VEC})\s*(?:,\s*({_VEC})\s*)?\))"
)


def _parse_vec(s: str | None, length: int, what: str) -> Vec:
    if s is None:
        return (0,) * length
    body = s.strip()[1:-1].strip()
    v = tuple(int(x) for x in body.split(",")) if body else ()
    if len(v) != length:
        raise RegimeError(f"{what} {s.strip()} has length {len(v)}, expected {length}")
    return v


def parse_class(text: str, r: int, n: int) -> TautClass:
    """Parse ``2*L([1,0]; [0]) - P([1,0], [0] | [0,1], [1])``; omitted ζ's are 0."""
    pos, out, first = 0, TautClass(), True
    text = text.strip()
    if not text:
        raise RegimeError("empty class expression")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or (not first and not m.group(1)):
            raise RegimeError(f"cannot parse class expression at column {pos + 1}: {text[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * int(m.group(2) or 1)
        if m.group(3) is not None:
            atom = Det(_parse_vec(m.group(3), r, "character"), _parse_vec(m.group(4), n, "zeta"))
        else:
            atom = Pair(
                _parse_vec(m.group(5), r, "character"),
                _parse_vec(m.group(6), n, "zeta"),
                _parse_vec(m.group(7), r, "character"),
                _parse_vec(m.group(8), n, "zeta"),
            )
        out = out + atom * coeff
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
        first = False
    return out


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RPicBasis:
    """Labeled free basis of the relative Picard lattice of a torus.

    ``d`` matters only for ``g = 0``; for ``g >= 1`` it may be ``None``.
    """

    r: int
    g: int
    n: int
    d: Vec | None = None

    def __post_init__(self):
        if self.r < 0 or self.g < 0 or self.n < 0:
            raise RegimeError("rank, genus and number of points must be nonnegative")
        if self.d is not None and len(self.d) != self.r:
            raise RegimeError("degree has the wrong length")
        if self.g == 0 and self.d is None:
            raise RegimeError("genus zero bases depend on the degree")

    @property
    def regime(self) -> str:
        if self.g >= 2:
            return "g>=2"
        if self.g == 1:
            return "g=1"
        return "g=0,n>=1" if self.n >= 1 else "g=0,n=0"

    @cached_property
    def s_pairs(self) -> tuple[tuple[int, int], ...]:
        if self.g == 0:
            return ()
        if self.g == 1:
            return tuple((i, k) for i, k in sym2_pairs(self.r) if i < k)
        return sym2_pairs(self.r)

    @cached_property
    def _s_index(self) -> dict[tuple[int, int], int]:
        return {p: k for k, p in enumerate(self.s_pairs)}

    def s_index(self, i: int, k: int) -> int:
        return self._s_index[(min(i, k), max(i, k))]

    def m_index(self, i: int, j: int) -> int:
        return len(self.s_pairs) + i * self.n + j

    def d_index(self, i: int) -> int:
        return len(self.s_pairs) + self.r * self.n + i

    @cached_property
    def epsilon(self) -> IntMatrix:
        """Genus zero, no marked points: HNF basis of ``{χ : (d, χ) even}``."""
        return lattice_preimage(IntMatrix([list(self.d)], ncols=self.r), IntMatrix([[2]]))

    @property
    def size(self) -> int:
        if self.g == 0:
            return self.r
        return len(self.s_pairs) + self.r * self.n + self.r

    @cached_property
    def labels(self) -> tuple[str, ...]:
        if self.g == 0:
            if self.n >= 1:
                return tuple(f"M_{i + 1}1" for i in range(self.r))
            return tuple(f"E_{i + 1}" for i in range(self.r))
        out = [f"S_{i + 1}{k + 1}" if self.r < 10 else f"S_{i + 1},{k + 1}" for i, k in self.s_pairs]
        for i in range(self.r):
            for j in range(self.n):
                out.append(f"M_{i + 1}{j + 1}" if max(self.r, self.n) < 10 else f"M_{i + 1},{j + 1}")
        out += [f"D_{i + 1}" for i in range(self.r)]
        return tuple(out)

    def unit(self, i: int) -> Vec:
        return tuple(int(k == i) for k in range(self.r))

    @cached_property
    def atoms(self) -> tuple[TautClass, ...]:
        """Each basis element as a tautological class."""
        r, n = self.r, self.n
        zero_r, zero_n = (0,) * r, (0,) * n
        f1 = tuple(int(j == 0) for j in range(n))
        if self.g == 0:
            if n >= 1:
                return tuple(Pair(self.unit(i), zero_n, zero_r, f1) for i in range(r))
            out = []
            for eps in self.epsilon.columns():
                m = sum(a * b for a, b in zip(self.d, eps))
                out.append(Det(eps, zero_n) * (1 - m) + Pair(eps, zero_n, eps, zero_n) * (m // 2))
            return tuple(out)
        out = [Pair(self.unit(i), zero_n, self.unit(k), zero_n) for i, k in self.s_pairs]
        for i in range(r):
            for j in range(n):
                out.append(Pair(self.unit(i), zero_n, zero_r, tuple(int(t == j) for t in range(n))))
        out += [Det(self.unit(i), zero_n) for i in range(r)]
        return tuple(out)

    def describe(self, k: int, names: Sequence[str] | None = None) -> str:
        """Human-readable form of basis element ``k``; ``names`` label the ``e_i``."""
        names = list(names) if names else [f"e_{i + 1}" for i in range(self.r)]
        if self.g == 0:
            if self.n >= 1:
                return f"<({names[k]},0),(0,f_1)>"
            eps = self.epsilon.col(k)
            m = sum(a * b for a, b in zip(self.d, eps))
            return f"L({_fmt(eps)},0)^{1 - m} (x) <({_fmt(eps)},0),({_fmt(eps)},0)>^{m // 2}"
        ns = len(self.s_pairs)
        if k < ns:
            i, j = self.s_pairs[k]
            return f"<({names[i]},0),({names[j]},0)>"
        k -= ns
        if k < self.r * self.n:
            i, j = divmod(k, self.n)
            return f"<({names[i]},0),(0,f_{j + 1})>"
        return f"L({names[k - self.r * self.n]},0)"


def rpic_basis(r: int, g: int, n: int, d: Sequence[int] | None = None) -> RPicBasis:
    return RPicBasis(r, g, n, None if d is None else _vec(d))


def g0_basis(r: int, n: int, d: Sequence[int]) -> RPicBasis:
    return RPicBasis(r, 0, n, _vec(d))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def _check_shape(basis: RPicBasis, chi: Sequence[int], zeta: Sequence[int]) -> None:
    if len(chi) != basis.r or len(zeta) != basis.n:
        raise RegimeError(
            f"atom with character length {len(chi)} and zeta length {len(zeta)} "
            f"does not fit rank {basis.r} with {basis.n} points"
        )


def _pair_vec(basis: RPicBasis, a, z, b, u, out: list[int]) -> None:
    r, n = basis.r, basis.n
    for i in range(r):
        if a[i] == 0 and b[i] == 0:
            continue
        for k in range(i, r):
            c = a[i] * b[i] if i == k else a[i] * b[k] + a[k] * b[i]
            if not c:
                continue
            if i == k and basis.g == 1:
                out[basis.d_index(i)] += 2 * c
            else:
                out[basis.s_index(i, k)] += c
        for j in range(n):
            c = a[i] * u[j] + b[i] * z[j]
            if c:
                out[basis.m_index(i, j)] += c


def _det0_vec(basis: RPicBasis, a, out: list[int]) -> None:
    r = basis.r
    for i in range(r):
        if not a[i]:
            continue
        out[basis.d_index(i)] += a[i]
        sq = a[i] * (a[i] - 1) // 2
        if sq:
            if basis.g == 1:
                out[basis.d_index(i)] += 2 * sq
            else:
                out[basis.s_index(i, i)] += sq
        for k in range(i + 1, r):
            if a[k]:
                out[basis.s_index(i, k)] += a[i] * a[k]


def normalize(c: TautClass, basis: RPicBasis) -> Vec:
    """Coordinates of ``c`` in the basis of the relative Picard lattice."""
    if basis.g == 0:
        return _normalize_g0(c, basis)
    out = [0] * basis.size
    zero_r, zero_n = (0,) * basis.r, (0,) * basis.n
    for atom, coeff in c.atoms():
        tmp = [0] * basis.size
        if atom[0] == "L":
            chi, zeta = atom[1], atom[2]
            _check_shape(basis, chi, zeta)
            _det0_vec(basis, chi, tmp)
            _pair_vec(basis, chi, zero_n, zero_r, zeta, tmp)
        else:
            (x, z), (y, u) = atom[1], atom[2]
            _check_shape(basis, x, z)
            _check_shape(basis, y, u)
            _pair_vec(basis, x, z, y, u, tmp)
        for k, v in enumerate(tmp):
            if v:
                out[k] += coeff * v
    return tuple(out)


def _normalize_g0(c: TautClass, basis: RPicBasis) -> Vec:
    w = weight(c, basis.d, 0, basis.n)
    lattice = IntMatrix.identity(basis.r) if basis.n >= 1 else basis.epsilon
    try:
        return solve(lattice, w)
    except NoIntegerSolution:
        raise RegimeError(f"weight {list(w)} lies outside the image lattice") from None


# ---------------------------------------------------------------------------
# weight and gamma
# ---------------------------------------------------------------------------

def _dot(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def weight(c: TautClass, d: Sequence[int], g: int, n: int) -> Vec:
    """Weight character of a class, evaluated atom by atom."""
    shape = c.shape()
    if shape is None:
        return (0,) * len(d)
    r = len(d)
    out = [0] * r
    for atom, coeff in c.atoms():
        if atom[0] == "L":
            chi, zeta = atom[1], atom[2]
            if len(chi) != r or len(zeta) != n:
                raise RegimeError("atom does not match the rank or number of points")
            f = coeff * (_dot(d, chi) + sum(zeta) + 1 - g)
            for i in range(r):
                out[i] += f * chi[i]
        else:
            (x, z), (y, u) = atom[1], atom[2]
            if len(x) != r or len(y) != r or len(z) != n or len(u) != n:
                raise RegimeError("atom does not match the rank or number of points")
            fx = coeff * (_dot(d, y) + sum(u))
            fy = coeff * (_dot(d, x) + sum(z))
            for i in range(r):
                out[i] += fx * x[i] + fy * y[i]
    return tuple(out)


def weight_g0(c: TautClass, d: Sequence[int], n: int) -> Vec:
    return weight(c, d, 0, n)


def gamma(c: TautClass, r: int) -> Vec:
    """The symmetric bilinear form of a class, in Bil^s coordinates.

    ``L(χ, ζ) ↦ χ⊗χ`` and ``P((χ, ζ), (χ', ζ')) ↦ χ⊗χ' + χ'⊗χ``.
    """
    out = [0] * sym2_dim(r)
    for atom, coeff in c.atoms():
        if atom[0] == "L":
            x = atom[1]
            if len(x) != r:
                raise RegimeError("atom does not match the rank")
            entries = ((x[i] * x[j]) for i, j in sym2_pairs(r))
        else:
            x, y = atom[1][0], atom[2][0]
            if len(x) != r or len(y) != r:
                raise RegimeError("atom does not match the rank")
            entries = ((x[i] * y[j] + x[j] * y[i]) for i, j in sym2_pairs(r))
        for k, v in enumerate(entries):
            out[k] += coeff * v
    return tuple(out)


def weight_matrix(basis: RPicBasis) -> IntMatrix:
    """``r x N`` matrix of the weight map on the basis (needs ``basis.d``)."""
    if basis.d is None:
        raise RegimeError("the weight map needs a degree")
    cols = [weight(a, basis.d, basis.g, basis.n) for a in basis.atoms]
    return IntMatrix.from_columns(cols, basis.r)


def gamma_matrix(basis: RPicBasis) -> IntMatrix:
    cols = [gamma(a, basis.r) for a in basis.atoms]
    return IntMatrix.from_columns(cols, sym2_dim(basis.r))


# ---------------------------------------------------------------------------
# functoriality
# ---------------------------------------------------------------------------

def weyl_algebraic_action(w: IntMatrix, basis: RPicBasis) -> IntMatrix:
    """Matrix of ``χ ↦ w χ`` applied to the character slots of each basis atom."""
    if basis.g == 0:
        raise RegimeError("the algebraic action is defined for g >= 1")
    if w.shape != (basis.r, basis.r):
        raise RegimeError("Weyl element has the wrong size")
    cols = [normalize(a.map_characters(lambda chi: w @ chi), basis) for a in basis.atoms]
    return IntMatrix.from_columns(cols, basis.size)


def pullback_torus(f: IntMatrix, c: TautClass) -> TautClass:
    """Replace every character slot ``χ`` by ``f χ``."""
    return c.map_characters(lambda chi: f @ chi)


def change_of_degree(basis: RPicBasis, d: Sequence[int]) -> IntMatrix:
    """Matrix on the ``g >= 1`` basis of the twist ``ζ ↦ ζ - (d, χ) f_1`` of every atom.

    Twisting a degree ``d`` bundle by ``-d σ_1`` lands in degree ``0``, so the
    matrix ``T`` satisfies ``W_d @ T == W_0`` for the weight matrices.
    """
    if basis.g == 0 or basis.n == 0:
        raise RegimeError("change of degree needs g >= 1 and a marked point")
    d = _vec(d)

    def twist(chi, zeta):
        return (zeta[0] - _dot(d, chi),) + tuple(zeta[1:])

    cols = []
    for atom in basis.atoms:
        moved = TautClass()
        for key, c in atom.atoms():
            if key[0] == "L":
                moved = moved + Det(key[1], twist(key[1], key[2])) * c
            else:
                (x, z), (y, u) = key[1], key[2]
                moved = moved + Pair(x, twist(x, z), y, twist(y, u)) * c
        cols.append(normalize(moved, basis))
    return IntMatrix.from_columns(cols, basis.size)


# ---------------------------------------------------------------------------
# fibre restriction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberData:
    kernel: IntMatrix
    H_basis: IntMatrix
    j_image: IntMatrix
    image_invariant_factors: tuple[int, ...] | None


def fiber_restriction_data(r: int, g: int, n: int, d: Sequence[int]) -> FiberData:
    """Kernel of ``weight ⊕ gamma`` and its description through ``H_{g,n}``.

    ``H_basis`` columns are ``(m, ζ_1..ζ_n)``.  For ``n = 0`` the image
    invariant factors include the 1's.
    """
    if g < 1:
        raise RegimeError("fibre restriction data needs g >= 1")
    basis = rpic_basis(r, g, n, d)
    stacked = IntMatrix.vstack(weight_matrix(basis), gamma_matrix(basis))
    kernel = kernel_basis(stacked)
    if g >= 2:
        H = kernel_basis(IntMatrix([[2 * g - 2] + [1] * n]))
    else:
        Hz = kernel_basis(IntMatrix([[1] * n], ncols=n))
        H = IntMatrix.vstack(IntMatrix.zeros(1, Hz.ncols), Hz)
    zero_r, zero_n = (0,) * r, (0,) * n
    j_cols = []
    for i in range(r):
        chi = basis.unit(i)
        for h in H.columns():
            m, zeta = h[0], h[1:]
            c = (Pair(chi, zero_n, chi, zero_n) - Det(chi, zero_n) * 2) * m + Pair(chi, zero_n, zero_r, zeta)
            j_cols.append(normalize(c, basis))
    j_image = hnf_basis(IntMatrix.from_columns(j_cols, basis.size))
    if not same_lattice(j_image, kernel):
        raise AssertionError("image of the fibre map differs from the kernel of weight and gamma")
    factors = None
    if n == 0:
        S = snf(stacked)[0]
        factors = tuple(S[i, i] for i in range(min(S.shape)))
    return FiberData(kernel, H, j_image, factors)
