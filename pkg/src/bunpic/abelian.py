"""Exact integer linear algebra and finitely generated abelian groups.

Everything here works over Python's arbitrary-precision ``int``; there is no
floating point anywhere.  Lattices are represented by the column span of an
:class:`IntMatrix`, and "a basis of a sublattice" always means the nonzero
columns of its column-style Hermite normal form, so results are canonical.
"""
from __future__ import annotations

import operator
from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Iterable, Sequence

__all__ = [
    "IntMatrix",
    "RankDeficientError",
    "NoIntegerSolution",
    "FgAbGroup",
    "FgAbHom",
    "xgcd",
    "hnf",
    "hnf_basis",
    "snf",
    "rank",
    "kernel_basis",
    "saturation",
    "lattice_preimage",
    "lattice_intersection",
    "solve",
    "in_lattice",
    "reduce_mod_lattice",
    "same_lattice",
    "pushout",
    "hom_kernel",
    "hom_image",
    "cokernel",
]


class RankDeficientError(ValueError):
    """Raised when a set of lattice generators is not linearly independent."""


class NoIntegerSolution(ValueError):
    """Raised when ``A x = b`` has no integral solution."""


class IntMatrix:
    """Immutable dense integer matrix with an explicit shape.

    Shapes ``0 x n`` and ``n x 0`` are valid and keep their dimensions.
    """

    __slots__ = ("nrows", "ncols", "_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable[int]] = (), ncols: int | None = None):
        data = tuple(tuple(operator.index(x) for x in r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix with no rows")
            ncols = len(data[0])
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged rows in IntMatrix")
        self.nrows = len(data)
        self.ncols = ncols
        self._rows = data
        self._hash = None

    # -- constructors -------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(((0,) * ncols for _ in range(nrows)), ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(((int(i == j) for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int) -> IntMatrix:
        cols = [tuple(c) for c in cols]
        for c in cols:
            if len(c) != nrows:
                raise ValueError("column length does not match nrows")
        return cls(((c[i] for c in cols) for i in range(nrows)), ncols=len(cols))

    @classmethod
    def column(cls, vec: Sequence[int]) -> IntMatrix:
        return cls(((x,) for x in vec), ncols=1)

    @classmethod
    def diag(cls, entries: Sequence[int], nrows: int | None = None, ncols: int | None = None) -> IntMatrix:
        k = len(entries)
        nrows = k if nrows is None else nrows
        ncols = k if ncols is None else ncols
        return cls(
            ((entries[i] if i == j and i < k else 0 for j in range(ncols)) for i in range(nrows)),
            ncols=ncols,
        )

    @staticmethod
    def hstack(*mats: IntMatrix, nrows: int | None = None) -> IntMatrix:
        if not mats:
            return IntMatrix.zeros(nrows or 0, 0)
        m = mats[0].nrows
        if any(x.nrows != m for x in mats):
            raise ValueError("hstack: row counts differ")
        ncols = sum(x.ncols for x in mats)
        return IntMatrix((sum((x._rows[i] for x in mats), ()) for i in range(m)), ncols=ncols)

    @staticmethod
    def vstack(*mats: IntMatrix, ncols: int | None = None) -> IntMatrix:
        if not mats:
            return IntMatrix.zeros(0, ncols or 0)
        n = mats[0].ncols
        if any(x.ncols != n for x in mats):
            raise ValueError("vstack: column counts differ")
        return IntMatrix((r for x in mats for r in x._rows), ncols=n)

    @staticmethod
    def block_diag(*mats: IntMatrix) -> IntMatrix:
        ncols = sum(x.ncols for x in mats)
        rows = []
        offset = 0
        for x in mats:
            for r in x._rows:
                rows.append((0,) * offset + r + (0,) * (ncols - offset - x.ncols))
            offset += x.ncols
        return IntMatrix(rows, ncols=ncols)

    # -- accessors ----------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.ncols)]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def select_columns(self, idx: Iterable[int]) -> IntMatrix:
        idx = list(idx)
        return IntMatrix((tuple(r[j] for j in idx) for r in self._rows), ncols=len(idx))

    def select_rows(self, idx: Iterable[int]) -> IntMatrix:
        return IntMatrix((self._rows[i] for i in idx), ncols=self.ncols)

    @property
    def T(self) -> IntMatrix:
        if self.nrows == 0:
            return IntMatrix.zeros(self.ncols, 0)
        return IntMatrix(zip(*self._rows), ncols=self.nrows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._rows[i][j] == self._rows[j][i] for i in range(self.nrows) for j in range(i)
        )

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                ((sum(a * b for a, b in zip(r, c)) for c in ocols) for r in self._rows),
                ncols=other.ncols,
            )
        vec = tuple(other)
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(r, vec)) for r in self._rows)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return IntMatrix(
            (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)), ncols=self.ncols
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def __neg__(self) -> IntMatrix:
        return IntMatrix((tuple(-a for a in r) for r in self._rows), ncols=self.ncols)

    def __mul__(self, k: int) -> IntMatrix:
        k = operator.index(k)
        return IntMatrix((tuple(k * a for a in r) for r in self._rows), ncols=self.ncols)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, self._rows))
        return self._hash

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, ncols={self.ncols})"


def _as_matrix(m) -> IntMatrix:
    return m if isinstance(m, IntMatrix) else IntMatrix(m)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


# ---------------------------------------------------------------------------
# Hermite normal form
# ---------------------------------------------------------------------------

def _hnf_columns(cols: list[list[int]], nrows: int) -> tuple[list[list[int]], list[list[int]], int]:
    """In-place column HNF on a list of columns.  Returns (cols, U_cols, rank)."""
    n = len(cols)
    ucols = [[int(i == j) for i in range(n)] for j in range(n)]
    p = 0
    for i in range(nrows):
        if p == n:
            break
        for k in range(p + 1, n):
            b = cols[k][i]
            if b == 0:
                continue
            a = cols[p][i]
            if a == 0:
                cols[p], cols[k] = cols[k], cols[p]
                ucols[p], ucols[k] = ucols[k], ucols[p]
                continue
            if b % a == 0:
                q = b // a
                ck, cp = cols[k], cols[p]
                cols[k] = [y - q * x for x, y in zip(cp, ck)]
                ucols[k] = [y - q * x for x, y in zip(ucols[p], ucols[k])]
                continue
            g, x, y = xgcd(a, b)
            s, t = -b // g, a // g
            cp, ck = cols[p], cols[k]
            cols[p] = [x * u + y * v for u, v in zip(cp, ck)]
            cols[k] = [s * u + t * v for u, v in zip(cp, ck)]
            up, uk = ucols[p], ucols[k]
            ucols[p] = [x * u + y * v for u, v in zip(up, uk)]
            ucols[k] = [s * u + t * v for u, v in zip(up, uk)]
        a = cols[p][i]
        if a == 0:
            continue
        if a < 0:
            cols[p] = [-x for x in cols[p]]
            ucols[p] = [-x for x in ucols[p]]
            a = -a
        for k in range(p):
            q = cols[k][i] // a
            if q:
                cols[k] = [y - q * x for x, y in zip(cols[p], cols[k])]
                ucols[k] = [y - q * x for x, y in zip(ucols[p], ucols[k])]
        p += 1
    return cols, ucols, p


def hnf(M) -> tuple[IntMatrix, IntMatrix]:
    """Column-style Hermite normal form.

    Returns ``(H, U)`` with ``H = M @ U``, ``U`` unimodular and ``H`` lower
    echelon: each nonzero column has a positive pivot strictly below the
    previous pivot, the other entries of a pivot row lie in ``[0, pivot)``
    to the left of it and are zero to the right, and zero columns come last.
    """
    M = _as_matrix(M)
    cols = [list(c) for c in M.columns()]
    cols, ucols, _ = _hnf_columns(cols, M.nrows)
    return IntMatrix.from_columns(cols, M.nrows), IntMatrix.from_columns(ucols, M.ncols)


def hnf_basis(M) -> IntMatrix:
    """Canonical basis (nonzero HNF columns) of the column span of ``M``."""
    M = _as_matrix(M)
    cols = [list(c) for c in M.columns()]
    cols, _, r = _hnf_columns(cols, M.nrows)
    return IntMatrix.from_columns(cols[:r], M.nrows)


def rank(M) -> int:
    M = _as_matrix(M)
    cols = [list(c) for c in M.columns()]
    return _hnf_columns(cols, M.nrows)[2]


def kernel_basis(M) -> IntMatrix:
    """HNF basis of the integer kernel ``{x : M x = 0}`` (a saturated lattice)."""
    M = _as_matrix(M)
    cols = [list(c) for c in M.columns()]
    _, ucols, r = _hnf_columns(cols, M.nrows)
    return hnf_basis(IntMatrix.from_columns(ucols[r:], M.ncols))


def solve(A, b: Sequence[int]) -> tuple[int, ...]:
    """Return one integer solution of ``A x = b``; raise if none exists."""
    A = _as_matrix(A)
    b = tuple(operator.index(x) for x in b)
    if len(b) != A.nrows:
        raise ValueError("right-hand side has wrong length")
    cols = [list(c) for c in A.columns()]
    cols, ucols, r = _hnf_columns(cols, A.nrows)
    resid = list(b)
    y = [0] * A.ncols
    j = 0
    for i in range(A.nrows):
        if j < r and cols[j][i] != 0:
            q, rem = divmod(resid[i], cols[j][i])
            if rem:
                raise NoIntegerSolution("no integer solution")
            y[j] = q
            if q:
                resid = [v - q * c for v, c in zip(resid, cols[j])]
            j += 1
        elif resid[i] != 0:
            raise NoIntegerSolution("no integer solution")
    if any(resid):
        raise NoIntegerSolution("no integer solution")
    U = IntMatrix.from_columns(ucols, A.ncols)
    return U @ y


def solve_columns(A, B) -> IntMatrix:
    """Solve ``A X = B`` column by column."""
    A, B = _as_matrix(A), _as_matrix(B)
    return IntMatrix.from_columns((solve(A, c) for c in B.columns()), A.ncols)


def in_lattice(v: Sequence[int], basis) -> bool:
    try:
        solve(basis, v)
    except NoIntegerSolution:
        return False
    return True


def reduce_mod_lattice(v: Sequence[int], basis) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the column span of ``basis``.

    Each pivot coordinate of the lattice's HNF is reduced into ``[0, pivot)``.
    """
    H = hnf_basis(basis)
    v = list(v)
    for j, c in enumerate(H.columns()):
        i = next(k for k, x in enumerate(c) if x)
        q = v[i] // c[i]
        if q:
            v = [a - q * b for a, b in zip(v, c)]
    return tuple(v)


def same_lattice(A, B) -> bool:
    return hnf_basis(A) == hnf_basis(B)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def snf(M) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``S = U @ M @ V`` with ``d1 | d2 | ...`` and ``di >= 0``."""
    M = _as_matrix(M)
    m, n = M.shape
    A = [list(r) for r in M.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for r in A:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
            cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if cand:
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return IntMatrix(A, ncols=n), IntMatrix(U, ncols=m), IntMatrix(V, ncols=n)


def _diagonal(S: IntMatrix) -> list[int]:
    return [S[i, i] for i in range(min(S.shape))]


def invariant_factors(relations: IntMatrix) -> tuple[int, ...]:
    """Invariant factors of ``Z^k / span(relations)``, 1's dropped, 0 = free."""
    k = relations.nrows
    d = [x for x in _diagonal(snf(relations)[0]) if x]
    out = [x for x in d if x != 1] + [0] * (k - len(d))
    return tuple(out)


# ---------------------------------------------------------------------------
# Sublattices
# ---------------------------------------------------------------------------

def saturation(B) -> tuple[IntMatrix, int]:
    """Basis of ``(L ⊗ Q) ∩ Z^n`` for ``L`` spanned by the columns of ``B``.

    Returns ``(basis, index)`` where ``index = [saturation : L]``.
    """
    B = _as_matrix(B)
    if rank(B) != B.ncols:
        raise RankDeficientError("saturation needs linearly independent columns")
    left = kernel_basis(B.T)
    sat = kernel_basis(left.T) if left.ncols else IntMatrix.identity(B.nrows)
    index = prod(x for x in _diagonal(snf(B)[0]) if x)
    return sat, index


def lattice_preimage(f, S) -> IntMatrix:
    """HNF basis of ``{x in Z^b : f x in span(S)}`` for ``f`` of shape a x b."""
    f, S = _as_matrix(f), _as_matrix(S)
    if S.nrows != f.nrows:
        raise ValueError("sublattice lives in the wrong ambient space")
    K = kernel_basis(IntMatrix.hstack(f, -S))
    return hnf_basis(K.select_rows(range(f.ncols)))


def lattice_intersection(A, B) -> IntMatrix:
    """HNF basis of ``span(A) ∩ span(B)``."""
    A, B = _as_matrix(A), _as_matrix(B)
    K = kernel_basis(IntMatrix.hstack(A, -B))
    return hnf_basis(A @ K.select_rows(range(A.ncols)))


# ---------------------------------------------------------------------------
# Finitely generated abelian groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FgAbGroup:
    """``Z^n_generators / span(relations)``; relations are the columns."""

    n_generators: int
    relations: IntMatrix

    def __post_init__(self):
        if self.relations.nrows != self.n_generators:
            raise ValueError("relation matrix must have one row per generator")

    @classmethod
    def free(cls, n: int) -> FgAbGroup:
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def from_invariants(cls, factors: Sequence[int]) -> FgAbGroup:
        k = len(factors)
        return cls(k, IntMatrix.diag(list(factors)))

    @classmethod
    def quotient(cls, ambient: int, sub) -> FgAbGroup:
        return cls(ambient, _as_matrix(sub))

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        return invariant_factors(self.relations)

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    @property
    def order(self) -> int | None:
        """Group order, or ``None`` when infinite."""
        return None if self.free_rank else prod(self.torsion)

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def is_free(self) -> bool:
        return not self.torsion

    def isomorphic(self, other: FgAbGroup) -> bool:
        return self.invariant_factors == other.invariant_factors

    def contains_zero(self, v: Sequence[int]) -> bool:
        """Whether the generator combination ``v`` is zero in the group."""
        return in_lattice(v, self.relations)

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        parts = ["Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts)


@dataclass(frozen=True)
class FgAbHom:
    """Homomorphism given on generators; ``matrix`` is target x source."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.n_generators, self.source.n_generators):
            raise ValueError("matrix shape does not match source/target")
        images = self.matrix @ self.source.relations
        for c in images.columns():
            if not in_lattice(c, self.target.relations):
                raise ValueError("homomorphism is not well defined on relations")

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        return self.matrix @ v

    def compose(self, inner: FgAbHom) -> FgAbHom:
        """``self ∘ inner``."""
        return FgAbHom(inner.source, self.target, self.matrix @ inner.matrix)

    def is_injective(self) -> bool:
        return hom_kernel(self)[0].is_trivial()

    def is_surjective(self) -> bool:
        return cokernel(self)[0].is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


def _preimage_of_target_relations(h: FgAbHom) -> IntMatrix:
    return lattice_preimage(h.matrix, h.target.relations)


def hom_kernel(h: FgAbHom) -> tuple[FgAbGroup, FgAbHom]:
    """Kernel of ``h`` with its inclusion into the source."""
    P = _preimage_of_target_relations(h)
    Y = solve_columns(P, h.source.relations) if h.source.relations.ncols else IntMatrix.zeros(P.ncols, 0)
    K = FgAbGroup(P.ncols, Y)
    return K, FgAbHom(K, h.source, P)


def hom_image(h: FgAbHom) -> tuple[FgAbGroup, FgAbHom]:
    """Image of ``h`` presented on the source generators, with its inclusion."""
    P = _preimage_of_target_relations(h)
    im = FgAbGroup(h.source.n_generators, P)
    return im, FgAbHom(im, h.target, h.matrix)


def cokernel(h: FgAbHom) -> tuple[FgAbGroup, FgAbHom]:
    """Cokernel of ``h`` with the projection from the target."""
    k = h.target.n_generators
    C = FgAbGroup(k, IntMatrix.hstack(h.target.relations, h.matrix, nrows=k))
    return C, FgAbHom(h.target, C, IntMatrix.identity(k))


def pushout(f: FgAbHom, g: FgAbHom) -> tuple[FgAbGroup, FgAbHom, FgAbHom]:
    """Push-out ``(B ⊕ C) / <(f(a), -g(a))>`` of ``f: A -> B`` and ``g: A -> C``."""
    if f.source != g.source:
        raise ValueError("pushout needs maps with a common source")
    B, C = f.target, g.target
    nb, nc = B.n_generators, C.n_generators
    rel = IntMatrix.hstack(
        IntMatrix.block_diag(B.relations, C.relations),
        IntMatrix.vstack(f.matrix, -g.matrix, ncols=f.matrix.ncols),
        nrows=nb + nc,
    )
    P = FgAbGroup(nb + nc, rel)
    in_b = FgAbHom(B, P, IntMatrix.vstack(IntMatrix.identity(nb), IntMatrix.zeros(nc, nb), ncols=nb))
    in_c = FgAbHom(C, P, IntMatrix.vstack(IntMatrix.zeros(nb, nc), IntMatrix.identity(nc), ncols=nc))
    return P, in_b, in_c
