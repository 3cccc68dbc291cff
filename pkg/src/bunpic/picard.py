"""Relative Picard groups of moduli of principal bundles.

For ``g >= 1`` the group of a reductive ``G`` is computed as the sublattice
of the torus lattice (:mod:`bunpic.taut`) fixed by the algebraic Weyl action,
together with the transgression from W-invariant quadratic forms and the
pullback from the abelianization.  For ``g = 0`` it is described through the
image of the weight map inside the character lattice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .abelian import (
    FgAbGroup,
    FgAbHom,
    IntMatrix,
    hnf_basis,
    lattice_preimage,
    pushout,
    same_lattice,
    saturation,
    solve_columns,
)
from .rootdata import RootDatum, build_torus, derived_lattices, weyl_reflections
from .symforms import (
    check_star,
    contraction_matrix,
    find_lift,
    invariant_lattice,
    semisimple_coords,
    sym2_action,
    sym2_dim,
    sym2_invariants,
    sym2_pairs,
)
from .taut import Pair, RPicBasis, g0_basis, normalize, rpic_basis, weyl_algebraic_action

__all__ = [
    "VerificationError",
    "PicardPresentation",
    "PushoutReport",
    "TorusSequences",
    "rpic",
    "rpic_torus",
    "rpic_reductive",
    "rpic_reductive_g0",
    "rpic_nonreductive",
    "verify_pushout",
    "torus_transgression",
]


class VerificationError(AssertionError):
    """An internal consistency check failed; this indicates a bug."""


@dataclass(frozen=True)
class PushoutReport:
    ok: bool
    failures: tuple[str, ...]
    pushout_invariant_factors: tuple[int, ...]
    invariant_rank: int


@dataclass(frozen=True)
class TorusSequences:
    """The exact sequence ``0 -> Sym² ⊕ Λ*⊗Z^n -> RPic -> Λ* (or Λ*/2) -> 0``."""

    tau_sigma: FgAbHom
    rho: FgAbHom

    def is_exact(self) -> bool:
        if not self.tau_sigma.is_injective() or not self.rho.is_surjective():
            return False
        ker = lattice_preimage(self.rho.matrix, self.rho.target.relations)
        return same_lattice(ker, self.tau_sigma.matrix)


@dataclass
class PicardPresentation:
    """A free relative Picard group inside the lattice of an ambient torus.

    For ``g >= 1`` the columns of ``generators`` are coordinates in
    ``basis`` (the torus lattice).  ``transgression_matrix`` sends the
    columns of ``sym2_inv_basis`` to generator coordinates and
    ``ab_pullback_matrix`` sends the basis of the abelianization's lattice
    to generator coordinates.  For ``g = 0``, ``weight_image`` holds the
    image of the weight map in the character lattice.
    """

    group_label: str
    g: int
    n: int
    d: tuple[int, ...]
    delta: tuple[int, ...] | None
    free_rank: int
    torsion: tuple[int, ...]
    basis: RPicBasis | None
    generators: IntMatrix | None = None
    sym2_inv_basis: IntMatrix | None = None
    transgression_matrix: IntMatrix | None = None
    ab_charL: IntMatrix | None = None
    ab_basis: RPicBasis | None = None
    ab_pullback_matrix: IntMatrix | None = None
    ab_transgression: IntMatrix | None = None
    sym2_ab_to_inv: IntMatrix | None = None
    weight_image: IntMatrix | None = None
    saturation_index: int = 1
    star_holds: bool = True
    injectivity_guaranteed: bool = True
    torus_sequences: TorusSequences | None = None
    pushout_report: PushoutReport | None = None
    provenance: str = ""
    notes: list[str] = field(default_factory=list)


def torus_transgression(basis: RPicBasis) -> IntMatrix:
    """``χ_i·χ_k ↦ <(e_i,0),(e_k,0)>`` as an ``N x dim Sym²`` matrix."""
    zn = (0,) * basis.n
    cols = [normalize(Pair(basis.unit(i), zn, basis.unit(k), zn), basis) for i, k in sym2_pairs(basis.r)]
    return IntMatrix.from_columns(cols, basis.size)


def _sigma(basis: RPicBasis) -> IntMatrix:
    zr, zn = (0,) * basis.r, (0,) * basis.n
    cols = []
    for i in range(basis.r):
        for j in range(basis.n):
            f = tuple(int(t == j) for t in range(basis.n))
            cols.append(normalize(Pair(basis.unit(i), zn, zr, f), basis))
    return IntMatrix.from_columns(cols, basis.size)


def _torus_sequences(basis: RPicBasis) -> TorusSequences:
    r, N = basis.r, basis.size
    src = IntMatrix.hstack(torus_transgression(basis), _sigma(basis), nrows=N)
    ts = FgAbHom(FgAbGroup.free(src.ncols), FgAbGroup.free(N), src)
    rho_cols = [[0] * r for _ in range(N)]
    for i in range(r):
        rho_cols[basis.d_index(i)][i] = 1
    target = FgAbGroup.free(r) if basis.g >= 2 else FgAbGroup.from_invariants([2] * r)
    rho = FgAbHom(FgAbGroup.free(N), target, IntMatrix.from_columns(rho_cols, r))
    return TorusSequences(ts, rho)


def _free(k: int) -> FgAbGroup:
    return FgAbGroup.free(k)


def verify_pushout(pres: PicardPresentation) -> PushoutReport:
    """Check that the abelianization and transgression maps form a push-out.

    The square is ``Sym²(Λ*_ab) -> RPic(ab)`` and ``Sym²(Λ*_ab) -> Sym²(Λ*)^W``,
    mapping to the invariant lattice by ``ab_pullback`` and ``τ_G``.
    """
    if pres.g < 1 or pres.generators is None:
        raise ValueError("push-out verification applies to g >= 1 presentations")
    k = pres.free_rank
    tau_ab = pres.ab_transgression
    j = pres.sym2_ab_to_inv
    ab = pres.ab_pullback_matrix
    tau = pres.transgression_matrix
    failures = []
    f = FgAbHom(_free(tau_ab.ncols), _free(tau_ab.nrows), tau_ab)
    g = FgAbHom(_free(j.ncols), _free(j.nrows), j)
    arrows = {
        "Sym2(ab) -> RPic(ab)": f,
        "Sym2(ab) -> Sym2(T)^W": g,
        "RPic(ab) -> RPic(G)": FgAbHom(_free(ab.ncols), _free(k), ab),
        "Sym2(T)^W -> RPic(G)": FgAbHom(_free(tau.ncols), _free(k), tau),
    }
    for name, h in arrows.items():
        if not h.is_injective():
            failures.append(f"{name} is not injective")
    if ab @ tau_ab != tau @ j:
        failures.append("square does not commute")
        P = None
    else:
        P, _, _ = pushout(f, g)
    if P is not None:
        induced = FgAbHom(P, _free(k), IntMatrix.hstack(ab, tau, nrows=k))
        if P.invariant_factors != (0,) * k:
            failures.append(f"push-out is {P}, not free of rank {k}")
        if not induced.is_surjective():
            failures.append("induced map from the push-out is not surjective")
        elif not induced.is_injective():
            failures.append("induced map from the push-out is not injective")
    return PushoutReport(not failures, tuple(failures), P.invariant_factors if P else (), k)


def rpic_reductive(
    rd: RootDatum,
    g: int,
    n: int,
    delta: Sequence[int] | None = None,
    d: Sequence[int] | None = None,
    verify: bool = True,
) -> PicardPresentation:
    """Relative Picard group for ``g >= 1`` as the Weyl-invariant torus sublattice."""
    if g < 1:
        raise ValueError("rpic_reductive needs g >= 1; use rpic_reductive_g0")
    if d is None:
        if delta is None:
            raise ValueError("give a degree class or a lift")
        d = delta
    d = tuple(int(x) for x in d)
    if len(d) != rd.rank:
        raise ValueError("degree has the wrong length")
    r = rd.rank
    basis = rpic_basis(r, g, n, d)
    refl = weyl_reflections(rd).on_char
    actions = [weyl_algebraic_action(s, basis) for s in refl]
    inv = invariant_lattice(actions, basis.size)
    k = inv.ncols
    _, sat_index = saturation(inv) if k else (None, 1)

    tau_T = torus_transgression(basis)
    V = sym2_invariants(rd).on_char
    image = tau_T @ V
    try:
        tau_G = solve_columns(inv, image)
    except ValueError:
        raise VerificationError("transgression of an invariant form is not Weyl-invariant") from None
    if inv @ tau_G != image:
        raise VerificationError("transgression does not restrict to the torus transgression")

    A = derived_lattices(rd).ab_charL
    a = A.ncols
    d_ab = A.T @ d
    ab_basis = rpic_basis(a, g, n, d_ab)
    pulled = [normalize(atom.map_characters(lambda chi: A @ chi), basis) for atom in ab_basis.atoms]
    P = IntMatrix.from_columns(pulled, basis.size)
    try:
        ab_pullback = solve_columns(inv, P)
    except ValueError:
        raise VerificationError("pullback from the abelianization is not Weyl-invariant") from None
    tau_ab = torus_transgression(ab_basis)
    j = solve_columns(V, sym2_action(A)) if sym2_dim(a) else IntMatrix.zeros(V.ncols, 0)

    pres = PicardPresentation(
        group_label=rd.label,
        g=g,
        n=n,
        d=d,
        delta=None if delta is None else tuple(delta),
        free_rank=k,
        torsion=(),
        basis=basis,
        generators=inv,
        sym2_inv_basis=V,
        transgression_matrix=tau_G,
        ab_charL=A,
        ab_basis=ab_basis,
        ab_pullback_matrix=ab_pullback,
        ab_transgression=tau_ab,
        sym2_ab_to_inv=j,
        saturation_index=sat_index,
    )
    if rd.is_torus():
        pres.torus_sequences = _torus_sequences(basis)
        if verify and not pres.torus_sequences.is_exact():
            raise VerificationError("torus exact sequence is not exact")
    if verify:
        if sat_index != 1:
            raise VerificationError("invariant sublattice is not saturated")
        report = verify_pushout(pres)
        pres.pushout_report = report
        if not report.ok:
            if g >= 2:
                raise VerificationError("; ".join(report.failures))
            pres.notes.append("push-out square fails in genus one: " + "; ".join(report.failures))
    return pres


def rpic_reductive_g0(
    rd: RootDatum,
    n: int,
    delta: Sequence[int] | None = None,
    d: Sequence[int] | None = None,
) -> PicardPresentation:
    """Genus zero: the image of the weight map in ``Λ*(T_G)``.

    With ``delta`` a lift satisfying the nonvanishing condition is chosen.
    With ``d`` the condition is only checked and the result flagged.
    """
    if d is None:
        if delta is None:
            raise ValueError("give a degree class or a lift")
        d = find_lift(rd, delta)
    d = tuple(int(x) for x in d)
    if len(d) != rd.rank:
        raise ValueError("degree has the wrong length")
    r, l = rd.rank, rd.semisimple_rank
    m = semisimple_coords(rd, d)
    star = check_star(rd, m)
    V_sc = sym2_invariants(rd).on_sc
    C_d = hnf_basis(contraction_matrix(rd, m, V_sc)) if l else IntMatrix.zeros(0, 0)
    restr = rd.simple_coroots
    if n == 0:
        f = IntMatrix.vstack(restr, IntMatrix([list(d)], ncols=r))
        S = IntMatrix.block_diag(C_d, IntMatrix([[2]]))
    else:
        f, S = restr, C_d
    omega = lattice_preimage(f, S)
    basis = g0_basis(r, n, d) if rd.is_torus() else None
    pres = PicardPresentation(
        group_label=rd.label,
        g=0,
        n=n,
        d=d,
        delta=None if delta is None else tuple(delta),
        free_rank=omega.ncols,
        torsion=(),
        basis=basis,
        weight_image=omega,
        star_holds=star,
        injectivity_guaranteed=star,
    )
    if not star:
        pres.notes.append("nonvanishing condition fails for this lift: injectivity of the weight map not guaranteed")
    if basis is not None:
        lattice = IntMatrix.identity(r) if n >= 1 else basis.epsilon
        if not same_lattice(lattice, omega):
            raise VerificationError("torus weight image disagrees with the direct description")
    return pres


def rpic_torus(rd: RootDatum, g: int, n: int, d: Sequence[int], verify: bool = True) -> PicardPresentation:
    if not rd.is_torus():
        raise ValueError("rpic_torus needs a root datum without roots")
    if g == 0:
        return rpic_reductive_g0(rd, n, d=d)
    return rpic_reductive(rd, g, n, d=d, verify=verify)


def rpic(
    rd: RootDatum,
    g: int,
    n: int,
    delta: Sequence[int] | None = None,
    d: Sequence[int] | None = None,
    verify: bool = True,
) -> PicardPresentation:
    if g < 0 or n < 0:
        raise ValueError("genus and number of points must be nonnegative")
    if g == 0:
        return rpic_reductive_g0(rd, n, delta=delta, d=d)
    return rpic_reductive(rd, g, n, delta=delta, d=d, verify=verify)


def rpic_nonreductive(
    quotient: RootDatum | None,
    g: int,
    n: int,
    delta: Sequence[int] | None = None,
    d: Sequence[int] | None = None,
    description: str = "",
    verify: bool = True,
) -> PicardPresentation:
    """Reduce to the reductive quotient; ``None`` means the quotient is trivial."""
    rd = quotient if quotient is not None else build_torus(0)
    if rd.rank == 0:
        delta, d = None, ()
    pres = rpic(rd, g, n, delta=delta, d=d, verify=verify)
    what = description or "a connected group"
    pres.provenance = f"computed on the reductive quotient {rd.label} of {what}"
    return pres

