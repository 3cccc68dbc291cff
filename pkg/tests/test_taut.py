from __future__ import annotations

from itertools import product as cartesian

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bunpic.abelian import IntMatrix, same_lattice
from bunpic.rootdata import build_classical, build_gl, product, weyl_reflections
from bunpic.symforms import BilForm, sym2_pairs
from bunpic.taut import (
    Det,
    Pair,
    RegimeError,
    TautClass,
    change_of_degree,
    fiber_restriction_data,
    g0_basis,
    gamma,
    gamma_matrix,
    normalize,
    parse_class,
    pullback_torus,
    rpic_basis,
    weight,
    weight_matrix,
    weyl_algebraic_action,
)
from oracles import det, rank_q, taut_oracle


def oracle_vec(c: TautClass, basis) -> tuple[int, ...]:
    """Oracle normal form of ``c`` as a coordinate vector of ``basis``."""
    out = [0] * basis.size
    for key, v in taut_oracle([(k, a) for a, k in c.atoms()], basis.r, basis.g, basis.n).items():
        if key[0] == "S":
            out[basis.s_index(key[1], key[2])] += v
        elif key[0] == "M":
            out[basis.m_index(key[1], key[2])] += v
        else:
            out[basis.d_index(key[1])] += v
    return tuple(out)


def vec(draw, r, lo=-5, hi=5):
    return tuple(draw(st.lists(st.integers(lo, hi), min_size=r, max_size=r)))


@st.composite
def classes(draw, r, n, max_terms=4):
    c = TautClass()
    for _ in range(draw(st.integers(0, max_terms))):
        k = draw(st.integers(-3, 3))
        if draw(st.booleans()):
            c = c + Det(vec(draw, r), vec(draw, n)) * k
        else:
            c = c + Pair(vec(draw, r), vec(draw, n), vec(draw, r), vec(draw, n)) * k
    return c


shapes = st.tuples(st.integers(1, 3), st.integers(0, 3))


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("r,n", list(cartesian(range(0, 6), range(0, 5))))
def test_basis_sizes(r, n):
    assert rpic_basis(r, 2, n).size == r * n + r * (r + 1) // 2 + r
    assert rpic_basis(r, 5, n).size == r * n + r * (r + 1) // 2 + r
    assert rpic_basis(r, 1, n).size == r * n + r * (r - 1) // 2 + r
    assert g0_basis(r, n, (1,) * r).size == r
    b = rpic_basis(r, 2, n)
    assert len(b.labels) == len(set(b.labels)) == len(b.atoms) == b.size


def test_basis_labels():
    assert rpic_basis(2, 2, 1).labels == ("S_11", "S_12", "S_22", "M_11", "M_21", "D_1", "D_2")
    assert rpic_basis(2, 1, 0).labels == ("S_12", "D_1", "D_2")
    assert g0_basis(2, 1, (0, 0)).labels == ("M_11", "M_21")


def test_regime_errors():
    with pytest.raises(RegimeError):
        rpic_basis(1, 0, 0)
    with pytest.raises(RegimeError):
        normalize(Det((1, 0), ()), rpic_basis(1, 2, 0))
    with pytest.raises(RegimeError):
        weyl_algebraic_action(IntMatrix([[1]]), g0_basis(1, 1, (0,)))


# ---------------------------------------------------------------------------
# normalization
# ---------------------------------------------------------------------------

def test_normalize_examples():
    b = rpic_basis(2, 2, 0)
    for i in range(2):
        expect = [0] * b.size
        expect[b.d_index(i)] = 1
        assert normalize(Det(b.unit(i), ()), b) == tuple(expect)
    c = normalize(Pair((1, 1), (), (1, 0), ()), b)
    expect = [0] * b.size
    expect[b.s_index(0, 0)] = expect[b.s_index(0, 1)] = 1
    assert c == tuple(expect)
    b1 = rpic_basis(1, 1, 0)
    assert normalize(Det((2,), ()), b1) == (4,)


@pytest.mark.parametrize("g", [1, 2, 3])
@settings(max_examples=150, deadline=None)
@given(data=st.data())
def test_normalize_matches_recursive_oracle(g, data):
    r, n = data.draw(shapes)
    c = data.draw(classes(r, n))
    b = rpic_basis(r, g, n)
    assert normalize(c, b) == oracle_vec(c, b)


@pytest.mark.parametrize("g", [1, 2, 4])
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_del_det_closure(g, data):
    r, n = data.draw(shapes)
    x, z, y, u = vec(data.draw, r), vec(data.draw, n), vec(data.draw, r), vec(data.draw, n)
    b = rpic_basis(r, g, n)
    s = tuple(a + c for a, c in zip(x, y))
    t = tuple(a + c for a, c in zip(z, u))
    assert normalize(Pair(x, z, y, u), b) == normalize(Det(s, t) - Det(x, z) - Det(y, u), b)


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_genus_one_square_relation(data):
    r, n = data.draw(shapes)
    chi = vec(data.draw, r)
    b = rpic_basis(r, 1, n)
    zn = (0,) * n
    assert normalize(Pair(chi, zn, chi, zn), b) == normalize(Det(chi, zn) * 2, b)


def test_pullback_atoms_vanish():
    b = rpic_basis(2, 2, 2)
    c = Det((0, 0), (1, 3)) + Pair((0, 0), (1, 0), (0, 0), (2, 2)) * 5
    assert normalize(c, b) == (0,) * b.size
    assert weight(c, (3, 1), 2, 2) == (0, 0)
    assert gamma(c, 2) == (0, 0, 0)


# ---------------------------------------------------------------------------
# weight and gamma
# ---------------------------------------------------------------------------

def test_weight_examples():
    assert weight(Det((1,), ()), (3,), 2, 0) == (2,)
    assert weight(Pair((1,), (0,), (0,), (1,)), (3,), 2, 1) == (1,)
    # genus zero basis element for G_m, d = 1: weight(-L(2) + <2,2>) = -6 + 8
    b = g0_basis(1, 0, (1,))
    assert b.epsilon == IntMatrix([[2]])
    assert weight(Det((2,), ()) * -1 + Pair((2,), (), (2,), ()), (1,), 0, 0) == (2,)
    assert weight(b.atoms[0], (1,), 0, 0) == (2,)


def test_gamma_examples():
    # Bil^s coordinates in the order (1,1), (1,2), (2,2)
    assert gamma(Det((1, 0), (4,)), 2) == (1, 0, 0)
    assert gamma(Pair((1, 0), (), (0, 1), ()), 2) == (0, 1, 0)


@pytest.mark.parametrize("g", [1, 2, 3])
@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_weight_gamma_factor_through_normal_form(g, data):
    r, n = data.draw(shapes)
    d = vec(data.draw, r)
    c = data.draw(classes(r, n))
    b = rpic_basis(r, g, n, d)
    v = normalize(c, b)
    assert weight_matrix(b) @ v == weight(c, d, g, n)
    assert gamma_matrix(b) @ v == gamma(c, r)


@settings(max_examples=100, deadline=None)
@given(data=st.data())
def test_genus_zero_normalization(data):
    r, n = data.draw(shapes)
    d = vec(data.draw, r, -3, 3)
    c = data.draw(classes(r, n))
    b = g0_basis(r, n, d)
    v = normalize(c, b)
    assert weight_matrix(b) @ v == weight(c, d, 0, n)


@pytest.mark.parametrize("d", [(0,), (1,), (2,), (3,), (-1,)])
def test_genus_zero_image(d):
    b = g0_basis(1, 0, d)
    assert b.epsilon == IntMatrix([[1 if d[0] % 2 == 0 else 2]])
    assert weight_matrix(b) == b.epsilon
    assert weight_matrix(g0_basis(1, 2, d)) == IntMatrix([[1]])


# ---------------------------------------------------------------------------
# Weyl action, functoriality, change of degree
# ---------------------------------------------------------------------------

def test_weyl_action_examples():
    b = rpic_basis(1, 2, 0)
    assert weyl_algebraic_action(IntMatrix([[1]]), b) == IntMatrix.identity(2)
    # columns: s.S_11 = S_11, s.D_1 = S_11 - D_1
    assert weyl_algebraic_action(IntMatrix([[-1]]), b) == IntMatrix([[1, 1], [0, -1]])
    assert weyl_algebraic_action(IntMatrix([[-1]]), rpic_basis(1, 1, 0)) == IntMatrix([[1]])


@pytest.mark.parametrize("rd", [build_classical("A", 2), build_classical("B", 3), build_gl(3), product(build_classical("A", 1), build_classical("G", 2))])
@pytest.mark.parametrize("g,n", [(1, 0), (1, 2), (2, 0), (2, 1), (3, 2)])
def test_weyl_action_is_homomorphism(rd, g, n):
    b = rpic_basis(rd.rank, g, n)
    refl = weyl_reflections(rd).on_char
    mats = [weyl_algebraic_action(s, b) for s in refl]
    for s, ms in zip(refl, mats):
        assert ms @ ms == IntMatrix.identity(b.size)
        for t, mt in zip(refl, mats):
            assert weyl_algebraic_action(s @ t, b) == ms @ mt


@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_pullback_commutes_with_weight_gamma_normalize(data):
    r, n = data.draw(shapes)
    r2 = data.draw(st.integers(1, 3))
    f = IntMatrix([list(vec(data.draw, r, -2, 2)) for _ in range(r2)], ncols=r)
    c = data.draw(classes(r, n))
    d2 = vec(data.draw, r2, -3, 3)
    d = f.T @ d2
    pc = pullback_torus(f, c)
    assert weight(pc, d2, 2, n) == f @ weight(c, d, 2, n)
    G = BilForm.from_coords(r, gamma(c, r)).gram
    assert BilForm.from_coords(r2, gamma(pc, r2)).gram == f @ G @ f.T
    b, b2 = rpic_basis(r, 2, n), rpic_basis(r2, 2, n)
    P = IntMatrix.from_columns([normalize(pullback_torus(f, a), b2) for a in b.atoms], b2.size)
    assert normalize(pc, b2) == P @ normalize(c, b)


def test_pullback_examples():
    c = Det((1, 2), (0,)) + Pair((1, 0), (1,), (0, 1), (0,))
    assert pullback_torus(IntMatrix.identity(2), c) == c
    b = rpic_basis(3, 2, 1)
    assert normalize(pullback_torus(IntMatrix.zeros(3, 2), c), b) == (0,) * b.size
    A = IntMatrix([[1], [1]])
    assert pullback_torus(A, Det((1,), (0,))) == Det((1, 1), (0,))


@pytest.mark.parametrize("r,g,n", [(1, 2, 1), (2, 2, 2), (2, 1, 1), (3, 3, 1), (2, 1, 3)])
def test_change_of_degree(r, g, n):
    b = rpic_basis(r, g, n)
    for d in cartesian(range(-2, 3), repeat=r):
        T = change_of_degree(b, d)
        assert abs(det(T.rows)) == 1
        Wd = weight_matrix(rpic_basis(r, g, n, d))
        W0 = weight_matrix(rpic_basis(r, g, n, (0,) * r))
        assert Wd @ T == W0
        assert gamma_matrix(b) @ T == gamma_matrix(b)
    with pytest.raises(RegimeError):
        change_of_degree(rpic_basis(1, 2, 0), (1,))


# ---------------------------------------------------------------------------
# fibre restriction
# ---------------------------------------------------------------------------

def test_fiber_examples():
    F = fiber_restriction_data(1, 2, 2, (0,))
    assert same_lattice(F.H_basis, IntMatrix([[1, 0], [-2, 1], [0, -1]]))
    assert F.kernel.ncols == 2
    assert fiber_restriction_data(3, 2, 2, (1, 0, 2)).kernel.ncols == 6
    assert fiber_restriction_data(2, 1, 1, (1, 1)).kernel.ncols == 0
    F = fiber_restriction_data(1, 3, 0, (1,))
    assert F.image_invariant_factors == (1, 4)


@pytest.mark.parametrize("r,g,n", [(r, g, n) for r in (1, 2, 3) for g in (1, 2, 3) for n in (0, 1, 2, 3)])
def test_fiber_kernel_rank(r, g, n):
    d = tuple(range(1, r + 1))
    F = fiber_restriction_data(r, g, n, d)
    expected = r * n if g >= 2 else r * max(n - 1, 0)
    assert F.kernel.ncols == expected
    b = rpic_basis(r, g, n, d)
    stacked = IntMatrix.vstack(weight_matrix(b), gamma_matrix(b))
    assert F.kernel.ncols == b.size - rank_q(stacked.tolist())


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def test_parse_class():
    c = parse_class("2*L([1,0]; [0]) - P([1,0], [0] | [0,1], [1])", 2, 1)
    assert c == Det((1, 0), (0,)) * 2 - Pair((1, 0), (0,), (0, 1), (1,))
    assert parse_class("L([1])", 1, 2) == Det((1,), (0, 0))
    assert parse_class("P([1] | [-1])", 1, 0) == Pair((1,), (), (-1,), ())
    assert parse_class(str(c), 2, 1) == c
    for bad in ["", "L([1,0])", "L([1]) P([1] | [1])", "Q([1])"]:
        with pytest.raises(RegimeError):
            parse_class(bad, 1, 0)


def test_pair_symmetry():
    assert Pair((1, 0), (2,), (0, 1), (0,)) == Pair((0, 1), (0,), (1, 0), (2,))
    assert sym2_pairs(2) == ((0, 0), (0, 1), (1, 1))
