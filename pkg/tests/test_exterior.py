import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import stabilizing_cosets
from rzgl4.errors import DomainError
from rzgl4.exterior import (DIM, ExteriorSpace, SpecialEndo, SpecialLattice, VElem, anticommutator,
                            dual_lattice_N, product_lattice,
                            phi_matrix_displayed, phi_matrix_from_F, scalar_matrix_equal,
                            stabilizer_lattices, wedge_gram, wedge_int)
from rzgl4.isocrystal import DieudonneLattice
from rzgl4.lattice import w_standard

coords = st.lists(st.integers(0, 3 ** 12 - 1), min_size=DIM, max_size=DIM)


def velem(space, c, shift=0, dual=False):
    return space.element(c, shift, dual)


def same(space, a, b):
    """Equality of (shift, value) pairs or VElems at the working precision."""
    p = space.p
    if isinstance(a, VElem):
        lo = min(a.shift, b.shift)
        return all(x * p ** (a.shift - lo) == y * p ** (b.shift - lo) for x, y in zip(a.coords, b.coords))
    (s, x), (t, y) = a, b
    lo = min(s, t)
    return x * p ** (s - lo) == y * p ** (t - lo)


def test_wedge_gram_is_split_symmetric():
    G = wedge_gram()
    assert all(G[i][j] == G[j][i] for i in range(DIM) for j in range(DIM))
    assert G[0][1] == 1 and G[2][3] == -1 and G[4][5] == 1
    assert sum(1 for row in G for g in row if g) == 6


def test_wedge_of_basis_vectors():
    e = [[int(i == j) for i in range(4)] for j in range(4)]
    assert wedge_int(e[0], e[1]) == [1, 0, 0, 0, 0, 0]
    assert wedge_int(e[1], e[0]) == [-1, 0, 0, 0, 0, 0]
    assert wedge_int(e[1], e[2]) == [0, 0, 0, 0, 0, 1]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_phi_displayed_matches_wedge_of_F(p):
    assert phi_matrix_displayed(p) == phi_matrix_from_F(p)


def test_phi_on_basis(space):
    x3 = space.basis_vector(2)
    y = space.phi(x3)
    assert same(space, y, VElem(space.basis_vector(3).coords, -1))
    x5 = space.basis_vector(4)
    assert same(space, space.phi(x5), space.basis_vector(5))


@settings(max_examples=25, deadline=None)
@given(coords, coords)
def test_phi_preserves_pairing_up_to_frobenius(space, a, b):
    x, y = velem(space, a), velem(space, b)
    s, v = space.pairing(x, y)
    assert same(space, space.pairing(space.phi(x), space.phi(y)), (s, v.frobenius()))


@settings(max_examples=25, deadline=None)
@given(coords, coords)
def test_star_commutes_with_phi_and_cross_pairing(space, a, b):
    x, t = velem(space, a), velem(space, b, dual=True)
    assert same(space, space.hodge_star(space.phi(x)), space.phi(space.hodge_star(x)))
    s, v = space.cross_pairing(x, t)
    assert same(space, space.cross_pairing(space.phi(x), space.phi(t)), (s, v.frobenius()))
    assert same(space, space.hodge_star_dual(space.hodge_star(x)), x)


@settings(max_examples=25, deadline=None)
@given(coords, coords)
def test_star_realizes_the_pairing(space, a, b):
    x, y = velem(space, a), velem(space, b)
    assert same(space, space.cross_pairing(x, space.hodge_star(y)), space.pairing(x, y))


@settings(max_examples=15, deadline=None)
@given(coords, coords)
def test_special_endomorphisms_anticommute_to_pairing(space, a, b):
    x, y = velem(space, a), velem(space, b)
    assert scalar_matrix_equal(space, anticommutator(space, x, y), space.pairing(x, y))
    s, M = anticommutator(space, x, x)
    ps, pv = space.pairing(x, x)
    assert scalar_matrix_equal(space, (s, M), (ps, pv))


def test_special_endo_of_x1(space):
    E = SpecialEndo(space, space.basis_vector(0))
    # e1^e2 sends f1 to e2 and f2 to -e1
    ctx = space.ctx
    f1 = [ctx.one(), ctx.zero(), ctx.zero(), ctx.zero()]
    (_, n2), _ = E.apply([ctx.zero()] * 4, f1)
    assert n2 == [ctx.zero(), ctx.one(), ctx.zero(), ctx.zero()]


def random_gl4(ctx, rng):
    while True:
        h = [[ctx.elem(rng.randrange(ctx.q)) for _ in range(4)] for _ in range(4)]
        if _det(h).is_unit():
            return h


def _det(h):
    n = len(h)
    if n == 1:
        return h[0][0]
    out = h[0][0] * 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in h[1:]]
        term = h[0][j] * _det(minor)
        out = out + term if j % 2 == 0 else out - term
    return out


def test_h_action_scales_pairing_by_similitude_factor(space):
    rng = random.Random(5)
    ctx = space.ctx
    for _ in range(5):
        h = random_gl4(ctx, rng)
        c = ctx.elem(rng.randrange(1, ctx.q))
        while not c.is_unit():
            c = ctx.elem(rng.randrange(1, ctx.q))
        x = velem(space, [rng.randrange(ctx.q) for _ in range(DIM)])
        y = velem(space, [rng.randrange(ctx.q) for _ in range(DIM)])
        s, v = space.pairing(x, y)
        hx, hy = space.h_action(h, c, x), space.h_action(h, c, y)
        assert same(space, space.pairing(hx, hy), (s, v * _det(h) * (c * c).inverse()))


def test_h_action_trivial_on_scalars(space):
    ctx = space.ctx
    a = ctx.elem(7)
    h = [[a if i == j else ctx.zero() for j in range(4)] for i in range(4)]
    x = velem(space, list(range(1, 7)))
    # (a, a^2) acts trivially
    assert same(space, space.h_action(h, a * a, x), x)


def test_very_special_of_M(space, iso):
    L = space.very_special_of(DieudonneLattice(iso, iso.M))
    # <x1, x2, p x3, p^-1 x4, x5, x6>
    assert L.lattice == w_standard(space.ctx, DIM, [0, 0, 1, -1, 0, 0])
    assert L.orientation == "plus"
    assert space.is_special(L.lattice)
    assert space.orientation_of(L.lattice) == "plus"


def test_phi_bar_flips_orientation(space, iso):
    L = space.very_special_of(DieudonneLattice(iso, iso.M))
    L2 = L.phi_bar()
    assert L2.orientation == "minus"
    assert space.orientation_of(L2.lattice) == "minus"
    with pytest.raises(DomainError):
        space.dieudonne_of(L2)


def test_round_trip_on_sample(space, band_dl):
    rng = random.Random(11)
    for A in rng.sample(band_dl, 40):
        L = space.very_special_of(A)
        assert space.is_special(L.lattice)
        assert space.dieudonne_of(L) == A


def test_very_special_needs_height_zero(space, iso):
    B = iso.shift_height(iso.M, 1)
    with pytest.raises(DomainError):
        space.very_special_of(B)


def test_wedge_root_rejects_noncube(space):
    L = w_standard(space.ctx, DIM, [1, 0, 0, 0, 0, 0])
    with pytest.raises(DomainError):
        space.wedge_root(L)


def test_chain_and_length_conditions_on_M(space, iso):
    assert space.chain_condition(iso.M)
    assert space.wedge_length_condition(iso.M)
    assert not space.chain_condition(w_standard(space.ctx, 4, [0, 0, 0, 1]))


def test_length_condition_equals_one_on_band(space, band_dl):
    rng = random.Random(12)
    for A in rng.sample(band_dl, 30):
        L = space.very_special_of(A).lattice
        assert space.length_condition(L) == 1
        assert space.is_self_dual(L)


@pytest.mark.parametrize("alpha", [1, 2, 5, 7])
def test_unit_rescaling_invariance_of_specialness(iso, alpha):
    sp = ExteriorSpace(iso, alpha, 0)
    A = DieudonneLattice(iso, iso.M)
    L = sp.very_special_of(A).lattice
    assert sp.length_condition(L) == 1
    assert sp.dieudonne_of(L) == A
    assert sp.is_self_dual(L)


def test_stabilizer_closed_forms_on_sample(space, band_dl):
    rng = random.Random(13)
    for A in rng.sample(band_dl, 5):
        for name, (stab, closed) in stabilizer_lattices(space, A).items():
            assert stab == closed, name


def test_stabilizer_oracle_negative_control(space, iso):
    A = DieudonneLattice(iso, iso.M)
    stab, _ = stabilizer_lattices(space, A)["whole"]
    D = product_lattice(space.ctx, iso.M, dual_lattice_N(space, iso.M))
    assert stabilizing_cosets(space, stab, D, D) == 1
    small = stab.scaled(1)
    assert stabilizing_cosets(space, small, D, D) == 3 ** 12


def test_special_lattice_rejects_nonspecial(space):
    with pytest.raises(DomainError):
        SpecialLattice(space, space.standard.scaled(1))
    with pytest.raises(DomainError):
        SpecialLattice(space, space.standard, "sideways", check=False)
