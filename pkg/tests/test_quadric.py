import itertools

import pytest
import sympy

from rzgl4 import quadric as Q
from rzgl4.errors import DomainError
from rzgl4.isocrystal import DieudonneLattice


@pytest.fixture(scope="module")
def om2(fs):
    return Q.omega_of(fs, fs.seed_type2())


@pytest.fixture(scope="module")
def om4(fs, lam4):
    return Q.omega_of(fs, lam4)


@pytest.fixture(scope="module")
def generic_setup(fs, lam4):
    fs4 = Q.pinning_space(Q.omega_of(fs, lam4), 2)
    om = Q.omega_of(fs4, fs4.vertex(lam4.lattice))
    plus, minus = Q.x_lambda_points(om, 2, fs4)
    return fs4, om, plus, minus


def test_psi_lies_on_the_quadric_symbolically():
    a, b, c, d, delta = sympy.symbols("a b c d delta")
    x, y = a * c, b * d
    z = (a * d + b * c) / 2
    w = (a * d - b * c) / (2 * delta)
    assert sympy.simplify(x * y - z ** 2 + delta ** 2 * w ** 2) == 0


def test_psi_is_a_bijection_onto_the_quadric(fs):
    F = Q.finite_field(3, 2)
    delta = F.sqrt(F.scalar(fs.delta))
    pts = [Q.psi(F, delta, P, R) for P in F.projective_line() for R in F.projective_line()]
    assert len(set(pts)) == 100
    assert set(pts) == set(Q.quadric_points(F, fs.delta))


def test_finite_field_axioms():
    F = Q.finite_field(3, 2)
    els = range(F.q)
    assert all(F.mul(a, F.div(1, a)) == 1 for a in els if a)
    assert all(F.frob(F.frob(a)) == a for a in els)
    assert sum(1 for a in els if F.frob(a) == a) == 3
    assert all(F.mul(F.sqrt(F.mul(a, a)), F.sqrt(F.mul(a, a))) == F.mul(a, a) for a in els)


def _f9_planes(gram):
    """Totally isotropic planes of F_9^4 for an integer Gram matrix, by brute force.

    F_9 = F_3[i] with i^2 = -1, elements as pairs (re, im)."""
    p = 3

    def mul(u, v):
        return ((u[0] * v[0] - u[1] * v[1]) % p, (u[0] * v[1] + u[1] * v[0]) % p)

    def add(u, v):
        return ((u[0] + v[0]) % p, (u[1] + v[1]) % p)

    def form(u, v):
        acc = (0, 0)
        for i in range(4):
            for j in range(4):
                if gram[i][j] % p:
                    acc = add(acc, mul((gram[i][j] % p, 0), mul(u[i], v[j])))
        return acc

    elems = [(a, b) for a in range(p) for b in range(p)]
    pts = []
    for v in itertools.product(elems, repeat=4):
        lead = next((x for x in v if x != (0, 0)), None)
        if lead == (1, 0) and form(v, v) == (0, 0):
            pts.append(v)
    pairs = sum(1 for u in pts for v in pts if u != v and form(u, v) == (0, 0))
    return len(pts), pairs // (10 * 9)


def test_lagrangian_counts(om2, om4):
    assert Q.lagrangians(om2, 1) == []
    assert len(Q.lagrangians(om2, 2)) == 2
    assert len(Q.lagrangians(om4, 2)) == 20
    npts, nplanes = _f9_planes(om4.gram)
    assert (npts, nplanes) == (100, 20)


def test_type2_lines_swapped_by_frobenius(om2):
    F = Q.finite_field(3, 2)
    a, b = Q.lagrangians(om2, 2)
    assert Q.frob_subspace(F, a) == b and Q.frob_subspace(F, b) == a


def test_x_lambda_points_over_f9(om4):
    plus, minus = Q.x_lambda_points(om4, 1)
    F = Q.finite_field(3, 2)
    assert len(plus) == len(minus) == 10
    assert {Q.frob_flag(F, f) for f in plus} == set(minus)
    assert {f.plane for f in plus}.isdisjoint({f.plane for f in minus})


def test_x_lambda_points_over_f81(generic_setup):
    _, _, plus, minus = generic_setup
    assert len(plus) == len(minus) == 82


def test_reduce_lift_round_trip(fs, om4):
    for U in Q.lagrangians(om4, 2):
        L = Q.lagrangian_lattice(fs, om4, U)
        assert Q.reduce_lattice(fs, om4, L) == tuple(U)


def test_special_lattices_through_type4(fs, om4):
    plus, minus = Q.x_lambda_points(om4, 1)
    lats = Q.special_lattices_through(fs, om4)
    assert len(lats["plus"]) == len(lats["minus"]) == 10
    assert {Q.reduce_lattice(fs, om4, L.lattice) for L in lats["plus"]} == {f.plane for f in plus}
    space = fs.space
    assert {L.phi_bar().lattice for L in lats["plus"]} == {L.lattice for L in lats["minus"]}
    for L in lats["plus"]:
        assert space.dieudonne_of(L).height == 0


def test_flag_line_is_plane_meet_frobenius(om4):
    F = Q.finite_field(3, 2)
    for f in Q.x_lambda_points(om4, 1)[0]:
        fp = Q.frob_subspace(F, f.plane)
        assert Q.span_dim(F, f.plane, fp) == 3
        assert Q.span_dim(F, f.plane, f.line) == 2 and Q.span_dim(F, fp, f.line) == 2


def test_chain_of_standard_lattice(fs, iso):
    L = fs.space.very_special_of(DieudonneLattice(iso, iso.M))
    chain = Q.special_chain(fs.space, L)
    assert len(chain) == 2
    d, lam = Q.chain_and_lambda(fs, L)
    assert d == 1 and lam.type == 2
    assert Q.is_superspecial(fs, L)


def test_generic_point(generic_setup, lam4):
    fs4, om, plus, _ = generic_setup
    F = Q.finite_field(3, 4)
    line = F.projective_line()
    seen = {1: 0, 2: 0}
    for i, P in enumerate(line):
        defined_over_f9 = P[0] == 0 or F.frob(F.frob(P[1])) == P[1]
        L = Q.lagrangian_lattice(fs4, om, plus[i].plane)
        d, lam = Q.chain_and_lambda(fs4, L)
        seen[d] += 1
        assert d == (1 if defined_over_f9 else 2)
        if d == 2:
            assert lam.lattice == lam4.lattice
            assert not Q.is_superspecial(fs4, L)
            # (L + Phi L) / L has dimension 1 and the chain reaches Lam_L after two steps
            assert len(Q.special_chain(fs4.space, L)) == 3
    # the F_9-points of the line are exactly the superspecial ones
    assert seen == {1: 10, 2: 72}


def test_type2_has_no_quadric(om2):
    with pytest.raises(DomainError):
        Q.x_lambda_points(om2, 1)
    with pytest.raises(DomainError):
        om2.standard_coordinates()


def test_reduce_rejects_outside_lattice(fs, om4):
    with pytest.raises(DomainError):
        Q.reduce_lattice(fs, om4, fs.space.standard.scaled(-3))
