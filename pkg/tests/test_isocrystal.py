import random

import pytest

from oracles import band_by_hermite_scan
from rzgl4.errors import DomainError
from rzgl4.isocrystal import DieudonneLattice, enumerate_band, make_isocrystal
from rzgl4.lattice import from_gens, quotient_length

BAND_COUNT_P3_M2 = 7381
BAND_COUNT_P3_M1 = 121


@pytest.fixture(scope="module")
def iso1():
    return make_isocrystal(3, 10, 1)


def test_band_count_frozen(band):
    assert len(band) == BAND_COUNT_P3_M2
    assert len({A.key() for A in band}) == BAND_COUNT_P3_M2


def test_band_matches_hermite_scan_at_residue_degree_one(iso1):
    ours = {A.key() for A in enumerate_band(iso1, 0)}
    theirs = {from_gens(iso1.ctx, H.T.tolist(), -1).key() for H in band_by_hermite_scan(3)}
    assert len(ours) == BAND_COUNT_P3_M1
    assert ours == theirs


def test_band_members_are_dieudonne_of_height_zero(iso, band):
    rng = random.Random(1)
    lo, hi = iso.M.scaled(1), iso.M.scaled(-1)
    for A in rng.sample(band, 200):
        assert iso.is_dieudonne(A)
        assert iso.height(A) == 0
        assert A.contains(lo) and hi.contains(A)


def test_F_V_compose_to_p(iso):
    rng = random.Random(2)
    ctx = iso.ctx
    for _ in range(20):
        v = [ctx.elem(rng.randrange(ctx.q)) for _ in range(4)]
        assert iso.apply_F(iso.apply_V(v)) == [3 * x for x in v]
        assert iso.apply_V(iso.apply_F(v)) == [3 * x for x in v]


def test_F_bar_of_M(iso):
    FM = iso.F_bar(iso.M)
    assert iso.M.contains(FM) and quotient_length(iso.M, FM) == 2
    # M is superspecial: F M = V M
    assert FM == iso.V_bar(iso.M)
    assert iso.F_bar(FM) == iso.M.scaled(1)


def test_non_dieudonne_rejected(iso):
    A = iso.lattice([[1, 0, 0, 0], [0, 3, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    assert not iso.is_dieudonne(A)
    with pytest.raises(DomainError):
        DieudonneLattice(iso, A)


@pytest.mark.parametrize("delta", [-2, -1, 1, 2, 3])
def test_shift_height(iso, band, delta):
    rng = random.Random(delta)
    for A in rng.sample(band, 10):
        B = iso.shift_height(A, delta)
        assert B.height == delta
        assert iso.is_dieudonne(B.lattice)


def test_height_band_is_symmetric(iso1):
    counts = [len(enumerate_band(iso1, h)) for h in range(-2, 3)]
    assert counts == counts[::-1]
    with pytest.raises(DomainError):
        enumerate_band(iso1, 5)


def test_regression_values(iso):
    # e3 -> e4 leaves <e1, e2, e3, p e4>; <e1, e2, p e3, e4> is stable with height 1
    assert not iso.is_dieudonne(iso.lattice([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 3]]))
    B = iso.lattice([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 3, 0], [0, 0, 0, 1]])
    assert iso.is_dieudonne(B) and iso.height(B) == 1
