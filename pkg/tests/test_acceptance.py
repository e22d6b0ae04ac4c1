"""One test per acceptance criterion; each prints a single PASS/FAIL line."""
import random
import subprocess
import sys
import time

import pytest
import sympy

from oracles import stabilizing_cosets
from rzgl4 import quadric as Q
from rzgl4.exterior import (DIM, anticommutator, dual_lattice_N, product_lattice,
                            scalar_matrix_equal, stabilizer_lattices)
from rzgl4.graph import build_graph, to_dot, to_json, type2_inside, type4_containing
from rzgl4.isocrystal import DieudonneLattice
from rzgl4.kraft import GENERIC, SUPERSPECIAL, classify_ss_42, eo_stratum, simple_words
from rzgl4.qspace import det_class, hasse_invariant, make_fixed_space, square_class

_CACHE = {}


@pytest.fixture
def criterion(capsys):
    """criterion(n, title, fn, limit): run fn() -> (ok, detail), print one line, assert."""

    def run(n, title, fn, limit=None):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # reported as FAIL, then re-raised by the assert below
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        dt = time.perf_counter() - t0
        if limit is not None and dt >= limit:
            ok, detail = False, f"{detail}; took {dt:.1f} s, limit {limit} s"
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'} {title}: {detail} ({dt:.1f} s)")
        assert ok, detail

    return run


def very_special_band(space, band_dl):
    """(A, L) for every lattice of the band, computed once."""
    if "band" not in _CACHE:
        _CACHE["band"] = [(A, space.very_special_of(A)) for A in band_dl]
    return _CACHE["band"]


def same(space, a, b):
    p = space.p
    (s, x), (t, y) = a, b
    lo = min(s, t)
    return x * p ** (s - lo) == y * p ** (t - lo)


def test_criterion_01_counting(criterion):
    def body():
        got = []
        for p in (3, 5, 7):
            fs = make_fixed_space(p, 8)
            seed = fs.seed_type2()
            up = type4_containing(fs, seed)
            down = type2_inside(fs, up[0])
            recip = all(seed in type2_inside(fs, v) for v in up)
            recip &= all(up[0] in type4_containing(fs, v) for v in down)
            if len(up) != p * p + 1 or len(down) != p * p + 1 or not recip:
                return False, f"p={p}: {len(up)} containing, {len(down)} inside, reciprocity {recip}"
            got.append(f"{len(up)}/{len(down)}")
        return True, f"p=3/5/7 give {', '.join(got)}; reciprocity on every edge"

    criterion(1, "neighbour counts", body, limit=10)


def test_criterion_02_fixed_space_invariants(criterion):
    def body():
        out = []
        for p in (3, 5, 7):
            f = make_fixed_space(p, 8).diag_form()
            h, d = hasse_invariant(f), det_class(f)
            if h != -1 or d != square_class(-1, p):
                return False, f"p={p}: hasse {h}, det class {d}"
            out.append(p)
        return True, f"hasse -1 and det class of -1 at p={out}"

    criterion(2, "invariants of the fixed space", body)


def test_criterion_03_hodge_star(criterion, space):
    def body():
        ctx = space.ctx
        rng = random.Random(3)
        xs = [space.basis_vector(k) for k in range(DIM)]
        ts = [space.basis_vector(k, dual=True) for k in range(DIM)]
        pairs = [(x, t) for x in xs for t in ts]
        for _ in range(100):
            x = space.element([ctx.elem([rng.randrange(ctx.q) for _ in range(ctx.m)]) for _ in range(DIM)])
            t = space.element([ctx.elem([rng.randrange(ctx.q) for _ in range(ctx.m)]) for _ in range(DIM)],
                              dual=True)
            pairs.append((x, t))
        for x, t in pairs:
            back = space.hodge_star_dual(space.hodge_star(x))
            if back.shift != x.shift or back.coords != x.coords:
                return False, "star is not an involution"
            tt = space.hodge_star(space.hodge_star_dual(t))
            if tt.shift != t.shift or tt.coords != t.coords:
                return False, "dual star is not an involution"
            c = space.cross_pairing(x, t)
            if not (same(space, c, space.dual_pairing(space.hodge_star(x), t))
                    and same(space, c, space.pairing(x, space.hodge_star_dual(t)))):
                return False, "pairing identity fails"
        return True, f"involution and three-way pairing identity on {len(pairs)} pairs"

    criterion(3, "Hodge star", body)


def test_criterion_04_composition_form(criterion, space):
    def body():
        ctx = space.ctx
        rng = random.Random(4)
        xs = [space.basis_vector(k) for k in range(DIM)]
        pairs = [(xs[i], xs[j]) for i in range(DIM) for j in range(i, DIM)]
        for _ in range(100):
            pairs.append(tuple(
                space.element([ctx.elem([rng.randrange(ctx.q) for _ in range(ctx.m)]) for _ in range(DIM)])
                for _ in range(2)))
        bad = sum(1 for x, y in pairs
                  if not scalar_matrix_equal(space, anticommutator(space, x, y), space.pairing(x, y)))
        return bad == 0, f"x~y~ + y~x~ = [x, y] on {len(pairs)} pairs, {bad} failures"

    criterion(4, "composition form", body)


def test_criterion_05_slope_zero_basis(criterion, fs):
    def body():
        ok = all(fs.space.phi(y) == y for y in fs.ys) and len(fs.ys) == 6
        return ok, "Phi(y_i) = y_i for i = 1..6 at p=3, m=2"

    criterion(5, "slope-zero basis", body)


@pytest.mark.slow
def test_criterion_06_round_trip(criterion, iso, space, band_dl):
    def body():
        M = DieudonneLattice(iso, iso.M)
        LM = space.very_special_of(M)
        if space.dieudonne_of(LM) != M or not space.is_special(LM.lattice):
            return False, "worked example M fails"
        n = 0
        for A, L in very_special_band(space, band_dl):
            lat = L.lattice
            if not space.is_self_dual(lat) or space.length_condition(lat) != 1:
                return False, f"forward image of {A.key()} is not special"
            if space.dieudonne_of(L) != A:
                return False, f"round trip fails on {A.key()}"
            n += 1
        return n == 7381, f"M and all {n} band lattices round trip; images self-dual with length 1"

    criterion(6, "bijection round trip", body, limit=60)


@pytest.mark.slow
def test_criterion_07_stabilizer_oracles(criterion, iso, space, band_dl):
    def body():
        rng = random.Random(7)
        lats = [DieudonneLattice(iso, iso.M)] + rng.sample(band_dl, 19)
        checks = 0
        for A in lats:
            A1 = iso.F_inv_p(A.lattice)
            D = product_lattice(space.ctx, A.lattice, dual_lattice_N(space, A.lattice))
            D1 = product_lattice(space.ctx, A1, dual_lattice_N(space, iso.F_inv(A.lattice)))
            srcs = {"whole": (D, D), "filtered": (D1, D1), "mixed": (D1, D)}
            for name, (stab, closed) in stabilizer_lattices(space, A).items():
                if stab != closed:
                    return False, f"exact solve differs from the closed form ({name}) on {A.key()}"
                src, tgt = srcs[name]
                n = stabilizing_cosets(space, closed, src, tgt)
                if n != 1:
                    return False, f"grid finds {n} stabilizing cosets ({name}) on {A.key()}"
                checks += 1
        return True, f"{len(lats)} lattices x 3 stabilizers: exact solve and 3^12-point grid agree"

    criterion(7, "stabilizer oracles", body, limit=120)


def test_criterion_08_quadric(criterion, fs, lam4):
    def body():
        a, b, c, d, delta = sympy.symbols("a b c d delta")
        z = (a * d + b * c) / 2
        w = (a * d - b * c) / (2 * delta)
        if sympy.simplify(a * c * b * d - z ** 2 + delta ** 2 * w ** 2) != 0:
            return False, "Q(psi) is not identically zero"
        F = Q.finite_field(3, 2)
        dl = F.sqrt(F.scalar(fs.delta))
        pts = {Q.psi(F, dl, P, R) for P in F.projective_line() for R in F.projective_line()}
        quad = set(Q.quadric_points(F, fs.delta))
        if len(pts) != 100 or pts != quad:
            return False, f"psi image has {len(pts)} points, quadric has {len(quad)}"
        plus, _ = Q.x_lambda_points(Q.omega_of(fs, lam4), 1)
        return len(plus) == 10, f"Q(psi) = 0 symbolically; psi bijects onto 100 points; |X+(F_9)| = {len(plus)}"

    criterion(8, "quadric parametrization", body)


def _enumerated_special(space, band_dl):
    """Every enumerated special lattice: the band's very special lattices and their Phi images."""
    plus = [L for _, L in very_special_band(space, band_dl)]
    return plus + [L.phi_bar() for L in plus]


def component_over_f81(fs, lam4):
    """(fixed space over W(F_81), plus lattices on the component of lam4 over F_81)."""
    if "f81" not in _CACHE:
        fs4 = Q.pinning_space(Q.omega_of(fs, lam4), 2)
        om = Q.omega_of(fs4, fs4.vertex(lam4.lattice))
        plus, _ = Q.x_lambda_points(om, 2, fs4)
        _CACHE["f81"] = fs4, [Q.lagrangian_lattice(fs4, om, f.plane) for f in plus]
    return _CACHE["f81"]


def _chain_ok(fs, L):
    """d if the chain and Lam_L pass every check, else None."""
    space = fs.space
    lat = L.lattice if hasattr(L, "lattice") else L
    chain = Q.special_chain(space, lat)
    d = len(chain) - 1
    if d not in (1, 2):
        return None
    _, lam = Q.chain_and_lambda(fs, lat)
    ok, t = fs.is_vertex(lam.lattice)
    if not ok or t != 2 * d or fs.dual(lam.lattice) != fs.fixed_part(lat):
        return None
    return d


@pytest.mark.slow
def test_criterion_09_chain_and_vertex(criterion, fs, space, band_dl, lam4):
    def body():
        ds = {1: 0, 2: 0}
        fs4, comp = component_over_f81(fs, lam4)
        work = [(fs, L) for L in _enumerated_special(space, band_dl)]
        work += [(fs4, L) for L in comp] + [(fs4, fs4.space.phi_bar(L)) for L in comp]
        for f, L in work:
            d = _chain_ok(f, L)
            if d is None:
                return False, "chain or Lam_L check fails"
            ds[d] += 1
        return ds[2] > 0, (f"{len(work)} special lattices (band at m=2, one component over F_81); "
                           f"d counts {ds}; Lam_L of type 2d with dual the fixed part of L")

    criterion(9, "chain and vertex extraction", body)


@pytest.mark.slow
def test_criterion_10_superspecial_dichotomy(criterion, fs, space, band_dl, lam4):
    def body():
        n = 0
        for A, L in very_special_band(space, band_dl):
            ss = Q.is_superspecial(fs, L)
            d, _ = Q.chain_and_lambda(fs, L)
            eo = eo_stratum(A)
            ss_minus = Q.is_superspecial(fs, L.phi_bar())
            if ss != (d == 1) or ss != (eo == SUPERSPECIAL) or ss_minus != ss:
                return False, f"disagreement on {A.key()}"
            n += 2
        fs4, comp = component_over_f81(fs, lam4)
        strata = {SUPERSPECIAL: 0, GENERIC: 0}
        for L in comp:
            ss = Q.is_superspecial(fs4, L)
            d, _ = Q.chain_and_lambda(fs4, L)
            eo = eo_stratum(fs4.space.dieudonne_of(L))
            if ss != (d == 1) or ss != (eo == SUPERSPECIAL):
                return False, "disagreement over F_81"
            strata[eo] += 1
            n += 1
        ok = strata == {SUPERSPECIAL: 10, GENERIC: 72}
        return ok, (f"is_superspecial, d = 1 and eo_stratum agree on {n} special lattices; "
                    f"over F_81 the component has {strata[SUPERSPECIAL]} superspecial and "
                    f"{strata[GENERIC]} generic points")

    criterion(10, "superspecial dichotomy", body)


def test_criterion_11_kraft(criterion):
    def body():
        classes = classify_ss_42()
        words = [str(w) for w in simple_words(4)]
        ok = classes == [("FFVV",), ("FV", "FV")] and len(words) == 3
        return ok, f"classes {classes}; simple words of length 4 {words}"

    criterion(11, "Kraft classification", body, limit=1)


def test_criterion_12_graph(criterion, fs, tmp_path):
    def body():
        seed = fs.seed_type2()
        g = build_graph(fs, seed, 2)
        deg = g.degrees()
        interior = {deg[k] for k in g.interior()}
        if not (g.is_bipartite() and g.is_connected() and interior == {10}):
            return False, f"bipartite {g.is_bipartite()}, connected {g.is_connected()}, degrees {interior}"
        a = to_json(g, {"radius": 2})
        b = to_json(build_graph(fs, seed, 2), {"radius": 2})
        d1, d2 = to_dot(g), to_dot(build_graph(fs, seed, 2))
        outs = []
        for i in range(2):
            path = tmp_path / f"g{i}.json"
            subprocess.run([sys.executable, "-m", "rzgl4", "graph", "--radius", "2", "--out", str(path)],
                           check=True)
            outs.append(path.read_bytes())
        ok = a == b and d1 == d2 and outs[0] == outs[1]
        return ok, (f"{len(g.nodes)} nodes, {len(g.edges)} edges, bipartite, connected, interior degree 10; "
                    "JSON/DOT byte-identical in process and via CLI")

    criterion(12, "graph regularity and connectedness", body, limit=30)
