"""Command line: verification suites, graph export and the count table.

    rzgl4 verify [suite] [--p P] ...   one line per check: <module>/<anchor> <PASS|FAIL> <detail>
    rzgl4 graph [--radius R] [--format json|dot] [--out FILE]
    rzgl4 counts [--format text|json]

Exit status: 0 pass, 1 failed check, 2 precision exhausted, 64 usage error.
"""
import argparse
import json
import os
import random
import sys
from dataclasses import asdict, dataclass, fields

from .errors import DegenerateError, DomainError, PrecisionError, RZError
from .rings import PrecisionPolicy, check_odd_prime

EXIT_OK, EXIT_FAIL, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 64
SUITES = ("rings", "lattices", "isocrystal", "exterior", "qspace", "graph", "quadric", "kraft")


@dataclass
class RunConfig:
    p: int = 3
    m: int = 2
    N: int = 12
    radius: int = 2
    seed: str = "type2-standard"
    format: str = "json"

    def validate(self):
        check_odd_prime(self.p)
        if self.m < 2 or self.m % 2:
            raise DomainError("residue degree m must be even (the fixed space needs sqrt(Delta))")
        PrecisionPolicy(self.p, self.N, self.m, self.radius)
        return self


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    parser = _Parser(prog="rzgl4", description="Exact lattice computations for height-4 supersingular Dieudonné lattices")
    sub = parser.add_subparsers(dest="command")

    def common(sp, formats):
        sp.add_argument("--config", help="JSON file with RunConfig fields; flags win on conflict")
        sp.add_argument("--p", type=int)
        sp.add_argument("--m", type=int)
        sp.add_argument("--N", type=int)
        sp.add_argument("--radius", type=int)
        sp.add_argument("--seed")
        sp.add_argument("--format", choices=formats)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("suite", nargs="?", default="all", choices=SUITES + ("all",))
    common(v, ("text",))
    g = sub.add_parser("graph", help="build and export the vertex-lattice graph")
    g.add_argument("--out", help="output file (default stdout)")
    common(g, ("json", "dot"))
    c = sub.add_parser("counts", help="tabulate the counting statements for p = 3, 5, 7")
    common(c, ("text", "json"))
    return parser


def load_config(args) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values.update(json.load(fh))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read config: {exc}") from exc
    names = {f.name for f in fields(RunConfig)}
    unknown = set(values) - names
    if unknown:
        raise UsageError(f"unknown config fields: {sorted(unknown)}")
    for name in names:
        val = getattr(args, name, None)
        if val is not None:
            values[name] = val
    if args.command == "counts" and "format" not in values:
        values["format"] = "text"
    try:
        return RunConfig(**values).validate()
    except (DomainError, TypeError) as exc:
        raise UsageError(str(exc)) from exc


# verification suites ---------------------------------------------------------------------

class Report:
    def __init__(self, out):
        self.out = out
        self.failed = 0
        self.passed = 0

    def check(self, module, anchor, fn):
        try:
            ok, detail = fn()
        except PrecisionError:
            raise
        except Exception as exc:  # a crash inside a check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        if ok:
            self.passed += 1
        else:
            self.failed += 1
        print(f"{module}/{anchor} {'PASS' if ok else 'FAIL'} {detail}", file=self.out, flush=True)


class Context:
    """Objects shared by the suites, built lazily."""

    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self._cache = {}

    def get(self, name, build):
        if name not in self._cache:
            self._cache[name] = build()
        return self._cache[name]

    @property
    def fs(self):
        from .qspace import make_fixed_space
        c = self.cfg
        return self.get("fs", lambda: make_fixed_space(c.p, c.N, m=c.m))

    @property
    def space(self):
        return self.fs.space

    @property
    def iso(self):
        return self.space.iso

    @property
    def band(self):
        from .isocrystal import enumerate_band
        return self.get("band", lambda: enumerate_band(self.iso, 0))

    @property
    def lam4(self):
        from .graph import type4_containing
        return self.get("lam4", lambda: type4_containing(self.fs, self.fs.seed_type2())[0])


def suite_rings(r: Report, cx: Context):
    from .rings import hilbert_symbol, legendre, make_ring, smallest_nonsquare
    c = cx.cfg
    ctx = make_ring(c.p, c.N, c.m)
    rng = random.Random(0)

    def frob_order():
        xs = [ctx.random(rng) for _ in range(50)]
        ok = True
        for x in xs:
            y = x
            for _ in range(c.m):
                y = y.frobenius()
            ok &= y == x
        return ok, f"sigma^{c.m} = id on 50 elements"

    def inverses():
        xs = [ctx.random(rng, unit=True) for _ in range(50)]
        return all(x * x.inverse() == ctx.one() for x in xs), "x * x^-1 = 1 on 50 units"

    def sqrt_delta():
        d = smallest_nonsquare(c.p)
        u = ctx.sqrt(ctx.elem(d))
        return u * u == ctx.elem(d) and u.frobenius() == -u, f"u^2 = {d}, sigma(u) = -u"

    def hilbert():
        p = c.p
        u = smallest_nonsquare(p)
        ok = hilbert_symbol(u, u, p) == 1 and hilbert_symbol(p, u, p) == -1
        ok &= hilbert_symbol(p, p, p) == legendre(-1, p)
        return ok, "(u,u)=1, (p,u)=-1, (p,p)=(-1/p)"

    r.check("rings", "frobenius-order", frob_order)
    r.check("rings", "unit-inverse", inverses)
    r.check("rings", "sqrt-nonsquare", sqrt_delta)
    r.check("rings", "hilbert-symbol", hilbert)


def suite_lattices(r: Report, cx: Context):
    from .lattice import (GramForm, _hnf, _hnf_py, dual, from_gens, intersect, lattice_from_key,
                          lattice_sum, quotient_length)
    from .rings import make_ring
    c = cx.cfg
    ctx = make_ring(c.p, c.N, 1)
    rng = random.Random(1)
    n = 5

    def rand_lattice():
        gens = [[rng.randrange(ctx.q) * c.p ** rng.randrange(3) for _ in range(n)] for _ in range(n + 2)]
        gens += [[c.p ** 4 * int(i == j) for i in range(n)] for j in range(n)]
        return from_gens(ctx, gens)

    def howell():
        ok = True
        for _ in range(20):
            gens = [[rng.randrange(ctx.q) for _ in range(n)] for _ in range(n + 1)]
            ok &= _hnf(gens, n, c.p, c.N) == _hnf_py(gens, n, c.p, c.N)
        return ok, "compiled and reference Howell forms agree on 20 inputs"

    def dual_inv():
        G = GramForm(ctx, [[int(i == j) * (1 + i) for j in range(n)] for i in range(n)])
        ok = all(dual(dual(L, G), G) == L for L in (rand_lattice() for _ in range(10)))
        return ok, "dual(dual(L)) = L on 10 lattices"

    def lengths():
        ok = True
        for _ in range(10):
            A, B = rand_lattice(), rand_lattice()
            S, I = lattice_sum(A, B), intersect(A, B)
            ok &= quotient_length(S, A) == quotient_length(B, I)
        return ok, "(A+B)/A = B/(A∩B) on 10 pairs"

    def keys():
        Ls = [rand_lattice() for _ in range(10)]
        return all(lattice_from_key(ctx, L.key()) == L for L in Ls), "key round trip on 10 lattices"

    r.check("lattices", "howell-reference", howell)
    r.check("lattices", "dual-involution", dual_inv)
    r.check("lattices", "second-isomorphism", lengths)
    r.check("lattices", "key-round-trip", keys)


def suite_isocrystal(r: Report, cx: Context):
    iso = cx.iso
    p = cx.cfg.p

    def fv():
        M = iso.M
        return iso.F_bar(iso.V_bar(M)) == M.scaled(1), "F V M = p M"

    def m_dieudonne():
        return iso.is_dieudonne(iso.M) and iso.height(iso.M) == 0, "M is Dieudonné of height 0"

    r.check("isocrystal", "frobenius-verschiebung", fv)
    r.check("isocrystal", "standard-lattice", m_dieudonne)
    if p == 3 and cx.cfg.m == 2:
        r.check("isocrystal", "band-count", lambda: (len(cx.band) == 7381, f"{len(cx.band)} lattices in pM ⊆ A ⊆ p^-1 M"))
        r.check("isocrystal", "band-dieudonne",
                lambda: (all(iso.is_dieudonne(A) for A in cx.band[::50]), "every 50th band lattice passes both criteria"))


def suite_exterior(r: Report, cx: Context):
    from .exterior import (anticommutator, phi_matrix_displayed, phi_matrix_from_F,
                           scalar_matrix_equal, stabilizer_lattices)
    from .isocrystal import DieudonneLattice
    space = cx.space
    ctx = space.ctx
    p = cx.cfg.p
    rng = random.Random(2)

    def rand_elem(dual=False):
        return space.element([ctx.random(rng) for _ in range(6)], dual=dual)

    def phi_matrix():
        q = ctx.q
        a = [[x % q for x in row] for row in phi_matrix_displayed(p)]
        b = [[x % q for x in row] for row in phi_matrix_from_F(p)]
        return a == b, "displayed matrix = p^-1 F ^ F"

    def star():
        ok = True
        for _ in range(30):
            x, t = rand_elem(), rand_elem(True)
            ok &= space.hodge_star_dual(space.hodge_star(x)) == x
            lhs, mid, rhs = space.dual_pairing(space.hodge_star(x), t), space.cross_pairing(x, t), \
                space.pairing(x, space.hodge_star_dual(t))
            ok &= _same(lhs, mid, p) and _same(mid, rhs, p)
        return ok, "involution and [x*, t]_1 = {x, t} = [x, t*] on 30 pairs"

    def composition():
        ok = True
        for i in range(6):
            for j in range(i, 6):
                x, y = space.basis_vector(i), space.basis_vector(j)
                ok &= scalar_matrix_equal(space, anticommutator(space, x, y), space.pairing(x, y))
        return ok, "x~y~ + y~x~ = [x, y] on 21 basis pairs"

    def phi_star():
        ok = all(space.hodge_star(space.phi(space.basis_vector(k)))
                 == space.phi(space.hodge_star(space.basis_vector(k))) for k in range(6))
        return ok, "star(Phi x) = Phi(star x) on the basis"

    def vs_M():
        L = space.very_special_of(iso_M())
        return space.is_special(L.lattice) and L.orientation == "plus", "(1/p) wedge^2 M_1 is special, plus"

    def iso_M():
        return DieudonneLattice(space.iso, space.iso.M)

    def round_trip_M():
        A = space.dieudonne_of(space.very_special_of(iso_M()))
        return A.lattice == space.iso.M, "recovered M from its special lattice"

    def round_trip_band():
        sample = cx.band[::97]
        ok = all(space.dieudonne_of(space.very_special_of(DieudonneLattice(space.iso, A, check=False))).lattice == A
                 for A in sample)
        return ok, f"round trip on {len(sample)} band lattices"

    def minus():
        L = space.very_special_of(iso_M()).phi_bar()
        try:
            space.dieudonne_of(L)
        except DomainError:
            return space.orientation_of(L.lattice) == "minus", "Phi(L) is minus and has no preimage"
        return False, "Phi(L) was inverted"

    def stabilizers():
        sample = [iso_M()] + [DieudonneLattice(space.iso, A, check=False) for A in cx.band[1::1500]]
        ok = all(comp == closed for A in sample for comp, closed in stabilizer_lattices(space, A).values())
        return ok, f"stabilizers = wedge^2 A, (1/p) wedge^2 A_1 and their sum for {len(sample)} lattices"

    r.check("exterior", "phi-matrix", phi_matrix)
    r.check("exterior", "hodge-star", star)
    r.check("exterior", "composition-form", composition)
    r.check("exterior", "phi-commutes-with-star", phi_star)
    r.check("exterior", "very-special-standard", vs_M)
    r.check("exterior", "round-trip-standard", round_trip_M)
    if p == 3 and cx.cfg.m == 2:
        r.check("exterior", "round-trip-band", round_trip_band)
        r.check("exterior", "stabilizers", stabilizers)
    r.check("exterior", "minus-component", minus)


def _same(a, b, p):
    """Equality of (shift, value) pairs."""
    (s, x), (t, y) = a, b
    lo = min(s, t)
    return x * p ** (s - lo) == y * p ** (t - lo)


def suite_qspace(r: Report, cx: Context):
    from .qspace import det_class, hasse_invariant, square_class
    fs = cx.fs
    p = cx.cfg.p

    def fixed():
        return all(fs.space.phi(y) == y for y in fs.ys), "Phi(y_i) = y_i for i = 1..6"

    def hasse():
        h = hasse_invariant(fs.diag_form())
        return h == -1, f"hasse invariant {h}"

    def det():
        d = det_class(fs.diag_form())
        return d == square_class(-1, p), f"det class {d} = class of -1"

    def seeds():
        ok_std, _ = fs.is_vertex(fs.standard())
        seed = fs.seed_type2()
        return (not ok_std) and seed.type == 2, "y-lattice is not a vertex lattice; its dual has type 2"

    r.check("qspace", "slope-zero-basis", fixed)
    r.check("qspace", "hasse-invariant", hasse)
    r.check("qspace", "determinant", det)
    r.check("qspace", "type2-seed", seeds)


def suite_graph(r: Report, cx: Context):
    from .graph import build_graph, type2_inside, type4_containing
    fs = cx.fs
    p = cx.cfg.p
    seed = fs.seed_type2()
    want = p * p + 1

    def t4():
        n = len(type4_containing(fs, seed))
        return n == want, f"{n} = p^2+1"

    def t2():
        n = len(type2_inside(fs, cx.lam4))
        return n == want, f"{n} = p^2+1"

    def reciprocity():
        ok = all(cx.lam4 in type4_containing(fs, v) for v in type2_inside(fs, cx.lam4))
        ok &= all(seed in type2_inside(fs, v) for v in type4_containing(fs, seed))
        return ok, "every edge is seen from both ends"

    def graph():
        g = build_graph(fs, seed, min(cx.cfg.radius, 2))
        deg = g.degrees()
        interior = {deg[k] for k in g.interior()}
        ok = g.is_bipartite() and g.is_connected() and interior == {want}
        return ok, f"{len(g.nodes)} nodes, bipartite, connected, interior degrees {sorted(interior)}"

    r.check("graph", "type4-containing", t4)
    r.check("graph", "type2-inside", t2)
    r.check("graph", "reciprocity", reciprocity)
    r.check("graph", "regular-connected", graph)


def suite_quadric(r: Report, cx: Context):
    from . import quadric as Q
    fs = cx.fs
    p = cx.cfg.p

    def omega2():
        om = Q.omega_of(fs, fs.seed_type2())
        lines = Q.lagrangians(om, 2)
        F = Q.finite_field(p, 2)
        swapped = sorted(Q.frob_subspace(F, U) for U in lines) == lines and all(
            Q.frob_subspace(F, U) != U for U in lines)
        return not Q.lagrangians(om, 1) and len(lines) == 2 and swapped, \
            "no F_p line, two F_p^2 lines swapped by Frobenius"

    def omega4():
        om = Q.omega_of(fs, cx.lam4)
        n = len(Q.isotropic_lines(om.gram, p))
        return n == p * p + 1, f"{n} isotropic points = p^2+1"

    def psi_bij():
        F = Q.finite_field(p, 2)
        delta = F.sqrt(F.scalar(fs.delta))
        pts = {Q.psi(F, delta, P, R) for P in F.projective_line() for R in F.projective_line()}
        quad = set(Q.quadric_points(F, fs.delta))
        n = (F.q + 1) ** 2
        return len(pts) == n and pts == quad, f"psi is a bijection onto {len(quad)} points"

    def xl():
        om = Q.omega_of(fs, cx.lam4)
        plus, minus = Q.x_lambda_points(om, 1)
        F = Q.finite_field(p, 2)
        swap = {Q.frob_flag(F, f) for f in plus} == set(minus)
        return len(plus) == p * p + 1 and swap, f"{len(plus)} plus flags; Frobenius maps them onto minus"

    def plus_lattices():
        om = Q.omega_of(fs, cx.lam4)
        plus, _ = Q.x_lambda_points(om, 1)
        lats = Q.special_lattices_through(fs, om)
        red = {Q.reduce_lattice(fs, om, L.lattice) for L in lats["plus"]}
        ok = red == {f.plane for f in plus} and len(lats["minus"]) == len(plus)
        ok &= all(fs.space.dieudonne_of(L).height == 0 for L in lats["plus"])
        return ok, f"{len(lats['plus'])} very special lattices between Lam^dual and Lam match the plus flags"

    def chain_M():
        from .isocrystal import DieudonneLattice
        L = fs.space.very_special_of(DieudonneLattice(fs.space.iso, fs.space.iso.M))
        d, lam = Q.chain_and_lambda(fs, L)
        return d == 1 and lam.type == 2 and Q.is_superspecial(fs, L), "d = 1, type 2, superspecial"

    def generic():
        om = Q.omega_of(fs, cx.lam4)
        fs4 = Q.pinning_space(om, 2)
        om4 = Q.omega_of(fs4, fs4.vertex(cx.lam4.lattice))
        plus, _ = Q.x_lambda_points(om4, 2, fs4)
        F = Q.finite_field(p, 4)
        i = next(i for i, P in enumerate(F.projective_line()) if P[0] == 1 and F.frob(F.frob(P[1])) != P[1])
        L = Q.lagrangian_lattice(fs4, om4, plus[i].plane)
        d, lam = Q.chain_and_lambda(fs4, L)
        ok = len(plus) == p ** 4 + 1 and d == 2 and lam.lattice == cx.lam4.lattice
        ok &= not Q.is_superspecial(fs4, L)
        return ok, f"{len(plus)} plus flags over F_p^4; a non-F_p^2 point has d = 2 and is not superspecial"

    r.check("quadric", "omega-type2", omega2)
    r.check("quadric", "omega-type4", omega4)
    if p == 3:
        r.check("quadric", "psi-bijection", psi_bij)
    r.check("quadric", "x-lambda-plus", xl)
    r.check("quadric", "plus-lattices", plus_lattices)
    r.check("quadric", "chain-standard", chain_M)
    if p == 3:
        r.check("quadric", "generic-point", generic)


def suite_kraft(r: Report, cx: Context):
    from . import kraft as K
    from .isocrystal import DieudonneLattice
    out = r.out

    def words():
        ws = [str(w) for w in K.simple_words(4)]
        return ws == ["FFFV", "FFVV", "FVVV"], " ".join(ws)

    def bt1():
        ok = all(K.is_bt1(K.module_of_word(w)) for n in range(1, 9) for w in K.simple_words(n))
        return ok, "every simple word up to length 8 gives a BT_1"

    def classify():
        for row in K.ss_42_table(cx.cfg.p):
            words_, fd, vd, fn, vn, b, ok = row
            print(f"    {'+'.join(words_):<10} dimF={fd} dimV={vd} F_nil={int(fn)} V_nil={int(vn)} "
                  f"bt1={int(b)} {'accept' if ok else 'reject'}", file=out)
        cls = K.classify_ss_42(cx.cfg.p)
        return cls == [("FFVV",), ("FV", "FV")], " and ".join("+".join(c) for c in cls)

    def eo_M():
        A = DieudonneLattice(cx.iso, cx.iso.M)
        return K.eo_stratum(A, cx.fs) == K.SUPERSPECIAL, "M is superspecial"

    def eo_generic():
        from . import quadric as Q
        om = Q.omega_of(cx.fs, cx.lam4)
        fs4 = Q.pinning_space(om, 2)
        om4 = Q.omega_of(fs4, fs4.vertex(cx.lam4.lattice))
        plus, _ = Q.x_lambda_points(om4, 2, fs4)
        F = Q.finite_field(cx.cfg.p, 4)
        i = next(i for i, P in enumerate(F.projective_line()) if P[0] == 1 and F.frob(F.frob(P[1])) != P[1])
        L = Q.lagrangian_lattice(fs4, om4, plus[i].plane)
        A = fs4.space.dieudonne_of(L)
        return K.eo_stratum(A, fs4) == K.GENERIC and K.lattice_is_bt1(A), "a non-F_p^2 point is in the FFVV stratum"

    r.check("kraft", "simple-words", words)
    r.check("kraft", "bt1-words", bt1)
    r.check("kraft", "classification", classify)
    r.check("kraft", "eo-standard", eo_M)
    if cx.cfg.p == 3:
        r.check("kraft", "eo-generic", eo_generic)


SUITE_FUNCS = {
    "rings": suite_rings, "lattices": suite_lattices, "isocrystal": suite_isocrystal,
    "exterior": suite_exterior, "qspace": suite_qspace, "graph": suite_graph,
    "quadric": suite_quadric, "kraft": suite_kraft,
}


def cmd_verify(suite: str, cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    report = Report(out)
    cx = Context(cfg)
    names = SUITES if suite == "all" else (suite,)
    try:
        for name in names:
            SUITE_FUNCS[name](report, cx)
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    print(f"{report.passed} passed, {report.failed} failed", file=out)
    return EXIT_OK if report.failed == 0 else EXIT_FAIL


# graph and counts -------------------------------------------------------------------------

def resolve_seed(fs, seed: str):
    from .graph import type4_containing
    from .lattice import lattice_from_key
    if seed == "type2-standard":
        return fs.seed_type2()
    if seed == "type4-standard":
        return type4_containing(fs, fs.seed_type2())[0]
    try:
        return fs.vertex(lattice_from_key(fs.ctx, seed))
    except (DegenerateError, DomainError) as exc:
        raise UsageError(f"bad seed: {exc}") from exc


def cmd_graph(cfg: RunConfig, out_path=None, out=None) -> int:
    out = out or sys.stdout
    from .graph import build_graph, to_dot, to_json
    from .qspace import make_fixed_space
    fs = make_fixed_space(cfg.p, cfg.N, m=cfg.m)
    seed = resolve_seed(fs, cfg.seed)
    try:
        g = build_graph(fs, seed, cfg.radius)
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    fmt = cfg.format if cfg.format in ("json", "dot") else "json"
    text = to_json(g, asdict(cfg)) if fmt == "json" else to_dot(g)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def count_rows(primes=(3, 5, 7), N=12):
    from . import quadric as Q
    from .graph import type2_inside, type4_containing
    from .qspace import make_fixed_space
    rows = []
    for p in primes:
        fs = make_fixed_space(p, N)
        seed = fs.seed_type2()
        t4 = type4_containing(fs, seed)
        t2 = type2_inside(fs, t4[0])
        plus, minus = Q.x_lambda_points(Q.omega_of(fs, t4[0]), 1)
        want = p * p + 1
        ok = len(t4) == len(t2) == len(plus) == len(minus) == want
        rows.append({"p": p, "type4_containing": len(t4), "type2_inside": len(t2), "expected": want,
                     "x_plus": len(plus), "x_minus": len(minus), "match": ok})
    return rows


def cmd_counts(cfg: RunConfig, out=None) -> int:
    out = out or sys.stdout
    rows = count_rows(N=cfg.N)
    if cfg.format == "json":
        out.write(json.dumps({"schema": 1, "rows": rows}, indent=2, sort_keys=True) + "\n")
    else:
        out.write(f"{'p':>3} {'type4':>6} {'type2':>6} {'p^2+1':>6} {'X+':>4} {'X-':>4}  match\n")
        for r in rows:
            out.write(f"{r['p']:>3} {r['type4_containing']:>6} {r['type2_inside']:>6} {r['expected']:>6} "
                      f"{r['x_plus']:>4} {r['x_minus']:>4}  {'yes' if r['match'] else 'NO'}\n")
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("missing command (verify, graph or counts)")
        cfg = load_config(args)
        if args.command == "verify":
            return cmd_verify(args.suite, cfg)
        if args.command == "graph":
            return cmd_graph(cfg, args.out)
        return cmd_counts(cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except RZError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at interpreter exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
