"""Vertex-lattice inclusions and the bipartite intersection graph.

Type-4 lattices index the irreducible components and type-2 lattices the
superspecial points; an edge joins Lam4 and Lam2 when Lam2 ⊆ Lam4.
"""
import hashlib
import itertools
import json
from collections import Counter

from .errors import DomainError, InconsistencyError, PrecisionError
from .lattice import PLattice, extend, intersect
from .qspace import FixedSpace, VertexLattice


def quotient_reps(top: PLattice, bottom: PLattice):
    """Columns of ``top`` (at top.scale) whose images form an F_p-basis of top/bottom (killed by p)."""
    reps = []
    cur = bottom
    for col in top.cols:
        if not cur.contains_vector(col, top.scale):
            reps.append(list(col))
            cur = extend(cur, [col], top.scale, w=False)
    if cur != top:
        raise InconsistencyError("quotient basis does not span")
    return reps


def reduced_gram(fs: FixedSpace, reps, scale: int, extra: int):
    """Matrix of p^extra [x, y] mod p on the representatives p^scale * reps."""
    p = fs.p
    n = len(reps)
    B = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            s, v = fs.gram.pair(reps[i], reps[j])
            e = s + 2 * scale + extra
            if v == 0 or e > 0:
                B[i][j] = 0
            elif e < 0:
                if v % p ** (-e):
                    raise InconsistencyError("form is not integral on the quotient")
                B[i][j] = (v // p ** (-e)) % p
            else:
                B[i][j] = v % p
    return B


def projective_points(p, d):
    """Normalized representatives of P^{d-1}(F_p), first nonzero coordinate 1."""
    for lead in range(d):
        for tail in itertools.product(range(p), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + tail


def quad_value(B, c, p):
    n = len(c)
    return sum(c[i] * B[i][j] * c[j] for i in range(n) for j in range(n)) % p


def det_mod_p(B, p):
    n = len(B)
    A = [[x % p for x in row] for row in B]
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                A[r] = [(a - f * b) % p for a, b in zip(A[r], A[c])]
    return det % p


def isotropic_lines(B, p):
    return [c for c in projective_points(p, len(B)) if quad_value(B, c, p) == 0]


def _combine(reps, c):
    return [sum(ci * r[t] for ci, r in zip(c, reps)) for t in range(len(reps[0]))]


def type2_inside(fs: FixedSpace, lam4: VertexLattice):
    """Type-2 vertex lattices contained in a type-4 lattice, one per isotropic line of Lam/Lam^dual."""
    if lam4.type != 4:
        raise DomainError("type2_inside needs a type-4 vertex lattice")
    Lam, D = lam4.lattice, lam4.dual
    reps = quotient_reps(Lam, D)
    B = reduced_gram(fs, reps, Lam.scale, 1)
    out = {}
    for c in isotropic_lines(B, fs.p):
        L = extend(D, [_combine(reps, c)], Lam.scale, w=False)
        La = fs.dual(L)
        v = fs.vertex(La)
        if v.type != 2 or not Lam.contains(La):
            raise InconsistencyError("lifted lattice is not a type-2 vertex lattice inside")
        out[v.key()] = v
    return [out[k] for k in sorted(out)]


def type4_containing(fs: FixedSpace, lam2: VertexLattice):
    """Type-4 vertex lattices containing a type-2 lattice, one per isotropic line of Lam^dual/pLam.

    The line l is p Lam_b / p Lam, so Lam_b = Lam + p^{-1} l.
    """
    if lam2.type != 2:
        raise DomainError("type4_containing needs a type-2 vertex lattice")
    Lam, D = lam2.lattice, lam2.dual
    pLam = Lam.scaled(1)
    reps = quotient_reps(D, pLam)
    B = reduced_gram(fs, reps, D.scale, 0)
    out = {}
    for c in isotropic_lines(B, fs.p):
        Lb = extend(Lam, [_combine(reps, c)], D.scale - 1, w=False)
        v = fs.vertex(Lb)
        if v.type != 4 or not Lb.contains(Lam):
            raise InconsistencyError("lifted lattice is not a type-4 vertex lattice containing")
        out[v.key()] = v
    return [out[k] for k in sorted(out)]


def intersection_rule(fs: FixedSpace, a: VertexLattice, b: VertexLattice):
    """The intersection if it is a vertex lattice, else None."""
    C = intersect(a.lattice, b.lattice)
    ok, t = fs.is_vertex(C)
    return VertexLattice(fs, C, t) if ok else None


def neighbors(fs: FixedSpace, v: VertexLattice):
    return type2_inside(fs, v) if v.type == 4 else type4_containing(fs, v)


class IntersectionGraph:
    def __init__(self, fs: FixedSpace, seed: VertexLattice, radius: int):
        self.fs = fs
        self.seed = seed
        self.radius = radius
        self.nodes = {}      # key -> (VertexLattice, distance)
        self.edges = set()   # (key4, key2)

    def degree(self, key):
        return sum(1 for e in self.edges if key in e)

    def degrees(self):
        deg = Counter()
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return {k: deg[k] for k in self.nodes}

    def interior(self):
        return [k for k, (_, d) in self.nodes.items() if d < self.radius]

    def is_bipartite(self):
        return all(self.nodes[a][0].type == 4 and self.nodes[b][0].type == 2 for a, b in self.edges)

    def is_connected(self):
        adj = {k: [] for k in self.nodes}
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        start = self.seed.key()
        seen = {start}
        stack = [start]
        while stack:
            k = stack.pop()
            for n in adj[k]:
                if n not in seen:
                    seen.add(n)
                    stack.append(n)
        return len(seen) == len(self.nodes)


def build_graph(fs: FixedSpace, seed: VertexLattice, radius: int) -> IntersectionGraph:
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    N = fs.ctx.N
    if 2 * radius + 4 > N:
        raise PrecisionError(f"radius {radius} needs precision {2 * radius + 4}, have N={N}")
    g = IntersectionGraph(fs, seed, radius)
    g.nodes[seed.key()] = (seed, 0)
    frontier = [seed.key()]
    for depth in range(radius):
        nxt = set()
        for key in sorted(frontier):
            v = g.nodes[key][0]
            try:
                nbrs = neighbors(fs, v)
            except PrecisionError as exc:
                raise PrecisionError(f"precision exhausted at depth {depth + 1}: {exc}") from exc
            for w in nbrs:
                k = w.key()
                if k not in g.nodes:
                    g.nodes[k] = (w, depth + 1)
                    nxt.add(k)
                g.edges.add((key, k) if v.type == 4 else (k, key))
        frontier = nxt
    return g


# export --------------------------------------------------------------------------------

def graph_dict(g: IntersectionGraph, config=None):
    keys = sorted(g.nodes)
    deg = g.degrees()
    hist = Counter(deg.values())
    return {
        "schema": 1,
        "config": config or {},
        "nodes": [{"key": k, "type": g.nodes[k][0].type, "distance": g.nodes[k][1]} for k in keys],
        "edges": [list(e) for e in sorted(g.edges)],
        "stats": {
            "node_count": len(keys),
            "edge_count": len(g.edges),
            "degree_histogram": {str(d): hist[d] for d in sorted(hist)},
        },
    }


def to_json(g: IntersectionGraph, config=None) -> str:
    return json.dumps(graph_dict(g, config), indent=2, sort_keys=True) + "\n"


def short_id(key: str) -> str:
    return "n" + hashlib.sha256(key.encode()).hexdigest()[:10]


def to_dot(g: IntersectionGraph) -> str:
    lines = ["graph vertex_lattices {"]
    for k in sorted(g.nodes):
        v, d = g.nodes[k]
        shape = "circle" if v.type == 4 else "square"
        lines.append(f'  {short_id(k)} [shape={shape}, label="{v.type}", tooltip="{k}", distance={d}];')
    for a, b in sorted(g.edges):
        lines.append(f"  {short_id(a)} -- {short_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
