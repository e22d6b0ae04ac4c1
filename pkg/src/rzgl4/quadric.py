"""Finite-field geometry of a vertex lattice.

For a vertex lattice Lam of type 2d the reduced space is Omega = Lam / Lam^dual
with the form p[x, y] mod p.  (Omega is the quotient in this direction; the
other way round it would be zero.)  Special lattices with
Lam^dual ⊗ W' ⊆ L ⊆ Lam ⊗ W' correspond to Lagrangians of Omega ⊗ k'.

For type 4 the Lagrangian planes form two rulings of the quadric surface,
written in standard coordinates as xy = z^2 - D w^2 and parametrized by
    psi([a:b], [c:d]) = [ac : bd : (ad + bc)/2 : (ad - bc)/(2 Delta)],
Delta^2 = D.  Frobenius acts by Frob(psi(P, Q)) = psi(Q^(p), P^(p)), so it
swaps the rulings.  Which ruling is the plus component is decided by
building one of its lattices and asking which wedge type it has.
"""
import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, InconsistencyError
from .exterior import SpecialLattice
from .graph import det_mod_p, isotropic_lines, quotient_reps, reduced_gram
from .lattice import PLattice, extend, gr_matrix_flat, lattice_sum, pullback, quotient_length
from .qspace import FixedSpace, VertexLattice, make_fixed_space
from .rings import make_field


# F_{p^k} with integer-encoded elements ---------------------------------------------------

class FiniteField:
    """F_{p^k}; element i has base-p digits equal to its coordinates in make_field(p, k).

    0..p-1 are the prime field, so small integers embed as themselves.
    """

    def __init__(self, p: int, k: int):
        self.p, self.k, self.q = p, k, p ** k
        self.ctx = make_field(p, k)
        els = [self.ctx.elem(self.coords(i)) for i in range(self.q)]
        index = {e.c: i for i, e in enumerate(els)}
        q = self.q
        self.add_t = [[index[(els[a] + els[b]).c] for b in range(q)] for a in range(q)]
        self.mul_t = [[index[(els[a] * els[b]).c] for b in range(q)] for a in range(q)]
        self.neg_t = [index[(-e).c] for e in els]
        self.inv_t = [0] + [index[e.inverse().c] for e in els[1:]]
        self.frob_t = [index[e.frobenius().c] for e in els]

    def coords(self, i):
        out = []
        for _ in range(self.k):
            i, r = divmod(i, self.p)
            out.append(r)
        return tuple(out)

    def index(self, coords):
        return sum((c % self.p) * self.p ** j for j, c in enumerate(coords))

    def scalar(self, n: int) -> int:
        return n % self.p

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in a finite field")
        return self.mul_t[a][self.inv_t[b]]

    def frob(self, a):
        return self.frob_t[a]

    def sqrt(self, a):
        roots = [x for x in range(self.q) if self.mul_t[x][x] == a]
        if not roots:
            raise DomainError("not a square")
        return roots[0]

    def dot(self, u, v):
        acc = 0
        for a, b in zip(u, v):
            acc = self.add_t[acc][self.mul_t[a][b]]
        return acc

    def bilinear(self, B, u, v):
        """u^T B v with B an integer matrix over F_p."""
        acc = 0
        for i, a in enumerate(u):
            if a:
                row = 0
                for j, b in enumerate(v):
                    if b and B[i][j]:
                        row = self.add_t[row][self.mul_t[B[i][j] % self.p][b]]
                acc = self.add_t[acc][self.mul_t[a][row]]
        return acc

    def normalize(self, v):
        """Projective normalization: first nonzero coordinate 1."""
        lead = next((x for x in v if x), None)
        if lead is None:
            raise DomainError("zero vector has no projective point")
        inv = self.inv_t[lead]
        return tuple(self.mul_t[inv][x] for x in v)

    def rref(self, rows):
        """Reduced row echelon form of the span, as a tuple of rows (the canonical basis)."""
        A = [list(r) for r in rows]
        out = []
        n = len(A[0]) if A else 0
        r = 0
        for c in range(n):
            piv = next((i for i in range(r, len(A)) if A[i][c]), None)
            if piv is None:
                continue
            A[r], A[piv] = A[piv], A[r]
            inv = self.inv_t[A[r][c]]
            A[r] = [self.mul_t[inv][x] for x in A[r]]
            for i in range(len(A)):
                if i != r and A[i][c]:
                    f = A[i][c]
                    A[i] = [self.sub(x, self.mul_t[f][y]) for x, y in zip(A[i], A[r])]
            r += 1
        out = [tuple(row) for row in A[:r]]
        return tuple(out)

    def projective_line(self):
        """P^1 in the order [1:0], [1:1], ..., [1:q-1], [0:1]."""
        return [(1, t) for t in range(self.q)] + [(0, 1)]

    def projective_space(self, n):
        for lead in range(n):
            for tail in itertools.product(range(self.q), repeat=n - lead - 1):
                yield (0,) * lead + (1,) + tail


@lru_cache(maxsize=None)
def finite_field(p: int, k: int) -> FiniteField:
    return FiniteField(p, k)


def subspaces(F: FiniteField, n: int, k: int):
    """Every k-dimensional subspace of F^n, as its reduced echelon basis."""
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n)
                if c not in pivots]
        for vals in itertools.product(range(F.q), repeat=len(free)):
            rows = [[0] * n for _ in range(k)]
            for i, pc in enumerate(pivots):
                rows[i][pc] = 1
            for (i, c), x in zip(free, vals):
                rows[i][c] = x
            yield tuple(tuple(r) for r in rows)


def frob_vector(F: FiniteField, v):
    return tuple(F.frob(x) for x in v)


def frob_subspace(F: FiniteField, rows):
    return F.rref([frob_vector(F, r) for r in rows])


def span_dim(F: FiniteField, *spaces):
    return len(F.rref([r for s in spaces for r in s]))


# the reduced space of a vertex lattice ----------------------------------------------------

class OmegaSpace:
    """Lam / Lam^dual over F_p with the form p[x, y] mod p, on a basis of representatives."""

    def __init__(self, fs: FixedSpace, lam: VertexLattice):
        p = fs.p
        self.fs = fs
        self.lam = lam
        self.p = p
        self.scale = lam.lattice.scale
        self.reps = quotient_reps(lam.lattice, lam.dual)
        self.gram = reduced_gram(fs, self.reps, self.scale, 1)
        self.dim = len(self.reps)
        self.d = self.dim // 2
        if self.dim != lam.type or self.dim not in (2, 4):
            raise InconsistencyError("quotient dimension differs from the vertex type")
        if det_mod_p(self.gram, p) == 0:
            raise InconsistencyError("reduced form is degenerate")
        expected = 0 if self.d == 1 else p * p + 1
        if len(isotropic_lines(self.gram, p)) != expected:
            raise InconsistencyError("reduced form is split")
        self._coords = None

    def isotropic(self, F: FiniteField, rows) -> bool:
        return all(F.bilinear(self.gram, u, v) == 0 for i, u in enumerate(rows) for v in rows[i:])

    def standard_coordinates(self):
        """(T, D): columns of T are a basis in which the form is xy - z^2 + D w^2."""
        if self.d != 2:
            raise DomainError("standard coordinates are for the type-4 quadric")
        if self._coords is None:
            self._coords = _standard_coordinates(self.gram, self.p, self.fs.delta)
        return self._coords


def omega_of(fs: FixedSpace, lam: VertexLattice) -> OmegaSpace:
    return OmegaSpace(fs, lam)


def _standard_coordinates(B, p, D):
    n = 4

    def bil(u, v):
        return sum(u[i] * B[i][j] * v[j] for i in range(n) for j in range(n)) % p

    vecs = list(itertools.product(range(p), repeat=n))[1:]
    half = pow(2, -1, p)
    e = next(v for v in vecs if bil(v, v) == 0)
    f = next(v for v in vecs if bil(e, v))
    c = pow(2 * bil(e, f), -1, p)
    f = [c * x % p for x in f]
    t = bil(f, f)
    f = [(x - t * y) % p for x, y in zip(f, e)]
    W = [v for v in vecs if bil(v, e) == 0 and bil(v, f) == 0]
    g = next(v for v in W if bil(v, v) == (-1) % p)
    h = next(v for v in W if bil(v, g) == 0)
    lam = next(x for x in range(1, p) if x * x * bil(h, h) % p == D % p)
    h = [lam * x % p for x in h]
    T = [[col[i] for col in (e, f, g, h)] for i in range(n)]
    want = [[0, half, 0, 0], [half, 0, 0, 0], [0, 0, p - 1, 0], [0, 0, 0, D % p]]
    cols = (e, f, g, h)
    for i in range(n):
        for j in range(n):
            if bil(cols[i], cols[j]) != want[i][j]:
                raise InconsistencyError("standard coordinates not reached")
    if det_mod_p(T, p) == 0:
        raise InconsistencyError("standard coordinates are not a basis")
    return T, D % p


def lagrangians(omega: OmegaSpace, s: int):
    """All totally isotropic d-dimensional subspaces of Omega ⊗ F_{p^s}, sorted."""
    if s < 1:
        raise DomainError("extension degree must be positive")
    F = finite_field(omega.p, s)
    return sorted(U for U in subspaces(F, omega.dim, omega.d) if omega.isotropic(F, U))


# the quadric and psi ----------------------------------------------------------------------

def quadric_value(F: FiniteField, D: int, v):
    """xy - z^2 + D w^2 in standard coordinates; zero exactly on the quadric."""
    x, y, z, w = v
    t = F.sub(F.mul(x, y), F.mul(z, z))
    return F.add(t, F.mul(F.scalar(D), F.mul(w, w)))


def quadric_points(F: FiniteField, D: int):
    return [v for v in F.projective_space(4) if quadric_value(F, D, v) == 0]


def psi(F: FiniteField, delta: int, P, Q):
    """[ac : bd : (ad + bc)/2 : (ad - bc)/(2 delta)], normalized."""
    a, b = P
    c, d = Q
    ad, bc = F.mul(a, d), F.mul(b, c)
    two = F.scalar(2)
    z = F.div(F.add(ad, bc), two)
    w = F.div(F.sub(ad, bc), F.mul(two, delta))
    return F.normalize((F.mul(a, c), F.mul(b, d), z, w))


def _psi_raw(F, delta, P, Q):
    a, b = P
    c, d = Q
    ad, bc = F.mul(a, d), F.mul(b, c)
    two = F.scalar(2)
    return (F.mul(a, c), F.mul(b, d), F.div(F.add(ad, bc), two),
            F.div(F.sub(ad, bc), F.mul(two, delta)))


@dataclass(frozen=True)
class Flag:
    """A point on a Lagrangian plane of Omega ⊗ F, both as reduced echelon bases in Omega coordinates."""
    line: tuple
    plane: tuple


def _to_omega(F, T, v):
    return tuple(F.dot([F.scalar(x) for x in row], v) for row in T)


def frob_flag(F: FiniteField, flag: Flag) -> Flag:
    return Flag(frob_subspace(F, flag.line), frob_subspace(F, flag.plane))


def _rulings(omega: OmegaSpace, F: FiniteField, delta: int):
    T, D = omega.standard_coordinates()
    if F.mul(delta, delta) != F.scalar(D):
        raise InconsistencyError("delta is not a square root of D")
    e0, e1 = (1, 0), (0, 1)
    first, second = [], []
    for P in F.projective_line():
        P1 = frob_vector(F, P)
        for out, pt, gens in (
                (first, _psi_raw(F, delta, P, P1), (_psi_raw(F, delta, P, e0), _psi_raw(F, delta, P, e1))),
                (second, _psi_raw(F, delta, P1, P), (_psi_raw(F, delta, e0, P), _psi_raw(F, delta, e1, P)))):
            line = F.rref([_to_omega(F, T, pt)])
            plane = F.rref([_to_omega(F, T, g) for g in gens])
            out.append(Flag(line, plane))
    for flag in first + second:
        _check_flag(omega, F, flag)
    return first, second


def _check_flag(omega, F, flag):
    plane, line = flag.plane, flag.line
    if len(plane) != 2 or len(line) != 1 or not omega.isotropic(F, plane):
        raise InconsistencyError("flag plane is not Lagrangian")
    fplane = frob_subspace(F, plane)
    if span_dim(F, plane, line) != 2 or span_dim(F, fplane, line) != 2:
        raise InconsistencyError("flag line is not in the plane and its Frobenius")
    if span_dim(F, plane, fplane) != 3:
        raise InconsistencyError("plane and its Frobenius do not meet in a line")


def pinning_space(omega: OmegaSpace, s: int) -> FixedSpace:
    """A fixed space over W(F_{p^{2s}}) in which the same y-coordinates are read."""
    fs = omega.fs
    if fs.space.ctx.m == 2 * s:
        return fs
    sp = fs.space
    return make_fixed_space(fs.p, fs.ctx.N, sp.alpha, sp.r, fs.delta, m=2 * s)


def x_lambda_points(omega: OmegaSpace, s: int, fs_ext: FixedSpace = None):
    """(plus, minus) flags over F_{p^{2s}}: plus = {(psi(P, Phi P), ruling of P)}, minus the other ruling.

    The plus ruling is the one whose lattices are (1/p) wedge^2 of a lattice.
    """
    if omega.d != 2:
        raise DomainError("x_lambda_points needs a type-4 vertex lattice")
    if s < 1:
        raise DomainError("extension degree must be positive")
    fs_ext = fs_ext or pinning_space(omega, s)
    F = finite_field(omega.p, 2 * s)
    if fs_ext.space.ctx.m != F.k:
        raise DomainError("pinning space has the wrong residue degree")
    delta = F.index(fs_ext.u.c)
    first, second = _rulings(omega, F, delta)
    L = lagrangian_lattice(fs_ext, omega, first[0].plane)
    if fs_ext.space.orientation_of(L) == "plus":
        return first, second
    return second, first


# lattices and Lagrangians ------------------------------------------------------------------

def _lift_map(fs: FixedSpace, omega: OmegaSpace):
    """Flat matrix of W'^dim -> V', c -> sum c_i rep_i."""
    ctx = fs.space.ctx
    m = ctx.m
    q = ctx.q
    R = [[sum(fs.Y[a][j] * rep[j] for j in range(len(rep))) % q for a in range(len(fs.Y))]
         for rep in omega.reps]
    G = [[ctx.elem(R[i][a * m:(a + 1) * m]) for i in range(omega.dim)] for a in range(len(fs.Y) // m)]
    return gr_matrix_flat(ctx, G)


def lagrangian_lattice(fs: FixedSpace, omega: OmegaSpace, rows) -> PLattice:
    """Lam^dual ⊗ W' + lift of the subspace spanned by rows (F_{p^m} coordinates)."""
    ctx = fs.space.ctx
    F = finite_field(ctx.p, ctx.m)
    G = _lift_map(fs, omega)
    q = ctx.q
    vecs = []
    for row in rows:
        c = [x for a in row for x in F.coords(a)]
        vecs.append([sum(g * x for g, x in zip(Grow, c)) % q for Grow in G])
    base = fs.tensor_up(omega.lam.dual)
    return extend(base, vecs, omega.scale, w=True)


def reduce_lattice(fs: FixedSpace, omega: OmegaSpace, L: PLattice):
    """The subspace L / Lam^dual of Omega ⊗ k', for Lam^dual ⊗ W' ⊆ L ⊆ Lam ⊗ W'."""
    if not (fs.tensor_up(omega.lam.lattice).contains(L) and L.contains(fs.tensor_up(omega.lam.dual))):
        raise DomainError("lattice is not between Lam^dual and Lam")
    ctx = fs.space.ctx
    F = finite_field(ctx.p, ctx.m)
    C = pullback(L, _lift_map(fs, omega), omega.scale)
    if C.scale > 0:
        raise InconsistencyError("coefficient lattice misses the unit vectors")
    p = ctx.p
    f = p ** (-C.scale)
    rows = []
    for col in C.cols:
        red = [x * f % p for x in col]
        if any(red):
            rows.append(tuple(F.index(red[i:i + ctx.m]) for i in range(0, len(red), ctx.m)))
    return F.rref(rows)


def special_lattices_through(fs: FixedSpace, omega: OmegaSpace):
    """Every special lattice over W(F_{p^m}) between Lam^dual and Lam, split by orientation."""
    space = fs.space
    out = {"plus": [], "minus": []}
    for U in lagrangians(omega, space.ctx.m):
        L = lagrangian_lattice(fs, omega, U)
        if not space.is_special(L):
            continue
        o = space.orientation_of(L)
        out[o].append(SpecialLattice(space, L, o, check=False))
    return out


# the chain L^(r) and the vertex lattice of a special lattice --------------------------------

def _lattice_of(L):
    return L.lattice if isinstance(L, SpecialLattice) else L


def special_chain(space, L):
    """[L^(0), ..., L^(d)] with L^(r+1) = L^(r) + Phi(L^(r)) and L^(d) Phi-stable."""
    chain = [_lattice_of(L)]
    for _ in range(3):
        cur = chain[-1]
        img = space.phi_bar(cur)
        if img == cur:
            return chain
        nxt = lattice_sum(cur, img)
        if quotient_length(nxt, cur) != 1:
            raise InconsistencyError("chain step does not have length one")
        chain.append(nxt)
    raise InconsistencyError("chain does not stabilize by two steps")


def chain_and_lambda(fs: FixedSpace, L):
    """(d, Lam_L) with Lam_L the Phi-fixed part of L^(d), a vertex lattice of type 2d."""
    space = fs.space
    chain = special_chain(space, L)
    d = len(chain) - 1
    if d not in (1, 2):
        raise InconsistencyError(f"chain length {d} outside {{1, 2}}")
    Lam = fs.fixed_part(chain[-1])
    ok, t = fs.is_vertex(Lam)
    if not ok or t != 2 * d:
        raise InconsistencyError("fixed part of the chain is not a vertex lattice of type 2d")
    if fs.dual(Lam) != fs.fixed_part(chain[0]):
        raise InconsistencyError("dual of Lam_L is not the fixed part of L")
    return d, VertexLattice(fs, Lam, t)


def is_superspecial(fs: FixedSpace, L) -> bool:
    """L = Phi^2(L); cross-checked against the chain length."""
    space = fs.space
    lat = _lattice_of(L)
    ss = space.phi_bar(space.phi_bar(lat)) == lat
    d, _ = chain_and_lambda(fs, lat)
    if ss != (d == 1):
        raise InconsistencyError("Phi^2-stability and chain length disagree")
    return ss
