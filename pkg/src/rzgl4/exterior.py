"""V = wedge^2 N with its pairing, Frobenius Phi, Hodge star and special endomorphisms.

Basis of V:  x1 = e1^e2, x2 = e3^e4, x3 = e1^e3, x4 = e2^e4, x5 = e1^e4, x6 = e2^e3.
Basis of wedge^2 N*: t_j built from the dual basis f1..f4 with the same index pairs.

The volume form is omega = w * e1^e2^e3^e4 with w = alpha * p^r (defaults
alpha = 1, r = 0) and [x, y] omega = x ^ y.  Elements carry a p-power shift
so that negative valuations (Phi(x3) = p^{-1} x4) stay exact.
"""
import numpy as np

from .errors import DomainError, InconsistencyError
from .isocrystal import Isocrystal, RANK
from .lattice import (GramForm, PLattice, dual, flatten, from_gens, gr_matrix_flat,
                      kron_block, lattice_sum, pullback, pushforward, quotient_length,
                      solve_integral, unflatten, w_standard)
from .lattice import height as lattice_height
from .lattice import _dtype
from .rings import GaloisRingElem, RingContext, vp

PAIRS = ((0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2))
DIM = 6

# x_k^star = STAR_SIGN[k] * w^{-1} * t_{STAR_INDEX[k]}, and t_j^star = STAR_SIGN[j] * w * x_{STAR_INDEX[j]}
STAR_INDEX = (1, 0, 3, 2, 5, 4)
STAR_SIGN = (1, 1, -1, -1, 1, 1)


def _perm_sign(seq):
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def wedge_gram():
    """Integer matrix of x_k ^ x_l in units of e1^e2^e3^e4."""
    G = [[0] * DIM for _ in range(DIM)]
    for k, (a, b) in enumerate(PAIRS):
        for l, (c, d) in enumerate(PAIRS):
            if len({a, b, c, d}) == 4:
                G[k][l] = _perm_sign((a, b, c, d))
    return G


def phi_matrix_from_F(p, transpose=False):
    """Phi o sigma^{-1} on the x-basis computed from Phi(a^b) = p^{-1} Fa ^ Fb.

    Returned as p times the matrix (so entries are integers), row-major.
    With ``transpose`` the same for wedge^2 N*, where p F* = P^T o sigma.
    """
    P = [[0, p, 0, 0], [1, 0, 0, 0], [0, 0, 0, p], [0, 0, 1, 0]]
    if transpose:
        P = [list(r) for r in zip(*P)]
    cols = []
    for a, b in PAIRS:
        Fa = [P[i][a] for i in range(RANK)]
        Fb = [P[i][b] for i in range(RANK)]
        cols.append(wedge_int(Fa, Fb))
    # divide by p then multiply by p: the matrix of p * Phi o sigma^{-1} is just the wedge
    return [[cols[j][i] for j in range(DIM)] for i in range(DIM)]


def phi_matrix_displayed(p):
    """p times the displayed matrix: x1->-x1, x2->-x2, x3->p^{-1}x4, x4->p x3, x5->x6, x6->x5."""
    M = [[0] * DIM for _ in range(DIM)]
    M[0][0] = -p
    M[1][1] = -p
    M[3][2] = 1
    M[2][3] = p * p
    M[5][4] = p
    M[4][5] = p
    return M


def _wedge_tensor(ctx):
    """T[c, x, y]: flat coordinate c of u ^ v is sum T[c, x, y] u_x v_y."""
    m = ctx.m
    q = ctx.q
    mult = []
    for i in range(m):
        c = [0] * m
        c[i] = 1
        mult.append(ctx.mult_matrix_coords(c))      # mult[i][k][j]: g^i * g^j -> coordinate k
    dt = _dtype(q, 16 * m * m)
    T = np.zeros((DIM * m, RANK * m, RANK * m), dtype=dt)
    for k, (a, b) in enumerate(PAIRS):
        for i in range(m):
            for j in range(m):
                for c in range(m):
                    v = mult[i][c][j] % q
                    if v:
                        T[k * m + c, a * m + i, b * m + j] += v
                        T[k * m + c, b * m + i, a * m + j] -= v
    return T % q


def _mod(M, q):
    return [[x % q for x in row] for row in M]


def wedge_int(a, b):
    return [a[i] * b[j] - a[j] * b[i] for i, j in PAIRS]


class VElem:
    """p^shift * sum coords[k] x_{k+1} (or t_{k+1} when dual=True)."""

    __slots__ = ("coords", "shift", "dual")

    def __init__(self, coords, shift=0, dual=False):
        self.coords = list(coords)
        self.shift = shift
        self.dual = dual

    @property
    def ctx(self):
        return self.coords[0].ctx

    def _aligned(self, other):
        s = min(self.shift, other.shift)
        p = self.ctx.p
        a = [c * p ** (self.shift - s) for c in self.coords]
        b = [c * p ** (other.shift - s) for c in other.coords]
        return s, a, b

    def __add__(self, other):
        s, a, b = self._aligned(other)
        return VElem([x + y for x, y in zip(a, b)], s, self.dual)

    def __sub__(self, other):
        s, a, b = self._aligned(other)
        return VElem([x - y for x, y in zip(a, b)], s, self.dual)

    def __neg__(self):
        return VElem([-x for x in self.coords], self.shift, self.dual)

    def scale(self, c):
        """Multiply by a GaloisRingElem or int."""
        return VElem([c * x for x in self.coords], self.shift, self.dual)

    def __eq__(self, other):
        if not isinstance(other, VElem) or self.dual != other.dual:
            return NotImplemented
        _, a, b = self._aligned(other)
        return all(x == y for x, y in zip(a, b))

    def __repr__(self):
        name = "t" if self.dual else "x"
        terms = [f"({c})*{name}{k + 1}" for k, c in enumerate(self.coords) if any(c.c)]
        body = " + ".join(terms) if terms else "0"
        return f"p^{self.shift}*[{body}]" if self.shift else body

    def flat(self):
        return flatten(self.coords)


class ExteriorSpace:
    def __init__(self, iso: Isocrystal, alpha: int = 1, r: int = 0):
        ctx = iso.ctx
        if alpha % ctx.p == 0:
            raise DomainError("alpha must be a p-adic unit")
        self.iso = iso
        self.ctx = ctx
        self.p = ctx.p
        self.alpha = alpha
        self.r = r
        q = ctx.q
        self.alpha_inv = pow(alpha, -1, q)
        self.G0 = wedge_gram()
        # [x, y] = p^{-r} alpha^{-1} x^T G0 y
        self.gram = GramForm(ctx, kron_block([[g * self.alpha_inv for g in row] for row in self.G0],
                                             ctx.trace_form, q), -r)
        self.phi_int = phi_matrix_displayed(ctx.p)
        if _mod(self.phi_int, q) != _mod(phi_matrix_from_F(ctx.p), q):
            raise InconsistencyError("Phi matrix does not match p^{-1} F ^ F")
        self.phi_flat = kron_block(self.phi_int, ctx.sigma_matrix, q)
        self.phi_dual_int = phi_matrix_from_F(ctx.p, transpose=True)
        self.standard = w_standard(ctx, DIM)
        self._wedge_t = _wedge_tensor(ctx)
        self._endo_x, self._endo_star = self._endo_tensors()

    def _endo_tensors(self):
        """Flat matrices of x -> x(.) and x -> x^star(.) for each flat coordinate of x."""
        ctx = self.ctx
        xs, stars = [], []
        for k in range(DIM):
            for a in range(ctx.m):
                c = [0] * ctx.m
                c[a] = 1
                coords = [ctx.zero()] * DIM
                coords[k] = ctx.elem(c)
                E = SpecialEndo(self, VElem(coords))
                xs.append(gr_matrix_flat(ctx, E.x_mat))
                stars.append(gr_matrix_flat(ctx, E.star_mat))
        dt = _dtype(ctx.q, 4 * DIM * ctx.m * ctx.m)
        return np.array(xs, dtype=dt), np.array(stars, dtype=dt)

    # elements ------------------------------------------------------------------------
    def basis_vector(self, k, dual=False):
        ctx = self.ctx
        return VElem([ctx.one() if j == k else ctx.zero() for j in range(DIM)], 0, dual)

    def element(self, coords, shift=0, dual=False):
        ctx = self.ctx
        return VElem([ctx.elem(c) if not isinstance(c, GaloisRingElem) else c for c in coords], shift, dual)

    def wedge(self, a, b) -> VElem:
        return VElem(wedge_int(a, b))

    def pairing(self, x: VElem, y: VElem):
        """[x, y] as (shift, GaloisRingElem)."""
        acc = self.ctx.zero()
        for k in range(DIM):
            for l in range(DIM):
                g = self.G0[k][l]
                if g:
                    acc = acc + g * x.coords[k] * y.coords[l]
        return x.shift + y.shift - self.r, acc * self.alpha_inv

    def dual_pairing(self, t: VElem, s: VElem):
        """[t, s]_1 with t ^ s = [t, s]_1 omega_1 and omega_1 = w^{-1} f1^f2^f3^f4."""
        acc = self.ctx.zero()
        for k in range(DIM):
            for l in range(DIM):
                g = self.G0[k][l]
                if g:
                    acc = acc + g * t.coords[k] * s.coords[l]
        return t.shift + s.shift + self.r, acc * self.alpha

    @staticmethod
    def cross_pairing(x: VElem, t: VElem):
        """{x, t} with {a^b, f^g} = f(a)g(b) - f(b)g(a)."""
        acc = x.coords[0] * 0
        for k in range(DIM):
            acc = acc + x.coords[k] * t.coords[k]
        return x.shift + t.shift, acc

    def phi(self, x: VElem) -> VElem:
        """Phi on V, or on wedge^2 N* for dual elements."""
        s = [c.frobenius() for c in x.coords]
        M = self.phi_dual_int if x.dual else self.phi_int
        out = []
        for i in range(DIM):
            acc = s[0] * 0
            for j in range(DIM):
                if M[i][j]:
                    acc = acc + M[i][j] * s[j]
            out.append(acc)
        return VElem(out, x.shift - 1, x.dual)

    def hodge_star(self, x: VElem) -> VElem:
        if x.dual:
            raise DomainError("hodge_star expects an element of V")
        out = [None] * DIM
        for k in range(DIM):
            out[STAR_INDEX[k]] = STAR_SIGN[k] * self.alpha_inv * x.coords[k]
        return VElem(out, x.shift - self.r, dual=True)

    def hodge_star_dual(self, t: VElem) -> VElem:
        if not t.dual:
            raise DomainError("hodge_star_dual expects an element of wedge^2 N*")
        out = [None] * DIM
        for j in range(DIM):
            out[STAR_INDEX[j]] = STAR_SIGN[j] * self.alpha * t.coords[j]
        return VElem(out, t.shift + self.r, dual=False)

    # special endomorphisms ---------------------------------------------------------
    def special_endo(self, x: VElem):
        return SpecialEndo(self, x)

    def h_action(self, h, c, x: VElem) -> VElem:
        """(h, c) . x = c^{-1} wedge^2(h) x; h a 4x4 GaloisRingElem matrix, c a unit
        GaloisRingElem or a pair (unit, p-exponent)."""
        if isinstance(c, tuple):
            cu, cv = c
        else:
            cu, cv = c, 0
        W = wedge2_matrix(h)
        out = []
        for i in range(DIM):
            acc = x.coords[0] * 0
            for j in range(DIM):
                acc = acc + W[i][j] * x.coords[j]
            out.append(acc * cu.inverse())
        return VElem(out, x.shift - cv)

    # lattices ------------------------------------------------------------------------
    def wedge2(self, A: PLattice) -> PLattice:
        ctx = self.ctx
        q = ctx.q
        dt = self._wedge_t.dtype
        U = np.array(A.cols, dtype=dt)
        # (c, x, y) x (p, x) -> (c, y, p), then contract y with the second factor
        T1 = np.tensordot(self._wedge_t, U, axes=([1], [1])) % q
        G = np.tensordot(T1, U, axes=([1], [1])) % q          # (c, p, r)
        n = len(A.cols)
        iu = np.triu_indices(n, 1)
        gens = G[:, iu[0], iu[1]].T
        return from_gens(ctx, gens.tolist(), 2 * A.scale)

    def phi_bar(self, L: PLattice) -> PLattice:
        return pushforward(L, self.phi_flat, -1)

    def dual(self, L: PLattice) -> PLattice:
        return dual(L, self.gram)

    def is_self_dual(self, L: PLattice) -> bool:
        return self.dual(L) == L

    def length_condition(self, L: PLattice) -> int:
        return quotient_length(lattice_sum(L, self.phi_bar(L)), L)

    def is_special(self, L: PLattice) -> bool:
        return self.is_self_dual(L) and self.length_condition(L) == 1

    def very_special_of(self, A):
        """L = (1/p) wedge^2(A_1) for a Dieudonné lattice A of height 0."""
        from .isocrystal import DieudonneLattice
        if not isinstance(A, DieudonneLattice):
            A = DieudonneLattice(self.iso, A)
        if A.height != 0:
            raise DomainError(f"very_special_of needs height 0, got {A.height}")
        L = self.wedge2(A.A1).scaled(-1)
        return SpecialLattice(self, L, "plus")

    def wedge_root(self, Y: PLattice) -> PLattice:
        """The unique lattice C with wedge^2(C) = Y; DomainError if none exists.

        The operators n -> x(y^star(n)) for x, y in Y span p^h w^{-1} End(C),
        where h is the height of C; applied to M they span a scalar multiple of
        C, and the height fixes the scalar.
        """
        ctx = self.ctx
        p = self.p
        h3 = lattice_height(Y, self.standard)
        if h3 % 3:
            raise DomainError("determinant is not a cube: not a wedge square")
        h = h3 // 3
        q = ctx.q
        dt = self._endo_x.dtype
        Yc = np.array(Y.cols, dtype=dt)
        # Z = sum over y of y^star(M): the columns of every y^star at the W'-basis e_i of M
        Sy = np.tensordot(Yc, self._endo_star, axes=([1], [0])) % q      # (y, row, col)
        gens = Sy[:, :, ::ctx.m].transpose(0, 2, 1).reshape(-1, Sy.shape[1])
        Z = from_gens(ctx, gens.tolist(), Y.scale - self.r)
        Xy = np.tensordot(Yc, self._endo_x, axes=([1], [0])) % q          # (x, row, col)
        Zc = np.array(Z.cols, dtype=dt)
        imgs = np.tensordot(Xy, Zc, axes=([2], [1])) % q                 # (x, row, z)
        gens = imgs.transpose(0, 2, 1).reshape(-1, imgs.shape[1])
        B = from_gens(ctx, gens.tolist(), Y.scale + Z.scale)
        hb = self.iso.height(B)
        if (hb - h) % 4:
            raise DomainError("no lattice has this wedge square")
        C = B.scaled(-((hb - h) // 4))
        if self.wedge2(C) != Y:
            raise DomainError("no lattice has this wedge square")
        return C

    def dieudonne_of(self, L):
        """Inverse of very_special_of, computed two ways and cross-checked."""
        from .isocrystal import DieudonneLattice
        if isinstance(L, SpecialLattice):
            if L.orientation == "minus":
                raise DomainError("lattice is in the minus component; no Dieudonné preimage")
            lat = L.lattice
        else:
            lat = L
        # route 1: Phi(L) = wedge^2 A
        A = self.wedge_root(self.phi_bar(lat))
        # route 2: pL = wedge^2 A_1 and A = F(p^{-1} A_1)
        C = self.wedge_root(lat.scaled(1))
        A2 = self.iso.F_bar(C).scaled(-1)
        if A != A2:
            raise InconsistencyError("the two inverse constructions disagree")
        D = DieudonneLattice(self.iso, A, check=False)
        if not self.iso.is_dieudonne(A) or D.height != 0:
            raise InconsistencyError("recovered lattice is not a height-0 Dieudonné lattice")
        if self.wedge2(D.A1).scaled(-1) != lat:
            raise InconsistencyError("round trip failed")
        return D

    def orientation_of(self, L: PLattice) -> str:
        """'plus' if L = (1/p) wedge^2 C, 'minus' if L = wedge^2 C (exactly one holds for special L)."""
        plus = _has_root(self, L.scaled(1))
        minus = _has_root(self, L)
        if plus == minus:
            raise InconsistencyError("lattice is of neither or both wedge types")
        return "plus" if plus else "minus"

    # chain condition of wedge lattices --------------------------------------------------
    def chain_condition(self, C: PLattice) -> bool:
        """pC ⊆ F(C) ⊆ C with both quotients of length 2."""
        FC = self.iso.F_bar(C)
        pC = C.scaled(1)
        if not (C.contains(FC) and FC.contains(pC)):
            return False
        return quotient_length(C, FC) == 2 and quotient_length(FC, pC) == 2

    def wedge_length_condition(self, C: PLattice) -> bool:
        """(wedge^2 C + (1/p) wedge^2 F(C)) / wedge^2 C has length 1."""
        W = self.wedge2(C)
        S = lattice_sum(W, self.wedge2(self.iso.F_bar(C)).scaled(-1))
        return quotient_length(S, W) == 1


def _has_root(space, Y):
    try:
        space.wedge_root(Y)
        return True
    except DomainError:
        return False


def _gr_matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    zero = A[0][0] * 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = zero
            for t in range(k):
                acc = acc + A[i][t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def wedge2_matrix(h):
    """6x6 matrix of wedge^2(h) on the x-basis for a 4x4 matrix h."""
    cols = []
    for a, b in PAIRS:
        ha = [h[i][a] for i in range(RANK)]
        hb = [h[i][b] for i in range(RANK)]
        cols.append(wedge_int(ha, hb))
    return [[cols[j][i] for j in range(DIM)] for i in range(DIM)]


class SpecialEndo:
    """x~ on N x N*: (n, f) -> (x(f), x^star(n)).

    x_mat (4x4, shift x_shift) is the map N* -> N in the bases f_j -> e_i;
    star_mat (4x4, shift star_shift) is the map N -> N*.
    """

    def __init__(self, space: ExteriorSpace, x: VElem):
        ctx = space.ctx
        zero = ctx.zero()
        X = [[zero] * RANK for _ in range(RANK)]
        for k, (a, b) in enumerate(PAIRS):
            c = x.coords[k]
            # a^b : f -> f(a) b - f(b) a
            X[b][a] = X[b][a] + c
            X[a][b] = X[a][b] - c
        t = space.hodge_star(x)
        S = [[zero] * RANK for _ in range(RANK)]
        for j, (a, b) in enumerate(PAIRS):
            c = t.coords[j]
            # f_a^f_b : e -> f_b(e) f_a - f_a(e) f_b
            S[a][b] = S[a][b] + c
            S[b][a] = S[b][a] - c
        self.space = space
        self.x_mat = X
        self.x_shift = x.shift
        self.star_mat = S
        self.star_shift = t.shift

    def apply(self, n, f):
        """Image of (n, f), vectors of GaloisRingElem at shift 0; returns ((shift, n'), (shift, f'))."""
        n2 = [sum((self.x_mat[i][j] * f[j] for j in range(RANK)), f[0] * 0) for i in range(RANK)]
        f2 = [sum((self.star_mat[i][j] * n[j] for j in range(RANK)), n[0] * 0) for i in range(RANK)]
        return (self.x_shift, n2), (self.star_shift, f2)

    def block_matrix(self):
        """8x8 GaloisRingElem matrix with common shift: [[0, x], [x^star, 0]]."""
        s = min(self.x_shift, self.star_shift)
        p = self.space.p
        zero = self.space.ctx.zero()
        M = [[zero] * (2 * RANK) for _ in range(2 * RANK)]
        fx = p ** (self.x_shift - s)
        fs = p ** (self.star_shift - s)
        for i in range(RANK):
            for j in range(RANK):
                M[i][RANK + j] = self.x_mat[i][j] * fx
                M[RANK + i][j] = self.star_mat[i][j] * fs
        return s, M


def anticommutator(space: ExteriorSpace, x: VElem, y: VElem):
    """x~ y~ + y~ x~ as (shift, 8x8 matrix)."""
    sx, X = SpecialEndo(space, x).block_matrix()
    sy, Y = SpecialEndo(space, y).block_matrix()
    XY = _gr_matmul(X, Y)
    YX = _gr_matmul(Y, X)
    return sx + sy, [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(XY, YX)]


def scalar_matrix_equal(space, shifted_matrix, shifted_scalar):
    """Compare (s, M) with (t, c) * identity at the working precision."""
    s, M = shifted_matrix
    t, c = shifted_scalar
    p = space.p
    lo = min(s, t)
    n = len(M)
    for i in range(n):
        for j in range(n):
            lhs = M[i][j] * p ** (s - lo)
            rhs = (c * p ** (t - lo)) if i == j else c * 0
            if lhs != rhs:
                return False
    return True


class SpecialLattice:
    """A special lattice with a provenance-tracked orientation tag."""

    def __init__(self, space: ExteriorSpace, lattice: PLattice, orientation="unknown", check=True):
        if orientation not in ("plus", "minus", "unknown"):
            raise DomainError("orientation must be plus, minus or unknown")
        if check and not space.is_special(lattice):
            raise DomainError("lattice is not special")
        self.space = space
        self.lattice = lattice
        self.orientation = orientation

    def phi_bar(self):
        flip = {"plus": "minus", "minus": "plus", "unknown": "unknown"}[self.orientation]
        return SpecialLattice(self.space, self.space.phi_bar(self.lattice), flip, check=False)

    def key(self):
        return self.lattice.key()

    def __eq__(self, other):
        return isinstance(other, SpecialLattice) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"SpecialLattice({self.orientation}, {self.lattice.key()!r})"


# stabilizers --------------------------------------------------------------------------

def product_lattice(ctx, A: PLattice, B: PLattice) -> PLattice:
    """A x B inside N x N* (flat: A's coordinates first)."""
    s = min(A.scale, B.scale)
    p = ctx.p
    n = A.dim
    gens = []
    for c in A.cols:
        gens.append([x * p ** (A.scale - s) for x in c] + [0] * n)
    for c in B.cols:
        gens.append([0] * n + [x * p ** (B.scale - s) for x in c])
    return from_gens(ctx, gens, s, prec=ctx.N + abs(A.scale - B.scale))


def dual_lattice_N(space: ExteriorSpace, A: PLattice) -> PLattice:
    """A* in N* (dual-basis coordinates)."""
    ctx = space.ctx
    q = ctx.q
    I = [[int(i == j) for j in range(RANK)] for i in range(RANK)]
    G = GramForm(ctx, kron_block(I, ctx.trace_form, q), 0)
    return dual(A, G)


def endo_flat_basis(space: ExteriorSpace):
    """For each flat coordinate of V, the flat matrix of x~ (common shift returned)."""
    ctx = space.ctx
    m = ctx.m
    out = []
    shifts = []
    for k in range(DIM):
        for a in range(m):
            coords = [ctx.zero()] * DIM
            c = [0] * m
            c[a] = 1
            coords[k] = ctx.elem(c)
            s, M = SpecialEndo(space, VElem(coords)).block_matrix()
            out.append(gr_matrix_flat(ctx, M))
            shifts.append(s)
    return min(shifts), out, shifts


def stabilizer(space: ExteriorSpace, source: PLattice, target: PLattice) -> PLattice:
    """{x in V : x~(source) ⊆ target}, solved exactly as one linear system."""
    ctx = space.ctx
    p, q = ctx.p, ctx.q
    s0, mats, shifts = endo_flat_basis(space)
    e, X = target.inverse()
    n = target.dim
    rows = []
    for col in source.cols:
        # column xi of the block: X * (M_xi * col), scaled to the common shift
        images = []
        for M, s in zip(mats, shifts):
            v = [sum(M[i][t] * col[t] for t in range(n) if col[t]) * p ** (s - s0) for i in range(n)]
            images.append([sum(X[i][t] * v[t] for t in range(n) if X[i][t]) % q for i in range(n)])
        for i in range(n):
            rows.append([images[j][i] for j in range(len(mats))])
    a = target.scale + e - source.scale - s0
    return solve_integral(ctx, rows, a)


def stabilizer_lattices(space: ExteriorSpace, A):
    """The three stabilizer lattices for a height-0 lattice A and their closed forms."""
    iso = space.iso
    A_lat = A.lattice if hasattr(A, "lattice") else A
    A1 = iso.F_inv_p(A_lat)
    Astar = dual_lattice_N(space, A_lat)
    Astar1 = dual_lattice_N(space, iso.F_inv(A_lat))
    D = product_lattice(space.ctx, A_lat, Astar)
    D1 = product_lattice(space.ctx, A1, Astar1)
    return {
        "whole": (stabilizer(space, D, D), space.wedge2(A_lat)),
        "filtered": (stabilizer(space, D1, D1), space.wedge2(A1).scaled(-1)),
        "mixed": (stabilizer(space, D1, D),
                  lattice_sum(space.wedge2(A1).scaled(-1), space.wedge2(A_lat))),
    }
