"""The rank-4 supersingular isocrystal and its Dieudonné lattices.

Basis e1..e4 over W'_Q with F = P o sigma, where P sends
e1 -> e2, e2 -> p e1, e3 -> e4, e4 -> p e3.  Every semilinear map is applied
through its flat matrix on the 4m coordinates over Z/p^N (sigma is linear
there), so preimages and images of lattices are plain lattice_algebra calls.
"""
import itertools

from .errors import DomainError, InconsistencyError
from .lattice import (PLattice, extend, flatten, intersect, kron_block, lattice_sum, pullback,
                      pushforward, quotient_length, unflatten, w_span, w_standard)
from .lattice import height as lattice_height
from .rings import RingContext, make_ring

RANK = 4


def _perm_matrix(p):
    # column j is the image of e_{j+1}
    return [[0, p, 0, 0],
            [1, 0, 0, 0],
            [0, 0, 0, p],
            [0, 0, 1, 0]]


class Isocrystal:
    def __init__(self, ctx: RingContext):
        self.ctx = ctx
        p, q = ctx.p, ctx.q
        self.p = p
        self.P = _perm_matrix(p)
        self.F_flat = kron_block(self.P, ctx.sigma_matrix, q)
        # V = p F^{-1} = (p P^{-1}) o sigma^{-1}, and p P^{-1} = P for this basis
        self.V_flat = kron_block(self.P, ctx.sigma_inv_matrix, q)
        ident = [[int(i == j) for j in range(RANK)] for i in range(RANK)]
        self.M = w_standard(ctx, RANK)
        self._ident = ident

    def __repr__(self):
        return f"Isocrystal(p={self.p}, m={self.ctx.m}, N={self.ctx.N})"

    # vectors -------------------------------------------------------------------
    def basis_vector(self, i):
        """e_{i+1} as a list of GaloisRingElem."""
        return [self.ctx.one() if j == i else self.ctx.zero() for j in range(RANK)]

    def apply_F(self, v):
        s = [x.frobenius() for x in v]
        p = self.p
        return [p * s[1], s[0], p * s[3], s[2]]

    def apply_V(self, v):
        s = [x.frobenius_inv() for x in v]
        p = self.p
        return [p * s[1], s[0], p * s[3], s[2]]

    def lattice(self, vectors, scale=0) -> PLattice:
        """W'-span of p^scale * vectors, each a list of 4 GaloisRingElem (or ints)."""
        flat = [flatten([self.ctx.elem(x) if isinstance(x, int) else x for x in v]) for v in vectors]
        return w_span(self.ctx, flat, scale)

    def diagonal_lattice(self, exps) -> PLattice:
        return w_standard(self.ctx, RANK, list(exps))

    # lattice operators -----------------------------------------------------------
    def F_bar(self, A: PLattice) -> PLattice:
        return pushforward(A, self.F_flat)

    def V_bar(self, A: PLattice) -> PLattice:
        return pushforward(A, self.V_flat)

    def F_inv(self, A: PLattice) -> PLattice:
        """{x : F x in A}."""
        return pullback(A, self.F_flat)

    def F_inv_p(self, A: PLattice) -> PLattice:
        """A_1 = {x : F x in pA}."""
        return pullback(A, self.F_flat, -1)

    def height(self, A: PLattice) -> int:
        return lattice_height(A, self.M)

    def is_dieudonne(self, A: PLattice) -> bool:
        A1 = self.F_inv_p(A)
        pA = A.scaled(1)
        chain = A.contains(A1) and A1.contains(pA)
        by_length = chain and quotient_length(A1, pA) == 2
        by_stability = chain and self.F_bar(self.F_inv(A)) == A
        if by_length != by_stability:
            raise InconsistencyError("the two Dieudonné criteria disagree")
        return by_length

    def shift_matrix(self, delta_sign):
        p = self.p
        if delta_sign > 0:
            # e1 -> e2, e2 -> p e1, e3 -> e3, e4 -> e4
            M = [[0, p, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
            return kron_block(M, _eye(self.ctx.m), self.ctx.q), 0
        # p^{-1} psi with psi: e1 -> e2, e2 -> p e1, e3 -> p e3, e4 -> p e4
        M = [[0, p, 0, 0], [1, 0, 0, 0], [0, 0, p, 0], [0, 0, 0, p]]
        return kron_block(M, _eye(self.ctx.m), self.ctx.q), -1

    def shift_height(self, A, delta: int):
        lat = A.lattice if isinstance(A, DieudonneLattice) else A
        T, s = self.shift_matrix(1 if delta > 0 else -1)
        for _ in range(abs(delta)):
            lat = pushforward(lat, T, s)
        return DieudonneLattice(self, lat)

    def dieudonne(self, A: PLattice):
        return DieudonneLattice(self, A)


def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


class DieudonneLattice:
    """A Dieudonné lattice with its A_1 and height cached."""

    def __init__(self, iso: Isocrystal, A: PLattice, check=True):
        if check and not iso.is_dieudonne(A):
            raise DomainError("lattice is not a Dieudonné lattice")
        self.iso = iso
        self.lattice = A
        self.A1 = iso.F_inv_p(A)
        self.height = iso.height(A)

    def __eq__(self, other):
        return isinstance(other, DieudonneLattice) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"DieudonneLattice(height={self.height}, key={self.lattice.key()!r})"

    def key(self):
        return self.lattice.key()


def make_isocrystal(p=3, N=12, m=2) -> Isocrystal:
    return Isocrystal(make_ring(p, N, m))


def _quotient_basis(ctx, S: PLattice, T: PLattice):
    """W'-independent flat vectors of T spanning T/S (T/S killed by p), all at scale T.scale."""
    reps = []
    cur = S
    for col in T.cols:
        if not cur.contains_vector(col, T.scale):
            reps.append(list(col))
            cur = extend(cur, [col], T.scale)
    return reps


def _residue_points(ctx, d):
    """Normalized coefficient vectors of the points of P^{d-1}(F_{p^m}), as GR lifts."""
    res = list(ctx.residue_elements())
    zero, one = ctx.zero(), ctx.one()
    for lead in range(d):
        for tail in itertools.product(res, repeat=d - lead - 1):
            yield [zero] * lead + [one] + list(tail)


def stable_extensions(iso: Isocrystal, S: PLattice, top: PLattice):
    """All F,V-stable lattices S' with S ⊂ S' ⊆ top and S'/S of length one."""
    ctx = iso.ctx
    T = intersect(top, S.scaled(-1), check=False)
    T = intersect(T, pullback(S, iso.F_flat), check=False)
    T = intersect(T, pullback(S, iso.V_flat), check=False)
    reps = _quotient_basis(ctx, S, T)
    out = {}
    m = ctx.m
    for coeffs in _residue_points(ctx, len(reps)):
        v = [0] * len(reps[0])
        for c, r in zip(coeffs, reps):
            if not any(c.c):
                continue
            B = ctx.mult_matrix_coords(c.c)
            for i in range(0, len(r), m):
                for a in range(m):
                    v[i + a] += sum(B[a][b] * r[i + b] for b in range(m))
        new = extend(S, [v], T.scale)
        out[new.key()] = new
    return [out[k] for k in sorted(out)]


def enumerate_band(iso: Isocrystal, height: int = 0):
    """Dieudonné lattices A of the given height with pM ⊆ A ⊆ p^{-1}M, sorted by key.

    Built by adding one simple F,V-stable layer at a time on top of pM: every
    F,V-stable lattice in the band has such a composition series because F, V
    and p act nilpotently on p^{-1}M / pM.
    """
    if not -4 <= height <= 4:
        raise DomainError("height outside the band")
    bottom = iso.M.scaled(1)
    top = iso.M.scaled(-1)
    level = {bottom.key(): bottom}
    for _ in range(4 - height):
        nxt = {}
        for S in level.values():
            for S2 in stable_extensions(iso, S, top):
                nxt[S2.key()] = S2
        level = nxt
    return [level[k] for k in sorted(level)]


def vector_of(ctx, flat):
    return unflatten(ctx, flat)
