"""The 6-dimensional Q_p-quadratic space V^Phi and its vertex lattices.

V^Phi has the orthogonal basis
    y1 = u(x1 + x2), y2 = u(x1 - x2), y3 = u(p x3 - x4),
    y4 = p x3 + x4,  y5 = x5 + x6,    y6 = u(x5 - x6)
with u^2 = Delta a nonsquare unit.  Lattices in V^Phi are Z_p-lattices in
these y-coordinates; the form used for duality is [y_i, y_j] itself, i.e.
2 (alpha p^r)^{-1} diag(Delta, -Delta, Delta p, -p, 1, -Delta).
"""
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InconsistencyError
from .exterior import DIM, ExteriorSpace, VElem
from .lattice import (GramForm, PLattice, dual, flatten, from_gens, pullback, quotient_length,
                      w_span)
from .rings import hilbert_symbol, legendre, make_ring, smallest_nonsquare, split_rational


# quadratic forms over Q_p ----------------------------------------------------------------

@dataclass(frozen=True)
class DiagForm:
    entries: tuple
    p: int

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(Fraction(a) for a in self.entries))
        if any(a == 0 for a in self.entries):
            raise DomainError("diagonal entries must be nonzero")

    def value(self, v):
        return sum(a * Fraction(x) ** 2 for a, x in zip(self.entries, v))


def hasse_invariant(f: DiagForm) -> int:
    h = 1
    e = f.entries
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            h *= hilbert_symbol(e[i], e[j], f.p)
    return h


def square_class(a, p: int, u: int = None) -> int:
    """Representative of a mod (Q_p^*)^2 in {1, u, p, p*u}, u the chosen nonsquare."""
    u = smallest_nonsquare(p) if u is None else u
    v, unit = split_rational(a, p)
    rep = p if v % 2 else 1
    if legendre(unit, p) == -1:
        rep *= u
    return rep


def det_class(f: DiagForm, u: int = None) -> int:
    d = Fraction(1)
    for a in f.entries:
        d *= a
    return square_class(d, f.p, u)


def y_form(p: int, delta: int = None, scale=1) -> DiagForm:
    """diag(Delta, -Delta, Delta p, -p, 1, -Delta) times ``scale``."""
    delta = smallest_nonsquare(p) if delta is None else delta
    base = (delta, -delta, delta * p, -p, 1, -delta)
    return DiagForm(tuple(Fraction(scale) * b for b in base), p)


# the fixed space inside V ----------------------------------------------------------------

def fixed_space_basis(space: ExteriorSpace, delta: int = None):
    """(y1..y6 as VElem, diagonal of the Gram as Fractions); Phi(y_i) = y_i is verified."""
    ctx = space.ctx
    p = ctx.p
    if ctx.m % 2:
        raise DomainError("the slope-zero basis needs sqrt(Delta), i.e. even residue degree")
    delta = smallest_nonsquare(p) if delta is None else delta
    if legendre(delta, p) != -1:
        raise DomainError(f"{delta} is not a nonsquare mod {p}")
    u = ctx.sqrt(ctx.elem(delta))
    if u.frobenius() != -u:
        raise InconsistencyError("sqrt(Delta) is not negated by Frobenius")
    z, one = ctx.zero(), ctx.one()

    def vec(*c):
        return VElem([ctx.elem(x) if isinstance(x, int) else x for x in c])

    pe = ctx.elem(p)
    ys = [
        vec(u, u, z, z, z, z),
        vec(u, -u, z, z, z, z),
        vec(z, z, u * pe, -u, z, z),
        vec(z, z, pe, one, z, z),
        vec(z, z, z, z, one, one),
        vec(z, z, z, z, u, -u),
    ]
    for i, y in enumerate(ys):
        if space.phi(y) != y:
            raise InconsistencyError(f"Phi does not fix y{i + 1}")
    base = (2 * delta, -2 * delta, 2 * delta * p, -2 * p, 2, -2 * delta)
    q = ctx.q
    gram = []
    for i in range(DIM):
        for j in range(DIM):
            s, c = space.pairing(ys[i], ys[j])
            want = base[i] * space.alpha_inv if i == j else 0
            lhs = c * ctx.elem(p) ** (s + space.r) if s + space.r >= 0 else None
            if lhs is None or lhs != ctx.elem(want % q):
                raise InconsistencyError("Gram of the y-basis differs from the closed form")
        gram.append(Fraction(base[i], space.alpha) / Fraction(p) ** space.r)
    return ys, gram


class FixedSpace:
    """V^Phi with y-coordinates; lattices here live in the m = 1 ring context."""

    def __init__(self, space: ExteriorSpace, delta: int = None):
        ctx = space.ctx
        self.space = space
        self.p = ctx.p
        self.delta = smallest_nonsquare(ctx.p) if delta is None else delta
        self.ys, self.gram_diag = fixed_space_basis(space, self.delta)
        self.u = ctx.sqrt(ctx.elem(self.delta))
        self.ctx = make_ring(ctx.p, ctx.N, 1)
        # flat 6m x 6 matrix with the y_i as columns
        cols = [y.flat() for y in self.ys]
        self.Y = [[cols[j][i] for j in range(DIM)] for i in range(DIM * ctx.m)]
        q = self.ctx.q
        # [y_i, y_i] = 2 alpha^{-1} p^{-r} (Delta, -Delta, Delta p, -p, 1, -Delta)_i
        base = [2 * self.delta, -2 * self.delta, 2 * self.delta * ctx.p, -2 * ctx.p, 2, -2 * self.delta]
        ainv = space.alpha_inv
        G = [[(base[i] * ainv) % q if i == j else 0 for j in range(DIM)] for i in range(DIM)]
        self.gram = GramForm(self.ctx, G, -space.r)

    def diag_form(self) -> DiagForm:
        return DiagForm(tuple(self.gram_diag), self.p)

    # lattices --------------------------------------------------------------------------
    def lattice(self, vectors, scale=0) -> PLattice:
        """Z_p-span of p^scale * vectors (y-coordinates, integers)."""
        return from_gens(self.ctx, vectors, scale)

    def standard(self) -> PLattice:
        return from_gens(self.ctx, [[int(i == j) for i in range(DIM)] for j in range(DIM)])

    def dual(self, Lam: PLattice) -> PLattice:
        return dual(Lam, self.gram)

    def fixed_part(self, L: PLattice) -> PLattice:
        """{x in L : Phi x = x} in y-coordinates."""
        return pullback(L, self.Y, 0, ctx=self.ctx)

    def tensor_up(self, Lam: PLattice) -> PLattice:
        """Lam tensor W' as a lattice in V'."""
        q = self.space.ctx.q
        vecs = [[sum(self.Y[i][j] * c[j] for j in range(DIM)) % q for i in range(len(self.Y))]
                for c in Lam.cols]
        return w_span(self.space.ctx, vecs, Lam.scale)

    def is_vertex(self, Lam: PLattice):
        """(True, type) when p Lam ⊆ Lam^dual ⊆ Lam, else (False, None)."""
        D = self.dual(Lam)
        if not (Lam.contains(D) and D.contains(Lam.scaled(1))):
            return False, None
        return True, quotient_length(Lam, D)

    def vertex(self, Lam: PLattice) -> "VertexLattice":
        ok, t = self.is_vertex(Lam)
        if not ok:
            raise DomainError("not a vertex lattice")
        return VertexLattice(self, Lam, t)

    def seed_type2(self) -> "VertexLattice":
        """The type-2 vertex lattice <y1, y2, y3/p, y4/p, y5, y6>, dual of the y-lattice."""
        return self.vertex(self.dual(self.standard()))


class VertexLattice:
    __slots__ = ("fs", "lattice", "type", "_dual")

    def __init__(self, fs: FixedSpace, lattice: PLattice, type_: int):
        self.fs = fs
        self.lattice = lattice
        self.type = type_
        self._dual = None

    @property
    def dual(self) -> PLattice:
        if self._dual is None:
            self._dual = self.fs.dual(self.lattice)
        return self._dual

    def key(self) -> str:
        return self.lattice.key()

    def __eq__(self, other):
        return isinstance(other, VertexLattice) and self.lattice == other.lattice

    def __hash__(self):
        return hash(self.lattice)

    def __repr__(self):
        return f"VertexLattice(type={self.type}, key={self.key()!r})"


def make_fixed_space(p=3, N=12, alpha=1, r=0, delta=None, m=2) -> FixedSpace:
    from .isocrystal import Isocrystal
    iso = Isocrystal(make_ring(p, N, m))
    return FixedSpace(ExteriorSpace(iso, alpha, r), delta)
