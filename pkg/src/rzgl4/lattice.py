"""Full-rank lattices in Q_p^n and W'_Q^n at fixed precision.

A lattice is stored as p^scale times the column span of an upper triangular
integer matrix H in Howell form: column j has p^k_j on the diagonal, zeros
below it, and entry (i, j) reduced into [0, p^k_i) for i < j.  The scale is
chosen so that H has a unit entry, which makes (scale, H) unique per lattice.

Lattices over W' = GR(p^N, m) are handled as Z_p-lattices in Q_p^{m n}: the
flat coordinate of (vector index i, power g^k) is i*m + k.  W'-lengths are
Z_p-lengths divided by m.

Every operation reduces to two primitives, both working modulo p^prec:
Howell form of a generating set, and the Smith-form solution of
"T x in p^a Z^r".  A result is exact as soon as the lattice it describes
contains p^(prec-1) times the standard lattice; otherwise PrecisionError.
"""
import math
from fractions import Fraction

import numpy as np

from .errors import ContainmentError, DegenerateError, DomainError, InconsistencyError, PrecisionError
from ._kernels import hnf_kernel, smith_kernel, upper_inverse_kernel
from .rings import RingContext, vp

# residues below this bound keep every product inside int64
_KERNEL_LIMIT = 2 ** 31



def _dtype(q, n=1):
    """int64 when sums of n products of residues mod q cannot overflow, else Python ints."""
    return np.int64 if q * q * max(n, 1) < 2 ** 62 else object


def _residues(A, q):
    if _fast(q):
        try:
            return np.asarray(A, dtype=np.int64) % q
        except OverflowError:
            pass
    return np.asarray(A, dtype=object) % q


def matmul_mod(A, B, q):
    """A @ B mod q for integer matrices (nested lists or arrays), as a nested list."""
    A = _residues(A, q)
    B = _residues(B, q)
    dtype = _dtype(q, A.shape[-1])
    return ((A.astype(dtype) @ B.astype(dtype)) % q).tolist()


def _fast(q):
    return q < _KERNEL_LIMIT


def _hnf(vectors, n, p, prec):
    """Howell form of span(vectors) + p^prec Z^n; vectors already reduced mod p^prec."""
    if _fast(p ** prec):
        R = np.asarray(vectors, dtype=np.int64).reshape(-1, n)
        H, piv, ok = hnf_kernel(R, n, p, prec)
        if not ok:
            raise DegenerateError("generators are rank deficient at working precision")
        return H.T.tolist(), piv.tolist()
    return _hnf_py(vectors, n, p, prec)


def _hnf_py(vectors, n, p, prec):
    q = p ** prec
    vecs = [list(v) for v in vectors if any(v)]
    cols = [None] * n
    piv = [0] * n
    for i in range(n - 1, -1, -1):
        best, bv = None, prec
        for idx, v in enumerate(vecs):
            x = v[i]
            if x:
                val = vp(x, p)
                if val < bv:
                    best, bv = idx, val
                    if val == 0:
                        break
        if best is None:
            raise DegenerateError("generators are rank deficient at working precision")
        b = vecs.pop(best)
        pk = p ** bv
        uinv = pow(b[i] // pk, -1, q)
        b = [x * uinv % q for x in b]
        b[i] = pk
        rest = []
        for v in vecs:
            x = v[i]
            if x:
                c = x // pk
                for t in range(i):
                    v[t] = (v[t] - c * b[t]) % q
                v[i] = 0
            if any(v):
                rest.append(v)
        if bv:
            # Howell saturation: p^(prec-k) b vanishes in row i but not necessarily above
            f = p ** (prec - bv)
            sat = [x * f % q for x in b[:i]] + [0] * (n - i)
            if any(sat):
                rest.append(sat)
        vecs = rest
        cols[i] = b
        piv[i] = bv
    for j in range(n):
        b = cols[j]
        for i in range(j - 1, -1, -1):
            pk = p ** piv[i]
            c = b[i] // pk
            if c:
                bi = cols[i]
                for t in range(i + 1):
                    b[t] = (b[t] - c * bi[t]) % q
    return cols, piv


def _upper_inverse_scaled(cols, piv, p):
    """(e, X) with X = p^e H^{-1} integral and e minimal."""
    n = len(cols)
    E = sum(piv)
    # entries in row i are at most p^piv[i], and |p^E H^{-1}| <= 2^n p^E
    if p ** (max(piv) + E) * n * 2 ** n < 2 ** 62:
        H = np.array(cols, dtype=np.int64).T.copy()
        Xa, _ = upper_inverse_kernel(H, np.array(piv, dtype=np.int64), p)
        g = int(np.gcd.reduce(Xa.ravel()))
        m = vp(g, p) if g else 0
        if m:
            Xa //= p ** m
        return E - m, Xa.tolist()
    return _upper_inverse_py(cols, piv, p)


def _upper_inverse_py(cols, piv, p):
    n = len(cols)
    E = sum(piv)
    pE = p ** E
    X = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(n - 1, -1, -1):
            acc = pE if i == j else 0
            for l in range(i + 1, n):
                if X[l][j]:
                    acc -= cols[l][i] * X[l][j]
            pk = p ** piv[i]
            if acc % pk:
                raise InconsistencyError("inexact division in triangular solve")
            X[i][j] = acc // pk
    m = min((vp(x, p) for row in X for x in row if x), default=0)
    if m:
        d = p ** m
        X = [[x // d for x in row] for row in X]
    return E - m, X


def smith_columns(T, p, prec):
    """Column-tracked Smith elimination of T (row-major, r x k) modulo p^prec.

    Returns (W, d) with T W = U^{-1} diag(p^d) for some invertible U.  Raises
    PrecisionError when T has rank < k at this precision.
    """
    q = p ** prec
    if _fast(q):
        A = np.array([[x % q for x in row] for row in T], dtype=np.int64)
        W, d, ok = smith_kernel(A, p, prec)
        if not ok:
            raise PrecisionError("map is not injective at working precision")
        return W.tolist(), d.tolist()
    return _smith_py(T, p, prec)


def _smith_py(T, p, prec):
    q = p ** prec
    A = [[x % q for x in row] for row in T]
    r = len(A)
    k = len(A[0]) if r else 0
    W = [[int(i == j) for j in range(k)] for i in range(k)]
    d = []
    for t in range(k):
        best, bv = None, prec
        for i in range(t, r):
            row = A[i]
            for j in range(t, k):
                x = row[j]
                if x:
                    v = vp(x, p)
                    if v < bv:
                        best, bv = (i, j), v
                        if v == 0:
                            break
            if bv == 0:
                break
        if best is None:
            raise PrecisionError("map is not injective at working precision")
        i, j = best
        A[i], A[t] = A[t], A[i]
        if j != t:
            for row in A:
                row[j], row[t] = row[t], row[j]
            for row in W:
                row[j], row[t] = row[t], row[j]
        pk = p ** bv
        uinv = pow(A[t][t] // pk, -1, q)
        for j in range(t + 1, k):
            x = A[t][j]
            if x:
                c = (x // pk) * uinv % q
                for row in A:
                    if row[t]:
                        row[j] = (row[j] - c * row[t]) % q
                for row in W:
                    if row[t]:
                        row[j] = (row[j] - c * row[t]) % q
        for i in range(t + 1, r):
            A[i][t] = 0
        d.append(bv)
    return W, d


class PLattice:
    """p^scale * span(columns of H), H in Howell form.  Immutable."""

    __slots__ = ("ctx", "scale", "cols", "piv", "_inv", "_key")

    def __init__(self, ctx: RingContext, scale: int, cols, piv):
        self.ctx = ctx
        self.scale = scale
        self.cols = tuple(tuple(c) for c in cols)
        self.piv = tuple(piv)
        self._inv = None
        self._key = None

    @property
    def dim(self):
        return len(self.cols)

    @property
    def rank(self):
        return self.dim // self.ctx.m

    @property
    def p(self):
        return self.ctx.p

    def matrix(self):
        """Row-major Howell matrix (columns are the basis vectors)."""
        n = self.dim
        return [[self.cols[j][i] for j in range(n)] for i in range(n)]

    def basis(self):
        """Basis vectors as (scale, list of integer columns)."""
        return self.scale, [list(c) for c in self.cols]

    def key(self) -> str:
        if self._key is None:
            entries = ",".join(str(x) for row in self.matrix() for x in row)
            self._key = f"{self.scale};{entries}"
        return self._key

    def __eq__(self, other):
        return isinstance(other, PLattice) and self.ctx == other.ctx and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"PLattice(scale={self.scale}, piv={list(self.piv)})"

    def inverse(self):
        if self._inv is None:
            self._inv = _upper_inverse_scaled(self.cols, self.piv, self.ctx.p)
        return self._inv

    def exponent(self):
        """Smallest e with p^e Z^n contained in span(H)."""
        return self.inverse()[0]

    def logdet(self):
        return self.dim * self.scale + sum(self.piv)

    def scaled(self, k: int):
        """p^k times this lattice."""
        return PLattice(self.ctx, self.scale + k, self.cols, self.piv)

    def min_valuation(self):
        return self.scale

    def contains_vector(self, vec, shift=0) -> bool:
        """Is p^shift * vec in the lattice?  vec must be known exactly."""
        e, X = self.inverse()
        need = e + self.scale - shift
        if need <= 0:
            return True
        mod = self.ctx.p ** need
        n = self.dim
        return all(sum(X[i][j] * vec[j] for j in range(n)) % mod == 0 for i in range(n))

    def contains(self, other) -> bool:
        """other subset of self."""
        _same_space(self, other)
        e, X = self.inverse()
        need = e + self.scale - other.scale
        if need <= 0:
            return True
        M = matmul_mod(X, np.asarray(other.cols, dtype=object).T, self.ctx.p ** need)
        return not any(any(row) for row in M)


def _same_space(A, B):
    if A.ctx != B.ctx or A.dim != B.dim:
        raise DomainError("lattices live in different spaces")


def from_gens(ctx: RingContext, vectors, scale: int = 0, prec=None) -> PLattice:
    """Lattice p^scale * span(vectors) (+ p^prec Z^n), canonicalized.

    ``prec`` is the number of p-adic digits to which the vector entries are
    known; exact integer input may pass anything larger than what the result
    needs.
    """
    p = ctx.p
    prec = ctx.N if prec is None else prec
    if len(vectors) == 0:
        raise DegenerateError("no generators")
    q = p ** prec
    if _fast(q):
        try:
            arr = np.array(vectors, dtype=np.int64) % q
        except OverflowError:
            arr = np.array(np.array(vectors, dtype=object) % q, dtype=np.int64)
        n = arr.shape[1]
        g = int(np.gcd.reduce(arr.ravel()))
        if g == 0:
            raise DegenerateError("generators vanish at working precision")
        c = vp(g, p)
        if c:
            arr //= p ** c
            prec -= c
        vecs = arr
    else:
        vectors = [list(v) for v in vectors]
        n = len(vectors[0])
        vecs = [[x % q for x in v] for v in vectors]
        c = min((vp(x, p) for v in vecs for x in v if x), default=None)
        if c is None:
            raise DegenerateError("generators vanish at working precision")
        if c:
            d = p ** c
            vecs = [[x // d for x in v] for v in vecs]
            prec -= c
    cols, piv = _hnf(vecs, n, p, prec)
    L = PLattice(ctx, scale + c, cols, piv)
    if L.exponent() >= prec:
        raise PrecisionError(
            f"lattice needs {L.exponent() + 1} digits but only {prec} are available")
    return L


def canonicalize(ctx: RingContext, gens, scale: int = 0) -> PLattice:
    """Canonical form of p^scale times the column span of the matrix ``gens``."""
    rows = [list(r) for r in gens]
    cols = [[rows[i][j] for i in range(len(rows))] for j in range(len(rows[0]))]
    return from_gens(ctx, cols, scale)


def standard(ctx: RingContext, dim: int, scale: int = 0) -> PLattice:
    return from_gens(ctx, [[int(i == j) for i in range(dim)] for j in range(dim)], scale)


def diagonal(ctx: RingContext, exps, m_block=1) -> PLattice:
    """Lattice with basis p^exps[i] e_i; with m_block > 1 each exponent covers a block of m coordinates."""
    n = len(exps) * m_block
    lo = min(exps)
    vecs = []
    for i in range(n):
        v = [0] * n
        v[i] = ctx.p ** (exps[i // m_block] - lo)
        vecs.append(v)
    return from_gens(ctx, vecs, lo, prec=ctx.N + max(exps) - lo)


def _exact_prec(ctx, *lats):
    return ctx.N + max(L.scale for L in lats) - min(L.scale for L in lats)


def lattice_sum(A: PLattice, B: PLattice) -> PLattice:
    _same_space(A, B)
    p = A.ctx.p
    s = min(A.scale, B.scale)
    vecs = []
    for L in (A, B):
        f = p ** (L.scale - s)
        vecs.extend([x * f for x in c] for c in L.cols)
    return from_gens(A.ctx, vecs, s, prec=_exact_prec(A.ctx, A, B))


def lattice_sum_many(lats):
    lats = list(lats)
    out = lats[0]
    for L in lats[1:]:
        out = lattice_sum(out, L)
    return out


def solve_integral(ctx: RingContext, T, a: int, prec=None) -> PLattice:
    """{x in Q_p^k : T x in p^a Z_p^r} for T (r x k, row-major) of rank k."""
    p = ctx.p
    prec = ctx.N if prec is None else prec
    W, d = smith_columns(T, p, prec)
    dmax = max(d)
    k = len(d)
    gens = []
    for j in range(k):
        f = p ** (dmax - d[j])
        gens.append([W[i][j] * f for i in range(k)])
    return from_gens(ctx, gens, a - dmax, prec=prec)


def pullback(L: PLattice, T, shift: int = 0, ctx=None) -> PLattice:
    """{x : p^shift T x in L} for T row-major (dim L x k), injective.

    ``ctx`` is the context of the source space (defaults to L's).
    """
    e, X = L.inverse()
    q = L.ctx.p ** L.ctx.N
    n = L.dim
    k = len(T[0])
    XT = matmul_mod(X, T, q)
    return solve_integral(ctx or L.ctx, XT, L.scale + e - shift)


def pushforward(L: PLattice, T, shift: int = 0, ctx=None) -> PLattice:
    """p^shift T (L) for a square invertible T (row-major) known mod p^N."""
    ctx = ctx or L.ctx
    n = L.dim
    rows = len(T)
    q = ctx.p ** ctx.N
    vecs = matmul_mod(L.cols, np.asarray(T, dtype=object).T, q)
    return from_gens(ctx, vecs, L.scale + shift)


class GramForm:
    """Symmetric bilinear form p^shift * G on flat coordinates, G integral mod p^N."""

    def __init__(self, ctx: RingContext, matrix, shift: int = 0):
        self.ctx = ctx
        q = ctx.p ** ctx.N
        self.matrix = [[x % q for x in row] for row in matrix]
        self.shift = shift

    @classmethod
    def from_rational(cls, ctx: RingContext, rows, m_block: int = 1):
        """From a matrix of rationals with p-power denominators allowed.

        With ``m_block`` > 1 the form is W'-bilinear with Z_(p) entries and is
        flattened with the trace form of GR(p^N, m) (which is perfect, so
        Z_p-duality for the flattened form equals W'-duality).
        """
        p, q = ctx.p, ctx.p ** ctx.N
        rows = [[Fraction(x) for x in r] for r in rows]
        vals = [_qval(x, p) for r in rows for x in r if x != 0]
        s = min(vals)
        ints = [[_to_int(x / Fraction(p) ** s, p, q) for x in r] for r in rows]
        if m_block > 1:
            tf = ctx.trace_form
            n = len(rows)
            big = [[0] * (n * m_block) for _ in range(n * m_block)]
            for i in range(n):
                for j in range(n):
                    if ints[i][j]:
                        for k in range(m_block):
                            for l in range(m_block):
                                big[i * m_block + k][j * m_block + l] = ints[i][j] * tf[k][l] % q
            ints = big
        return cls(ctx, ints, s)

    def pair(self, x, y):
        """Value on integer vectors x, y, as (shift, integer mod p^N)."""
        q = self.ctx.p ** self.ctx.N
        G = self.matrix
        n = len(G)
        return self.shift, sum(x[i] * G[i][j] * y[j] for i in range(n) if x[i] for j in range(n)) % q


def _qval(x: Fraction, p):
    return vp(x.numerator, p) - vp(x.denominator, p)


def _to_int(x: Fraction, p, q):
    """Integer representative mod q of a p-integral rational."""
    if x.denominator % p == 0:
        raise DomainError("not p-integral")
    return x.numerator * pow(x.denominator, -1, q) % q


def identity_gram(ctx: RingContext, n: int) -> GramForm:
    return GramForm(ctx, [[int(i == j) for j in range(n)] for i in range(n)])


def dual(A: PLattice, G: GramForm) -> PLattice:
    """{x : G(a, x) in Z_p for all a in A}."""
    n = A.dim
    q = A.ctx.p ** A.ctx.N
    M = G.matrix
    HtG = matmul_mod(A.cols, M, q)
    return solve_integral(A.ctx, HtG, -(A.scale + G.shift))


def intersect_kernel(A: PLattice, B: PLattice) -> PLattice:
    """A ∩ B = H_A {z integral : p^sA H_A z in B}, one Smith solve on the stacked system."""
    _same_space(A, B)
    p = A.ctx.p
    q = p ** A.ctx.N
    H = A.matrix()
    e, X = B.inverse()
    n = A.dim
    a = B.scale + e - A.scale
    XT = matmul_mod(X, H, q)
    if a > 0:
        pa = p ** a
        XT += [[pa * int(i == j) for j in range(n)] for i in range(n)]
        Z = solve_integral(A.ctx, XT, a, prec=A.ctx.N + a)
    else:
        # B already contains every p^sA H_A z with z integral
        Z = standard(A.ctx, n)
    return pushforward(Z, H, A.scale)


def intersect_dual(A: PLattice, B: PLattice) -> PLattice:
    _same_space(A, B)
    I = identity_gram(A.ctx, A.dim)
    return dual(lattice_sum(dual(A, I), dual(B, I)), I)


def intersect(A: PLattice, B: PLattice, check: bool = True) -> PLattice:
    """A ∩ B by the kernel method, cross-checked against the dual-of-sum method."""
    C = intersect_kernel(A, B)
    if check:
        D = intersect_dual(A, B)
        if C != D:
            raise InconsistencyError("intersection methods disagree")
    return C


def relative_invariants(A: PLattice, B: PLattice):
    """Elementary divisor exponents of B relative to A (requires B ⊆ A)."""
    _same_space(A, B)
    if not A.contains(B):
        raise ContainmentError("second lattice is not contained in the first")
    p = A.ctx.p
    e, X = A.inverse()
    n = A.dim
    shift = B.scale - A.scale - e
    total = B.logdet() - A.logdet()
    prec = total - shift * n + 1 if shift < 0 else total + 1
    M = matmul_mod(X, np.asarray(B.cols, dtype=object).T, p ** prec)
    _, d = smith_columns(M, p, prec)
    return sorted(x + shift for x in d)


def quotient_length(A: PLattice, B: PLattice) -> int:
    """Length of A/B as a module over the coefficient ring (Z_p or W'); requires B ⊆ A."""
    _same_space(A, B)
    if not A.contains(B):
        raise ContainmentError("second lattice is not contained in the first")
    total = B.logdet() - A.logdet()
    m = A.ctx.m
    if total % m:
        raise InconsistencyError("Z_p-length not divisible by residue degree")
    return total // m


def height(A: PLattice, reference: PLattice) -> int:
    """i with det(A) = p^i det(reference), measured over the coefficient ring."""
    _same_space(A, reference)
    diff = A.logdet() - reference.logdet()
    m = A.ctx.m
    if diff % m:
        raise InconsistencyError("not a module over the coefficient ring")
    return diff // m


# W'-modules in flat coordinates -------------------------------------------------

def flatten(vec) -> list:
    """Flat integer coordinates of a vector of GaloisRingElem."""
    out = []
    for x in vec:
        out.extend(x.c)
    return out


def unflatten(ctx: RingContext, flat) -> list:
    m = ctx.m
    return [ctx.elem(flat[i:i + m]) for i in range(0, len(flat), m)]


def kron_block(M, B, q):
    """Kronecker product of an integer matrix M with an m x m block B, mod q."""
    n, k = len(M), len(M[0])
    m = len(B)
    out = [[0] * (k * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(k):
            c = M[i][j]
            if c:
                for a in range(m):
                    for b in range(m):
                        out[i * m + a][j * m + b] = c * B[a][b] % q
    return out


def gr_matrix_flat(ctx: RingContext, M):
    """Flat matrix of the W'-linear map with GaloisRingElem matrix M (row-major)."""
    m = ctx.m
    n, k = len(M), len(M[0])
    out = [[0] * (k * m) for _ in range(n * m)]
    for i in range(n):
        for j in range(k):
            x = M[i][j]
            if isinstance(x, int):
                x = ctx.elem(x)
            if any(x.c):
                B = ctx.mult_matrix_coords(x.c)
                for a in range(m):
                    for b in range(m):
                        out[i * m + a][j * m + b] = B[a][b]
    return out


def w_span(ctx: RingContext, flat_vectors, scale: int = 0, prec=None) -> PLattice:
    """W'-span of flat vectors: adds the multiples by powers of the generator g."""
    m = ctx.m
    gens = []
    if m == 1:
        gens = [list(v) for v in flat_vectors]
    else:
        G = ctx.mult_matrix_coords(ctx._gen_coords())
        q = ctx.q
        for v in flat_vectors:
            cur = list(v)
            for _ in range(m):
                gens.append(cur)
                nxt = []
                for i in range(0, len(cur), m):
                    blk = cur[i:i + m]
                    nxt.extend(sum(G[a][b] * blk[b] for b in range(m)) % q for a in range(m))
                cur = nxt
    return from_gens(ctx, gens, scale, prec)


def w_standard(ctx: RingContext, rank: int, exps=None) -> PLattice:
    """Lattice with W'-basis p^exps[i] e_i (all zeros by default)."""
    exps = exps or [0] * rank
    return diagonal(ctx, exps, m_block=ctx.m)


def w_orbit(ctx: RingContext, v):
    """v, g v, ..., g^{m-1} v for a flat vector v."""
    m = ctx.m
    if m == 1:
        return [list(v)]
    G = ctx.mult_matrix_coords(ctx._gen_coords())
    q = ctx.q
    out = []
    cur = list(v)
    for _ in range(m):
        out.append(cur)
        nxt = []
        for i in range(0, len(cur), m):
            blk = cur[i:i + m]
            nxt.extend(sum(G[a][b] * blk[b] for b in range(m)) % q for a in range(m))
        cur = nxt
    return out


def extend(L: PLattice, flat_vectors, scale: int, w: bool = True) -> PLattice:
    """L + span of p^scale * flat_vectors (W'-span when ``w``)."""
    p = L.ctx.p
    s = min(L.scale, scale)
    gens = []
    f = p ** (L.scale - s)
    gens.extend([x * f for x in c] for c in L.cols)
    f = p ** (scale - s)
    for v in flat_vectors:
        for u in (w_orbit(L.ctx, v) if w else [v]):
            gens.append([x * f for x in u])
    return from_gens(L.ctx, gens, s, prec=L.ctx.N + abs(L.scale - scale))


def lattice_from_key(ctx: RingContext, key: str) -> PLattice:
    """Inverse of PLattice.key(); the result is re-canonicalized and must reproduce the key."""
    try:
        head, body = key.split(";", 1)
        scale = int(head)
        entries = [int(x) for x in body.split(",")]
    except ValueError as exc:
        raise DegenerateError(f"malformed lattice key: {exc}") from exc
    n = int(round(len(entries) ** 0.5))
    if n * n != len(entries):
        raise DegenerateError("lattice key does not hold a square matrix")
    cols = [[entries[i * n + j] for i in range(n)] for j in range(n)]
    L = from_gens(ctx, cols, scale)
    if L.key() != key:
        raise DegenerateError("lattice key is not in canonical form")
    return L
