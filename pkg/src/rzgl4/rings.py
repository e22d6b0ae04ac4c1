"""Exact arithmetic in F_p, F_{p^m} and the Galois ring GR(p^N, m).

GR(p^N, m) = (Z/p^N)[g] / f(g) where f is the monic integer lift of the
lexicographically least irreducible polynomial of degree m over F_p.  It is
the truncation at precision N of the Witt vectors of F_{p^m}.  The Frobenius
automorphism sigma is determined by sigma(g), the root of f congruent to g^p,
which we find by Newton iteration.

Finite fields are the special case N = 1 (see ``make_field``).
"""
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, InconsistencyError, PrecisionError

INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_odd_prime(p):
    if not isinstance(p, int) or not is_prime(p) or p == 2:
        raise DomainError(f"p must be an odd prime, got {p!r}")


def vp(x: int, p: int, cap=None):
    """p-adic valuation of an integer; ``cap`` is returned for 0."""
    if x == 0:
        return INFINITY if cap is None else cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


# polynomials over F_p, coefficient lists low -> high

def _poly_mod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b) and any(a):
        if a[-1] % p == 0:
            a.pop()
            continue
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _monic_polys(p, d):
    for tail in itertools.product(range(p), repeat=d):
        # tail is (c_{d-1}, ..., c_0); store low -> high
        yield list(reversed(tail)) + [1]


def is_irreducible_mod_p(f, p) -> bool:
    m = len(f) - 1
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(f, g, p):
                return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p, m):
    """Lexicographically least monic irreducible of degree m over F_p.

    Polynomials are ordered by their coefficient tuple (c_{m-1}, ..., c_0),
    i.e. as base-p integers with the high coefficients most significant.
    Returned low -> high.
    """
    if m == 1:
        return (0, 1)
    for f in _monic_polys(p, m):
        if is_irreducible_mod_p(f, p):
            return tuple(f)
    raise InconsistencyError("no irreducible polynomial found")


class RingContext:
    """GR(p^N, m) with its Frobenius table.  Immutable after construction."""

    def __init__(self, p: int, N: int, m: int):
        check_odd_prime(p)
        if N < 1 or m < 1:
            raise DomainError("need N >= 1 and m >= 1")
        self.p = p
        self.N = N
        self.m = m
        self.q = p ** N
        self.modulus = least_irreducible(p, m)
        self._zero = (0,) * m
        # Frobenius: sigma(g) is the root of f lifting g^p
        g = self._gen_coords()
        r = self._pow_coords(g, p)
        for _ in range(N + 1):
            fr = self._eval_modulus(r)
            if not any(fr):
                break
            dfr = self._eval_modulus_deriv(r)
            r = self._sub(r, self._mul(fr, self._inv(dfr)))
        if any(self._eval_modulus(r)):
            raise InconsistencyError("Frobenius lift did not converge")
        self.sigma_gen = r
        cols = [self._one_coords()]
        for _ in range(1, m):
            cols.append(self._mul(cols[-1], r))
        self.sigma_matrix = tuple(tuple(cols[k][i] for k in range(m)) for i in range(m))
        # sigma^{-1} = sigma^{m-1}
        s_inv = [[int(i == j) for j in range(m)] for i in range(m)]
        for _ in range(m - 1):
            s_inv = matmul_mod(self.sigma_matrix, s_inv, self.q)
        self.sigma_inv_matrix = tuple(tuple(r_) for r_ in s_inv)
        # trace form Tr(g^(k+l)), exact integers reduced mod q
        powers = [self._one_coords()]
        for _ in range(2 * m - 2):
            powers.append(self._mul(powers[-1], g))
        traces = [self._trace(c) for c in powers]
        self.trace_form = tuple(tuple(traces[k + l] for l in range(m)) for k in range(m))

    def __repr__(self):
        return f"GR({self.p}^{self.N}, {self.m})"

    def __eq__(self, other):
        return isinstance(other, RingContext) and (self.p, self.N, self.m) == (other.p, other.N, other.m)

    def __hash__(self):
        return hash((self.p, self.N, self.m))

    # coordinate level arithmetic -------------------------------------------------
    def _gen_coords(self):
        if self.m == 1:
            # the root of x - 0; any integer is fixed by sigma
            return (0,)
        return tuple(int(i == 1) for i in range(self.m))

    def _one_coords(self):
        return tuple(int(i == 0) for i in range(self.m))

    def _add(self, a, b):
        q = self.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def _sub(self, a, b):
        q = self.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def _mul(self, a, b):
        m, q, f = self.m, self.q, self.modulus
        if m == 1:
            return (a[0] * b[0] % q,)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for i in range(m):
                    prod[k - m + i] -= c * f[i]
        return tuple(c % q for c in prod[:m])

    def _pow_coords(self, a, e):
        result = self._one_coords()
        base = a
        while e:
            if e & 1:
                result = self._mul(result, base)
            base = self._mul(base, base)
            e >>= 1
        return result

    def _eval_modulus(self, r):
        acc = self._zero
        for c in reversed(self.modulus):
            acc = self._add(self._mul(acc, r), self._scalar(c))
        return acc

    def _eval_modulus_deriv(self, r):
        f = self.modulus
        df = [i * f[i] for i in range(1, len(f))]
        acc = self._zero
        for c in reversed(df):
            acc = self._add(self._mul(acc, r), self._scalar(c))
        return acc

    def _scalar(self, n):
        return tuple([n % self.q] + [0] * (self.m - 1))

    def _is_unit(self, a):
        return any(x % self.p for x in a)

    def _inv(self, a):
        if not self._is_unit(a):
            raise ZeroDivisionError("not a unit in the Galois ring")
        p, m = self.p, self.m
        # inverse modulo p via the field's multiplicative group, then Newton
        abar = tuple(x % p for x in a)
        y = _field_pow(abar, p ** m - 2, self.modulus, p)
        two = self._scalar(2)
        for _ in range(self.N.bit_length() + 1):
            y = self._mul(y, self._sub(two, self._mul(a, y)))
        return y

    def _sigma(self, a):
        S, q = self.sigma_matrix, self.q
        return tuple(sum(S[i][k] * a[k] for k in range(self.m)) % q for i in range(self.m))

    def _sigma_inv(self, a):
        S, q = self.sigma_inv_matrix, self.q
        return tuple(sum(S[i][k] * a[k] for k in range(self.m)) % q for i in range(self.m))

    def _trace(self, a):
        # trace of multiplication-by-a as a Z/p^N-linear map
        M = self.mult_matrix_coords(a)
        return sum(M[i][i] for i in range(self.m)) % self.q

    def mult_matrix_coords(self, a):
        """Matrix (row-major) of x -> a*x on coordinates."""
        cols = []
        basis = self._one_coords()
        g = self._gen_coords() if self.m > 1 else None
        for k in range(self.m):
            cols.append(self._mul(a, basis))
            if g is not None:
                basis = self._mul(basis, g)
        return tuple(tuple(cols[k][i] for k in range(self.m)) for i in range(self.m))

    # element level ---------------------------------------------------------------
    def elem(self, coords):
        if isinstance(coords, int):
            return GaloisRingElem(self, self._scalar(coords))
        coords = tuple(int(c) % self.q for c in coords)
        if len(coords) != self.m:
            raise DomainError("wrong number of coordinates")
        return GaloisRingElem(self, coords)

    def zero(self):
        return GaloisRingElem(self, self._zero)

    def one(self):
        return GaloisRingElem(self, self._one_coords())

    def gen(self):
        return GaloisRingElem(self, self._gen_coords())

    def random(self, rng: random.Random, unit=False):
        while True:
            x = GaloisRingElem(self, tuple(rng.randrange(self.q) for _ in range(self.m)))
            if not unit or x.is_unit():
                return x

    def elements(self):
        for c in itertools.product(range(self.q), repeat=self.m):
            yield GaloisRingElem(self, tuple(c))

    def residue_elements(self):
        """Elements with coordinates in [0, p): lifts of every residue class."""
        for c in itertools.product(range(self.p), repeat=self.m):
            yield GaloisRingElem(self, tuple(c))

    def sqrt(self, a):
        """A square root of the unit a, Hensel lifted; raises if a is a nonsquare mod p."""
        a = self.elem(a) if not isinstance(a, GaloisRingElem) else a
        if not a.is_unit():
            raise DomainError("sqrt only implemented for units")
        p = self.p
        abar = tuple(x % p for x in a.c)
        root = None
        for c in itertools.product(range(p), repeat=self.m):
            if _field_mul(c, c, self.modulus, p) == abar:
                root = c
                break
        if root is None:
            raise DomainError("not a square modulo p")
        y = tuple(root)
        half = self._inv(self._scalar(2))
        for _ in range(self.N.bit_length() + 1):
            y = self._mul(self._add(y, self._mul(a.c, self._inv(y))), half)
        return GaloisRingElem(self, y)

    def reduce(self, x, N):
        """Image of x in GR(p^N', m) for N' <= N."""
        ctx = make_ring(self.p, N, self.m)
        return GaloisRingElem(ctx, tuple(c % ctx.q for c in x.c))


def _field_mul(a, b, f, p):
    m = len(f) - 1
    if m == 1:
        return (a[0] * b[0] % p,)
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] += x * y
    for k in range(2 * m - 2, m - 1, -1):
        c = prod[k]
        if c:
            for i in range(m):
                prod[k - m + i] -= c * f[i]
    return tuple(c % p for c in prod[:m])


def _field_pow(a, e, f, p):
    m = len(f) - 1
    result = tuple(int(i == 0) for i in range(m))
    while e:
        if e & 1:
            result = _field_mul(result, a, f, p)
        a = _field_mul(a, a, f, p)
        e >>= 1
    return result


class GaloisRingElem:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx: RingContext, coords):
        self.ctx = ctx
        self.c = coords

    def _coerce(self, other):
        if isinstance(other, GaloisRingElem):
            if other.ctx != self.ctx:
                raise DomainError("elements from different rings")
            return other.c
        if isinstance(other, int):
            return self.ctx._scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaloisRingElem(self.ctx, self.ctx._add(self.c, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaloisRingElem(self.ctx, self.ctx._sub(self.c, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaloisRingElem(self.ctx, self.ctx._sub(o, self.c))

    def __neg__(self):
        return GaloisRingElem(self.ctx, tuple((-x) % self.ctx.q for x in self.c))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaloisRingElem(self.ctx, self.ctx._mul(self.c, o))

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return GaloisRingElem(self.ctx, self.ctx._pow_coords(self.c, e))

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.elem(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.c == self.ctx._scalar(other)
        return isinstance(other, GaloisRingElem) and self.ctx == other.ctx and self.c == other.c

    def __hash__(self):
        return hash((self.ctx, self.c))

    def __repr__(self):
        if self.ctx.m == 1:
            return f"{self.c[0]}"
        terms = []
        for k, x in enumerate(self.c):
            if x:
                terms.append(str(x) if k == 0 else (f"{x}*g" if k == 1 else f"{x}*g^{k}"))
        return " + ".join(terms) if terms else "0"

    def is_unit(self):
        return self.ctx._is_unit(self.c)

    def inverse(self):
        return GaloisRingElem(self.ctx, self.ctx._inv(self.c))

    def frobenius(self):
        return GaloisRingElem(self.ctx, self.ctx._sigma(self.c))

    def frobenius_inv(self):
        return GaloisRingElem(self.ctx, self.ctx._sigma_inv(self.c))

    def valuation(self):
        return valuation(self)

    def residue(self):
        """Reduction modulo p, as an element of F_{p^m}."""
        return make_field(self.ctx.p, self.ctx.m).elem(tuple(x % self.ctx.p for x in self.c))


@lru_cache(maxsize=None)
def make_ring(p: int, N: int, m: int) -> RingContext:
    """Context for GR(p^N, m).  Cached, so equal parameters give the same object."""
    return RingContext(p, N, m)


def make_field(p: int, m: int) -> RingContext:
    """F_{p^m}, realized as GR(p, m)."""
    return make_ring(p, 1, m)


FieldElem = GaloisRingElem


def frobenius(x: GaloisRingElem) -> GaloisRingElem:
    return x.frobenius()


def valuation(x):
    """Largest e < N with p^e | x, or INFINITY when x vanishes at precision N."""
    if isinstance(x, GaloisRingElem):
        ctx = x.ctx
        v = min(vp(c, ctx.p, cap=ctx.N) for c in x.c)
        return INFINITY if v >= ctx.N else v
    raise TypeError("valuation expects a GaloisRingElem")


def legendre(a: int, p: int) -> int:
    check_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    squares = {x * x % p for x in range(1, p)}
    return 1 if a in squares else -1


def smallest_nonsquare(p: int) -> int:
    check_odd_prime(p)
    for a in range(2, p):
        if legendre(a, p) == -1:
            return a
    raise InconsistencyError("no nonsquare below p")


def split_rational(a, p):
    """Write a nonzero rational as p^v * u with u a p-adic unit; returns (v, u mod p)."""
    a = Fraction(a)
    if a == 0:
        raise DomainError("zero has no unit part")
    num, den = a.numerator, a.denominator
    vn = vp(num, p)
    vd = vp(den, p)
    u = (num // p ** vn) * pow(den // p ** vd, -1, p) % p
    return vn - vd, u


def hilbert_symbol(a, b, p: int) -> int:
    """(a, b)_p for odd p and nonzero rationals a, b."""
    check_odd_prime(p)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol undefined at 0")
    alpha, u = split_rational(a, p)
    beta, v = split_rational(b, p)
    eps = (p - 1) // 2
    sign = -1 if (alpha * beta * eps) % 2 else 1
    lu = legendre(u, p) ** (beta % 2)
    lv = legendre(v, p) ** (alpha % 2)
    return sign * lu * lv


@dataclass(frozen=True)
class PrecisionPolicy:
    p: int
    N: int
    m: int
    val_bound: int

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.N < 2 * self.val_bound + 4:
            raise PrecisionError(
                f"precision N={self.N} too small for valuation bound {self.val_bound}"
                f" (need N >= {2 * self.val_bound + 4})")

    def ring(self):
        return make_ring(self.p, self.N, self.m)


def matmul_mod(A, B, q):
    n, k = len(A), len(B)
    cols = len(B[0]) if k else 0
    return [[sum(A[i][t] * B[t][j] for t in range(k)) % q for j in range(cols)] for i in range(n)]
