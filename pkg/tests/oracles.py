"""Independent brute-force oracles used by the tests."""
import itertools

import numpy as np

from rzgl4.exterior import SpecialEndo, VElem
from rzgl4.lattice import flatten, from_gens, unflatten


def is_isotropic_ternary(a, b, p):
    """Does z^2 = a x^2 + b y^2 have a nonzero solution in Q_p?  (a, b integers of valuation <= 1.)

    A primitive zero mod p^3 at which some partial derivative has valuation <= 1 lifts by
    Hensel; conversely a primitive p-adic zero has such a derivative.
    """
    q = p ** 3

    def v(x):
        x %= q
        if x == 0:
            return 3
        k = 0
        while x % p == 0:
            x //= p
            k += 1
        return k

    for x, y, z in itertools.product(range(q), repeat=3):
        if x % p == 0 and y % p == 0 and z % p == 0:
            continue
        if (a * x * x + b * y * y - z * z) % q == 0:
            if min(v(2 * a * x), v(2 * b * y), v(2 * z)) <= 1:
                return True
    return False


def _hermite_batch(p, n=4):
    """Every upper-triangular H with diagonal p^a_j (a_j in 0..2, sum 4) and entries above the
    diagonal reduced mod p^a_i: one for each lattice A with pM ⊆ A ⊆ p^-1 M, written for the integral lattice pA."""
    mats = []
    for a in itertools.product((0, 1, 2), repeat=n):
        if sum(a) != n:
            continue
        slots = [(i, j) for j in range(n) for i in range(j)]
        for vals in itertools.product(*[range(p ** a[i]) for i, j in slots]):
            H = np.zeros((n, n), dtype=np.int64)
            for j in range(n):
                H[j, j] = p ** a[j]
            for (i, j), c in zip(slots, vals):
                H[i, j] = c
            mats.append(H)
    return np.array(mats)


def _integral_solve(H, Y):
    """Mask of batch entries where H^{-1} Y is integral (H upper triangular)."""
    B, n, k = Y.shape
    X = np.zeros_like(Y)
    ok = np.ones(B, dtype=bool)
    for i in range(n - 1, -1, -1):
        r = Y[:, i, :] - np.einsum("bj,bjk->bk", H[:, i, i + 1:], X[:, i + 1:, :])
        d = H[:, i, i][:, None]
        ok &= (r % d == 0).all(axis=1)
        X[:, i, :] = r // d
    return ok


def band_by_hermite_scan(p):
    """Height-0 lattices pM ⊆ A ⊆ p^-1 M of the m = 1 isocrystal stable under F and V, as
    Hermite matrices of pA.  At m = 1 both F and V act by the matrix P."""
    H = _hermite_batch(p)
    P = np.array([[0, p, 0, 0], [1, 0, 0, 0], [0, 0, 0, p], [0, 0, 1, 0]], dtype=np.int64)
    PH = np.einsum("ij,bjk->bik", P, H)
    p2 = np.broadcast_to(p * p * np.eye(4, dtype=np.int64), H.shape).copy()
    ok = _integral_solve(H, PH) & _integral_solve(H, p2)
    return H[ok]


def stabilizing_cosets(space, Lam, source, target):
    """Number of cosets x + Lam in p^-1 Lam / Lam with x~(source) ⊆ target, by exhaustive scan.

    Also checks that every Z_p-basis vector of Lam maps source into target; raises otherwise.
    """
    ctx = space.ctx
    p, N = ctx.p, ctx.N
    m = ctx.m
    n4 = 4 * m
    e, X = target.inverse()
    X = np.array(X, dtype=object)
    rows = []
    for col in Lam.cols:
        E = SpecialEndo(space, VElem(unflatten(ctx, col), Lam.scale))
        row = []
        for d in source.cols:
            (sn, n2), (sf, f2) = E.apply(unflatten(ctx, d[:n4]), unflatten(ctx, d[n4:]))
            s = min(sn, sf)
            img = [x * p ** (sn - s) for x in flatten(n2)] + [x * p ** (sf - s) for x in flatten(f2)]
            # coordinates of p^(source.scale + s) img in the target basis, times p^-(k)
            k = source.scale + s - target.scale - e
            coords = X.dot(np.array(img, dtype=object)) % p ** N
            if k >= 0:
                red = [int(c) * p ** k % p for c in coords]
            else:
                if -k + 1 > N:
                    raise ValueError("not enough precision for the grid")
                if any(int(c) % p ** (-k) for c in coords):
                    raise AssertionError("a basis vector of Lam does not stabilize")
                red = [(int(c) // p ** (-k)) % p for c in coords]
            row.extend(red)
        rows.append(row)
    U = np.array(rows, dtype=np.float32)
    # every point of the grid is evaluated column block by column block; a point is dropped
    # as soon as one coordinate of its image is nonzero
    alive = _grid(p, len(rows))
    for start in range(0, U.shape[1], 16):
        vals = np.mod(alive @ U[:, start:start + 16], p)
        alive = alive[~vals.any(axis=1)]
        if len(alive) == 0:
            break
    return len(alive)


_GRIDS = {}


def _grid(p, dim):
    """All of F_p^dim as a float32 array (exact for the small products used here)."""
    if (p, dim) not in _GRIDS:
        idx = np.arange(p ** dim)
        _GRIDS[p, dim] = np.stack([(idx // p ** i) % p for i in range(dim)], axis=1).astype(np.float32)
    return _GRIDS[p, dim]
