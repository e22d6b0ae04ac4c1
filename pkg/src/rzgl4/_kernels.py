"""Compiled int64 kernels for the two lattice primitives (Howell form and Smith solve).

Used only when every intermediate product of residues fits in int64; the
pure Python code in lattice.py handles everything else and serves as the
reference implementation in the tests.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _val(x, p, cap):
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


@njit(cache=True)
def _inv_mod(a, q):
    # extended Euclid; a is a unit mod q
    r0, r1 = q, a % q
    s0, s1 = 0, 1
    while r1:
        t = r0 // r1
        r0, r1 = r1, r0 - t * r1
        s0, s1 = s1, s0 - t * s1
    return s0 % q


@njit(cache=True)
def hnf_kernel(R, n, p, prec):
    """Howell form of the row span of R (mod p^prec).  Returns (H, piv, ok) with H[:, j] column j."""
    q = p ** prec
    rows = R.shape[0]
    cap = rows + n
    W = np.zeros((cap, n), dtype=np.int64)
    W[:rows, :] = R % q
    H = np.zeros((n, n), dtype=np.int64)
    piv = np.zeros(n, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        best = -1
        bv = prec
        for r in range(rows):
            x = W[r, i]
            if x:
                v = _val(x, p, prec)
                if v < bv:
                    bv = v
                    best = r
                    if v == 0:
                        break
        if best < 0:
            return H, piv, False
        pk = p ** bv
        u = _inv_mod(W[best, i] // pk, q)
        b = np.empty(n, dtype=np.int64)
        for t in range(n):
            b[t] = W[best, t] * u % q
        b[i] = pk
        for t in range(n):
            W[best, t] = 0
        for r in range(rows):
            x = W[r, i]
            if x:
                c = x // pk
                for t in range(i):
                    W[r, t] = (W[r, t] - c * b[t]) % q
                W[r, i] = 0
        if bv:
            f = p ** (prec - bv)
            nz = False
            for t in range(i):
                W[rows, t] = b[t] * f % q
                if W[rows, t]:
                    nz = True
            for t in range(i, n):
                W[rows, t] = 0
            if nz:
                rows += 1
        for t in range(n):
            H[t, i] = b[t]
        piv[i] = bv
    for j in range(n):
        for i in range(j - 1, -1, -1):
            pk = p ** piv[i]
            c = H[i, j] // pk
            if c:
                for t in range(i + 1):
                    H[t, j] = (H[t, j] - c * H[t, i]) % q
    return H, piv, True


@njit(cache=True)
def smith_kernel(T, p, prec):
    """Column-tracked Smith elimination mod p^prec.  Returns (W, d, ok)."""
    q = p ** prec
    r, k = T.shape
    A = T % q
    W = np.zeros((k, k), dtype=np.int64)
    for i in range(k):
        W[i, i] = 1
    d = np.zeros(k, dtype=np.int64)
    for t in range(k):
        bi, bj, bv = -1, -1, prec
        for i in range(t, r):
            for j in range(t, k):
                x = A[i, j]
                if x:
                    v = _val(x, p, prec)
                    if v < bv:
                        bi, bj, bv = i, j, v
                        if v == 0:
                            break
            if bv == 0:
                break
        if bi < 0:
            return W, d, False
        if bi != t:
            for j in range(k):
                A[t, j], A[bi, j] = A[bi, j], A[t, j]
        if bj != t:
            for i in range(r):
                A[i, t], A[i, bj] = A[i, bj], A[i, t]
            for i in range(k):
                W[i, t], W[i, bj] = W[i, bj], W[i, t]
        pk = p ** bv
        u = _inv_mod(A[t, t] // pk, q)
        for j in range(t + 1, k):
            x = A[t, j]
            if x:
                c = (x // pk) * u % q
                for i in range(r):
                    if A[i, t]:
                        A[i, j] = (A[i, j] - c * A[i, t]) % q
                for i in range(k):
                    if W[i, t]:
                        W[i, j] = (W[i, j] - c * W[i, t]) % q
        for i in range(t + 1, r):
            A[i, t] = 0
        d[t] = bv
    return W, d, True


@njit(cache=True)
def upper_inverse_kernel(H, piv, p):
    """X = p^E H^{-1} for upper triangular H (H[:, j] column j) with E = sum(piv)."""
    n = H.shape[0]
    E = 0
    for i in range(n):
        E += piv[i]
    pE = p ** E
    X = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        for i in range(n - 1, -1, -1):
            acc = pE if i == j else 0
            for l in range(i + 1, n):
                if X[l, j]:
                    acc -= H[i, l] * X[l, j]
            pk = p ** piv[i]
            X[i, j] = acc // pk
    return X, E
