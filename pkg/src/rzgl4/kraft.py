"""BT_1 Dieudonné modules from cyclic words in F and V, and the EO stratum of a lattice.

A word S_0 ... S_{n-1} gives the module with basis e_0 .. e_{n-1} (indices mod n):
    S_i = F:  F(e_i) = e_{i+1},  V(e_{i+1}) = 0
    S_i = V:  V(e_{i+1}) = e_i,  F(e_i) = 0
Matrices have entries 0/1, so the sigma-twist of F and V does not change any
rank; modules are still taken over F_{p^m} to make that explicit.
"""
import itertools
from dataclasses import dataclass

from .errors import DomainError, InconsistencyError
from .isocrystal import DieudonneLattice
from .lattice import intersect, lattice_sum, pullback, quotient_length
from .quadric import finite_field

SUPERSPECIAL = "superspecial_stratum"
GENERIC = "generic_stratum"


# words --------------------------------------------------------------------------------

def _rotations(s):
    return [s[i:] + s[:i] for i in range(len(s))]


@dataclass(frozen=True)
class CyclicWord:
    letters: str

    def __post_init__(self):
        if not self.letters or set(self.letters) - {"F", "V"}:
            raise DomainError("a word is a nonempty string over F and V")
        object.__setattr__(self, "letters", min(_rotations(self.letters)))

    @property
    def simple(self) -> bool:
        n = len(self.letters)
        return all(self.letters != self.letters[k:] + self.letters[:k] for k in range(1, n) if n % k == 0)

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters


def simple_words(n: int):
    if not 1 <= n <= 12:
        raise DomainError("word length must be between 1 and 12")
    words = {CyclicWord("".join(w)) for w in itertools.product("FV", repeat=n)}
    return sorted((w for w in words if w.simple), key=str)


# finite Dieudonné modules ----------------------------------------------------------------

@dataclass(frozen=True)
class DieudonneTriple:
    """(M, F, V) with M = F_{p^m}^dim; F, V as matrices whose column j is the image of e_j."""
    F_map: tuple
    V_map: tuple
    p: int = 3
    m: int = 1

    @property
    def dim(self):
        return len(self.F_map)

    def field(self):
        return finite_field(self.p, self.m)


def _mat(n, images):
    M = [[0] * n for _ in range(n)]
    for j, i in images.items():
        M[i][j] = 1
    return tuple(tuple(r) for r in M)


def module_of_word(w: CyclicWord, p=3, m=1) -> DieudonneTriple:
    s = w.letters
    n = len(s)
    F, V = {}, {}
    for i, letter in enumerate(s):
        if letter == "F":
            F[i] = (i + 1) % n
        else:
            V[(i + 1) % n] = i
    t = DieudonneTriple(_mat(n, F), _mat(n, V), p, m)
    Fq = t.field()
    if any(_matmul(Fq, t.F_map, t.V_map)[i][j] or _matmul(Fq, t.V_map, t.F_map)[i][j]
           for i in range(n) for j in range(n)):
        raise InconsistencyError("FV or VF is nonzero")
    return t


def direct_sum(*triples) -> DieudonneTriple:
    n = sum(t.dim for t in triples)
    F = [[0] * n for _ in range(n)]
    V = [[0] * n for _ in range(n)]
    off = 0
    for t in triples:
        for i in range(t.dim):
            for j in range(t.dim):
                F[off + i][off + j] = t.F_map[i][j]
                V[off + i][off + j] = t.V_map[i][j]
        off += t.dim
    p, m = triples[0].p, triples[0].m
    return DieudonneTriple(tuple(map(tuple, F)), tuple(map(tuple, V)), p, m)


def _matmul(Fq, A, B):
    n, k, l = len(A), len(B), len(B[0])
    return [[Fq.dot([A[i][t] for t in range(k)], [B[t][j] for t in range(k)]) for j in range(l)]
            for i in range(n)]


def _image(Fq, A):
    cols = [tuple(A[i][j] for i in range(len(A))) for j in range(len(A[0]))]
    return Fq.rref([c for c in cols if any(c)])


def _kernel(Fq, A):
    n = len(A[0])
    R = Fq.rref([row for row in A if any(row)])
    pivots = [next(c for c in range(n) if r[c]) for r in R]
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[f] = 1
        for r, pc in zip(R, pivots):
            v[pc] = Fq.sub(0, r[f])
        basis.append(tuple(v))
    return Fq.rref(basis)


def _power(Fq, A, k):
    n = len(A)
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = _matmul(Fq, out, A)
    return out


def rank(Fq, A) -> int:
    return len(_image(Fq, A))


def is_nilpotent(Fq, A) -> bool:
    return rank(Fq, _power(Fq, A, len(A))) == 0


def is_bt1(t: DieudonneTriple) -> bool:
    """Ker F = Im V and Ker V = Im F."""
    Fq = t.field()
    return (_kernel(Fq, t.F_map) == _image(Fq, t.V_map)
            and _kernel(Fq, t.V_map) == _image(Fq, t.F_map))


def profile(t: DieudonneTriple):
    """(dim F(M), dim F^2(M), dim F(M) ∩ V(M))."""
    Fq = t.field()
    im_f = _image(Fq, t.F_map)
    im_v = _image(Fq, t.V_map)
    both = len(im_f) + len(im_v) - len(Fq.rref(list(im_f) + list(im_v)))
    return (len(im_f), rank(Fq, _power(Fq, t.F_map, 2)), both)


def _word_multisets(total):
    """Multisets of simple words with lengths summing to total."""
    pool = [w for n in range(1, total + 1) for w in simple_words(n)]

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for i in range(start, len(pool)):
            if len(pool[i]) <= left:
                for rest in rec(i, left - len(pool[i])):
                    yield (pool[i],) + rest

    return list(rec(0, total))


def ss_42_table(p=3, m=1):
    """Rows (words, dim F(M), dim V(M), F nilpotent, V nilpotent, BT_1, accepted) for total length 4."""
    rows = []
    for words in _word_multisets(4):
        t = direct_sum(*(module_of_word(w, p, m) for w in words))
        Fq = t.field()
        fdim, vdim = rank(Fq, t.F_map), rank(Fq, t.V_map)
        fnil, vnil = is_nilpotent(Fq, t.F_map), is_nilpotent(Fq, t.V_map)
        ok = t.dim == 4 and fdim == 2 and vdim == 2 and fnil and vnil
        rows.append((tuple(str(w) for w in words), fdim, vdim, fnil, vnil, is_bt1(t), ok))
    return rows


def classify_ss_42(p=3, m=1):
    """Decompositions of a height-4, dimension-2 BT_1 with F and V nilpotent: [FFVV] and [FV, FV]."""
    return sorted(r[0] for r in ss_42_table(p, m) if r[6])


def reference_profiles(p=3, m=1):
    fv2 = direct_sum(module_of_word(CyclicWord("FV"), p, m), module_of_word(CyclicWord("FV"), p, m))
    ffvv = module_of_word(CyclicWord("FFVV"), p, m)
    prof = {SUPERSPECIAL: profile(fv2), GENERIC: profile(ffvv)}
    if prof[SUPERSPECIAL] == prof[GENERIC]:
        raise InconsistencyError("profiles do not separate the two strata")
    return prof


# lattices --------------------------------------------------------------------------------

def lattice_profile(A: DieudonneLattice):
    """The profile of A/pA with F and V = p F^{-1} reduced mod p."""
    iso = A.iso
    lat = A.lattice
    pA = lat.scaled(1)
    FA = lattice_sum(iso.F_bar(lat), pA)
    VA = lattice_sum(iso.V_bar(lat), pA)
    F2A = lattice_sum(iso.F_bar(iso.F_bar(lat)), pA)
    both = intersect(FA, VA)
    return (quotient_length(FA, pA), quotient_length(F2A, pA), quotient_length(both, pA))


def lattice_is_bt1(A: DieudonneLattice) -> bool:
    """Ker F = Im V and Ker V = Im F on A/pA."""
    iso = A.iso
    lat = A.lattice
    pA = lat.scaled(1)
    ker_f = A.A1
    ker_v = intersect(lat, pullback(pA, iso.V_flat))
    return (ker_f == lattice_sum(iso.V_bar(lat), pA)
            and ker_v == lattice_sum(iso.F_bar(lat), pA))


def eo_stratum(A, fs=None) -> str:
    """Stratum of A/pA by rank profile; with a fixed space, checked against is_superspecial."""
    from .quadric import is_superspecial
    if not isinstance(A, DieudonneLattice):
        raise DomainError("eo_stratum needs a DieudonneLattice")
    if A.height != 0:
        raise DomainError("eo_stratum needs height 0")
    prof = lattice_profile(A)
    ref = reference_profiles(A.iso.p)
    label = next((k for k, v in ref.items() if v == prof), None)
    if label is None:
        raise InconsistencyError(f"profile {prof} matches neither stratum")
    if fs is not None:
        L = fs.space.very_special_of(A)
        if is_superspecial(fs, L) != (label == SUPERSPECIAL):
            raise InconsistencyError("EO stratum and superspecial test disagree")
    return label
