"""Send a few Dieudonné lattices to their very special lattices and back."""
import random

from rzgl4.isocrystal import DieudonneLattice, enumerate_band
from rzgl4.qspace import make_fixed_space
from rzgl4.quadric import chain_and_lambda

fs = make_fixed_space(3, 12)
space, iso = fs.space, fs.space.iso

band = enumerate_band(iso, 0)
print(f"height-0 Dieudonné lattices with pM ⊆ A ⊆ p^-1 M: {len(band)}")

picks = [iso.M] + random.Random(0).sample(band, 4)
for lat in picks:
    A = DieudonneLattice(iso, lat)
    L = space.very_special_of(A)
    back = space.dieudonne_of(L)
    d, lam = chain_and_lambda(fs, L)
    print(f"A={A.key()[:40]}...  special={space.is_special(L.lattice)}  "
          f"round trip={back == A}  d={d}  type(Lam_L)={lam.type}")
