"""Points of one irreducible component over F_9 and F_81, split into EO strata."""
from collections import Counter

from rzgl4 import quadric as Q
from rzgl4.graph import type4_containing
from rzgl4.kraft import eo_stratum
from rzgl4.qspace import make_fixed_space

fs = make_fixed_space(3, 12)
lam4 = type4_containing(fs, fs.seed_type2())[0]

for s in (1, 2):
    fs_ext = Q.pinning_space(Q.omega_of(fs, lam4), s)
    om = Q.omega_of(fs_ext, fs_ext.vertex(lam4.lattice))
    plus, minus = Q.x_lambda_points(om, s, fs_ext)
    strata = Counter()
    for flag in plus:
        L = Q.lagrangian_lattice(fs_ext, om, flag.plane)
        strata[eo_stratum(fs_ext.space.dieudonne_of(L), fs_ext)] += 1
    print(f"F_{3 ** (2 * s)}: {len(plus)} points on X+, {len(minus)} on X-; {dict(strata)}")
