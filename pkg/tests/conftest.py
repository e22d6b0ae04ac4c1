import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rzgl4.isocrystal import DieudonneLattice, enumerate_band  # noqa: E402
from rzgl4.qspace import make_fixed_space  # noqa: E402


@pytest.fixture(scope="session")
def fs():
    return make_fixed_space(3, 12)


@pytest.fixture(scope="session")
def space(fs):
    return fs.space


@pytest.fixture(scope="session")
def iso(space):
    return space.iso


@pytest.fixture(scope="session")
def band(iso):
    """All height-0 Dieudonné lattices with pM ⊆ A ⊆ p^-1 M at p = 3, m = 2."""
    return enumerate_band(iso, 0)


@pytest.fixture(scope="session")
def band_dl(iso, band):
    return [DieudonneLattice(iso, A, check=False) for A in band]


@pytest.fixture(scope="session")
def lam4(fs):
    from rzgl4.graph import type4_containing
    return type4_containing(fs, fs.seed_type2())[0]
