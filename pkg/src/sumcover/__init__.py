"""Desk-scale laboratory for random subset-sum coverage of finite abelian
groups: exact coverage counting, second-moment quantities, factorial
moments via rank decomposition, Bonferroni/Poisson estimates, and Monte
Carlo threshold estimation.
"""

from .coverage import (
    CoverageBitmap,
    MissStats,
    MultiplicityTable,
    backend,
    covers,
    miss_stats,
    sigma_bitmap,
    sigma_counts,
)
from .errors import CapacityError, DomainError, SumcoverError
from .groups import GroupSpec, add, element_iter, parse_group
from .sampling import SampleModel, SeedPlan, collision_bound, coupling_gap_exact, draw

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "CoverageBitmap",
    "DomainError",
    "GroupSpec",
    "MissStats",
    "MultiplicityTable",
    "SampleModel",
    "SeedPlan",
    "SumcoverError",
    "add",
    "backend",
    "collision_bound",
    "coupling_gap_exact",
    "covers",
    "draw",
    "element_iter",
    "miss_stats",
    "parse_group",
    "sigma_bitmap",
    "sigma_counts",
    "__version__",
]
