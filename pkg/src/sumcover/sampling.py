"""Reproducible sampling in the subset and i.i.d. models.

Randomness contract: every trial gets its own numpy PCG64 generator seeded
by SeedSequence((master_seed, trial_index)).  The stream is a pure function
of both values, so any partition of trial indices across workers replays
the same samples.  This generator family is fixed; changing it is a
breaking change to recorded experiments.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coverage import covers
from .errors import CapacityError, DomainError
from .groups import GroupSpec

_MASK64 = (1 << 64) - 1


class SampleModel(enum.Enum):
    SUBSET = "subset"
    IID = "iid"


@dataclass(frozen=True)
class SeedPlan:
    master_seed: int
    trial_index: int = 0

    def rng(self) -> np.random.Generator:
        seq = np.random.SeedSequence(
            (self.master_seed & _MASK64, self.trial_index)
        )
        return np.random.Generator(np.random.PCG64(seq))


def _partial_shuffle(rng: np.random.Generator, n: int, k: int) -> list[int]:
    # Fisher-Yates over [0, n) stopped after k steps, with sparse storage.
    state: dict[int, int] = {}
    out = []
    for i in range(k):
        j = int(rng.integers(i, n))
        vi = state.get(i, i)
        vj = state.get(j, j)
        state[i], state[j] = vj, vi
        out.append(vj)
    return out


def draw(g: GroupSpec, k: int, model: SampleModel, seed: SeedPlan) -> list[int]:
    """One ordered sample of k elements (order matters for X_x)."""
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    n = g.order
    if model is SampleModel.SUBSET:
        if k > n:
            raise DomainError(f"subset model needs k <= N, got k={k}, N={n}")
        if k == 0:
            return []
        return _partial_shuffle(seed.rng(), n, k)
    if k == 0:
        return []
    return [int(x) for x in seed.rng().integers(0, n, size=k)]


def collision_bound(k: int, n: int) -> Fraction:
    """Union bound on the i.i.d. collision probability: k(k-1)/(2N)."""
    if k < 0 or n < 2:
        raise DomainError("need k >= 0 and N >= 2")
    return Fraction(k * (k - 1), 2 * n)


@dataclass(frozen=True)
class CouplingReport:
    group: GroupSpec
    k: int
    p_subset: Fraction
    p_iid: Fraction
    gap: Fraction
    bound: Fraction


def coupling_gap_exact(
    g: GroupSpec,
    k: int,
    max_tuples: int = 10**8,
    max_subsets: int = 10**7,
) -> CouplingReport:
    """Exact cover probabilities in both models and their coupling gap.

    The gap is guaranteed to satisfy gap <= 2 * collision_bound(k, N);
    this is asserted, not just reported.
    """
    n = g.order
    if k > n:
        raise DomainError(f"k={k} exceeds N={n}")
    if n**k > max_tuples:
        raise CapacityError(f"N^k = {n**k} exceeds the gate {max_tuples}")
    n_subsets = math.comb(n, k)
    if n_subsets > max_subsets:
        raise CapacityError(
            f"C(N,k) = {n_subsets} exceeds the gate {max_subsets}"
        )
    cov_subset = sum(
        1 for a in itertools.combinations(range(n), k) if covers(g, list(a))
    )
    cov_iid = sum(
        1 for a in itertools.product(range(n), repeat=k) if covers(g, list(a))
    )
    p_subset = Fraction(cov_subset, n_subsets)
    p_iid = Fraction(cov_iid, n**k)
    gap = abs(p_subset - p_iid)
    bound = 2 * collision_bound(k, n)
    assert gap <= bound, f"coupling bound violated: {gap} > {bound}"
    return CouplingReport(
        group=g, k=k, p_subset=p_subset, p_iid=p_iid, gap=gap, bound=bound
    )
