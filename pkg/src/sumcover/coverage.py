"""Subset-sum coverage: the set Sigma(A), per-target multiplicities and misses.

Two representations are computed from a sample A = [a_1, ..., a_k] (an
ordered list; positions index the summands, so repeats are kept):

* CoverageBitmap -- membership bits of Sigma(A), grown by k rotate-or
  passes.  For cyclic groups the pass is a cyclic bit rotation; for
  products it is a per-coordinate block rotation in the mixed-radix
  layout.  A compiled kernel handles the cyclic hot path when available;
  a big-integer fallback is always present.

* MultiplicityTable -- exact counts[x] = #{S subseteq [k] : sigma(S) = x},
  including the empty set at x = 0.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import CapacityError
from .groups import GroupSpec

_core = None
if not os.environ.get("SUMCOVER_PURE"):
    try:
        from . import _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

#: Largest k for which exact multiplicities are computed (counts fit a
#: 128-bit unsigned magnitude; callers fall back to sigma_bitmap beyond it).
MAX_EXACT_K = 120


def backend() -> str:
    """Which bitmap kernel is active: 'compiled' or 'python'."""
    return "python" if _core is None else "compiled"


@dataclass(frozen=True)
class CoverageBitmap:
    group: GroupSpec
    bits: int
    popcount: int

    def bit(self, x: int) -> bool:
        self.group.check_element(x)
        return bool((self.bits >> x) & 1)

    @property
    def is_full(self) -> bool:
        return self.popcount == self.group.order


@dataclass(frozen=True)
class MultiplicityTable:
    group: GroupSpec
    counts: tuple[int, ...]  # length N, exact

    def x_count(self, x: int) -> int:
        """X_x: nonempty index subsets summing to x."""
        self.group.check_element(x)
        return self.counts[x] - (1 if x == 0 else 0)


@dataclass(frozen=True)
class MissStats:
    U: int
    lambda_hat: Fraction


# ---------------------------------------------------------------------------
# bitmap kernels


def _sigma_bits_cyclic_py(n: int, shifts) -> tuple[int, int]:
    full = (1 << n) - 1
    b = 1
    for s in shifts:
        s %= n
        if s:
            b |= ((b << s) & full) | (b >> (n - s))
            if b == full:
                break
    return b, b.bit_count()


def _sigma_bits_cyclic(n: int, shifts) -> tuple[int, int]:
    if _core is not None:
        arr = np.asarray(shifts, dtype=np.int64)
        raw, pc = _core.sigma_bits_cyclic(n, arr)
        return int.from_bytes(raw, "little"), pc
    return _sigma_bits_cyclic_py(n, shifts)


@lru_cache(maxsize=4096)
def _coord_rotation_masks(g: GroupSpec, coord: int, c: int):
    """Masks for rotating coordinate `coord` of the mixed-radix bitmap by c.

    Within every block of n_i consecutive digit values (stride s_i bits
    each) the low (n_i - c) digits shift up by c digits and the top c
    digits wrap to the bottom.
    """
    n_i = g.factors[coord]
    s_i = g.strides[coord]
    block = n_i * s_i
    nblocks = g.order // block
    # one set bit at the base of every block
    block_starts = ((1 << (nblocks * block)) - 1) // ((1 << block) - 1)
    low = block_starts * ((1 << ((n_i - c) * s_i)) - 1)
    high = block_starts * (((1 << block) - 1) ^ ((1 << ((n_i - c) * s_i)) - 1))
    return low, high, c * s_i, (n_i - c) * s_i


def _translate_product(g: GroupSpec, bits: int, a: int) -> int:
    """Bitmap image under x -> x + a for a product group."""
    for coord, (n_i, s_i) in enumerate(zip(g.factors, g.strides)):
        c = (a // s_i) % n_i
        if c == 0:
            continue
        low, high, up, down = _coord_rotation_masks(g, coord, c)
        bits = ((bits & low) << up) | ((bits & high) >> down)
    return bits


def sigma_bitmap(g: GroupSpec, a) -> CoverageBitmap:
    """Membership bitmap of Sigma(A) with the empty sum at 0."""
    for x in a:
        g.check_element(x)
    n = g.order
    if g.is_cyclic:
        bits, pc = _sigma_bits_cyclic(n, list(a))
    else:
        bits = 1
        full = (1 << n) - 1
        for x in a:
            if x:
                bits |= _translate_product(g, bits, x)
                if bits == full:
                    break
        pc = bits.bit_count()
    return CoverageBitmap(group=g, bits=bits, popcount=pc)


# ---------------------------------------------------------------------------
# exact multiplicities


@lru_cache(maxsize=256)
def _digit_arrays(g: GroupSpec):
    idx = np.arange(g.order)
    return [
        (idx // s) % n for n, s in zip(g.factors, g.strides)
    ]


def _translation_indices(g: GroupSpec, a: int) -> np.ndarray:
    """Index array t with t[x] = x - a (componentwise), vectorized."""
    digits = _digit_arrays(g)
    out = np.zeros(g.order, dtype=np.int64)
    for coord, (n, s) in enumerate(zip(g.factors, g.strides)):
        da = (a // s) % n
        out += ((digits[coord] - da) % n) * s
    return out


def sigma_counts(g: GroupSpec, a) -> MultiplicityTable:
    """Exact subset-sum multiplicities: counts[x] = #{S : sigma(S) = x}."""
    k = len(a)
    if k > MAX_EXACT_K:
        raise CapacityError(
            f"exact counting supports k <= {MAX_EXACT_K}, got k={k}"
        )
    for x in a:
        g.check_element(x)
    n = g.order
    if k <= 62:
        counts = np.zeros(n, dtype=np.uint64)
        counts[0] = 1
        for x in a:
            if g.is_cyclic:
                counts = counts + np.roll(counts, x)
            else:
                counts = counts + counts[_translation_indices(g, x)]
        return MultiplicityTable(group=g, counts=tuple(int(c) for c in counts))
    counts_list = [0] * n
    counts_list[0] = 1
    for x in a:
        if g.is_cyclic:
            shifted = counts_list[-x:] + counts_list[:-x] if x else counts_list[:]
        else:
            tr = _translation_indices(g, x)
            shifted = [counts_list[tr[i]] for i in range(n)]
        counts_list = [c + s for c, s in zip(counts_list, shifted)]
    return MultiplicityTable(group=g, counts=tuple(counts_list))


def miss_stats(t: MultiplicityTable) -> MissStats:
    """Miss count U and the observed mean of X_x over nonzero targets."""
    n = t.group.order
    u = sum(1 for x in range(1, n) if t.counts[x] == 0)
    total = sum(t.counts[1:])
    return MissStats(U=u, lambda_hat=Fraction(total, n - 1))


def covers(g: GroupSpec, a) -> bool:
    """True iff Sigma(A) is the whole group."""
    if (1 << len(a)) < g.order:
        return False
    return sigma_bitmap(g, a).is_full
