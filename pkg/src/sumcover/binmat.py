"""Exact linear algebra on 0/1 incidence matrices, over Q and over F_p.

Rows are subset indicator vectors, stored as k-bit masks (bit t set iff
column t is in the subset).  All ranks are exact: fraction-free integer
elimination over Q, modular elimination over F_p.  No floating point
enters this module.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import CapacityError, DomainError


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class IncidenceMatrix:
    k: int
    rows: tuple[int, ...]  # each row is a k-bit subset mask

    @classmethod
    def from_entries(cls, entries) -> "IncidenceMatrix":
        rows = []
        k = len(entries[0]) if entries else 0
        for row in entries:
            if len(row) != k or any(e not in (0, 1) for e in row):
                raise DomainError("entries must be a rectangular 0/1 array")
            rows.append(sum(int(e) << t for t, e in enumerate(row)))
        return cls(k=k, rows=tuple(rows))

    @property
    def r(self) -> int:
        return len(self.rows)

    def dense(self) -> list[list[int]]:
        return [[(row >> t) & 1 for t in range(self.k)] for row in self.rows]

    @property
    def rows_distinct(self) -> bool:
        return len(set(self.rows)) == len(self.rows)

    @property
    def rows_nonzero(self) -> bool:
        return all(row != 0 for row in self.rows)


@dataclass(frozen=True)
class RankProfile:
    rank_q: int
    rank_fp: int
    prime: int
    hadamard_bound: int  # ceil(s^(s/2)) with s = rank_q


def rank_int(mat: list[list[int]]) -> int:
    """Exact rank of an integer matrix by fraction-free elimination."""
    m = [list(row) for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for i in range(rank + 1, nrows):
            f = m[i][col]
            for j in range(col, ncols):
                m[i][j] = (m[i][j] * pv - f * m[rank][j]) // prev
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_mod(mat: list[list[int]], p: int) -> int:
    """Rank of an integer matrix reduced mod p."""
    m = [[e % p for e in row] for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][col], -1, p)
        for i in range(rank + 1, nrows):
            f = (m[i][col] * inv) % p
            if f:
                for j in range(col, ncols):
                    m[i][j] = (m[i][j] - f * m[rank][j]) % p
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_over_q(v: IncidenceMatrix) -> int:
    return rank_int(v.dense())


def rank_over_fp(v: IncidenceMatrix, p: int) -> int:
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    return rank_mod(v.dense(), p)


def rank_profile(v: IncidenceMatrix, p: int) -> RankProfile:
    s = rank_over_q(v)
    bound = _ceil_hadamard(s)
    return RankProfile(
        rank_q=s, rank_fp=rank_over_fp(v, p), prime=p, hadamard_bound=bound
    )


def _ceil_hadamard(s: int) -> int:
    # ceil(s^(s/2)): exact integer for even s, isqrt-based round-up for odd.
    if s == 0:
        return 1
    if s % 2 == 0:
        return s ** (s // 2)
    import math

    sq = s**s
    root = math.isqrt(sq)
    return root if root * root == sq else root + 1


def orthogonal_min_support(v: IncidenceMatrix) -> int:
    """Minimum support of a nonzero rational vector orthogonal to Col(V).

    Returns 1 (a zero row exists), 2 (two proportional rows exist) or 3
    meaning ">= 3".  For distinct nonzero 0/1 rows the answer is always 3.
    """
    rows = v.dense()
    if any(all(e == 0 for e in row) for row in rows):
        return 1
    for a, b in itertools.combinations(rows, 2):
        if _proportional(a, b):
            return 2
    return 3


def _proportional(a: list[int], b: list[int]) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(len(a)))


def lattice_points_in_colspace(v: IncidenceMatrix, max_r: int = 24) -> int:
    """|Col_Q(V) intersect {0,1}^r| by exact membership of all 2^r vectors."""
    r = v.r
    if r > max_r:
        raise CapacityError(f"r={r} exceeds the 2^r enumeration gate {max_r}")
    base = v.dense()  # u is in Col(V) iff appending it as a column keeps rank
    d = rank_int(base)
    count = 0
    for bits in range(1 << r):
        u = [(bits >> i) & 1 for i in range(r)]
        aug = [base[i] + [u[i]] for i in range(r)]
        if rank_int(aug) == d:
            count += 1
    return count


def solve_consistency(v: IncidenceMatrix, b, p: int) -> bool:
    """Is the system a . v(S_j) = b_j (mod p) solvable in a?"""
    if len(b) != v.r:
        raise DomainError("right-hand side length must equal the row count")
    dense = v.dense()
    d = rank_mod(dense, p)
    aug = [row + [bj % p] for row, bj in zip(dense, b)]
    return rank_mod(aug, p) == d


# ---------------------------------------------------------------------------
# lemma verifiers


def _iter_01_matrices(r: int, k: int):
    for code in range(1 << (r * k)):
        yield IncidenceMatrix(
            k=k,
            rows=tuple((code >> (j * k)) & ((1 << k) - 1) for j in range(r)),
        )


def _sample_01_matrix(rng: random.Random, r: int, k: int) -> IncidenceMatrix:
    return IncidenceMatrix(
        k=k, rows=tuple(rng.randrange(1 << k) for _ in range(r))
    )


def verify_rank_stability(
    rmax: int,
    kmax: int,
    primes,
    samples: int = 2000,
    seed: int = 0,
) -> dict:
    """Census of rank_Q vs rank_{F_p} over small 0/1 matrices.

    Violations are matrices with rank_fp < rank_q at a prime p > r^(r/2);
    none should exist.  Drops at small primes (e.g. a determinant-2 minor
    at p = 2) are recorded as expected counterexamples.
    """
    exhaustive = rmax <= 5 and kmax <= 5
    violations = []
    drops = []
    checked = 0
    rng = random.Random(seed)
    for r in range(1, rmax + 1):
        for k in range(1, kmax + 1):
            if exhaustive:
                mats = _iter_01_matrices(r, k)
            else:
                mats = (_sample_01_matrix(rng, r, k) for _ in range(samples))
            for v in mats:
                rq = rank_over_q(v)
                checked += 1
                for p in primes:
                    rp = rank_mod(v.dense(), p)
                    if rp < rq:
                        entry = {"r": r, "k": k, "p": p, "rank_q": rq, "rank_fp": rp,
                                 "rows": list(v.rows)}
                        if p * p > r**r:  # p > r^(r/2) without floats
                            violations.append(entry)
                        else:
                            drops.append(entry)
    return {
        "checked": checked,
        "primes": list(primes),
        "violations": violations,
        "drop_count": len(drops),
        "drops_sample": drops[:10],
    }


def _iter_distinct_nonzero_tuples(r: int, k: int):
    return itertools.permutations(range(1, 1 << k), r)


def verify_min_support(rmax: int, kmax: int, samples: int = 2000, seed: int = 0) -> dict:
    """All ordered tuples of distinct nonzero rows have min support >= 3."""
    exhaustive = rmax <= 4 and kmax <= 4
    violations = []
    checked = 0
    rng = random.Random(seed)
    for r in range(1, rmax + 1):
        for k in range(1, kmax + 1):
            if exhaustive:
                tuples = _iter_distinct_nonzero_tuples(r, k)
            else:
                pool = list(range(1, 1 << k))
                if len(pool) < r:
                    continue
                tuples = (tuple(rng.sample(pool, r)) for _ in range(samples))
            for rows in tuples:
                v = IncidenceMatrix(k=k, rows=rows)
                checked += 1
                if orthogonal_min_support(v) < 3:
                    violations.append({"r": r, "k": k, "rows": list(rows)})
    return {"checked": checked, "violations": violations}


def verify_34(rmax: int, kmax: int) -> dict:
    """Lattice-point bound |Col(V) cap {0,1}^r| <= (3/4) 2^d for d < r.

    Enumerates unordered row sets (the count only depends on the set) and
    reports the maximum observed ratio against the bound.
    """
    if rmax > 5 or kmax > 5:
        raise CapacityError("exhaustive mode is limited to rmax, kmax <= 5")
    violations = []
    checked = 0
    max_ratio = 0.0
    tight = None
    for r in range(2, rmax + 1):
        for k in range(1, kmax + 1):
            if (1 << k) - 1 < r:
                continue
            for rows in itertools.combinations(range(1, 1 << k), r):
                v = IncidenceMatrix(k=k, rows=rows)
                d = rank_over_q(v)
                if d >= r:
                    continue
                checked += 1
                pts = lattice_points_in_colspace(v)
                bound4 = 3 * (1 << d)  # 4 * (3/4) 2^d
                if 4 * pts > bound4:
                    violations.append({"r": r, "k": k, "rows": list(rows),
                                       "d": d, "points": pts})
                ratio = 4 * pts / bound4
                if ratio > max_ratio:
                    max_ratio = ratio
                    tight = {"r": r, "k": k, "rows": list(rows), "d": d,
                             "points": pts}
    return {
        "checked": checked,
        "violations": violations,
        "max_ratio": max_ratio,
        "tight_case": tight,
    }
