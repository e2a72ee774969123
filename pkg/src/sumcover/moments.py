"""Exact factorial moments of X_B, two independent ways.

E[(X_B)_r] is computed (a) by brute-force enumeration of all p^k
assignments and (b) by the rank decomposition: classify every ordered
r-tuple of distinct pairs (S_j, b_j) by the F_p-rank d of its incidence
matrix and by consistency of the linear system, then sum N_{r,d}/p^d.
The two must agree as exact rationals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .binmat import IncidenceMatrix, rank_int, rank_mod, solve_consistency
from .errors import CapacityError, DomainError


def falling(y: int, r: int) -> int:
    out = 1
    for j in range(r):
        out *= y - j
    return out


def _check_b(p: int, b_set) -> tuple[int, ...]:
    items = tuple(int(x) for x in b_set)
    b = tuple(sorted(set(items)))
    if len(b) != len(items):
        raise DomainError("B must not contain repeats")
    if len(b) not in (1, 2):
        raise DomainError("|B| must be 1 or 2")
    if any(not 1 <= x <= p - 1 for x in b):
        raise DomainError("B must be a subset of the nonzero residues")
    return b


def _assignment_counts(p: int, a: tuple[int, ...]) -> list[int]:
    # counts[x] = #{S subseteq [k] : sum_{i in S} a_i = x}, empty set at 0
    counts = [0] * p
    counts[0] = 1
    for ai in a:
        if ai % p == 0:
            counts = [2 * c for c in counts]
        else:
            counts = [counts[x] + counts[(x - ai) % p] for x in range(p)]
    return counts


def iter_assignment_counts(p: int, k: int, max_assignments: int = 10**8):
    """Yield the multiplicity table of every a in F_p^k."""
    if p**k > max_assignments:
        raise CapacityError(f"p^k = {p**k} exceeds the gate {max_assignments}")
    for a in itertools.product(range(p), repeat=k):
        yield _assignment_counts(p, a)


def factorial_moment_enum(
    p: int, k: int, b_set, r: int, max_assignments: int = 10**8
) -> Fraction:
    """E[(X_B)_r] by full enumeration over all p^k assignments."""
    if r < 1:
        raise DomainError("r must be >= 1")
    b = _check_b(p, b_set)
    total = 0
    for counts in iter_assignment_counts(p, k, max_assignments):
        xb = sum(counts[x] for x in b)
        total += falling(xb, r)
    return Fraction(total, p**k)


@dataclass(frozen=True)
class MomentReport:
    p: int
    k: int
    b: tuple[int, ...]
    r: int
    value_exact: Fraction | None
    value_rank: Fraction
    n_rd: dict[int, int]
    poisson_ref: Fraction
    rel_error: Fraction
    rank_mismatch_tuples: int  # tuples where the Q-rank differs from the F_p-rank


def factorial_moment_rank(
    p: int,
    k: int,
    b_set,
    r: int,
    max_tuples: int = 10**8,
    max_assignments: int = 10**8,
) -> MomentReport:
    """E[(X_B)_r] via the rank decomposition over ordered tuples of pairs."""
    if r < 1:
        raise DomainError("r must be >= 1")
    b = _check_b(p, b_set)
    m = len(b)
    big_m = (1 << k) - 1
    n_tuples = falling(m * big_m, r)
    if n_tuples > max_tuples:
        raise CapacityError(f"(mM)_r = {n_tuples} exceeds the gate {max_tuples}")
    pairs = [(s, bj) for s in range(1, 1 << k) for bj in b]
    rank_cache: dict[tuple[int, ...], tuple[int, int]] = {}
    n_rd: dict[int, int] = {}
    mismatches = 0
    for tup in itertools.permutations(pairs, r):
        rows = tuple(s for s, _ in tup)
        cached = rank_cache.get(rows)
        if cached is None:
            v = IncidenceMatrix(k=k, rows=rows)
            dense = v.dense()
            cached = (rank_mod(dense, p), rank_int(dense))
            rank_cache[rows] = cached
        d, dq = cached
        if d != dq:
            mismatches += 1
        if d < r:
            v = IncidenceMatrix(k=k, rows=rows)
            if not solve_consistency(v, [bj for _, bj in tup], p):
                continue
        n_rd[d] = n_rd.get(d, 0) + 1
    value_rank = sum(
        (Fraction(n, p**d) for d, n in n_rd.items()), Fraction(0)
    )
    value_exact = None
    if p**k <= max_assignments:
        value_exact = factorial_moment_enum(p, k, b, r, max_assignments)
        if value_exact != value_rank:
            raise AssertionError(
                f"moment identity violated at p={p}, k={k}, B={b}, r={r}: "
                f"{value_exact} != {value_rank}"
            )
    poisson_ref = Fraction(m * big_m, p) ** r
    rel_error = (
        abs(value_rank - poisson_ref) / poisson_ref
        if poisson_ref
        else Fraction(0)
    )
    return MomentReport(
        p=p,
        k=k,
        b=b,
        r=r,
        value_exact=value_exact,
        value_rank=value_rank,
        n_rd=dict(sorted(n_rd.items())),
        poisson_ref=poisson_ref,
        rel_error=rel_error,
        rank_mismatch_tuples=mismatches,
    )


@dataclass(frozen=True)
class TupleCensus:
    p: int
    k: int
    m: int
    r: int
    n_rd: dict[int, int]
    t_rd: dict[int, int]
    total_tuples: int
    full_rank_fraction: Fraction


def tuple_census(
    p: int, k: int, m: int, r: int, max_tuples: int = 10**8
) -> TupleCensus:
    """Exact T_{r,d} and N_{r,d}(B) counts at the canonical B.

    Asserts the low-rank bound T_{r,d} <= 2^(r^2) ((3/4) 2^d)^k for d < r.
    """
    if m not in (1, 2):
        raise DomainError("m must be 1 or 2")
    b = (1,) if m == 1 else (1, 2)
    _check_b(p, b)
    big_m = (1 << k) - 1
    if falling(big_m, r) > max_tuples or falling(m * big_m, r) > max_tuples:
        raise CapacityError("tuple enumeration exceeds the gate")
    t_rd: dict[int, int] = {}
    for rows in itertools.permutations(range(1, 1 << k), r):
        d = rank_int(IncidenceMatrix(k=k, rows=rows).dense())
        t_rd[d] = t_rd.get(d, 0) + 1
    for d, count in t_rd.items():
        if d < r:
            # T_{r,d} <= 2^(r^2) ((3/4) 2^d)^k, compared without floats
            if count * 4**k > 2 ** (r * r) * (3 * 2**d) ** k:
                raise AssertionError(
                    f"low-rank census bound violated at r={r}, d={d}, k={k}"
                )
    report = factorial_moment_rank(p, k, b, r, max_tuples)
    total = falling(m * big_m, r)
    full = report.n_rd.get(r, 0)
    return TupleCensus(
        p=p,
        k=k,
        m=m,
        r=r,
        n_rd=report.n_rd,
        t_rd=dict(sorted(t_rd.items())),
        total_tuples=total,
        full_rank_fraction=Fraction(full, total) if total else Fraction(0),
    )


@dataclass(frozen=True)
class SecondMomentSummary:
    p: int
    k: int
    eu: Fraction
    euu: Fraction
    ratio: Fraction
    p_zero_by_x: tuple[Fraction, ...]  # P(X_x = 0) for x = 1, ..., p-1


def second_moment_summary(
    p: int, k: int, max_assignments: int = 10**8
) -> SecondMomentSummary:
    """Exact E[U] and E[U(U-1)] over all p^k assignments."""
    sum_u = 0
    sum_uu = 0
    zero_by_x = [0] * (p - 1)
    for counts in iter_assignment_counts(p, k, max_assignments):
        u = 0
        for x in range(1, p):
            if counts[x] == 0:
                u += 1
                zero_by_x[x - 1] += 1
        sum_u += u
        sum_uu += u * (u - 1)
    denom = p**k
    eu = Fraction(sum_u, denom)
    euu = Fraction(sum_uu, denom)
    ratio = euu / eu**2 if eu else Fraction(0)
    return SecondMomentSummary(
        p=p,
        k=k,
        eu=eu,
        euu=euu,
        ratio=ratio,
        p_zero_by_x=tuple(Fraction(z, denom) for z in zero_by_x),
    )
