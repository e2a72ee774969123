import itertools
from fractions import Fraction

import pytest

from sumcover.errors import CapacityError, DomainError
from sumcover.moments import (
    factorial_moment_enum,
    factorial_moment_rank,
    falling,
    second_moment_summary,
    tuple_census,
)

from oracles import naive_counts
from sumcover.groups import GroupSpec


def test_enum_examples():
    assert factorial_moment_enum(5, 2, {1}, 1) == Fraction(3, 5)
    assert factorial_moment_enum(5, 2, {1}, 2) == Fraction(6, 25)
    assert factorial_moment_enum(3, 1, {1, 2}, 1) == Fraction(2, 3)


def test_enum_against_independent_oracle():
    # recompute E[(X_1)_2] at p=5, k=2 from per-assignment naive counts
    g = GroupSpec((5,))
    total = 0
    for a in itertools.product(range(5), repeat=2):
        x1 = naive_counts(g, list(a))[1]
        total += x1 * (x1 - 1)
    assert factorial_moment_enum(5, 2, {1}, 2) == Fraction(total, 25)


def test_enum_rejects_bad_b():
    with pytest.raises(DomainError):
        factorial_moment_enum(5, 2, {0}, 1)
    with pytest.raises(DomainError):
        factorial_moment_enum(5, 2, {1, 2, 3}, 1)
    with pytest.raises(CapacityError):
        factorial_moment_enum(101, 9, {1}, 1, max_assignments=10**6)


def test_rank_examples():
    rep = factorial_moment_rank(5, 2, {1}, 2)
    assert rep.n_rd == {2: 6}
    assert rep.value_rank == Fraction(6, 25)
    assert rep.value_exact == rep.value_rank
    rep = factorial_moment_rank(7, 3, {1}, 1)
    assert rep.n_rd == {1: 7}
    assert rep.value_rank == 1


def test_rank_identity_small_grid():
    for p in (3, 5):
        for k in (1, 2, 3):
            for r in (1, 2):
                for b in ({1}, {1, 2}):
                    rep = factorial_moment_rank(p, k, b, r)
                    assert rep.value_exact == rep.value_rank


def test_closed_forms():
    # E[(X_B)_1] = mM/p and E[(X_x)_2] = M(M-1)/p^2
    for p in (3, 5, 7):
        for k in (1, 2, 3):
            m_big = 2**k - 1
            assert factorial_moment_enum(p, k, {1}, 1) == Fraction(m_big, p)
            assert factorial_moment_enum(p, k, {1, 2}, 1) == Fraction(2 * m_big, p)
            assert factorial_moment_enum(p, k, {1}, 2) == Fraction(
                m_big * (m_big - 1), p**2
            )


def test_tuple_census_examples():
    c = tuple_census(5, 2, 1, 2)
    assert c.t_rd == {2: 6}
    c = tuple_census(5, 3, 1, 2)
    assert c.t_rd.get(1, 0) == 0  # distinct nonzero 0/1 rows never proportional
    c = tuple_census(5, 2, 1, 1)
    assert c.t_rd == {1: 3}
    assert c.total_tuples == 3
    assert c.full_rank_fraction == 1


def test_tuple_census_full_rank_fraction():
    c = tuple_census(7, 3, 2, 2)
    assert c.total_tuples == falling(2 * 7, 2)
    assert 0 < c.full_rank_fraction <= 1


def test_second_moment_summary_p3_k1():
    s = second_moment_summary(3, 1)
    assert s.eu == Fraction(4, 3)
    assert s.euu == Fraction(2, 3)
    assert s.ratio == Fraction(2, 3) / Fraction(16, 9)
    # x-symmetry of P(X_x = 0)
    assert len(set(s.p_zero_by_x)) == 1


def test_second_moment_eu_matches_elementwise():
    for p, k in ((5, 2), (7, 2), (3, 3)):
        s = second_moment_summary(p, k)
        assert s.eu == sum(s.p_zero_by_x)
        assert len(set(s.p_zero_by_x)) == 1
