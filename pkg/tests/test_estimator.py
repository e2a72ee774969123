import math
import random
from fractions import Fraction

import pytest

from sumcover.errors import CapacityError, DomainError
from sumcover.estimator import (
    cover_prob_exact,
    cover_prob_mc,
    f_hat,
    miss_distribution,
    scan_second_order,
    wilson_interval,
)
from sumcover.groups import GroupSpec
from sumcover.sampling import SampleModel


def test_cover_prob_exact_examples():
    g5 = GroupSpec((5,))
    assert cover_prob_exact(g5, 3, SampleModel.SUBSET) == Fraction(2, 5)
    assert cover_prob_exact(g5, 4, SampleModel.SUBSET) == 1
    assert cover_prob_exact(GroupSpec((2,)), 1, SampleModel.IID) == Fraction(1, 2)
    with pytest.raises(CapacityError):
        cover_prob_exact(GroupSpec((1009,)), 12, SampleModel.SUBSET)


def test_exact_monotone_in_k():
    g = GroupSpec((7,))
    probs = [cover_prob_exact(g, k, SampleModel.SUBSET) for k in range(3, 8)]
    assert all(a <= b for a, b in zip(probs, probs[1:]))


def test_wilson_interval_basic():
    lo, hi = wilson_interval(50, 100, 0.95)
    assert lo < 0.5 < hi
    lo0, hi0 = wilson_interval(0, 100, 0.95)
    assert lo0 == 0.0 and hi0 < 0.1
    with pytest.raises(DomainError):
        wilson_interval(1, 2, 1.5)


def test_cover_prob_mc_zero_law():
    rng = random.Random(3)
    for _ in range(20):
        n = rng.randrange(9, 200)
        k = rng.randrange(0, max(1, n.bit_length() - 1))
        if 2**k >= n:
            continue
        rec = cover_prob_mc(GroupSpec((n,)), k, SampleModel.IID, 500, 1)
        assert rec.successes == 0
        assert rec.p_hat == 0


def test_cover_prob_mc_reproducible_across_threads():
    g = GroupSpec((5,))
    rec1 = cover_prob_mc(g, 3, SampleModel.SUBSET, 4000, 42, threads=1)
    rec8 = cover_prob_mc(g, 3, SampleModel.SUBSET, 4000, 42, threads=8)
    assert rec1.successes == rec8.successes
    rec1b = cover_prob_mc(g, 3, SampleModel.SUBSET, 4000, 42, threads=1)
    assert rec1.successes == rec1b.successes


def test_cover_prob_mc_calibrated():
    g = GroupSpec((5,))
    rec = cover_prob_mc(g, 3, SampleModel.SUBSET, 20000, 7, confidence=0.999)
    assert rec.ci_low <= 0.4 <= rec.ci_high


def test_f_hat_examples():
    res = f_hat(GroupSpec((5,)), 100, 0)
    assert res.f_hat == 4
    assert [r.k for r in res.per_k] == [3, 4]
    assert res.per_k[0].method == "exact"
    res = f_hat(GroupSpec((2,)), 100, 0)
    assert res.f_hat == 1
    res = f_hat(GroupSpec((31,)), 200, 0)
    assert res.f_hat >= 5  # ceil(log2 31)


def test_f_hat_rules():
    for rule in ("point", "ci-low", "ci-high"):
        res = f_hat(GroupSpec((11,)), 300, 5, rule=rule)
        assert res.decision_rule == rule
        assert res.f_hat >= 4
    with pytest.raises(DomainError):
        f_hat(GroupSpec((11,)), 300, 5, rule="bogus")
    with pytest.raises(DomainError):
        f_hat(GroupSpec((11,)), 50, 5)


def test_scan_second_order_small():
    rows = scan_second_order([5, 13], [0.3], 200, 3)
    assert len(rows) == 2
    for row in rows:
        assert row.error is None
        assert row.result.f_hat >= math.ceil(math.log2(row.p))
        assert len(row.c_points) == 1
    # bad prime is recorded, not raised
    rows = scan_second_order([4], [0.3], 200, 3)
    assert rows[0].error is not None


def test_miss_distribution_basic():
    g = GroupSpec((101,))
    md = miss_distribution(g, 7, 100, 11, m=1)
    assert abs(sum(md.hist.values()) - 1) < 1e-9
    assert abs(sum(md.hist_u.values()) - 1) < 1e-9
    assert md.p_miss_hat == md.hist.get(0, 0.0)
    assert 0 <= md.tv_vs_poisson <= 1
    # sample mean of X_x should be near lambda = M/p
    mean = sum(v * w for v, w in md.hist.items())
    assert abs(mean - float(md.lam)) < 0.2
    # k = 0 misses everything
    md0 = miss_distribution(g, 0, 5, 1, m=1)
    assert md0.hist == {0: 1.0}
    assert md0.hist_u == {100: 1.0}


def test_miss_distribution_m2():
    md = miss_distribution(GroupSpec((31,)), 5, 50, 2, m=2)
    assert abs(sum(md.hist.values()) - 1) < 1e-9
    assert md.poisson_ref == pytest.approx(math.exp(-2 * float(md.lam)))


def test_miss_distribution_requires_prime_cyclic():
    with pytest.raises(DomainError):
        miss_distribution(GroupSpec((2, 2)), 2, 10, 0)
    with pytest.raises(DomainError):
        miss_distribution(GroupSpec((9,)), 2, 10, 0)
