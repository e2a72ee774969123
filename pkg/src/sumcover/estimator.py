"""Cover-probability estimation, the empirical threshold f-hat, and the
second-order scan.

Monte Carlo trials use one substream per trial index, so results are
identical for any worker count; aggregation is a plain success count.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.stats import norm, poisson

from . import coverage
from .coverage import covers, sigma_counts
from .errors import CapacityError, DomainError
from .groups import GroupSpec
from .sampling import SampleModel, SeedPlan, draw
from .series import choose_k

DECISION_RULES = ("point", "ci-low", "ci-high")


def wilson_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if not 0 < confidence < 1:
        raise DomainError(f"confidence must be in (0,1), got {confidence}")
    z = float(norm.ppf((1 + confidence) / 2))
    phat = successes / trials
    denom = 1 + z**2 / trials
    center = (phat + z**2 / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2))
        / denom
    )
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


@dataclass(frozen=True)
class EstimateRecord:
    group: GroupSpec
    k: int
    model: SampleModel
    trials: int
    successes: int
    p_hat: Fraction
    ci_low: float
    ci_high: float
    confidence: float
    seed: int
    wall_time: float
    method: str  # "mc" or "exact"


def _exact_record(g: GroupSpec, k: int, model: SampleModel, p: Fraction, dt: float) -> EstimateRecord:
    # exact results are stored as their reduced fraction: successes/trials
    return EstimateRecord(
        group=g,
        k=k,
        model=model,
        trials=p.denominator,
        successes=p.numerator,
        p_hat=p,
        ci_low=float(p),
        ci_high=float(p),
        confidence=1.0,
        seed=0,
        wall_time=dt,
        method="exact",
    )


def cover_prob_mc(
    g: GroupSpec,
    k: int,
    model: SampleModel,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    threads: int = 1,
) -> EstimateRecord:
    """Monte Carlo estimate of P(Sigma(A) = G) with a Wilson interval."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    t0 = time.perf_counter()
    if (1 << k) < g.order:
        # coverage is impossible; no sampling noise, no RNG consumed
        successes = 0
    else:

        def run_chunk(lo: int, hi: int) -> int:
            count = 0
            for idx in range(lo, hi):
                a = draw(g, k, model, SeedPlan(seed, idx))
                if covers(g, a):
                    count += 1
            return count

        if threads <= 1:
            successes = run_chunk(0, trials)
        else:
            bounds = np.linspace(0, trials, threads + 1).astype(int)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                successes = sum(
                    pool.map(run_chunk, bounds[:-1], bounds[1:])
                )
    lo, hi = wilson_interval(successes, trials, confidence)
    return EstimateRecord(
        group=g,
        k=k,
        model=model,
        trials=trials,
        successes=successes,
        p_hat=Fraction(successes, trials),
        ci_low=lo,
        ci_high=hi,
        confidence=confidence,
        seed=seed,
        wall_time=time.perf_counter() - t0,
        method="mc",
    )


def cover_prob_exact(
    g: GroupSpec,
    k: int,
    model: SampleModel,
    max_subsets: int = 10**7,
    max_tuples: int = 10**8,
) -> Fraction:
    """Exact cover probability by full enumeration."""
    n = g.order
    if model is SampleModel.SUBSET:
        if k > n:
            raise DomainError(f"subset model needs k <= N, got k={k}, N={n}")
        total = math.comb(n, k)
        if total > max_subsets:
            raise CapacityError(f"C(N,k) = {total} exceeds the gate {max_subsets}")
        good = sum(
            1 for a in itertools.combinations(range(n), k) if covers(g, list(a))
        )
        return Fraction(good, total)
    if n**k > max_tuples:
        raise CapacityError(f"N^k = {n**k} exceeds the gate {max_tuples}")
    good = sum(
        1 for a in itertools.product(range(n), repeat=k) if covers(g, list(a))
    )
    return Fraction(good, n**k)


@dataclass(frozen=True)
class FHatResult:
    group: GroupSpec
    f_hat: int
    per_k: tuple[EstimateRecord, ...]
    second_order: float
    decision_rule: str


def _search_bracket(n: int) -> tuple[int, int]:
    kmin = (n - 1).bit_length()  # ceil(log2 N)
    loglog = math.log(math.log(n)) if n > 2 else 0.0
    width = max(0, math.ceil(2 * loglog)) + 10
    return kmin, kmin + width


def _accepts(rec: EstimateRecord, rule: str) -> bool:
    if rec.method == "exact" or rule == "point":
        return rec.p_hat >= Fraction(1, 2)
    if rule == "ci-low":
        return rec.ci_low >= 0.5
    if rule == "ci-high":
        return rec.ci_high >= 0.5
    raise DomainError(f"unknown decision rule {rule!r}")


def f_hat(
    g: GroupSpec,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    rule: str = "point",
    threads: int = 1,
    max_subsets: int = 10**7,
) -> FHatResult:
    """Least k whose cover probability reaches 1/2 under the decision rule.

    Scans k linearly upward from ceil(log2 N) (cover probability is
    monotone in k in the subset model); exact enumeration replaces
    sampling whenever the subset gate permits.
    """
    if trials < 100:
        raise DomainError("trials must be >= 100")
    if rule not in DECISION_RULES:
        raise DomainError(f"rule must be one of {DECISION_RULES}")
    n = g.order
    kmin, kmax = _search_bracket(n)
    per_k: list[EstimateRecord] = []
    found = None
    for k in range(kmin, kmax + 1):
        use_exact = k <= n and math.comb(n, k) <= max_subsets
        if use_exact:
            t0 = time.perf_counter()
            p = cover_prob_exact(g, k, SampleModel.SUBSET, max_subsets)
            rec = _exact_record(
                g, k, SampleModel.SUBSET, p, time.perf_counter() - t0
            )
        else:
            rec = cover_prob_mc(
                g, k, SampleModel.SUBSET, trials, seed, confidence, threads
            )
        per_k.append(rec)
        if _accepts(rec, rule):
            found = k
            break
    if found is None:
        raise CapacityError(
            f"no k in [{kmin}, {kmax}] reached probability 1/2; "
            f"per-k trace: {[(r.k, float(r.p_hat)) for r in per_k]}"
        )
    loglog = math.log(math.log(n)) if n > 2 else float("nan")
    second_order = (found - math.log2(n)) / loglog if loglog else float("nan")
    return FHatResult(
        group=g,
        f_hat=found,
        per_k=tuple(per_k),
        second_order=second_order,
        decision_rule=rule,
    )


@dataclass(frozen=True)
class ScanRow:
    p: int
    result: FHatResult | None
    c_points: tuple[dict, ...]
    error: str | None


def scan_second_order(
    primes,
    c_grid,
    trials: int,
    seed: int,
    confidence: float = 0.95,
    rule: str = "point",
    threads: int = 1,
) -> list[ScanRow]:
    """Per-prime f-hat plus decay points P(cover) at k = choose_k(p, c).

    Errors are recorded per prime; the scan continues past them.
    """
    rows = []
    for p in primes:
        try:
            g = GroupSpec((p,))
            res = f_hat(g, trials, seed, confidence, rule, threads)
            points = []
            for c in c_grid:
                kc = choose_k(p, c)
                rec = cover_prob_mc(
                    g, kc.k, SampleModel.SUBSET, trials, seed, confidence, threads
                )
                points.append(
                    {"c": c, "k": kc.k, "p_hat": rec.p_hat,
                     "ci_low": rec.ci_low, "ci_high": rec.ci_high}
                )
            rows.append(ScanRow(p=p, result=res, c_points=tuple(points), error=None))
        except Exception as exc:  # per-prime failures must not kill the scan
            rows.append(ScanRow(p=p, result=None, c_points=(), error=str(exc)))
    return rows


@dataclass(frozen=True)
class MissDistribution:
    group: GroupSpec
    k: int
    m: int
    trials: int
    seed: int
    hist: dict[int, float]  # pooled distribution of X_x (or X_x + X_y for m=2)
    hist_u: dict[int, float]
    p_miss_hat: float
    poisson_ref: float  # e^(-m lambda)
    tv_vs_poisson: float
    lam: Fraction


def miss_distribution(
    g: GroupSpec,
    k: int,
    trials: int,
    seed: int,
    m: int = 1,
    max_pairs: int = 1000,
) -> MissDistribution:
    """Pooled distribution of X_x over i.i.d. trials vs the Poisson law."""
    from sympy import isprime

    if m not in (1, 2):
        raise DomainError("m must be 1 or 2")
    if not (g.is_cyclic and isprime(g.order)):
        raise DomainError("miss distribution analysis needs a prime cyclic group")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    p = g.order
    lam = Fraction((1 << k) - 1, p)
    pooled: dict[int, int] = {}
    hist_u: dict[int, int] = {}
    pooled_n = 0
    for idx in range(trials):
        plan = SeedPlan(seed, idx)
        a = draw(g, k, SampleModel.IID, plan)
        counts = sigma_counts(g, a).counts
        u = sum(1 for x in range(1, p) if counts[x] == 0)
        hist_u[u] = hist_u.get(u, 0) + 1
        if m == 1:
            for x in range(1, p):
                pooled[counts[x]] = pooled.get(counts[x], 0) + 1
                pooled_n += 1
        else:
            rng = plan.rng()
            rng.bit_generator.advance(10**6)  # keep clear of the draw's stream
            npairs = min(max_pairs, (p - 1) * (p - 2) // 2)
            for _ in range(npairs):
                x = int(rng.integers(1, p))
                y = int(rng.integers(1, p - 1))
                if y >= x:
                    y += 1
                val = counts[x] + counts[y]
                pooled[val] = pooled.get(val, 0) + 1
                pooled_n += 1
    hist = {v: c / pooled_n for v, c in sorted(pooled.items())}
    hist_u_frac = {u: c / trials for u, c in sorted(hist_u.items())}
    mlam = float(m * lam)
    vmax = max(hist) if hist else 0
    tv = 0.5 * sum(
        abs(hist.get(v, 0.0) - poisson.pmf(v, mlam)) for v in range(vmax + 1)
    )
    tv += 0.5 * float(poisson.sf(vmax, mlam))
    ref = math.exp(-mlam)
    return MissDistribution(
        group=g,
        k=k,
        m=m,
        trials=trials,
        seed=seed,
        hist=hist,
        hist_u=hist_u_frac,
        p_miss_hat=hist.get(0, 0.0),
        poisson_ref=ref,
        tv_vs_poisson=tv,
        lam=lam,
    )
