"""Analytic scaffolding: k-choice, lambda, falling-factorial ratios,
Bonferroni truncations and Poisson reference probabilities.

Logarithms and exponentials run through mpmath at >= 80 bits of
precision; everything that is a ratio of integers stays a Fraction.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError

_PRECISION_BITS = 96
_FLOOR_GUARD = 1e-9

#: Upper end of the regime where the coverage probability is known to
#: vanish: c in (0, 1/(2 log 2)).
C_CRITICAL_LOW = 1 / (2 * math.log(2))
C_CRITICAL_HIGH = 1 / math.log(2)


def _is_prime(p: int) -> bool:
    from sympy import isprime

    return bool(isprime(p))


@dataclass(frozen=True)
class KChoice:
    p: int
    c: float
    k: int
    theta: float  # fractional part of log2(p) + c log log p
    big_m: int  # 2^k - 1
    lam: Fraction  # (2^k - 1) / p
    alpha: float  # c log 2


@dataclass(frozen=True)
class TruncationPlan:
    beta: float
    big_r: int


def choose_k(p: int, c: float) -> KChoice:
    """k = floor(log2 p + c log log p), with a guard band at the floor.

    If the argument sits within 1e-9 of an integer the floor is recomputed
    at doubled precision before being trusted.
    """
    if p < 5:
        raise DomainError("choose_k needs p >= 5 so that log log p > 0")
    if not _is_prime(p):
        raise DomainError(f"{p} is not prime")
    if c <= 0:
        raise DomainError("c must be positive")
    if c >= C_CRITICAL_LOW:
        warnings.warn(
            f"c={c} is outside (0, 1/(2 log 2)); the vanishing-coverage "
            "regime is not guaranteed",
            stacklevel=2,
        )

    def eval_arg(prec: int) -> mpmath.mpf:
        with mpmath.workprec(prec):
            pm = mpmath.mpf(p)
            return mpmath.log(pm, 2) + mpmath.mpf(c) * mpmath.log(mpmath.log(pm))

    arg = eval_arg(_PRECISION_BITS)
    if abs(arg - mpmath.nint(arg)) < _FLOOR_GUARD:
        arg = eval_arg(2 * _PRECISION_BITS)
    k = int(mpmath.floor(arg))
    theta = float(arg - k)
    big_m = (1 << k) - 1
    lam = Fraction(big_m, p)
    alpha = c * math.log(2)
    # sandwich (1/2)(log p)^alpha <= 2^k/p <= (log p)^alpha
    la = math.log(p) ** alpha
    ratio = (1 << k) / p
    assert la / 2 <= ratio * (1 + 1e-12) and ratio <= la * (1 + 1e-12), (
        f"lambda sandwich violated at p={p}, c={c}"
    )
    return KChoice(p=p, c=c, k=k, theta=theta, big_m=big_m, lam=lam, alpha=alpha)


def truncation_plan(kc: KChoice, beta: float | None = None) -> TruncationPlan:
    """Truncation depth R = floor((log p)^beta), default beta midway in
    (alpha, 1/2)."""
    if beta is None:
        beta = (kc.alpha + 0.5) / 2
    if not kc.alpha < beta < 0.5:
        raise DomainError(f"beta must lie in ({kc.alpha}, 0.5), got {beta}")
    big_r = int(math.floor(math.log(kc.p) ** beta))
    return TruncationPlan(beta=beta, big_r=big_r)


@dataclass(frozen=True)
class FallingRatio:
    ratio: Fraction  # (mM)_r / p^r
    correction: Fraction  # (mM)_r / (mM)^r


def falling_factorial_ratio(m: int, big_m: int, r: int, p: int) -> FallingRatio:
    """(mM)_r / p^r, together with the 1+o(1) correction (mM)_r/(mM)^r."""
    if r < 1:
        raise DomainError("r must be >= 1")
    y = m * big_m
    ff = 1
    for j in range(r):
        ff *= y - j
    if ff <= 0:
        return FallingRatio(ratio=Fraction(max(ff, 0), p**r), correction=Fraction(0))
    return FallingRatio(ratio=Fraction(ff, p**r), correction=Fraction(ff, y**r))


@dataclass(frozen=True)
class BonferroniPartial:
    estimate: Fraction
    remainder_bound: Fraction


def bonferroni_partial(moments, r_trunc: int) -> BonferroniPartial:
    """Alternating partial sum of the factorial-moment series for P(Z=0).

    moments[r] is E[(Z)_r] with moments[0] = 1.  The truncation error is
    bounded by moments[r_trunc + 1] / (r_trunc + 1)!.
    """
    ms = [Fraction(m) for m in moments]
    if not ms or ms[0] != 1:
        raise DomainError("moments must start with E[(Z)_0] = 1")
    if r_trunc + 1 >= len(ms):
        raise DomainError(
            f"need moment r={r_trunc + 1} for the remainder bound, "
            f"got only {len(ms)} moments"
        )
    estimate = Fraction(0)
    for r in range(r_trunc + 1):
        term = ms[r] / math.factorial(r)
        estimate += term if r % 2 == 0 else -term
    remainder = ms[r_trunc + 1] / math.factorial(r_trunc + 1)
    return BonferroniPartial(estimate=estimate, remainder_bound=remainder)


def poisson_miss_prediction(kc: KChoice, m: int) -> float:
    """Reference value e^(-m lambda) for the miss probability of an m-set."""
    if m not in (1, 2):
        raise DomainError("m must be 1 or 2")
    with mpmath.workprec(_PRECISION_BITS):
        lam = mpmath.mpf(kc.lam.numerator) / kc.lam.denominator
        return float(mpmath.e ** (-m * lam))
