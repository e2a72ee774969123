"""Finite abelian groups as products of cyclic groups.

A group is a tuple of cyclic factors (n_1, ..., n_t); an element is a plain
int in [0, N) holding the mixed-radix encoding of (x_1, ..., x_t), with x_1
as the least-significant digit.  A single prime factor models the additive
group of integers mod p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from .errors import DomainError


@dataclass(frozen=True)
class GroupSpec:
    factors: tuple[int, ...]

    def __init__(self, factors):
        factors = tuple(int(n) for n in factors)
        if not factors:
            raise DomainError("a group needs at least one cyclic factor")
        for n in factors:
            if n < 2:
                raise DomainError(f"cyclic factor {n} < 2")
        object.__setattr__(self, "factors", factors)

    @cached_property
    def order(self) -> int:
        return math.prod(self.factors)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        """Mixed-radix place values: strides[i] = n_1 * ... * n_{i-1}."""
        out = []
        s = 1
        for n in self.factors:
            out.append(s)
            s *= n
        return tuple(out)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    def check_element(self, x: int) -> None:
        if not 0 <= x < self.order:
            raise DomainError(f"element {x} out of range [0, {self.order})")

    def decode(self, index: int) -> tuple[int, ...]:
        self.check_element(index)
        digits = []
        for n in self.factors:
            index, d = divmod(index, n)
            digits.append(d)
        return tuple(digits)

    def encode(self, digits) -> int:
        if len(digits) != len(self.factors):
            raise DomainError("digit tuple length does not match factor count")
        index = 0
        for d, n, s in zip(digits, self.factors, self.strides):
            if not 0 <= d < n:
                raise DomainError(f"digit {d} out of range [0, {n})")
            index += d * s
        return index

    def __str__(self) -> str:
        return ",".join(str(n) for n in self.factors)


def add(g: GroupSpec, a: int, b: int) -> int:
    """Componentwise sum mod each factor."""
    g.check_element(a)
    g.check_element(b)
    if g.is_cyclic:
        return (a + b) % g.order
    out = 0
    for n, s in zip(g.factors, g.strides):
        out += ((a // s + b // s) % n) * s
    return out


def neg(g: GroupSpec, a: int) -> int:
    g.check_element(a)
    if g.is_cyclic:
        return (-a) % g.order
    out = 0
    for n, s in zip(g.factors, g.strides):
        out += ((-(a // s)) % n) * s
    return out


def element_iter(g: GroupSpec):
    """All N elements once, in index order."""
    return iter(range(g.order))


def parse_group(text: str) -> GroupSpec:
    """Parse the CLI group format: comma-separated decimal factors."""
    try:
        factors = [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise DomainError(f"bad group string {text!r}") from exc
    return GroupSpec(factors)
