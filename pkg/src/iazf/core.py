"""System parameters and node-set combinatorics.

Nodes are 1-based integers; node sets are canonical ascending tuples. All
cyclic notions (successor, consecutive predecessors) are ascending order
with wraparound on an explicit ground set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

Nodes = tuple[int, ...]


def node_set(members: Iterable[int]) -> Nodes:
    """Canonicalize a collection of node ids into a sorted duplicate-free tuple."""
    out = tuple(sorted(set(members)))
    if any(not isinstance(m, int) or m < 1 for m in out):
        raise ValueError(f"node ids must be positive integers, got {out}")
    return out


@dataclass(frozen=True)
class SystemParams:
    """Node count K and computation load r, with r locked to floor((K-1)/2)."""

    K: int
    r: int = -1

    def __post_init__(self) -> None:
        if self.K < 5:
            raise ValueError(f"K must be at least 5, got {self.K}")
        expected = (self.K - 1) // 2
        if self.r == -1:
            object.__setattr__(self, "r", expected)
        elif self.r != expected:
            raise ValueError(f"r must equal floor((K-1)/2) = {expected}, got {self.r}")

    @property
    def nodes(self) -> Nodes:
        return tuple(range(1, self.K + 1))

    @property
    def label_size(self) -> int:
        """Size of a precoding label set: K - 2r, which is 1 (K odd) or 2 (K even)."""
        return self.K - 2 * self.r

    @property
    def is_odd(self) -> bool:
        return self.K % 2 == 1


def binomial(n: int, k: int) -> int:
    """C(n, k), with 0 for k outside [0, n]."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def cyclic_successor(x: int, ground: Nodes) -> int:
    """Next element of `ground` after `x` in ascending order, wrapping max to min."""
    try:
        idx = ground.index(x)
    except ValueError:
        raise ValueError(f"{x} is not in ground set {ground}") from None
    return ground[(idx + 1) % len(ground)]


def consecutive_predecessors(k: int, count: int, ground: Nodes) -> Nodes:
    """The `count` elements immediately preceding `k` in the cyclic order of `ground`."""
    try:
        idx = ground.index(k)
    except ValueError:
        raise ValueError(f"{k} is not in ground set {ground}") from None
    if not 0 <= count < len(ground):
        raise ValueError(f"count must be in [0, {len(ground)}), got {count}")
    n = len(ground)
    return node_set(ground[(idx - j) % n] for j in range(1, count + 1))


def k_subsets(ground: Nodes, t: int) -> list[Nodes]:
    """All size-t subsets of `ground` in lexicographic order."""
    if not 0 <= t <= len(ground):
        raise ValueError(f"subset size must be in [0, {len(ground)}], got {t}")
    return [tuple(c) for c in combinations(ground, t)]
