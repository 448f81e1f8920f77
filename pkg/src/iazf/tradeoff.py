"""Exact-rational delivery-time tradeoff: achievable curve, lower bound, gap.

All values are Fractions; decimal strings are presentation-only. The
achievable normalized delivery time comes from the per-node degrees of
freedom of the assignment (closed form, cross-checked against the
brute-force matrix census), converted through delta = (1 - r/K) / SDoF.
The lower bound is the non-cooperative converse. Independence of the
construction is numerically certified only for K up to 15; outside that
range points are still computed but flagged uncertified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .assignment import count_matrices_at_node, expected_matrix_counts
from .converse import sdof_upper_closed_form
from .core import SystemParams

CERTIFIED_MIN_K = 5
CERTIFIED_MAX_K = 15


def is_certified(params: SystemParams) -> bool:
    return CERTIFIED_MIN_K <= params.K <= CERTIFIED_MAX_K


def messages_per_label(params: SystemParams) -> int:
    """Codewords one label carries per receiver column: r (K even) or K-2 (K odd)."""
    return params.K - 2 if params.is_odd else params.r


def dof_per_node(params: SystemParams) -> Fraction:
    if params.is_odd:
        prod = (params.K - 1) * (params.K - 2)
        return Fraction(prod, prod + 1)
    sq = (params.K - 2) ** 2
    return Fraction(sq, sq + 4)


def sdof_achievable(params: SystemParams) -> Fraction:
    return params.K * dof_per_node(params)


def ndt_from_sdof(params: SystemParams, sdof: Fraction) -> Fraction:
    if sdof <= 0:
        raise ValueError("sum degrees of freedom must be positive")
    return (1 - Fraction(params.r, params.K)) / sdof


def ndt_achievable(params: SystemParams) -> Fraction:
    load_factor = Fraction(1, params.K) * (1 - Fraction(params.r, params.K))
    if params.is_odd:
        return load_factor * (1 + Fraction(1, (params.K - 1) * (params.K - 2)))
    return load_factor * (1 + Fraction(4, (params.K - 2) ** 2))


def ndt_noncoop_lb(params: SystemParams) -> Fraction:
    load_factor = Fraction(1, params.K) * (1 - Fraction(params.r, params.K))
    return load_factor * Fraction(
        (params.K - 2) * params.r + params.K - 1, params.r * (params.K - 1)
    )


def corollary_gap(params: SystemParams) -> Fraction:
    return ndt_noncoop_lb(params) - ndt_achievable(params)


def consistency_check(params: SystemParams) -> bool:
    """Closed forms must equal both the SDoF conversion and the census route."""
    if ndt_achievable(params) != ndt_from_sdof(params, sdof_achievable(params)):
        return False
    desired, interfering = count_matrices_at_node(params, k=1)
    if (desired, interfering) != expected_matrix_counts(params):
        return False
    mult = messages_per_label(params)
    census_ratio = Fraction(desired * mult, desired * mult + interfering)
    return census_ratio == dof_per_node(params)


@dataclass(frozen=True)
class TradeoffPoint:
    K: int
    r: int
    dof_per_node: Fraction
    sdof_achievable: Fraction
    sdof_upper: Fraction
    delta_achievable: Fraction
    delta_noncoop_lb: Fraction
    gap: Fraction
    certified: bool

    def to_dict(self) -> dict:
        def pair(x: Fraction) -> list[int]:
            return [x.numerator, x.denominator]

        return {
            "K": self.K,
            "r": self.r,
            "dof_per_node": pair(self.dof_per_node),
            "sdof_achievable": pair(self.sdof_achievable),
            "sdof_upper": pair(self.sdof_upper),
            "delta_achievable": pair(self.delta_achievable),
            "delta_noncoop_lb": pair(self.delta_noncoop_lb),
            "gap": pair(self.gap),
            "certified": self.certified,
        }


def tradeoff_point(params: SystemParams) -> TradeoffPoint:
    # the closed form is exact; its agreement with exhaustive enumeration is
    # certified separately on the 5..15 range by the converse checks
    return TradeoffPoint(
        K=params.K,
        r=params.r,
        dof_per_node=dof_per_node(params),
        sdof_achievable=sdof_achievable(params),
        sdof_upper=sdof_upper_closed_form(params),
        delta_achievable=ndt_achievable(params),
        delta_noncoop_lb=ndt_noncoop_lb(params),
        gap=corollary_gap(params),
        certified=is_certified(params),
    )


def tradeoff_curve(kmin: int, kmax: int) -> list[TradeoffPoint]:
    if not 5 <= kmin <= kmax:
        raise ValueError("need 5 <= kmin <= kmax")
    return [tradeoff_point(SystemParams(k)) for k in range(kmin, kmax + 1)]


def decimal(x: Fraction, digits: int = 6) -> str:
    """Presentation-only decimal rendering with `digits` significant digits."""
    return f"{float(x):.{digits}g}"
