"""Sub-message accounting behind the non-cooperative delivery-time bound.

Every intermediate value stored at a size-r set T is split into one
sub-message per member; a bounding argument picks a receiver j and a
carrier t and collects the sub-messages that must fit in one node's
observation: everything destined for j, plus carrier-t sub-messages whose
transmit sets avoid growing cyclic prefixes after j. Counting those sets
exactly gives the upper bound K(K-1)r / ((K-2)r + K-1) on the sum degrees
of freedom.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import Nodes, SystemParams, binomial, cyclic_successor, k_subsets, node_set


@dataclass(frozen=True, order=True)
class SubIva:
    """Sub-message of the intermediate value for `dest`, carried by `carrier`."""

    dest: int
    carrier: int
    transmit_set: Nodes

    def __post_init__(self) -> None:
        if self.carrier not in self.transmit_set:
            raise ValueError("carrier must belong to the transmit set")
        if self.dest in self.transmit_set:
            raise ValueError("destination cannot belong to the transmit set")


@dataclass
class LemmaSets:
    """The receiver-side and carrier-side sub-message sets for one (j, t) pair."""

    j: int
    t: int
    v_rx: frozenset[SubIva]
    v_tx_by_i: dict[int, frozenset[SubIva]]

    @property
    def v_tx(self) -> frozenset[SubIva]:
        out: set[SubIva] = set()
        for group in self.v_tx_by_i.values():
            out |= group
        return frozenset(out)

    @property
    def size(self) -> int:
        return len(self.v_rx) + sum(len(g) for g in self.v_tx_by_i.values())


def enumerate_total(params: SystemParams) -> frozenset[SubIva]:
    """All sub-messages: T of size r, carrier in T, destination outside T."""
    out = set()
    for transmit in k_subsets(params.nodes, params.r):
        rest = set(params.nodes) - set(transmit)
        for carrier in transmit:
            for dest in rest:
                out.add(SubIva(dest, carrier, transmit))
    return frozenset(out)


def total_count_closed_form(params: SystemParams) -> int:
    return params.r * binomial(params.K, params.r) * (params.K - params.r)


def lemma_sets(params: SystemParams, j: int, t: int) -> LemmaSets:
    """Bounding sets for receiver j and carrier t, cyclic prefixes on [K]\\{t}."""
    if j == t:
        raise ValueError("receiver and carrier must differ")
    if j not in params.nodes or t not in params.nodes:
        raise ValueError("nodes outside the system")

    v_rx = set()
    for transmit in k_subsets(node_set(set(params.nodes) - {j}), params.r):
        for carrier in transmit:
            v_rx.add(SubIva(j, carrier, transmit))

    ground = node_set(set(params.nodes) - {t})
    v_tx_by_i: dict[int, frozenset[SubIva]] = {}
    segment = {j}
    i = j
    for _ in range(len(ground) - 1):
        i = cyclic_successor(i, ground)
        segment.add(i)
        pool = node_set(set(params.nodes) - segment - {t})
        group = set()
        if len(pool) >= params.r - 1:
            for tail in k_subsets(pool, params.r - 1):
                transmit = node_set(tail + (t,))
                group.add(SubIva(i, t, transmit))
        v_tx_by_i[i] = frozenset(group)
    return LemmaSets(j, t, frozenset(v_rx), v_tx_by_i)


@dataclass
class ConverseCountReport:
    K: int
    r: int
    total: int
    set_size: int
    pairs_checked: int
    all_pairs_equal: bool
    last_nonempty_position: int
    hockey_stick_ok: bool
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.all_pairs_equal and self.hockey_stick_ok and not self.violations

    def to_dict(self) -> dict:
        bound = sdof_upper_closed_form(SystemParams(self.K))
        return {
            "K": self.K,
            "r": self.r,
            "V_total": self.total,
            "V": self.set_size,
            "sdof_upper": f"{bound.numerator}/{bound.denominator}",
            "pairs_checked": self.pairs_checked,
            "all_pairs_equal": self.all_pairs_equal,
        }


def _ordered_pairs(params: SystemParams, limit: int | None) -> list[tuple[int, int]]:
    pairs = [(j, t) for j in params.nodes for t in params.nodes if j != t]
    if limit is None or limit >= len(pairs):
        return pairs
    stride = max(1, len(pairs) // limit)
    sampled = pairs[::stride][:limit]
    return sampled


def verify_counts(params: SystemParams, max_pairs: int | None = None) -> ConverseCountReport:
    """Check the closed-form counts by exhaustive enumeration over (j, t) pairs."""
    total_set = enumerate_total(params)
    total = len(total_set)
    report = ConverseCountReport(
        K=params.K,
        r=params.r,
        total=total,
        set_size=-1,
        pairs_checked=0,
        all_pairs_equal=True,
        last_nonempty_position=-1,
        hockey_stick_ok=False,
    )
    if total != total_count_closed_form(params):
        report.violations.append(
            f"|V_total| = {total} != closed form {total_count_closed_form(params)}"
        )

    rx_expected = params.r * binomial(params.K - 1, params.r)
    tx_expected = binomial(params.K - 2, params.r)
    for j, t in _ordered_pairs(params, max_pairs):
        sets = lemma_sets(params, j, t)
        report.pairs_checked += 1
        if len(sets.v_rx) != rx_expected:
            report.violations.append(f"(j={j},t={t}): |V_rx| = {len(sets.v_rx)}")
        tx_total = sum(len(g) for g in sets.v_tx_by_i.values())
        if tx_total != tx_expected:
            report.violations.append(f"(j={j},t={t}): |V_tx| = {tx_total}")
        groups = list(sets.v_tx_by_i.values())
        seen: set[SubIva] = set(sets.v_rx)
        for group in groups:
            if seen & group:
                report.violations.append(f"(j={j},t={t}): bounding sets overlap")
            seen |= group
        if not seen <= total_set:
            report.violations.append(f"(j={j},t={t}): members outside the universe")
        # positions numbered as in the (j,t) = (2,1) instantiation, where the
        # first carrier group sits at index 3
        nonempty = [
            pos for pos, group in enumerate(groups, start=3) if group
        ]
        last = max(nonempty) if nonempty else 0
        if report.last_nonempty_position == -1:
            report.last_nonempty_position = last
        elif report.last_nonempty_position != last:
            report.violations.append(f"(j={j},t={t}): nonempty tail position differs")
        if report.set_size == -1:
            report.set_size = sets.size
        elif report.set_size != sets.size:
            report.all_pairs_equal = False
            report.violations.append(f"(j={j},t={t}): |V| = {sets.size} differs")

    direct_sum = sum(
        binomial(params.K - i, params.r - 1) for i in range(3, params.K + 1)
    )
    report.hockey_stick_ok = direct_sum == tx_expected
    if not report.hockey_stick_ok:
        report.violations.append("hockey-stick summation mismatch")
    return report


def sdof_upper_closed_form(params: SystemParams) -> Fraction:
    return Fraction(
        params.K * (params.K - 1) * params.r,
        (params.K - 2) * params.r + params.K - 1,
    )


def sdof_upper(params: SystemParams) -> Fraction:
    """|V_total| / |V| by enumeration, asserted against the closed form."""
    total = len(enumerate_total(params))
    sets = lemma_sets(params, j=2, t=1)
    ratio = Fraction(total, sets.size)
    closed = sdof_upper_closed_form(params)
    if ratio != closed:
        raise RuntimeError(
            f"enumerated bound {ratio} disagrees with closed form {closed} for K={params.K}"
        )
    return ratio
