"""Symbolic model of the zero-forcing beamformers and post-ZF coefficients.

Every assigned (T, k) pair carries one random scale variable s and one
channel row per node; the beamformer for the pair is the signed-minor null
vector of the zf-set rows, so the post-ZF gain seen by an observer p' is
s times the r x r determinant stacking the zf rows (ascending) over the
observer row. Evaluation is exact over a prime field: "almost surely
nonzero" statements become polynomial identities checked at random points.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import AssignmentTable, build_all_tables, validate_table
from .core import Nodes, SystemParams, node_set
from .field import DEFAULT_FIELD, PrimeField, det_py


@dataclass(frozen=True, order=True)
class ChannelVar:
    """Channel coefficient h_{row,col} from transmitter `col` to receiver `row`."""

    row: int
    col: int

    def __post_init__(self) -> None:
        if self.row == self.col:
            raise ValueError("channel variables exist only for distinct node pairs")


@dataclass(frozen=True, order=True)
class ScaleVar:
    """Random scale attached to the codeword of one (receiver, transmit set) pair."""

    receiver: int
    transmit_set: Nodes


@dataclass
class ChannelPoint:
    """Binding of every variable of one table to a field element."""

    field: PrimeField
    values: dict

    def __getitem__(self, var):
        return self.values[var]


@dataclass(frozen=True)
class EffectiveCoefficient:
    """Post-ZF scalar gain of codeword (receiver, transmit_set) seen at `observer`."""

    receiver: int
    transmit_set: Nodes
    label: Nodes
    observer: int
    zf_set: Nodes

    def __post_init__(self) -> None:
        if self.observer in self.transmit_set:
            raise ValueError("observer cannot be a transmitter of the codeword")

    @property
    def is_useful(self) -> bool:
        return self.observer == self.receiver

    @property
    def scale_var(self) -> ScaleVar:
        return ScaleVar(self.receiver, self.transmit_set)

    @property
    def matrix_rows(self) -> Nodes:
        """Row nodes of the defining determinant: zf set ascending, observer last."""
        return self.zf_set + (self.observer,)


def channel_vars(K: int) -> list[ChannelVar]:
    return [ChannelVar(p, q) for p in range(1, K + 1) for q in range(1, K + 1) if p != q]


def scale_vars(table: AssignmentTable) -> list[ScaleVar]:
    return [ScaleVar(e.receiver, e.transmit_set) for e in table.entries]


def random_channel_point(
    table: AssignmentTable,
    fld: PrimeField = DEFAULT_FIELD,
    seed: int | tuple = 0,
) -> ChannelPoint:
    """Uniform point with every variable nonzero (degenerate pivots excluded)."""
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    variables = scale_vars(table) + channel_vars(table.params.K)
    draws = rng.integers(1, fld.modulus, size=len(variables), dtype=np.uint64)
    return ChannelPoint(fld, {var: int(v) for var, v in zip(variables, draws)})


def zf_vector(transmit_set: Nodes, zf_set: Nodes, point: ChannelPoint) -> list[int]:
    """Null vector of the zf-set channel rows restricted to the transmit set.

    Component j carries the signed maximal minor with column j removed; the
    signs are those of a last-row cofactor expansion, so that the inner
    product with any further row h_{p',T} equals the determinant stacking
    the zf rows over that row. For r = 2 this is (-h_{i,p2}, h_{i,p1}).
    """
    r = len(transmit_set)
    if len(zf_set) != r - 1 or set(transmit_set) & set(zf_set):
        raise ValueError("zf_set must have size r-1 and be disjoint from transmit_set")
    p = point.field.modulus
    base = [[point[ChannelVar(i, q)] for q in transmit_set] for i in zf_set]
    out = []
    for j in range(r):
        minor = [row[:j] + row[j + 1:] for row in base]
        m = det_py(minor, p) if minor else 1
        sign = 1 if (r + j + 1) % 2 == 0 else -1
        out.append(sign * m % p)
    return out


def eval_effective_coeff(coeff: EffectiveCoefficient, point: ChannelPoint) -> int:
    """s times the determinant stacking zf rows over the observer row."""
    p = point.field.modulus
    s = point[coeff.scale_var]
    matrix = [
        [point[ChannelVar(a, q)] for q in coeff.transmit_set]
        for a in coeff.matrix_rows
    ]
    return s * det_py(matrix, p) % p


def enumerate_effective_coeffs(table: AssignmentTable) -> list[EffectiveCoefficient]:
    """One coefficient per (entry, observer); observers are the receiver then the label."""
    out = []
    for e in table.entries:
        for observer in (e.receiver,) + table.label:
            out.append(
                EffectiveCoefficient(
                    receiver=e.receiver,
                    transmit_set=e.transmit_set,
                    label=table.label,
                    observer=observer,
                    zf_set=e.zf_set,
                )
            )
    return out


@dataclass
class ZeroForcingReport:
    K: int
    label: Nodes
    trials: int
    checks: int = 0
    failures: int = 0
    messages: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0


def verify_zero_forcing(
    table: AssignmentTable,
    trials: int,
    seed: int = 42,
    fld: PrimeField = DEFAULT_FIELD,
) -> ZeroForcingReport:
    """Check <h_{i,T}, v> = 0 exactly for every entry and every zf node i."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    p = fld.modulus
    report = ZeroForcingReport(table.params.K, table.label, trials)
    for t in range(trials):
        point = random_channel_point(table, fld, seed=(seed, t))
        for e in table.entries:
            v = zf_vector(e.transmit_set, e.zf_set, point)
            for i in e.zf_set:
                inner = (
                    sum(point[ChannelVar(i, q)] * vq for q, vq in zip(e.transmit_set, v))
                    % p
                )
                report.checks += 1
                if inner:
                    report.failures += 1
                    if len(report.messages) < 10:
                        report.messages.append(
                            f"trial {t}: nonzero ZF product at "
                            f"(T={e.transmit_set}, k={e.receiver}, i={i})"
                        )
    return report


@dataclass
class AlignmentReport:
    K: int
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_alignment_structure(
    params: SystemParams,
    tables: dict[Nodes, AssignmentTable] | None = None,
) -> AlignmentReport:
    """Interference observers of every coefficient must be exactly the table label."""
    if tables is None:
        tables = build_all_tables(params)
    report = AlignmentReport(params.K)
    all_nodes = set(params.nodes)
    interference_labels: dict[int, set[Nodes]] = {k: set() for k in params.nodes}

    for label, table in tables.items():
        check = validate_table(table)
        if not check.valid:
            report.violations.extend(f"label {label}: {v}" for v in check.violations)
        for e in table.entries:
            observers = node_set(
                all_nodes - set(e.transmit_set) - {e.receiver} - set(e.zf_set)
            )
            if observers != label:
                report.violations.append(
                    f"label {label}: entry (T={e.transmit_set}, k={e.receiver}) "
                    f"leaks interference to {observers}"
                )
            for node in observers:
                interference_labels[node].add(label)

    for node in params.nodes:
        expected = {label for label in tables if node in label}
        if interference_labels[node] != expected:
            report.violations.append(
                f"node {node} observes interference under labels "
                f"{sorted(interference_labels[node])}, expected {sorted(expected)}"
            )
    return report
