"""Cyclic assignment of precoding labels to (transmit set, receiver) pairs.

For a label set L of size K-2r, every receiver column k outside L gets the
transmit sets {k-r+1, ..., k-1, t} built from its r-1 consecutive cyclic
predecessors, plus (odd K only) a spill of the same set into column k+1
whenever k+1 is not a transmitter. Each assigned signal is zero-forced at
the r-1 nodes outside the transmitters, the receiver and the label, so the
label nodes are exactly where it lands as interference.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .core import (
    Nodes,
    SystemParams,
    binomial,
    consecutive_predecessors,
    cyclic_successor,
    k_subsets,
    node_set,
)


@dataclass(frozen=True)
class Assignment:
    """One table cell: transmit set T sends to `receiver`, nulled at `zf_set`."""

    transmit_set: Nodes
    receiver: int
    interference_set: Nodes
    zf_set: Nodes


@dataclass(frozen=True)
class AssignmentTable:
    params: SystemParams
    label: Nodes
    entries: tuple[Assignment, ...]

    def entry_pairs(self) -> set[tuple[Nodes, int]]:
        return {(e.transmit_set, e.receiver) for e in self.entries}

    def to_dict(self) -> dict:
        return {
            "K": self.params.K,
            "r": self.params.r,
            "label": list(self.label),
            "entries": [
                {"T": list(e.transmit_set), "k": e.receiver, "S": list(e.zf_set)}
                for e in self.entries
            ],
        }


@dataclass
class ValidationReport:
    table_label: Nodes
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations


def build_assignment_table(params: SystemParams, label: Nodes) -> AssignmentTable:
    label = node_set(label)
    if len(label) != params.label_size:
        raise ValueError(
            f"label must have size K-2r = {params.label_size}, got {label}"
        )
    if not set(label) <= set(params.nodes):
        raise ValueError(f"label {label} is not a subset of [{params.K}]")

    ground = node_set(set(params.nodes) - set(label))
    all_nodes = set(params.nodes)
    seen: dict[tuple[Nodes, int], Assignment] = {}

    def emit(transmit: Nodes, receiver: int) -> None:
        key = (transmit, receiver)
        if key in seen:
            return
        zf = node_set(all_nodes - set(transmit) - {receiver} - set(label))
        seen[key] = Assignment(transmit, receiver, label, zf)

    for k in ground:
        preds = consecutive_predecessors(k, params.r - 1, ground)
        blocked = set(preds) | {k}
        succ = cyclic_successor(k, ground)
        for t in ground:
            if t in blocked:
                continue
            transmit = node_set(preds + (t,))
            emit(transmit, k)
            if params.is_odd and succ not in transmit:
                emit(transmit, succ)

    entries = tuple(
        sorted(seen.values(), key=lambda e: (e.receiver, e.transmit_set))
    )
    return AssignmentTable(params, label, entries)


def table_from_dict(payload: dict) -> AssignmentTable:
    """Inverse of AssignmentTable.to_dict; entries keep their serialized zf sets."""
    params = SystemParams(int(payload["K"]), int(payload["r"]))
    label = node_set(payload["label"])
    entries = tuple(
        Assignment(
            transmit_set=node_set(e["T"]),
            receiver=int(e["k"]),
            interference_set=label,
            zf_set=node_set(e["S"]),
        )
        for e in payload["entries"]
    )
    return AssignmentTable(params, label, entries)


def build_all_tables(params: SystemParams) -> dict[Nodes, AssignmentTable]:
    """One table per label L, keyed by label in lexicographic order."""
    return {
        label: build_assignment_table(params, label)
        for label in k_subsets(params.nodes, params.label_size)
    }


def validate_table(table: AssignmentTable) -> ValidationReport:
    params = table.params
    report = ValidationReport(table_label=table.label)
    all_nodes = set(params.nodes)
    expected_per_column = params.K - 2 if params.is_odd else params.r

    pairs: set[tuple[Nodes, int]] = set()
    for e in table.entries:
        tag = f"(T={e.transmit_set}, k={e.receiver})"
        if (e.transmit_set, e.receiver) in pairs:
            report.violations.append(f"duplicate entry {tag}")
        pairs.add((e.transmit_set, e.receiver))
        if len(e.transmit_set) != params.r:
            report.violations.append(f"{tag}: |T| != r")
        if e.receiver in e.transmit_set:
            report.violations.append(f"{tag}: receiver inside transmit set")
        if e.receiver in e.interference_set:
            report.violations.append(f"{tag}: receiver inside interference set")
        if set(e.transmit_set) & set(e.interference_set):
            report.violations.append(f"{tag}: transmit set meets interference set")
        expected_zf = node_set(
            all_nodes - set(e.transmit_set) - {e.receiver} - set(e.interference_set)
        )
        if e.zf_set != expected_zf:
            report.violations.append(f"{tag}: zf_set {e.zf_set} != {expected_zf}")
        if len(e.zf_set) != params.r - 1:
            report.violations.append(f"{tag}: |S| != r-1")
        interference = node_set(
            all_nodes - set(e.transmit_set) - {e.receiver} - set(e.zf_set)
        )
        if interference != table.label:
            report.violations.append(
                f"{tag}: interference nodes {interference} != label {table.label}"
            )

    for k in sorted(all_nodes - set(table.label)):
        count = sum(1 for e in table.entries if e.receiver == k)
        if count != expected_per_column:
            report.violations.append(
                f"column {k} holds {count} entries, expected {expected_per_column}"
            )
    for k in table.label:
        count = sum(1 for e in table.entries if e.receiver == k)
        if count:
            report.violations.append(f"label node {k} appears as a receiver")
    return report


def count_matrices_at_node(params: SystemParams, k: int) -> tuple[int, int]:
    """Brute-force (desired, interfering) precoding-label counts seen by node k."""
    if k not in params.nodes:
        raise ValueError(f"node {k} outside [{params.K}]")
    desired = 0
    interfering = 0
    for label, table in build_all_tables(params).items():
        if k in label:
            interfering += 1
        elif any(e.receiver == k for e in table.entries):
            desired += 1
    return desired, interfering


def expected_matrix_counts(params: SystemParams) -> tuple[int, int]:
    """Closed forms C(K-1, K-2r) and C(K-1, K-2r-1) for the per-node counts."""
    return (
        binomial(params.K - 1, params.label_size),
        binomial(params.K - 1, params.label_size - 1),
    )


def _label_text(label: Nodes) -> str:
    return "U_{%s}" % ",".join(str(v) for v in label)


def _grid(table: AssignmentTable) -> tuple[list[Nodes], list[list[str]]]:
    rows = k_subsets(table.params.nodes, table.params.r)
    assigned = table.entry_pairs()
    cells = []
    for transmit in rows:
        row = []
        for k in table.params.nodes:
            if k in transmit:
                row.append("x")
            elif (transmit, k) in assigned:
                row.append(_label_text(table.label))
            else:
                row.append("o")
        cells.append(row)
    return rows, cells


def render_table(table: AssignmentTable, format: str = "markdown") -> str:
    r"""Grid with one row per size-r transmit set: x = transmitter, U_{L} = assigned."""
    if format == "json":
        return json.dumps(table.to_dict(), indent=2) + "\n"
    rows, cells = _grid(table)
    if format == "markdown":
        header = ["T \\ k"] + [str(k) for k in table.params.nodes]
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join("---" for _ in header) + "|",
        ]
        for transmit, row in zip(rows, cells):
            name = "{%s}" % ",".join(str(v) for v in transmit)
            lines.append("| " + " | ".join([name] + row) + " |")
        return "\n".join(lines) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["T"] + [str(k) for k in table.params.nodes])
        for transmit, row in zip(rows, cells):
            writer.writerow(["{%s}" % ",".join(str(v) for v in transmit)] + row)
        return buf.getvalue()
    raise ValueError(f"unsupported format {format!r}")
