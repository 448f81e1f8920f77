"""Verification workbench for a cyclic IA/ZF precoding assignment.

Builds the assignment tables, certifies algebraic independence of the
post-ZF channel gains by exact Jacobian rank over a prime field, and
reproduces the exact delivery-time tradeoff formulas together with the
non-cooperative lower bound.
"""

from .assignment import (
    Assignment,
    AssignmentTable,
    build_all_tables,
    build_assignment_table,
    count_matrices_at_node,
    render_table,
    table_from_dict,
    validate_table,
)
from .converse import enumerate_total, lemma_sets, sdof_upper, verify_counts
from .core import SystemParams, binomial, consecutive_predecessors, cyclic_successor, k_subsets
from .field import DEFAULT_FIELD, DEFAULT_MODULUS, FieldMatrix, PrimeField, field_rank
from .independence import (
    IndependenceReport,
    jacobian_at,
    k5_block_structure_check,
    solve_special_realization,
    verify_all_independence,
    verify_independence,
)
from .tradeoff import (
    TradeoffPoint,
    consistency_check,
    corollary_gap,
    dof_per_node,
    ndt_achievable,
    ndt_from_sdof,
    ndt_noncoop_lb,
    sdof_achievable,
    tradeoff_curve,
)
from .zfmodel import (
    ChannelPoint,
    ChannelVar,
    EffectiveCoefficient,
    ScaleVar,
    enumerate_effective_coeffs,
    eval_effective_coeff,
    random_channel_point,
    verify_alignment_structure,
    verify_zero_forcing,
    zf_vector,
)

__all__ = [
    "Assignment",
    "AssignmentTable",
    "ChannelPoint",
    "ChannelVar",
    "DEFAULT_FIELD",
    "DEFAULT_MODULUS",
    "EffectiveCoefficient",
    "FieldMatrix",
    "IndependenceReport",
    "PrimeField",
    "ScaleVar",
    "SystemParams",
    "TradeoffPoint",
    "binomial",
    "build_all_tables",
    "build_assignment_table",
    "consecutive_predecessors",
    "consistency_check",
    "corollary_gap",
    "count_matrices_at_node",
    "cyclic_successor",
    "dof_per_node",
    "enumerate_effective_coeffs",
    "enumerate_total",
    "eval_effective_coeff",
    "field_rank",
    "jacobian_at",
    "k5_block_structure_check",
    "k_subsets",
    "lemma_sets",
    "ndt_achievable",
    "ndt_from_sdof",
    "ndt_noncoop_lb",
    "random_channel_point",
    "render_table",
    "sdof_achievable",
    "sdof_upper",
    "solve_special_realization",
    "table_from_dict",
    "tradeoff_curve",
    "validate_table",
    "verify_all_independence",
    "verify_counts",
    "verify_independence",
    "verify_zero_forcing",
    "verify_alignment_structure",
    "zf_vector",
]
