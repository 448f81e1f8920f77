import pytest

from iazf.assignment import AssignmentTable, Assignment, build_assignment_table
from iazf.core import SystemParams, node_set
from iazf.field import DEFAULT_FIELD, PrimeField
from iazf.zfmodel import (
    ChannelPoint,
    ChannelVar,
    EffectiveCoefficient,
    ScaleVar,
    channel_vars,
    enumerate_effective_coeffs,
    eval_effective_coeff,
    random_channel_point,
    scale_vars,
    verify_alignment_structure,
    verify_zero_forcing,
    zf_vector,
)


def tiny_point(K, assignments, fld=DEFAULT_FIELD):
    """Point binding channel vars from a dict {(p,q): value} plus unit extras."""
    values = {ChannelVar(p, q): 1 for p in range(1, K + 1) for q in range(1, K + 1) if p != q}
    for (p, q), v in assignments.items():
        values[ChannelVar(p, q)] = v % fld.modulus
    return ChannelPoint(fld, values)


def test_zf_vector_r2_matches_closed_form():
    # v = (-h_{4,2}, h_{4,1}) for T={1,2}, S={4}
    fld = PrimeField(101)
    point = tiny_point(5, {(4, 1): 7, (4, 2): 9}, fld)
    v = zf_vector((1, 2), (4,), point)
    assert v == [(-9) % 101, 7]


def test_zf_vector_annihilates_zf_rows_r2():
    fld = PrimeField(101)
    point = tiny_point(5, {(4, 1): 7, (4, 2): 9}, fld)
    v = zf_vector((1, 2), (4,), point)
    inner = (point[ChannelVar(4, 1)] * v[0] + point[ChannelVar(4, 2)] * v[1]) % 101
    assert inner == 0


def test_zf_vector_r3_random_points():
    params = SystemParams(7)
    table = build_assignment_table(params, (7,))
    for t in range(20):
        point = random_channel_point(table, seed=(123, t))
        p = point.field.modulus
        v = zf_vector((1, 2, 3), (5, 6), point)
        for i in (5, 6):
            inner = sum(point[ChannelVar(i, q)] * v[j] for j, q in enumerate((1, 2, 3))) % p
            assert inner == 0


def test_zf_vector_size_mismatch():
    point = tiny_point(5, {})
    with pytest.raises(ValueError):
        zf_vector((1, 2), (3, 4), point)
    with pytest.raises(ValueError):
        zf_vector((1, 2), (2,), point)


def test_eval_effective_coeff_r2_expansion():
    # with s = 1: g = h_{4,1} h_{5,2} - h_{4,2} h_{5,1}
    fld = PrimeField(101)
    coeff = EffectiveCoefficient(
        receiver=3, transmit_set=(1, 2), label=(5,), observer=5, zf_set=(4,)
    )
    point = tiny_point(5, {(4, 1): 7, (4, 2): 9, (5, 1): 3, (5, 2): 11}, fld)
    point.values[ScaleVar(3, (1, 2))] = 1
    assert eval_effective_coeff(coeff, point) == (7 * 11 - 9 * 3) % 101


def test_eval_zero_when_observer_in_zf_set():
    fld = PrimeField(101)
    coeff = EffectiveCoefficient(
        receiver=3, transmit_set=(1, 2), label=(5,), observer=4, zf_set=(4,)
    )
    point = tiny_point(5, {(4, 1): 7, (4, 2): 9}, fld)
    point.values[ScaleVar(3, (1, 2))] = 17
    assert eval_effective_coeff(coeff, point) == 0


def test_observer_cannot_transmit():
    with pytest.raises(ValueError):
        EffectiveCoefficient(3, (1, 2), (5,), observer=1, zf_set=(4,))


@pytest.mark.parametrize("K,label", [(5, (5,)), (6, (5, 6)), (9, (9,))])
def test_two_route_agreement(K, label):
    # determinant evaluation equals the inner product with the scaled beamformer
    params = SystemParams(K)
    table = build_assignment_table(params, label)
    coeffs = enumerate_effective_coeffs(table)
    for trial in range(3):
        point = random_channel_point(table, seed=(99, K, trial))
        p = point.field.modulus
        for coeff in coeffs[:40]:
            v = zf_vector(coeff.transmit_set, coeff.zf_set, point)
            s = point[coeff.scale_var]
            inner = (
                s
                * sum(
                    point[ChannelVar(coeff.observer, q)] * vq
                    for q, vq in zip(coeff.transmit_set, v)
                )
                % p
            )
            assert inner == eval_effective_coeff(coeff, point)


def test_enumerate_census():
    cases = {(5, (5,)): 24, (6, (5, 6)): 24, (7, (7,)): 60}
    for (K, label), expected in cases.items():
        params = SystemParams(K)
        table = build_assignment_table(params, label)
        coeffs = enumerate_effective_coeffs(table)
        assert len(coeffs) == expected
        assert len(coeffs) == len(table.entries) * (1 + params.label_size)
        per_entry = 1 + params.label_size
        for i, coeff in enumerate(coeffs):
            entry = table.entries[i // per_entry]
            assert coeff.transmit_set == entry.transmit_set
            expected_obs = (entry.receiver,) + table.label
            assert coeff.observer == expected_obs[i % per_entry]


def test_entries_per_column_census():
    # coefficient count = columns * entries-per-column * (1 + K - 2r)
    for K in (5, 6, 7, 8):
        params = SystemParams(K)
        label = tuple(range(K - params.label_size + 1, K + 1))
        table = build_assignment_table(params, label)
        columns = K - params.label_size
        per_column = K - 2 if params.is_odd else params.r
        assert len(table.entries) == columns * per_column
        assert len(enumerate_effective_coeffs(table)) == (
            columns * per_column * (1 + params.label_size)
        )


@pytest.mark.parametrize("K,label,trials", [(5, (5,), 20), (6, (5, 6), 20), (9, (9,), 5)])
def test_verify_zero_forcing_passes(K, label, trials):
    table = build_assignment_table(SystemParams(K), label)
    report = verify_zero_forcing(table, trials=trials, seed=7)
    assert report.passed
    assert report.checks == trials * len(table.entries) * (SystemParams(K).r - 1)


def test_verify_zero_forcing_needs_trials():
    table = build_assignment_table(SystemParams(5), (5,))
    with pytest.raises(ValueError):
        verify_zero_forcing(table, trials=0)


def test_alignment_structure_passes():
    assert verify_alignment_structure(SystemParams(5)).passed
    assert verify_alignment_structure(SystemParams(6)).passed


def test_alignment_structure_rejects_mutation():
    params = SystemParams(5)
    tables = {
        label: build_assignment_table(params, label)
        for label in [(1,), (2,), (3,), (4,), (5,)]
    }
    good = tables[(5,)]
    e = good.entries[0]
    bad_entry = Assignment(e.transmit_set, e.receiver, e.interference_set, node_set({5}))
    tables[(5,)] = AssignmentTable(good.params, good.label, (bad_entry,) + good.entries[1:])
    report = verify_alignment_structure(params, tables)
    assert not report.passed


def test_random_point_deterministic_and_nonzero():
    table = build_assignment_table(SystemParams(5), (5,))
    a = random_channel_point(table, seed=5)
    b = random_channel_point(table, seed=5)
    c = random_channel_point(table, seed=6)
    assert a.values == b.values
    assert a.values != c.values
    assert all(v != 0 for v in a.values.values())
    assert set(a.values) == set(scale_vars(table)) | set(channel_vars(5))


def test_channel_var_rejects_self_loop():
    with pytest.raises(ValueError):
        ChannelVar(3, 3)
