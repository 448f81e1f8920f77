import numpy as np
import pytest

from iazf.field import (
    DEFAULT_FIELD,
    DEFAULT_MODULUS,
    FieldMatrix,
    PrimeField,
    _mulmod_np,
    _rank_py,
    batch_det_adj,
    det_adj_py,
    det_py,
    field_det,
    field_rank,
    solve_py,
)

P = DEFAULT_MODULUS


def test_prime_field_validation():
    PrimeField(101)
    with pytest.raises(ValueError):
        PrimeField(100)
    with pytest.raises(ValueError):
        PrimeField(DEFAULT_MODULUS + 2)
    assert DEFAULT_FIELD.is_default


def test_field_scalar_ops():
    f = PrimeField(101)
    assert f.add(100, 5) == 4
    assert f.sub(3, 5) == 99
    assert f.mul(50, 50) == 2500 % 101
    assert f.mul(f.inv(7), 7) == 1
    assert f.neg(1) == 100
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


def test_mulmod_kernel_against_bigint():
    rng = np.random.default_rng(7)
    a = rng.integers(0, P, size=500, dtype=np.uint64)
    b = rng.integers(0, P, size=500, dtype=np.uint64)
    expected = (a.astype(object) * b.astype(object)) % P
    assert (_mulmod_np(a, b).astype(object) == expected).all()
    # boundary values
    edge = np.array([0, 1, P - 1, P - 2], dtype=np.uint64)
    for x in edge:
        for y in edge:
            got = _mulmod_np(np.array([x]), np.array([y]))[0]
            assert int(got) == int(x) * int(y) % P


def test_field_rank_trivial_cases():
    zero = FieldMatrix(DEFAULT_FIELD, np.zeros((3, 4), dtype=np.uint64))
    assert field_rank(zero) == 0
    eye = FieldMatrix(DEFAULT_FIELD, np.eye(5, dtype=np.uint64))
    assert field_rank(eye) == 5


def test_field_rank_repeated_row():
    # hand elimination: row3 - row1 = 0, rows 1 and 2 independent
    data = np.array([[1, 2, 3], [4, 5, 6], [1, 2, 3]], dtype=np.uint64)
    m = FieldMatrix(DEFAULT_FIELD, data)
    assert field_rank(m) == 2
    assert (m.data == data).all()  # input not mutated


def test_field_rank_kernel_matches_python_reference():
    rng = np.random.default_rng(11)
    for trial in range(25):
        n = int(rng.integers(2, 10))
        m = int(rng.integers(2, 10))
        data = rng.integers(0, P, size=(n, m), dtype=np.uint64)
        if trial % 3 == 0 and n >= 3:
            data[-1] = data[0]
        if trial % 4 == 0:
            data[:, -1] = 0
        fast = field_rank(FieldMatrix(DEFAULT_FIELD, data))
        ref = _rank_py(data.astype(object).tolist(), P)
        assert fast == ref


def test_field_rank_small_modulus_path():
    f = PrimeField(101)
    data = np.array([[1, 2], [2, 4]], dtype=np.uint64)
    assert field_rank(FieldMatrix(f, data)) == 1
    data2 = np.array([[1, 2], [2, 5]], dtype=np.uint64)
    assert field_rank(FieldMatrix(f, data2)) == 2


def _det_cofactor(m, p):
    # independent oracle: recursive cofactor expansion
    n = len(m)
    if n == 1:
        return m[0][0] % p
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        sign = 1 if j % 2 == 0 else -1
        total += sign * m[0][j] * _det_cofactor(minor, p)
    return total % p


def test_det_py_matches_cofactor_expansion():
    rng = np.random.default_rng(3)
    for p in (101, P):
        for _ in range(10):
            n = int(rng.integers(1, 5))
            m = [[int(rng.integers(0, min(p, 1000)))
                  for _ in range(n)] for _ in range(n)]
            assert det_py(m, p) == _det_cofactor(m, p)


def test_det_adj_identity():
    # M * adj(M) must equal det(M) * I, including singular matrices
    rng = np.random.default_rng(5)
    for p in (101, P):
        for trial in range(12):
            n = int(rng.integers(2, 6))
            m = [[int(rng.integers(0, p)) for _ in range(n)] for _ in range(n)]
            if trial % 3 == 0:
                m[-1] = m[0][:]  # force singular
            det, adj = det_adj_py(m, p)
            assert det == det_py(m, p)
            for i in range(n):
                for j in range(n):
                    got = sum(m[i][t] * adj[t][j] for t in range(n)) % p
                    assert got == (det if i == j else 0)


def test_batch_det_adj_matches_python():
    rng = np.random.default_rng(9)
    for r in (2, 3, 5, 7):
        mats = rng.integers(0, P, size=(6, r, r), dtype=np.uint64)
        mats[0, -1] = mats[0, 0]  # singular member
        dets, adjs = batch_det_adj(mats, DEFAULT_FIELD)
        for i in range(mats.shape[0]):
            det_ref, adj_ref = det_adj_py(mats[i].tolist(), P)
            assert int(dets[i]) == det_ref
            assert adjs[i].astype(object).tolist() == adj_ref


def test_solve_py():
    p = 101
    a = [[2, 1], [1, 3]]
    rhs = [[5, 1], [10, 0]]
    x = solve_py(a, rhs, p)
    for i in range(2):
        for j in range(2):
            got = sum(a[i][t] * x[t][j] for t in range(2)) % p
            assert got == rhs[i][j] % p
    with pytest.raises(ZeroDivisionError):
        solve_py([[1, 1], [2, 2]], [[1], [1]], p)


def test_field_det_wrapper():
    m = FieldMatrix(DEFAULT_FIELD, np.array([[2, 0], [0, 3]], dtype=np.uint64))
    assert field_det(m) == 6
    with pytest.raises(ValueError):
        field_det(FieldMatrix(DEFAULT_FIELD, np.zeros((2, 3), dtype=np.uint64)))
