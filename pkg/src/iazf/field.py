"""Exact arithmetic and linear algebra over a large prime field.

The default modulus is the Mersenne prime 2^61 - 1, small enough for uint64
storage and fast enough (via numba kernels) for rank computations on the
largest Jacobians in scope. Any other prime up to 2^61 - 1 runs through the
pure-Python path, which also serves as the reference implementation the
kernels are tested against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numba import njit, uint64

DEFAULT_MODULUS = (1 << 61) - 1

_M61 = uint64(DEFAULT_MODULUS)
_MASK32 = uint64(0xFFFFFFFF)
_MASK29 = uint64(0x1FFFFFFF)


def _is_prime(n: int) -> bool:
    # deterministic Miller-Rabin, valid for all n < 3.3e24
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    modulus: int = DEFAULT_MODULUS

    def __post_init__(self) -> None:
        if self.modulus > DEFAULT_MODULUS:
            raise ValueError(f"modulus must be at most 2^61 - 1, got {self.modulus}")
        if not _is_prime(self.modulus):
            raise ValueError(f"modulus must be prime, got {self.modulus}")

    @property
    def is_default(self) -> bool:
        return self.modulus == DEFAULT_MODULUS

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def neg(self, a: int) -> int:
        return -a % self.modulus

    def inv(self, a: int) -> int:
        if a % self.modulus == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return pow(a, -1, self.modulus)


DEFAULT_FIELD = PrimeField()


@dataclass
class FieldMatrix:
    """Dense matrix over a prime field with optional row/column labels."""

    field: PrimeField
    data: np.ndarray
    row_labels: tuple = ()
    col_labels: tuple = ()

    def __post_init__(self) -> None:
        self.data = np.ascontiguousarray(self.data, dtype=np.uint64)
        if self.data.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        if self.row_labels and len(self.row_labels) != self.data.shape[0]:
            raise ValueError("row label count does not match row count")
        if self.col_labels and len(self.col_labels) != self.data.shape[1]:
            raise ValueError("column label count does not match column count")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]


# ---------------------------------------------------------------------------
# numba kernels, specialized to the Mersenne modulus 2^61 - 1
# ---------------------------------------------------------------------------

@njit(cache=True, inline="always")
def _mulmod61(a, b):
    ah = a >> uint64(32)
    al = a & _MASK32
    bh = b >> uint64(32)
    bl = b & _MASK32
    hi = ah * bh
    mid = ah * bl + al * bh
    lo = al * bl
    # a*b = hi*2^64 + mid*2^32 + lo, folded with 2^61 = 1 (mod p)
    res = (
        (hi << uint64(3))
        + (mid >> uint64(29))
        + ((mid & _MASK29) << uint64(32))
        + (lo >> uint64(61))
        + (lo & _M61)
    )
    res = (res >> uint64(61)) + (res & _M61)
    res = (res >> uint64(61)) + (res & _M61)
    if res >= _M61:
        res -= _M61
    return res


@njit(cache=True, inline="always")
def _submod61(a, b):
    if a >= b:
        return a - b
    return a + _M61 - b


@njit(cache=True, inline="always")
def _addmod61(a, b):
    s = a + b
    if s >= _M61:
        s -= _M61
    return s


@njit(cache=True)
def _powmod61(a, e):
    result = uint64(1)
    base = a
    while e > uint64(0):
        if e & uint64(1):
            result = _mulmod61(result, base)
        base = _mulmod61(base, base)
        e >>= uint64(1)
    return result


@njit(cache=True)
def _rank61(a):
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for i in range(rank, rows):
            if a[i, c] != uint64(0):
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            for j in range(c, cols):
                t = a[rank, j]
                a[rank, j] = a[piv, j]
                a[piv, j] = t
        inv = _powmod61(a[rank, c], _M61 - uint64(2))
        for j in range(c, cols):
            a[rank, j] = _mulmod61(a[rank, j], inv)
        for i in range(rank + 1, rows):
            f = a[i, c]
            if f != uint64(0):
                a[i, c] = uint64(0)
                for j in range(c + 1, cols):
                    v = a[rank, j]
                    if v != uint64(0):
                        a[i, j] = _submod61(a[i, j], _mulmod61(f, v))
        rank += 1
    return rank


@njit(cache=True)
def _batch_det_adj61(mats, dets, adjs):
    # Faddeev-LeVerrier: division-free up to scalar 1/k, valid for singular input
    n, r, _ = mats.shape
    invk = np.empty(r + 1, dtype=np.uint64)
    for k in range(1, r + 1):
        invk[k] = _powmod61(uint64(k), _M61 - uint64(2))
    a = np.empty((r, r), dtype=np.uint64)
    b = np.empty((r, r), dtype=np.uint64)
    for idx in range(n):
        m = mats[idx]
        for i in range(r):
            for j in range(r):
                a[i, j] = m[i, j]
        tr = uint64(0)
        for i in range(r):
            tr = _addmod61(tr, a[i, i])
        c = _submod61(uint64(0), tr)  # c_1 = -tr(M)
        for k in range(2, r + 1):
            for i in range(r):
                for j in range(r):
                    b[i, j] = a[i, j]
                b[i, i] = _addmod61(b[i, i], c)
            for i in range(r):
                for j in range(r):
                    acc = uint64(0)
                    for t in range(r):
                        acc = _addmod61(acc, _mulmod61(m[i, t], b[t, j]))
                    a[i, j] = acc
            tr = uint64(0)
            for i in range(r):
                tr = _addmod61(tr, a[i, i])
            c = _mulmod61(_submod61(uint64(0), tr), invk[k])
        # here b = A_{r-1} + c_{r-1} I and c = c_r
        if r % 2 == 0:
            dets[idx] = c
            for i in range(r):
                for j in range(r):
                    adjs[idx, i, j] = _submod61(uint64(0), b[i, j])
        else:
            dets[idx] = _submod61(uint64(0), c)
            for i in range(r):
                for j in range(r):
                    adjs[idx, i, j] = b[i, j]


def _mulmod_np(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized multiply mod 2^61 - 1 on uint64 arrays."""
    p = np.uint64(DEFAULT_MODULUS)
    ah = a >> np.uint64(32)
    al = a & np.uint64(0xFFFFFFFF)
    bh = b >> np.uint64(32)
    bl = b & np.uint64(0xFFFFFFFF)
    hi = ah * bh
    mid = ah * bl + al * bh
    lo = al * bl
    res = (
        (hi << np.uint64(3))
        + (mid >> np.uint64(29))
        + ((mid & np.uint64(0x1FFFFFFF)) << np.uint64(32))
        + (lo >> np.uint64(61))
        + (lo & p)
    )
    res = (res >> np.uint64(61)) + (res & p)
    res = (res >> np.uint64(61)) + (res & p)
    return np.where(res >= p, res - p, res)


# ---------------------------------------------------------------------------
# pure-Python reference implementations (any modulus)
# ---------------------------------------------------------------------------

def _rank_py(rows: list[list[int]], p: int) -> int:
    rows = [[v % p for v in row] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(rank + 1, nrows):
            f = rows[i][c]
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def det_py(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Determinant of a square matrix over GF(p) by elimination."""
    rows = [[v % p for v in row] for row in matrix]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant requires a square matrix")
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det % p
        det = det * rows[c][c] % p
        inv = pow(rows[c][c], -1, p)
        for i in range(c + 1, n):
            f = rows[i][c] * inv % p
            if f:
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[c])]
    return det


def det_adj_py(matrix: Sequence[Sequence[int]], p: int) -> tuple[int, list[list[int]]]:
    """(det, adjugate) over GF(p) via Faddeev-LeVerrier; works for singular input."""
    m = [[v % p for v in row] for row in matrix]
    r = len(m)
    if r == 1:
        return m[0][0], [[1]]
    a = [row[:] for row in m]
    c = -sum(a[i][i] for i in range(r)) % p
    b = a
    for k in range(2, r + 1):
        b = [row[:] for row in a]
        for i in range(r):
            b[i][i] = (b[i][i] + c) % p
        a = [
            [sum(m[i][t] * b[t][j] for t in range(r)) % p for j in range(r)]
            for i in range(r)
        ]
        c = -sum(a[i][i] for i in range(r)) * pow(k, -1, p) % p
    sign = 1 if r % 2 == 0 else -1
    det = sign * c % p
    adj = [[(-sign * v) % p for v in row] for row in b]
    return det, adj


def solve_py(a: Sequence[Sequence[int]], rhs: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Solve A X = B over GF(p) for square nonsingular A."""
    n = len(a)
    width = len(rhs[0])
    aug = [[v % p for v in row_a] + [v % p for v in row_b] for row_a, row_b in zip(a, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, p)
        aug[c] = [v * inv % p for v in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(u - f * v) % p for u, v in zip(aug[i], aug[c])]
    return [row[n:n + width] for row in aug]


# ---------------------------------------------------------------------------
# dispatching entry points
# ---------------------------------------------------------------------------

def field_rank(m: FieldMatrix) -> int:
    """Row rank over the prime field; the input matrix is not modified."""
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.is_default:
        return int(_rank61(m.data.copy()))
    return _rank_py(m.data.astype(object).tolist(), m.field.modulus)


def field_det(m: FieldMatrix) -> int:
    if m.rows != m.cols:
        raise ValueError("determinant requires a square matrix")
    return det_py(m.data.astype(object).tolist(), m.field.modulus)


def batch_det_adj(mats: np.ndarray, fld: PrimeField) -> tuple[np.ndarray, np.ndarray]:
    """Determinants and adjugates of a (N, r, r) stack of field matrices."""
    mats = np.ascontiguousarray(mats, dtype=np.uint64)
    n, r, _ = mats.shape
    dets = np.zeros(n, dtype=np.uint64)
    adjs = np.zeros((n, r, r), dtype=np.uint64)
    if n == 0:
        return dets, adjs
    if fld.is_default:
        _batch_det_adj61(mats, dets, adjs)
    else:
        for i in range(n):
            d, adj = det_adj_py(mats[i].tolist(), fld.modulus)
            dets[i] = d
            adjs[i] = np.array(adj, dtype=np.uint64)
    return dets, adjs
