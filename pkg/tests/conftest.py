import numpy as np
import pytest

from iazf.field import DEFAULT_FIELD, FieldMatrix, batch_det_adj, field_rank


@pytest.fixture(scope="session", autouse=True)
def warm_field_kernels():
    # trigger numba compilation once so timed checks measure the math,
    # not the JIT
    data = np.arange(1, 13, dtype=np.uint64).reshape(3, 4)
    field_rank(FieldMatrix(DEFAULT_FIELD, data))
    batch_det_adj(np.ones((1, 2, 2), dtype=np.uint64), DEFAULT_FIELD)
