import os
import subprocess
import sys

import numpy as np
import pytest

from extkit import _kernels as K
from extkit.fgab import FgGroup
from extkit.oracle import _cayley

needs_numba = pytest.mark.skipif(not hasattr(K, "table_laws_nb"), reason="numba unavailable")


def cayley(orders):
    return np.asarray(_cayley(FgGroup.from_orders(orders)), dtype=np.int64)


def test_table_laws_numpy():
    assert K.table_laws_np(cayley([4, 2])) == (True, True)
    bad = cayley([3]).copy()
    bad[1, 2], bad[2, 1] = 1, 0
    assert K.table_laws_np(bad) != (True, True)


@needs_numba
@pytest.mark.parametrize("orders", [[2], [6], [2, 2], [2, 4], [3, 3]])
def test_table_laws_agree(orders):
    add = cayley(orders)
    assert tuple(K.table_laws_nb(add)) == tuple(K.table_laws_np(add))
    skew = add.copy()
    skew[0, 1] = skew[0, 0]
    assert tuple(bool(x) for x in K.table_laws_nb(skew)) == tuple(K.table_laws_np(skew))


@needs_numba
def test_local_valuations_agree():
    rng = np.random.default_rng(0)
    for p, e, n in ((2, 5, 6), (3, 3, 8), (5, 2, 4)):
        for _ in range(20):
            m = rng.integers(0, p**e, (n, n)).astype(np.int64)
            m[:, 0] *= p
            assert list(K.local_valuations_nb(m, p, e)) == list(K.local_valuations_np(m, p, e))


@needs_numba
def test_cocycle_ok_agree():
    addc, adda = cayley([4]), cayley([2])
    rng = np.random.default_rng(1)
    for _ in range(50):
        c = rng.integers(0, 2, (4, 4)).astype(np.int64)
        c = np.triu(c) + np.triu(c, 1).T
        c[0, :] = c[:, 0] = 0
        assert bool(K.cocycle_ok_nb(addc, adda, c)) == bool(K.cocycle_ok_np(addc, adda, c))


def test_env_flag_disables_numba():
    env = dict(os.environ, EXTKIT_NO_NUMBA="1")
    code = "from extkit import _kernels as K; print(K.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "False"


def test_fallback_path_gives_same_ext():
    env = dict(os.environ, EXTKIT_NO_NUMBA="1")
    code = (
        "from extkit.oracle import ext_by_counting, groups_up_to;"
        "from extkit.fgab.homext import ext_fg;"
        "gs = groups_up_to(8);"
        "print(all(ext_by_counting(g, h) == ext_fg(g, h) for g in gs for h in gs))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "True", out.stderr
