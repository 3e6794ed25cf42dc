import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from logalg import _accel

needs_numba = pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not available")

int_mats = st.integers(1, 6).flatmap(lambda r: st.integers(1, 6).flatmap(lambda c: arrays(np.int64, (r, c), elements=st.integers(0, 12))))


@needs_numba
@settings(max_examples=60, deadline=None)
@given(int_mats, st.sampled_from([2, 3, 5, 7, 101]))
def test_rank_mod_p_paths_agree(M, p):
    assert _accel._rank_mod_p_np(M.copy(), p) == _accel._rank_mod_p_nb(M.copy(), np.int64(p))


@needs_numba
@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=4), st.integers(1, 4))
def test_box_and_minimal_paths_agree(row, bound):
    A = np.array([row], dtype=np.int64)
    a, b = _accel._box_solutions_np(A, bound), _accel._box_solutions_nb(A, bound)
    assert np.array_equal(a, b)
    assert np.array_equal(_accel._minimal_nonzero_np(a), _accel._minimal_nonzero_nb(a))


@needs_numba
@settings(max_examples=40, deadline=None)
@given(arrays(np.int64, (20, 3), elements=st.integers(0, 4)), arrays(np.int64, (5, 3), elements=st.integers(0, 4)))
def test_dominated_paths_agree(cands, basis):
    assert np.array_equal(_accel._dominated_np(cands, basis), _accel._dominated_nb(cands, basis))


@needs_numba
@pytest.mark.parametrize("n, k", [(2, 1), (3, 2), (4, 3)])
def test_bar_boundary_paths_agree(n, k):
    i = np.arange(n, dtype=np.int64)
    T = (i[:, None] + i[None, :]) % n
    assert np.array_equal(_accel._bar_boundary_np(T, k), _accel._bar_boundary_nb(T, k))


def test_bfs_class_contains_start():
    cls = _accel.bfs_class([2, 0], [[2, 0]], [[0, 2]], 4)
    rows = {tuple(r) for r in cls}
    assert rows == {(2, 0), (0, 2)}


def test_environment_switch_selects_numpy():
    code = "from logalg import _accel; from logalg.corpus import verify_corpus; print(_accel.backend(), verify_corpus('group-completion').ok)"
    env = dict(os.environ, LOGALG_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.split()
    assert out == ["numpy", "True"]
