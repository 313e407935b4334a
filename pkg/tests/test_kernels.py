import os
import subprocess
import sys

import numpy as np
import pytest

from fingertap import kernels


def _codes(s):
    return np.array([ord(c) for c in s], dtype=np.int32)


def test_jit_and_pure_levenshtein_agree():
    rng = np.random.default_rng(12)
    for _ in range(50):
        a = "".join(rng.choice(list("abcd"), rng.integers(0, 12)))
        b = "".join(rng.choice(list("abcd"), rng.integers(0, 12)))
        assert kernels.levenshtein_codes(_codes(a), _codes(b)) == kernels.levenshtein_codes_py(
            _codes(a), _codes(b)
        )


def test_jit_and_pure_tail_count_agree():
    rng = np.random.default_rng(9)
    for _ in range(20):
        na = int(rng.integers(1, 5))
        nb = int(rng.integers(1, 5))
        pooled = rng.integers(0, 6, na + nb).astype(float)
        order = np.argsort(pooled, kind="stable")
        ranks = np.empty_like(pooled)
        # simple midranks for the check
        i = 0
        while i < pooled.size:
            j = i
            while j + 1 < pooled.size and pooled[order[j + 1]] == pooled[order[i]]:
                j += 1
            ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
            i = j + 1
        for u_obs in (0.0, 1.5, float(na * nb) / 2):
            assert kernels.mann_whitney_tail_count(ranks, na, u_obs) == kernels.mann_whitney_tail_count_py(
                ranks, na, u_obs
            )


def test_env_flag_selects_pure_path():
    code = (
        "import fingertap.kernels as k; import numpy as np;"
        "print(k.NUMBA_ENABLED, k.levenshtein_codes(np.array([97,98],dtype=np.int32), np.array([97],dtype=np.int32)))"
    )
    env = dict(os.environ, FINGERTAP_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode == 0, out.stderr
    assert out.stdout.split() == ["False", "1"]


@pytest.mark.skipif(not kernels.NUMBA_ENABLED, reason="numba not active in this run")
def test_jit_path_active_by_default():
    assert hasattr(kernels.levenshtein_codes, "py_func")


def test_beta_kernel_edge_values():
    assert kernels.reg_inc_beta(0.0, 2.0, 2.0) == 0.0
    assert kernels.reg_inc_beta(1.0, 2.0, 2.0) == 1.0
    assert kernels.reg_inc_beta(0.5, 1.0, 1.0) == pytest.approx(0.5, abs=1e-14)
