"""Hot numeric kernels, jit-compiled when numba is available.

Three inner loops dominate the numeric work: the edit-distance dynamic
program, the continued fraction inside the regularized incomplete beta
function, and the combination walk behind the exact rank-test tail count.
Each is written in numba-compatible numpy and decorated through the shim in
``_accel``; with FINGERTAP_NO_NUMBA set the identical source runs
interpreted. ``*_py`` names keep undecorated references for parity tests and
benchmarks.
"""

import math

import numpy as np

from ._accel import NUMBA_ENABLED, njit

__all__ = [
    "NUMBA_ENABLED",
    "levenshtein_codes",
    "levenshtein_codes_py",
    "beta_cont_fraction",
    "reg_inc_beta",
    "mann_whitney_tail_count",
    "mann_whitney_tail_count_py",
]


def _levenshtein(a, b):
    # Two-row dynamic program, unit insert/delete/substitute costs.
    n = a.shape[0]
    m = b.shape[0]
    if n == 0:
        return m
    if m == 0:
        return n
    prev = np.arange(m + 1, dtype=np.int64)
    curr = np.zeros(m + 1, dtype=np.int64)
    for i in range(1, n + 1):
        curr[0] = i
        ai = a[i - 1]
        for j in range(1, m + 1):
            cost = 0 if ai == b[j - 1] else 1
            best = prev[j] + 1
            if curr[j - 1] + 1 < best:
                best = curr[j - 1] + 1
            if prev[j - 1] + cost < best:
                best = prev[j - 1] + cost
            curr[j] = best
        prev, curr = curr, prev
    return int(prev[m])


def _beta_cont_fraction(a, b, x):
    # Modified Lentz evaluation of the continued fraction in I_x(a, b).
    # Returns nan on non-convergence; callers turn that into an error.
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-15:
            return h
    return math.nan


beta_cont_fraction = njit(cache=True)(_beta_cont_fraction)


def _reg_inc_beta(x, a, b):
    # I_x(a, b) with the symmetry switch at x > (a+1)/(a+b+2), so the
    # continued fraction always converges fast.
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log(1.0 - x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * beta_cont_fraction(a, b, x) / a
    return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b


def _mann_whitney_tail_count(midranks, na, u_obs):
    # Walks every C(n, na) index subset in lexicographic order and counts
    # assignments whose min-side U does not exceed u_obs. Midranks are
    # multiples of 0.5, so U values are exact in binary; the epsilon only
    # guards the accumulated sum.
    n = midranks.shape[0]
    nb = n - na
    base = na * (na + 1) / 2.0
    total_u = float(na * nb)
    idx = np.empty(na, dtype=np.int64)
    for i in range(na):
        idx[i] = i
    count = 0
    eps = 1e-9
    while True:
        s = 0.0
        for i in range(na):
            s += midranks[idx[i]]
        ua = s - base
        ub = total_u - ua
        u = ua if ua < ub else ub
        if u <= u_obs + eps:
            count += 1
        i = na - 1
        while i >= 0 and idx[i] == i + nb:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, na):
            idx[j] = idx[j - 1] + 1
    return count


levenshtein_codes_py = _levenshtein
mann_whitney_tail_count_py = _mann_whitney_tail_count

levenshtein_codes = njit(cache=True)(_levenshtein)
reg_inc_beta = njit(cache=True)(_reg_inc_beta)
mann_whitney_tail_count = njit(cache=True)(_mann_whitney_tail_count)
