"""Hypothesis tests for method comparisons, built from first principles.

Shapiro-Wilk W over the published small-sample coefficient tables (n <= 20)
screens for normality; a one-way ANOVA compares means of normal samples with
p-values from the F distribution via the regularized incomplete beta; the
Mann-Whitney U test covers the non-normal case, with the exact two-sided
p-value obtained by enumerating rank assignments whenever that enumeration
is desk-scale, and a tie-corrected normal approximation otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from .kernels import mann_whitney_tail_count, reg_inc_beta

EXACT_ENUMERATION_LIMIT = 200_000

# Half-sample weight tables for W, n = 3..20. Row n holds a_{n}, a_{n-1}, ...
# down to the middle of the ordered sample (odd n leaves the median
# unweighted). Rows satisfy 2 * sum(a^2) ~= 1 up to table rounding.
SHAPIRO_COEFFS: dict[int, tuple[float, ...]] = {
    3: (0.7071,),
    4: (0.6872, 0.1677),
    5: (0.6646, 0.2413),
    6: (0.6431, 0.2806, 0.0875),
    7: (0.6233, 0.3031, 0.1401),
    8: (0.6052, 0.3164, 0.1743, 0.0561),
    9: (0.5888, 0.3244, 0.1976, 0.0947),
    10: (0.5739, 0.3291, 0.2141, 0.1224, 0.0399),
    11: (0.5601, 0.3315, 0.2260, 0.1429, 0.0695),
    12: (0.5475, 0.3325, 0.2347, 0.1586, 0.0922, 0.0303),
    13: (0.5359, 0.3325, 0.2412, 0.1707, 0.1099, 0.0539),
    14: (0.5251, 0.3318, 0.2460, 0.1802, 0.1240, 0.0727, 0.0240),
    15: (0.5150, 0.3306, 0.2495, 0.1878, 0.1353, 0.0880, 0.0433),
    16: (0.5056, 0.3290, 0.2521, 0.1939, 0.1447, 0.1005, 0.0593, 0.0196),
    17: (0.4968, 0.3273, 0.2540, 0.1988, 0.1524, 0.1109, 0.0725, 0.0359),
    18: (0.4886, 0.3253, 0.2553, 0.2027, 0.1587, 0.1197, 0.0837, 0.0496, 0.0163),
    19: (0.4808, 0.3232, 0.2561, 0.2059, 0.1641, 0.1271, 0.0932, 0.0612, 0.0303),
    20: (0.4734, 0.3211, 0.2565, 0.2085, 0.1686, 0.1334, 0.1013, 0.0711, 0.0422, 0.0140),
}


@dataclass(frozen=True, slots=True)
class TestResult:
    statistic: str
    value: float
    df: tuple[int, int] | None = None
    p_value: float | None = None
    method: str = "exact"

    def to_json_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "value": self.value,
            "df": list(self.df) if self.df is not None else None,
            "p_value": self.p_value,
            "method": self.method,
        }


def regularized_incomplete_beta(x: float, a: float, b: float) -> float:
    """I_x(a, b) for x in [0, 1], a > 0, b > 0, to ~1e-10 absolute accuracy."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")
    if a <= 0 or b <= 0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    v = reg_inc_beta(float(x), float(a), float(b))
    if math.isnan(v):
        raise ValueError(f"continued fraction did not converge for x={x}, a={a}, b={b}")
    return min(1.0, max(0.0, v))


def shapiro_wilk(sample) -> TestResult:
    """W statistic from the published coefficient tables (3 <= n <= 20)."""
    x = np.sort(np.asarray(sample, dtype=float))
    n = x.size
    if not 3 <= n <= 20:
        raise ValueError(f"sample size {n} outside the tabulated range 3..20")
    ss = float(np.sum((x - x.mean()) ** 2))
    if ss == 0.0:
        raise ValueError("zero-variance sample")
    coeffs = SHAPIRO_COEFFS[n]
    b = sum(a * (x[n - 1 - i] - x[i]) for i, a in enumerate(coeffs))
    w = min(1.0, b * b / ss)
    return TestResult(statistic="W", value=w, method="exact")


def anova_oneway(groups) -> TestResult:
    """One-way fixed-effects F test across k >= 2 groups."""
    arrays = [np.asarray(g, dtype=float) for g in groups]
    if len(arrays) < 2:
        raise ValueError("need at least two groups")
    for g in arrays:
        if g.size < 2:
            raise ValueError("every group needs at least two observations")
    n_total = sum(g.size for g in arrays)
    k = len(arrays)
    grand = sum(float(g.sum()) for g in arrays) / n_total
    ssb = sum(g.size * (float(g.mean()) - grand) ** 2 for g in arrays)
    ssw = sum(float(np.sum((g - g.mean()) ** 2)) for g in arrays)
    df = (k - 1, n_total - k)
    if ssw == 0.0:
        if ssb == 0.0:
            raise ValueError("zero variance everywhere; F is undefined")
        raise ValueError("zero within-group variance with nonzero between-group variance")
    f = (ssb / df[0]) / (ssw / df[1])
    # P(F > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2); evaluated on the small tail
    # side so no cancellation against 1.0 occurs.
    p = regularized_incomplete_beta(df[1] / (df[1] + df[0] * f), df[1] / 2.0, df[0] / 2.0)
    return TestResult(statistic="F", value=f, df=df, p_value=p, method="exact")


def _midranks(pooled: np.ndarray) -> np.ndarray:
    """Midranks of the pooled sample (average rank within tie groups)."""
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size, dtype=float)
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def _u_statistics(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    ua = 0.0
    for x in a:
        for y in b:
            if x > y:
                ua += 1.0
            elif x == y:
                ua += 0.5
    return ua, a.size * b.size - ua


def mann_whitney(a, b) -> TestResult:
    """Two-sided Mann-Whitney U; exact by enumeration when feasible."""
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    if xa.size == 0 or xb.size == 0:
        raise ValueError("both samples must be non-empty")
    ua, ub = _u_statistics(xa, xb)
    u = min(ua, ub)
    na, nb = int(xa.size), int(xb.size)
    n = na + nb
    pooled = np.concatenate([xa, xb])

    if comb(n, na) <= EXACT_ENUMERATION_LIMIT:
        ranks = _midranks(pooled)
        hits = int(mann_whitney_tail_count(ranks, na, float(u)))
        p = hits / comb(n, na)
        return TestResult(statistic="U", value=u, p_value=p, method="exact")

    mu = na * nb / 2.0
    _, counts = np.unique(pooled, return_counts=True)
    tie_term = float(np.sum(counts**3 - counts)) / (n * (n - 1))
    var = na * nb / 12.0 * ((n + 1) - tie_term)
    if var <= 0:
        return TestResult(statistic="U", value=u, p_value=1.0, method="approximate")
    z = (u - mu + 0.5) / math.sqrt(var)
    p = min(1.0, 2.0 * 0.5 * math.erfc(-z / math.sqrt(2.0)))
    return TestResult(statistic="U", value=u, p_value=p, method="approximate")
