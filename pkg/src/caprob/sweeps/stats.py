"""Group statistics: one-sided t-test and Holm step-down adjustment."""

import math

import numpy as np
from scipy import stats as sps


def one_sided_t(samples, null=0.0):
    """One-sided t-test (alternative: mean > null) with n-1 dof.

    Degenerate variance (all samples equal) is reported as p = 0 when the
    mean exceeds the null and p = 1 otherwise, with an infinite statistic.
    """
    x = np.asarray(samples, dtype=np.float64)
    if x.size < 2:
        raise ValueError("t-test needs at least 2 samples")
    mean = float(x.mean())
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        if mean > null:
            return math.inf, 0.0
        return -math.inf if mean < null else 0.0, 1.0
    t = (mean - null) / (sd / math.sqrt(x.size))
    p = float(sps.t.sf(t, df=x.size - 1))
    return float(t), p


def holm_bonferroni(p_values):
    """Step-down Holm adjustment; order-preserving and >= raw elementwise."""
    p = np.asarray(p_values, dtype=np.float64)
    if p.size == 0:
        raise ValueError("p_values must be non-empty")
    m = p.size
    order = np.argsort(p, kind="stable")
    adjusted = np.empty(m, dtype=np.float64)
    running_max = 0.0
    for rank, idx in enumerate(order):
        value = min(1.0, (m - rank) * p[idx])
        running_max = max(running_max, value)
        adjusted[idx] = running_max
    return adjusted
