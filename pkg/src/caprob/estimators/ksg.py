"""Kraskov k-nearest-neighbour MI estimator (algorithm 1, max-norm).

    I(U;V) ~= psi(k) + psi(n) - < psi(n_u + 1) + psi(n_v + 1) >

where n_u, n_v count marginal neighbours strictly inside the joint k-th
neighbour radius. Values are reported unclamped: negative estimates are
informative (they flag the small-sample noise floor).
"""

import numpy as np
from scipy.special import digamma

from .. import kernels
from ..errors import LengthMismatch, TooFewSamples
from .common import MIEstimate


def _as_matrix(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return np.ascontiguousarray(x)


def ksg_mi(u, v, k=5):
    """KSG estimate of I(U;V) in nats.

    Ties are broken by strict-inequality counting: marginal neighbours at
    exactly the joint radius are excluded, matching the original
    algorithm-1 convention.
    """
    u = _as_matrix(u)
    v = _as_matrix(v)
    if u.shape[0] != v.shape[0]:
        raise LengthMismatch(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    n = u.shape[0]
    if k < 1 or n <= k:
        raise TooFewSamples(f"KSG needs n > k >= 1, got n={n}, k={k}")
    joint = np.ascontiguousarray(np.hstack([u, v]))
    radii = kernels.chebyshev_kth_radius(joint, k)
    n_u = kernels.chebyshev_count_within(u, radii)
    n_v = kernels.chebyshev_count_within(v, radii)
    value = float(
        digamma(k) + digamma(n) - np.mean(digamma(n_u + 1) + digamma(n_v + 1))
    )
    return MIEstimate(
        value=value,
        estimator="ksg",
        diagnostics={
            "k": k,
            "mean_n_u": float(np.mean(n_u)),
            "mean_n_v": float(np.mean(n_v)),
            "zero_radius_points": int(np.count_nonzero(radii == 0.0)),
        },
    )
