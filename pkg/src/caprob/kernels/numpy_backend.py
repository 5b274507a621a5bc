"""Pure-numpy implementations of the hot kernels.

Semantics are bit-identical to the compiled backend in ``_native.pyx``:
both digitize with ``floor((x - lo) * (k / (hi - lo)))`` clipped into
``[0, k-1]``, and both count max-norm neighbours with strict inequality.
All floating-point reductions live in the callers, so backend choice can
never change an estimate.
"""

import numpy as np


def _bin_indices(x, lo, hi, k):
    if hi <= lo:
        return np.zeros(x.shape[0], dtype=np.int64)
    scale = k / (hi - lo)
    idx = np.floor((x - lo) * scale).astype(np.int64)
    return np.clip(idx, 0, k - 1)


def hist2d(u, v, lo_u, hi_u, lo_v, hi_v, k_u, k_v):
    """Joint counts of (u, v) on a uniform k_u x k_v grid."""
    iu = _bin_indices(u, lo_u, hi_u, k_u)
    iv = _bin_indices(v, lo_v, hi_v, k_v)
    flat = np.bincount(iu * k_v + iv, minlength=k_u * k_v)
    return flat.reshape(k_u, k_v).astype(np.int64)


def hist1d(u, lo, hi, k):
    """Counts of u on a uniform k-bin grid."""
    iu = _bin_indices(u, lo, hi, k)
    return np.bincount(iu, minlength=k).astype(np.int64)


def _row_chunks(n, d):
    # keep the (chunk, n) distance block under ~256 MB
    per_row = n * max(d, 1) * 8
    return max(1, min(n, int(2.5e8 // per_row) or 1))


def chebyshev_kth_radius(data, k):
    """Max-norm distance from each row to its k-th nearest other row."""
    data = np.ascontiguousarray(data, dtype=np.float64)
    n = data.shape[0]
    out = np.empty(n, dtype=np.float64)
    chunk = _row_chunks(n, data.shape[1])
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        diff = np.abs(data[start:stop, None, :] - data[None, :, :])
        dist = diff.max(axis=2)
        # self-distance 0 occupies rank 0, so the k-th neighbour sits at index k
        out[start:stop] = np.partition(dist, k, axis=1)[:, k]
    return out


def chebyshev_count_within(data, radii):
    """Count rows j != i with max-norm distance strictly below radii[i]."""
    data = np.ascontiguousarray(data, dtype=np.float64)
    radii = np.asarray(radii, dtype=np.float64)
    n = data.shape[0]
    out = np.empty(n, dtype=np.int64)
    chunk = _row_chunks(n, data.shape[1])
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        diff = np.abs(data[start:stop, None, :] - data[None, :, :])
        dist = diff.max(axis=2)
        within = (dist < radii[start:stop, None]).sum(axis=1)
        out[start:stop] = within - (radii[start:stop] > 0)
    return out
