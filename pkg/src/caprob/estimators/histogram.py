"""Plug-in histogram MI and entropy with Miller-Madow bias correction.

The 2-d estimator uses K uniform bins per variable. Each variable is
binned over its own per-sample min-max range (or fixed bounds), so the
same variable always gets the same quantizer: self-MI then equals the
binned entropy exactly, and the shared-quantizer inequality
rob_disc <= cap_sc holds structurally.

The Miller-Madow correction adds ((m_u - 1) + (m_v - 1) - (m_uv - 1)) / (2n)
to the plug-in MI, where m counts non-empty bins.
"""

import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..errors import LengthMismatch, TooFewSamples
from .common import MIEstimate


@dataclass(frozen=True)
class HistogramSpec:
    """Binning policy: K bins, range choice, bias correction, clamping."""

    bins_k: int = 16
    bounds: tuple = None  # (lo, hi) fixed for both variables; None = per-sample
    miller_madow: bool = True
    clamp_nonneg: bool = False

    def __post_init__(self):
        if self.bins_k < 2:
            raise ValueError("bins_k must be >= 2")

    def variable_range(self, values):
        if self.bounds is not None:
            return float(self.bounds[0]), float(self.bounds[1])
        return float(values.min()), float(values.max())


def _plugin_entropy(counts, n):
    nz = counts[counts > 0].astype(np.float64)
    return float(math.log(n) - np.sum(nz * np.log(nz)) / n)


def histogram_mi_1d(u, v, spec=HistogramSpec()):
    """Plug-in 2-d histogram MI between two scalar samples, in nats."""
    u = np.ascontiguousarray(u, dtype=np.float64).ravel()
    v = np.ascontiguousarray(v, dtype=np.float64).ravel()
    if u.shape[0] != v.shape[0]:
        raise LengthMismatch(f"length mismatch: {u.shape[0]} vs {v.shape[0]}")
    n = u.shape[0]
    k = spec.bins_k
    if n < 2 * k:
        raise TooFewSamples(f"need n >= 2K = {2 * k}, got {n}")
    lo_u, hi_u = spec.variable_range(u)
    lo_v, hi_v = spec.variable_range(v)
    joint = kernels.hist2d(u, v, lo_u, hi_u, lo_v, hi_v, k, k)
    cu = joint.sum(axis=1)
    cv = joint.sum(axis=0)
    m_u = int(np.count_nonzero(cu))
    m_v = int(np.count_nonzero(cv))
    m_uv = int(np.count_nonzero(joint))
    mi = _plugin_entropy(cu, n) + _plugin_entropy(cv, n) - _plugin_entropy(joint, n)
    mm = 0.0
    if spec.miller_madow:
        mm = ((m_u - 1) + (m_v - 1) - (m_uv - 1)) / (2.0 * n)
    value = mi + mm
    if spec.clamp_nonneg:
        value = max(value, 0.0)
    return MIEstimate(
        value=value,
        estimator="histogram_mm",
        diagnostics={
            "bins": k,
            "occupied_u": m_u,
            "occupied_v": m_v,
            "occupied_joint": m_uv,
            "mm_correction": mm,
            "plugin_mi": mi,
        },
    )


def perdim_mi(a, b, spec=HistogramSpec()):
    """Per-coordinate histogram MI, clamped at zero per term and summed.

    This is the discretized Cap/Rob convention: a lower-substitute for the
    joint-vector MI under the shared binning (the per-dim sum is the
    convention here, not a general-case DPI guarantee).
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape:
        raise LengthMismatch(f"shape mismatch: {a.shape} vs {b.shape}")
    total = 0.0
    for i in range(a.shape[1]):
        total += max(0.0, histogram_mi_1d(a[:, i], b[:, i], spec).value)
    return total


def perdim_entropy(a, spec=HistogramSpec()):
    """Sum of per-coordinate binned entropies with Miller-Madow correction."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    n = a.shape[0]
    k = spec.bins_k
    if n < 2 * k:
        raise TooFewSamples(f"need n >= 2K = {2 * k}, got {n}")
    total = 0.0
    for i in range(a.shape[1]):
        col = np.ascontiguousarray(a[:, i])
        lo, hi = spec.variable_range(col)
        counts = kernels.hist1d(col, lo, hi, k)
        h = _plugin_entropy(counts, n)
        if spec.miller_madow:
            h += (int(np.count_nonzero(counts)) - 1) / (2.0 * n)
        total += h
    return total


def leak_debit_summary(a_pi, delta, spec=HistogramSpec()):
    """Per-dim MI between each action coordinate and the scalar ||delta||_inf.

    The deterministic 1-d summary of the perturbation is a conservative
    (smaller) substitute for the full leak term; clamped at zero per term.
    """
    a_pi = np.atleast_2d(np.asarray(a_pi, dtype=np.float64))
    delta = np.atleast_2d(np.asarray(delta, dtype=np.float64))
    if a_pi.shape[0] != delta.shape[0]:
        raise LengthMismatch(
            f"row mismatch: {a_pi.shape[0]} actions vs {delta.shape[0]} perturbations"
        )
    summary = np.abs(delta).max(axis=1)
    total = 0.0
    for i in range(a_pi.shape[1]):
        total += max(0.0, histogram_mi_1d(a_pi[:, i], summary, spec).value)
    return total
