import math

import numpy as np
import pytest

from caprob.errors import LengthMismatch, TooFewSamples
from caprob.estimators import (
    HistogramSpec,
    histogram_mi_1d,
    leak_debit_summary,
    perdim_entropy,
    perdim_mi,
)

SPEC16 = HistogramSpec(bins_k=16)


def test_identical_binary_halves():
    rng = np.random.default_rng(0)
    u = rng.integers(0, 2, size=10_000).astype(float)
    est = histogram_mi_1d(u, u, SPEC16)
    assert est.value == pytest.approx(math.log(2), abs=0.01)


def test_independent_normals_small_bias():
    rng = np.random.default_rng(1)
    u = rng.standard_normal(10_000)
    v = rng.standard_normal(10_000)
    est = histogram_mi_1d(u, v, SPEC16)
    assert est.value <= 0.03


def test_constant_marginal_exactly_zero():
    u = np.zeros(2000)
    v = np.random.default_rng(2).standard_normal(2000)
    assert histogram_mi_1d(u, v, SPEC16).value == 0.0


def test_length_mismatch_and_too_few():
    with pytest.raises(LengthMismatch):
        histogram_mi_1d(np.zeros(10), np.zeros(11), SPEC16)
    with pytest.raises(TooFewSamples):
        histogram_mi_1d(np.zeros(31), np.zeros(31), SPEC16)


def test_self_mi_equals_entropy():
    # shared per-variable binning makes self-MI equal the binned entropy
    rng = np.random.default_rng(3)
    a = rng.standard_normal((5000, 3))
    assert perdim_mi(a, a, SPEC16) == pytest.approx(perdim_entropy(a, SPEC16), abs=1e-12)


def test_perdim_independent_bias_bound():
    rng = np.random.default_rng(4)
    a = rng.standard_normal((10_000, 7))
    b = rng.standard_normal((10_000, 7))
    assert perdim_mi(a, b, SPEC16) <= 0.2


def test_perdim_shape_mismatch():
    with pytest.raises(LengthMismatch):
        perdim_mi(np.zeros((100, 2)), np.zeros((100, 3)), SPEC16)


def test_perdim_entropy_uniform_reaches_log_k():
    rng = np.random.default_rng(5)
    a = rng.uniform(0.0, 1.0, size=(10_000, 1))
    assert perdim_entropy(a, SPEC16) == pytest.approx(math.log(16), abs=0.02)


def test_perdim_entropy_constant_column():
    a = np.zeros((1000, 1))
    assert perdim_entropy(a, SPEC16) == 0.0


def test_perdim_entropy_hard_cap():
    rng = np.random.default_rng(6)
    a = rng.standard_normal((10_000, 7))
    spec = HistogramSpec(bins_k=256)
    assert perdim_entropy(a, spec) <= 7 * math.log(256)


def test_fixed_bounds_binning():
    rng = np.random.default_rng(7)
    u = rng.uniform(0.0, 1.0, 5000)
    spec = HistogramSpec(bins_k=8, bounds=(0.0, 1.0))
    est = histogram_mi_1d(u, u, spec)
    assert est.value == pytest.approx(math.log(8), abs=0.02)


def test_clamp_flag():
    rng = np.random.default_rng(8)
    u = rng.standard_normal(2000)
    v = rng.standard_normal(2000)
    clamped = histogram_mi_1d(u, v, HistogramSpec(bins_k=16, clamp_nonneg=True))
    assert clamped.value >= 0.0


def test_leak_summary_constant_norm_is_zero():
    rng = np.random.default_rng(9)
    a_pi = rng.standard_normal((4000, 3))
    delta = rng.choice([-0.5, 0.5], size=(4000, 4))  # every row has norm 0.5
    assert leak_debit_summary(a_pi, delta, SPEC16) == 0.0


def test_leak_summary_null_band():
    rng = np.random.default_rng(10)
    a_pi = rng.standard_normal((10_000, 3))
    delta = 0.3 * rng.standard_normal((10_000, 4))
    assert leak_debit_summary(a_pi, delta, SPEC16) <= 0.02


def test_leak_summary_detects_copying_policy():
    from caprob.proxy import Leak, ProxyConfig, build_proxy, sample

    proxy = build_proxy(
        ProxyConfig(dx=3, da=3, sigma_pi=0.05, epsilon=1.0, policy=Leak(lam=0.99), seed=0)
    )
    batch = sample(proxy, 20_000, rng_seed=1)
    assert leak_debit_summary(batch.a_pi, batch.delta, SPEC16) > 0.05


def test_coarsening_respects_information_ordering():
    # halving K (nested bins) never gains information beyond the
    # Miller-Madow correction difference
    rng = np.random.default_rng(11)
    for trial in range(100):
        n = 4000
        u = rng.standard_normal(n)
        v = 0.7 * u + 0.5 * rng.standard_normal(n)
        lo_u, hi_u = u.min(), u.max()
        lo_v, hi_v = v.min(), v.max()
        fine = histogram_mi_1d(u, v, HistogramSpec(bins_k=16, bounds=None))
        # same ranges, nested coarse bins
        coarse = histogram_mi_1d(u, v, HistogramSpec(bins_k=8, bounds=None))
        mm_delta = max(
            0.0,
            coarse.diagnostics["mm_correction"] - fine.diagnostics["mm_correction"],
        )
        assert coarse.value <= fine.value + mm_delta + 1e-12


def test_mm_correction_formula_recorded():
    rng = np.random.default_rng(12)
    u = rng.standard_normal(2000)
    v = rng.standard_normal(2000)
    est = histogram_mi_1d(u, v, SPEC16)
    d = est.diagnostics
    expected = (
        (d["occupied_u"] - 1) + (d["occupied_v"] - 1) - (d["occupied_joint"] - 1)
    ) / (2 * 2000)
    assert d["mm_correction"] == pytest.approx(expected, abs=1e-15)
    assert est.value == pytest.approx(d["plugin_mi"] + expected, abs=1e-15)


def test_histogram_bitwise_determinism():
    rng = np.random.default_rng(13)
    u = rng.standard_normal(3000)
    v = rng.standard_normal(3000)
    a = histogram_mi_1d(u, v, SPEC16).value
    b = histogram_mi_1d(u.copy(), v.copy(), SPEC16).value
    assert a == b
