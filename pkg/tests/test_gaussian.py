import math

import numpy as np
import pytest
from scipy import integrate

from caprob.errors import NotPositiveDefinite, UnknownBlock
from caprob.gaussian import (
    CovarianceMatrix,
    JointGaussian,
    Spectrum,
    eigen_spectrum,
    gaussian_entropy,
    gaussian_mi,
    log_det,
    sample_spectrum,
)


def random_spd(dim, rng):
    m = rng.standard_normal((dim, dim))
    return m @ m.T + np.eye(dim)


def test_log_det_identity():
    assert log_det(CovarianceMatrix(np.eye(3))) == 0.0


def test_log_det_diagonal():
    value = log_det(CovarianceMatrix(np.diag([2.0, 2.0])))
    assert value == pytest.approx(2 * math.log(2), abs=1e-12)


def test_log_det_matches_eigenvalue_oracle():
    rng = np.random.default_rng(5)
    for _ in range(20):
        cov = CovarianceMatrix(random_spd(5, rng))
        oracle = float(np.sum(np.log(np.linalg.eigvalsh(cov.entries))))
        assert log_det(cov) == pytest.approx(oracle, abs=1e-9)


def test_log_det_rejects_singular():
    cov = CovarianceMatrix(np.diag([1.0, 0.0]))
    with pytest.raises(NotPositiveDefinite):
        log_det(cov)


def test_entropy_standard_normal():
    assert gaussian_entropy(CovarianceMatrix(np.eye(1))) == pytest.approx(
        1.418939, abs=1e-6
    )


def test_entropy_additivity():
    assert gaussian_entropy(CovarianceMatrix(np.eye(2))) == pytest.approx(
        2 * 1.4189385332046727, abs=1e-12
    )


def test_entropy_small_variance_block():
    value = gaussian_entropy(CovarianceMatrix(0.09 * np.eye(7)))
    assert value == pytest.approx(7 * (1.4189385332046727 + 0.5 * math.log(0.09)), abs=1e-9)
    assert value == pytest.approx(1.503, abs=2e-3)


def test_entropy_matches_quadrature_1d():
    # independent oracle: -int phi ln phi for a 1-d Gaussian
    var = 0.7

    def neg_p_log_p(x):
        p = math.exp(-0.5 * x * x / var) / math.sqrt(2 * math.pi * var)
        return -p * math.log(p) if p > 0 else 0.0

    lim = 12 * math.sqrt(var)
    quad, _ = integrate.quad(neg_p_log_p, -lim, lim, limit=200)
    assert gaussian_entropy(CovarianceMatrix([[var]])) == pytest.approx(quad, abs=1e-9)


def test_mi_independent_blocks_zero():
    cov = CovarianceMatrix(np.diag([1.0, 2.0]))
    joint = JointGaussian(blocks=(("a", 1), ("b", 1)), cov=cov)
    assert gaussian_mi(joint, {"a"}, {"b"}) == 0.0


def test_mi_scalar_correlation():
    rho = 0.5
    joint = JointGaussian(
        blocks=(("a", 1), ("b", 1)),
        cov=CovarianceMatrix([[1.0, rho], [rho, 1.0]]),
    )
    assert gaussian_mi(joint, {"a"}, {"b"}) == pytest.approx(
        -0.5 * math.log(1 - rho**2), abs=1e-12
    )


def test_mi_awgn_formula():
    d = 7
    cov = np.block([[np.eye(d), np.eye(d)], [np.eye(d), 2 * np.eye(d)]])
    joint = JointGaussian(blocks=(("x", d), ("xt", d)), cov=CovarianceMatrix(cov))
    assert gaussian_mi(joint, {"x"}, {"xt"}) == pytest.approx(
        0.5 * d * math.log(2), abs=1e-9
    )


def test_mi_symmetry_and_nonnegativity():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        cov = CovarianceMatrix(random_spd(5, rng))
        joint = JointGaussian(blocks=(("a", 2), ("b", 3)), cov=cov)
        ab = gaussian_mi(joint, {"a"}, {"b"})
        ba = gaussian_mi(joint, {"b"}, {"a"})
        assert ab >= 0.0
        assert ab == pytest.approx(ba, abs=1e-10)


def test_mi_unknown_block():
    joint = JointGaussian(blocks=(("a", 1), ("b", 1)), cov=CovarianceMatrix(np.eye(2)))
    with pytest.raises(UnknownBlock):
        gaussian_mi(joint, {"a"}, {"nope"})
    with pytest.raises(ValueError):
        gaussian_mi(joint, {"a"}, {"a"})


def test_entropy_block_additivity():
    rng = np.random.default_rng(2)
    a = random_spd(3, rng)
    b = random_spd(2, rng)
    block = np.zeros((5, 5))
    block[:3, :3] = a
    block[3:, 3:] = b
    total = gaussian_entropy(CovarianceMatrix(block))
    parts = gaussian_entropy(CovarianceMatrix(a)) + gaussian_entropy(CovarianceMatrix(b))
    assert total == pytest.approx(parts, abs=1e-10)


def test_spectrum_sorted_descending():
    spec = eigen_spectrum(CovarianceMatrix(np.diag([3.0, 1.0, 2.0])))
    assert np.allclose(spec.eigenvalues, [3.0, 2.0, 1.0])


def test_spectrum_rank_one():
    v = np.array([2.0, 0.0, 0.0, 0.0])
    spec = eigen_spectrum(CovarianceMatrix(np.outer(v, v)))
    assert spec.eigenvalues[0] == pytest.approx(4.0, abs=1e-12)
    assert np.all(spec.eigenvalues[1:] == 0.0)


def test_spectrum_sample_covariance_band():
    # Marchenko-Pastur sanity: 200 standard-normal draws in dim 5 keep all
    # sample eigenvalues well inside [0.4, 2.0]
    rng = np.random.default_rng(0)
    draws = rng.standard_normal((200, 5))
    spec = eigen_spectrum(CovarianceMatrix(np.cov(draws, rowvar=False)))
    assert np.all(spec.eigenvalues >= 0.4)
    assert np.all(spec.eigenvalues <= 2.0)


def test_spectrum_trace_consistency():
    rng = np.random.default_rng(9)
    for _ in range(50):
        cov = CovarianceMatrix(random_spd(6, rng))
        spec = eigen_spectrum(cov)
        assert spec.eigenvalues.sum() == pytest.approx(
            float(np.trace(cov.entries)), rel=1e-8
        )


def test_sample_spectrum_matches_dense_route():
    rng = np.random.default_rng(4)
    rows = rng.standard_normal((40, 6)) @ np.diag([3.0, 2.0, 1.0, 0.5, 0.2, 0.1])
    via_svd = sample_spectrum(rows)
    dense = eigen_spectrum(CovarianceMatrix(np.cov(rows, rowvar=False)))
    assert np.allclose(via_svd.eigenvalues, dense.eigenvalues, atol=1e-10)


def test_sample_spectrum_pads_rank_deficient():
    rng = np.random.default_rng(4)
    rows = rng.standard_normal((5, 20))
    spec = sample_spectrum(rows)
    assert spec.eigenvalues.shape == (20,)
    assert np.count_nonzero(spec.eigenvalues > 1e-12 * spec.trace) <= 4


def test_covariance_rejects_asymmetry():
    with pytest.raises(ValueError):
        CovarianceMatrix([[1.0, 0.5], [0.4, 1.0]])


def test_covariance_rejects_negative_definite():
    with pytest.raises(ValueError):
        CovarianceMatrix([[1.0, 0.0], [0.0, -1.0]])


def test_covariance_accepts_tiny_negative_eigenvalue():
    # sample covariances of rank < dim are routine; small negative
    # eigenvalues inside the tolerance must pass
    base = np.outer([1.0, 1.0], [1.0, 1.0])
    CovarianceMatrix(base)  # exactly singular: smallest eigenvalue 0


def test_spectrum_invariant_rejects_bad_trace():
    with pytest.raises(ValueError):
        Spectrum(eigenvalues=np.array([2.0, 1.0]), trace=5.0)
