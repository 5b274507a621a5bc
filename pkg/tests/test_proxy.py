import math

import numpy as np
import pytest

from caprob.bounds import slack
from caprob.errors import AdaptiveAttackNoClosedForm, InvalidCount
from caprob.estimators import HistogramSpec, histogram_mi_1d
from caprob.gaussian import gaussian_mi
from caprob.proxy import (
    AdaptiveSign,
    Leak,
    ObliviousGaussian,
    Plain,
    ProxyConfig,
    Ridge,
    adaptive_sign_attack,
    analytic_bound_terms,
    build_proxy,
    channel_mi,
    discrete_entropy,
    discrete_mi,
    identity_policy_equality,
    joint_covariance,
    sample,
)


def test_build_deterministic():
    cfg = ProxyConfig(dx=4, da=3, seed=7)
    a, b = build_proxy(cfg), build_proxy(cfg)
    assert np.array_equal(a.w_star, b.w_star)
    assert np.array_equal(a.w_pi, b.w_pi)


def test_matched_coupling():
    proxy = build_proxy(ProxyConfig(dx=4, da=3, seed=1))
    assert np.array_equal(proxy.w_pi, proxy.w_star)


def test_independent_coupling_differs():
    proxy = build_proxy(ProxyConfig(dx=4, da=3, seed=1, w_coupling="independent"))
    assert not np.array_equal(proxy.w_pi, proxy.w_star)


def test_ridge_scales_oracle_map():
    proxy = build_proxy(ProxyConfig(dx=4, da=3, seed=1, policy=Ridge(alpha=3.0)))
    assert np.array_equal(proxy.w_pi, 3.0 * proxy.w_star)


def test_config_validation():
    with pytest.raises(ValueError):
        ProxyConfig(dx=0, da=3)
    with pytest.raises(ValueError):
        ProxyConfig(dx=2, da=2, policy=Leak(lam=1.5))
    with pytest.raises(ValueError):
        ProxyConfig(dx=2, da=2, policy=Ridge(alpha=0.0))
    with pytest.raises(ValueError):
        ProxyConfig(dx=2, da=2, w_coupling="sometimes")


def test_joint_covariance_zero_attack_degenerate():
    # at epsilon 0 the attacked action is just an independent-noise copy
    proxy = build_proxy(ProxyConfig(dx=3, da=2, epsilon=0.0, seed=2))
    joint = joint_covariance(proxy)
    mi_attacked = gaussian_mi(joint, {"a_pi"}, {"a_pi_tilde"})
    m, _ = proxy.action_maps()
    signal = m @ m.T
    s2 = proxy.config.sigma_pi**2
    import caprob.gaussian as g

    copy_cov = np.block([[signal + s2 * np.eye(2), signal], [signal, signal + s2 * np.eye(2)]])
    copy_joint = g.JointGaussian(
        blocks=(("a", 2), ("b", 2)), cov=g.CovarianceMatrix(copy_cov)
    )
    assert mi_attacked == pytest.approx(gaussian_mi(copy_joint, {"a"}, {"b"}), abs=1e-10)


def test_joint_covariance_leak_zero_ratio():
    proxy = build_proxy(ProxyConfig(dx=3, da=2, epsilon=0.5, policy=Leak(lam=0.0), seed=4))
    joint = joint_covariance(proxy)
    assert gaussian_mi(joint, {"a_pi"}, {"delta"}) == pytest.approx(0.0, abs=1e-10)


def test_joint_covariance_matches_sample_covariance():
    cfg = ProxyConfig(dx=3, da=2, epsilon=0.7, sigma_pi=0.5, policy=Leak(lam=0.4), seed=6)
    proxy = build_proxy(cfg)
    joint = joint_covariance(proxy)
    batch = sample(proxy, 400_000, rng_seed=0)
    stacked = np.hstack([batch.x, batch.delta, batch.a_star, batch.a_pi, batch.a_pi_tilde])
    empirical = np.cov(stacked, rowvar=False)
    assert np.max(np.abs(empirical - joint.cov.entries)) < 0.02


def test_adaptive_attack_has_no_closed_form():
    proxy = build_proxy(ProxyConfig(dx=2, da=2, epsilon=0.1, attack=AdaptiveSign(steps=3)))
    with pytest.raises(AdaptiveAttackNoClosedForm):
        joint_covariance(proxy)
    with pytest.raises(AdaptiveAttackNoClosedForm):
        channel_mi(proxy)


def test_channel_matches_two_block_oracle():
    cfg = ProxyConfig(dx=4, da=2, epsilon=0.3, seed=1)
    proxy = build_proxy(cfg)
    import caprob.gaussian as g

    eps2 = cfg.epsilon**2
    eye = np.eye(cfg.dx)
    cov = np.block([[eye, eye], [eye, eye + eps2 * eye]])
    joint = g.JointGaussian(blocks=(("x", 4), ("xt", 4)), cov=g.CovarianceMatrix(cov))
    assert channel_mi(proxy) == pytest.approx(
        gaussian_mi(joint, {"x"}, {"xt"}), abs=1e-10
    )


def test_channel_infinite_at_zero_epsilon():
    proxy = build_proxy(ProxyConfig(dx=2, da=2, epsilon=0.0))
    assert math.isinf(channel_mi(proxy))


def test_bound_terms_noise_dominated_limit():
    # channel and coupling both collapse monotonically as epsilon grows
    values = []
    for eps in (0.5, 2.0, 8.0, 32.0):
        proxy = build_proxy(ProxyConfig(dx=3, da=3, epsilon=eps, seed=3))
        terms = analytic_bound_terms(proxy)
        values.append((terms.channel, terms.rob_coupling))
    chans, robs = zip(*values)
    assert all(a > b for a, b in zip(chans, chans[1:]))
    assert all(a > b for a, b in zip(robs, robs[1:]))
    assert chans[-1] < 0.01 and robs[-1] < 0.01


def test_bound_terms_scalar_cell_positive_slack():
    proxy = build_proxy(ProxyConfig(dx=1, da=1, sigma_pi=0.3, epsilon=0.1, seed=5))
    record = slack(analytic_bound_terms(proxy))
    assert record.slack > 0.0
    assert not record.violated


def test_bound_terms_leak_strictly_positive():
    proxy = build_proxy(
        ProxyConfig(dx=3, da=2, epsilon=0.5, policy=Leak(lam=0.5), seed=8)
    )
    terms = analytic_bound_terms(proxy)
    assert terms.leak > 0.01


def test_sample_rejects_zero_count():
    proxy = build_proxy(ProxyConfig(dx=2, da=2))
    with pytest.raises(InvalidCount):
        sample(proxy, 0, rng_seed=0)


def test_sample_deterministic():
    proxy = build_proxy(ProxyConfig(dx=3, da=2, epsilon=0.2, seed=1))
    a = sample(proxy, 100, rng_seed=42)
    b = sample(proxy, 100, rng_seed=42)
    assert np.array_equal(a.x, b.x)
    assert np.array_equal(a.a_pi_tilde, b.a_pi_tilde)


def test_sample_x_tilde_exact():
    proxy = build_proxy(ProxyConfig(dx=3, da=2, epsilon=0.2, seed=1))
    batch = sample(proxy, 1000, rng_seed=0)
    assert np.array_equal(batch.x_tilde, batch.x + batch.delta)


def test_sample_mean_within_clt_band():
    cfg = ProxyConfig(dx=4, da=3, epsilon=0.1, seed=2)
    proxy = build_proxy(cfg)
    n = 50_000
    batch = sample(proxy, n, rng_seed=3)
    joint = joint_covariance(proxy)
    stds = np.sqrt(np.diag(joint.marginal({"a_star"}).entries))
    band = 4.0 * stds / math.sqrt(n)
    assert np.all(np.abs(batch.a_star.mean(axis=0)) <= band)


def test_adaptive_sign_scalar_saturates():
    proxy = build_proxy(
        ProxyConfig(dx=1, da=1, epsilon=0.4, attack=AdaptiveSign(steps=5), seed=0)
    )
    delta = adaptive_sign_attack(proxy, np.array([1.3]), steps=5)
    assert delta[0] == pytest.approx(0.4, abs=1e-12)
    delta_neg = adaptive_sign_attack(proxy, np.array([-0.2]), steps=5)
    assert delta_neg[0] == pytest.approx(-0.4, abs=1e-12)


def test_adaptive_sign_saturates_linf_ball():
    rng = np.random.default_rng(0)
    proxy = build_proxy(
        ProxyConfig(dx=5, da=3, epsilon=0.25, attack=AdaptiveSign(steps=4), seed=9)
    )
    for _ in range(20):
        delta = adaptive_sign_attack(proxy, rng.standard_normal(5), steps=4)
        assert np.max(np.abs(delta)) == pytest.approx(0.25, abs=1e-12)


def test_adaptive_sign_beats_random_signs():
    rng = np.random.default_rng(1)
    cfg = ProxyConfig(dx=6, da=4, epsilon=0.3, attack=AdaptiveSign(steps=8), seed=12)
    proxy = build_proxy(cfg)
    adaptive_norms, random_norms = [], []
    for _ in range(100):
        x = rng.standard_normal(6)
        d_adapt = adaptive_sign_attack(proxy, x, steps=8)
        d_rand = 0.3 * rng.choice([-1.0, 1.0], size=6)
        adaptive_norms.append(np.linalg.norm(proxy.w_pi @ d_adapt))
        random_norms.append(np.linalg.norm(proxy.w_pi @ d_rand))
    assert np.mean(adaptive_norms) >= np.mean(random_norms)


def test_sampler_agrees_with_oracle_per_dim():
    # per-coordinate histogram MI converges to the closed-form scalar MI
    cfg = ProxyConfig(dx=4, da=3, sigma_pi=0.3, epsilon=0.5, seed=3)
    proxy = build_proxy(cfg)
    joint = joint_covariance(proxy)
    batch = sample(proxy, 100_000, rng_seed=11)
    cov = joint.cov.entries
    # scalar pair (a_pi_i, a_pi_tilde_i) analytic MI from the joint blocks
    base_pi = 2 * cfg.dx + cfg.da
    base_til = base_pi + cfg.da
    spec = HistogramSpec(bins_k=16)
    for i in range(cfg.da):
        var_a = cov[base_pi + i, base_pi + i]
        var_b = cov[base_til + i, base_til + i]
        rho2 = cov[base_pi + i, base_til + i] ** 2 / (var_a * var_b)
        analytic = -0.5 * math.log(1.0 - rho2)
        est = histogram_mi_1d(batch.a_pi[:, i], batch.a_pi_tilde[:, i], spec).value
        assert est <= analytic + 0.02  # quantization can only lose information
        assert est >= analytic - 0.12


def test_discrete_helpers():
    assert discrete_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-12)
    joint = np.array([[0.5, 0.0], [0.0, 0.5]])
    assert discrete_mi(joint) == pytest.approx(math.log(2), abs=1e-12)
    assert discrete_mi(np.full((2, 2), 0.25)) == pytest.approx(0.0, abs=1e-12)


def test_identity_policy_achieves_equality():
    result = identity_policy_equality()
    assert abs(result.record.slack) <= 1e-9
    assert result.terms.channel == pytest.approx(result.channel_closed_form, abs=1e-12)
    assert result.terms.task_entropy == pytest.approx(math.log(8), abs=1e-12)
    assert result.terms.leak == pytest.approx(0.0, abs=1e-12)


def test_identity_policy_rejects_bad_alphabet():
    with pytest.raises(ValueError):
        identity_policy_equality(num_symbols=6)
