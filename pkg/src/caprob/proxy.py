"""Linear-Gaussian proxy world for the capability-robustness budget.

An oracle map A* = W* X + xi_star, a policy A_pi = W_pi X + xi_pi, and an
additive perturbation delta with X~ = X + delta. Every budget term has a
closed form when the perturbation is input-independent, which is what
makes this world an exact test bench: estimator error separates cleanly
from bound violation.

Policy variants:
  plain          A_pi = W_pi X + xi_pi
  ridge(alpha)   A_pi = alpha W* X + xi_pi           (gain alpha > 0)
  leak(lam)      A_pi = (1-lam) W_pi X + lam P delta + xi_pi

where P is the fixed coordinate projection (identity on the first
min(dx, da) coordinates, zero elsewhere) that makes the leak well-typed
for rectangular maps. The attacked action applies the same policy to the
perturbed input with fresh internal noise:
  A~_pi = M (X + delta) + L delta + xi'_pi,  M/L the variant's maps.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundTerms, SlackRecord, slack
from .errors import AdaptiveAttackNoClosedForm, InvalidCount
from .gaussian import (
    CovarianceMatrix,
    JointGaussian,
    gaussian_entropy,
    gaussian_mi,
)

BLOCK_ORDER = ("x", "delta", "a_star", "a_pi", "a_pi_tilde")


@dataclass(frozen=True)
class Plain:
    kind: str = field(default="plain", init=False)


@dataclass(frozen=True)
class Ridge:
    """Gain-alpha policy with optional dither override for sigma_pi."""

    alpha: float
    dither: float = None
    kind: str = field(default="ridge", init=False)


@dataclass(frozen=True)
class Leak:
    """Policy that passively copies a lam-fraction of the perturbation."""

    lam: float
    kind: str = field(default="leak", init=False)


@dataclass(frozen=True)
class ObliviousGaussian:
    kind: str = field(default="oblivious_gaussian", init=False)


@dataclass(frozen=True)
class AdaptiveSign:
    """Sign-ascent attack on the policy-output displacement, PGD-style."""

    steps: int = 10
    kind: str = field(default="adaptive_sign", init=False)


@dataclass(frozen=True)
class ProxyConfig:
    dx: int
    da: int
    sigma_star: float = 0.3
    sigma_pi: float = 0.3
    epsilon: float = 0.1
    policy: object = Plain()
    attack: object = ObliviousGaussian()
    w_coupling: str = "matched"  # "matched" | "independent"
    seed: int = 0
    input_spectrum: tuple = None  # optional diagonal Cov(X); defaults to identity

    def __post_init__(self):
        if self.dx < 1 or self.da < 1:
            raise ValueError("dx and da must be >= 1")
        if self.sigma_star < 0 or self.sigma_pi < 0 or self.epsilon < 0:
            raise ValueError("noise scales must be >= 0")
        if isinstance(self.policy, Ridge) and self.policy.alpha <= 0:
            raise ValueError("ridge gain alpha must be > 0")
        if isinstance(self.policy, Leak) and not 0.0 <= self.policy.lam <= 1.0:
            raise ValueError("leak ratio must lie in [0, 1]")
        if self.w_coupling not in ("matched", "independent"):
            raise ValueError(f"unknown w_coupling {self.w_coupling!r}")
        if self.input_spectrum is not None:
            spec = tuple(float(v) for v in self.input_spectrum)
            if len(spec) != self.dx or any(v <= 0 for v in spec):
                raise ValueError("input_spectrum must hold dx positive variances")
            object.__setattr__(self, "input_spectrum", spec)

    @property
    def sigma_pi_effective(self):
        if isinstance(self.policy, Ridge) and self.policy.dither is not None:
            return self.policy.dither
        return self.sigma_pi

    def input_variances(self):
        if self.input_spectrum is None:
            return np.ones(self.dx)
        return np.asarray(self.input_spectrum, dtype=np.float64)


@dataclass(frozen=True)
class ProxySystem:
    config: ProxyConfig
    w_star: np.ndarray
    w_pi: np.ndarray

    def action_maps(self):
        """(M, L): clean action is M X + L delta + noise."""
        cfg = self.config
        policy = cfg.policy
        if isinstance(policy, Leak):
            proj = np.zeros((cfg.da, cfg.dx))
            r = min(cfg.da, cfg.dx)
            proj[:r, :r] = np.eye(r)
            return (1.0 - policy.lam) * self.w_pi, policy.lam * proj
        return self.w_pi, np.zeros((cfg.da, cfg.dx))


@dataclass(frozen=True)
class SampleBatch:
    """n joint draws of (X, delta, X~, A*, A_pi, A~_pi)."""

    n: int
    x: np.ndarray
    delta: np.ndarray
    x_tilde: np.ndarray
    a_star: np.ndarray
    a_pi: np.ndarray
    a_pi_tilde: np.ndarray


def build_proxy(config):
    """Deterministically draw the oracle and policy maps from the seed.

    W* entries are i.i.d. N(0, 1/dx); the policy map equals W* under
    matched coupling and is an independent draw otherwise; the ridge
    variant scales the base map by its gain.
    """
    children = np.random.SeedSequence(config.seed).spawn(2)
    rng_star = np.random.default_rng(children[0])
    w_star = rng_star.normal(0.0, 1.0 / math.sqrt(config.dx), (config.da, config.dx))
    if config.w_coupling == "matched":
        w_base = w_star
    else:
        rng_pi = np.random.default_rng(children[1])
        w_base = rng_pi.normal(0.0, 1.0 / math.sqrt(config.dx), (config.da, config.dx))
    if isinstance(config.policy, Ridge):
        w_pi = config.policy.alpha * w_base
    else:
        w_pi = w_base
    return ProxySystem(config=config, w_star=w_star, w_pi=w_pi)


def joint_covariance(proxy):
    """Exact zero-mean joint covariance over (x, delta, a_star, a_pi, a_pi_tilde).

    Only the input-independent Gaussian attack admits this closed form;
    the adaptive attack couples delta to X and raises.
    """
    cfg = proxy.config
    if not isinstance(cfg.attack, ObliviousGaussian):
        raise AdaptiveAttackNoClosedForm(
            "closed-form joint covariance requires the oblivious Gaussian attack"
        )
    dx, da = cfg.dx, cfg.da
    sx = np.diag(cfg.input_variances())
    eps2 = cfg.epsilon**2
    s_star2 = cfg.sigma_star**2
    s_pi2 = cfg.sigma_pi_effective**2
    w = proxy.w_star
    m, l = proxy.action_maps()
    n_map = m + l

    dim = 2 * dx + 3 * da
    cov = np.zeros((dim, dim))
    idx = {}
    offset = 0
    for name, d in zip(BLOCK_ORDER, (dx, dx, da, da, da)):
        idx[name] = slice(offset, offset + d)
        offset += d

    def put(a, b, value):
        cov[idx[a], idx[b]] = value
        if a != b:
            cov[idx[b], idx[a]] = value.T

    put("x", "x", sx)
    put("delta", "delta", eps2 * np.eye(dx))
    put("a_star", "a_star", w @ sx @ w.T + s_star2 * np.eye(da))
    put("a_pi", "a_pi", m @ sx @ m.T + eps2 * (l @ l.T) + s_pi2 * np.eye(da))
    put(
        "a_pi_tilde",
        "a_pi_tilde",
        m @ sx @ m.T + eps2 * (n_map @ n_map.T) + s_pi2 * np.eye(da),
    )
    put("x", "a_star", sx @ w.T)
    put("x", "a_pi", sx @ m.T)
    put("x", "a_pi_tilde", sx @ m.T)
    put("delta", "a_pi", eps2 * l.T)
    put("delta", "a_pi_tilde", eps2 * n_map.T)
    put("a_star", "a_pi", w @ sx @ m.T)
    put("a_star", "a_pi_tilde", w @ sx @ m.T)
    put("a_pi", "a_pi_tilde", m @ sx @ m.T + eps2 * (l @ n_map.T))

    blocks = tuple(zip(BLOCK_ORDER, (dx, dx, da, da, da)))
    return JointGaussian(blocks=blocks, cov=CovarianceMatrix(cov))


def channel_mi(proxy):
    """Exact I(X; X+delta) for the oblivious attack, +inf at epsilon 0."""
    cfg = proxy.config
    if not isinstance(cfg.attack, ObliviousGaussian):
        raise AdaptiveAttackNoClosedForm(
            "analytic channel MI requires the oblivious Gaussian attack"
        )
    if cfg.epsilon == 0.0:
        return math.inf
    eps2 = cfg.epsilon**2
    return float(0.5 * np.sum(np.log1p(cfg.input_variances() / eps2)))


def analytic_bound_terms(proxy):
    """All five budget terms in closed form (differential task entropy)."""
    cfg = proxy.config
    joint = joint_covariance(proxy)
    cap = gaussian_mi(joint, {"a_star"}, {"a_pi"})
    rob_coupling = gaussian_mi(joint, {"a_pi"}, {"a_pi_tilde"})
    if cfg.epsilon == 0.0:
        leak = 0.0
    else:
        leak = gaussian_mi(joint, {"a_pi"}, {"delta"})
    task_entropy = gaussian_entropy(joint.marginal({"a_star"}))
    return BoundTerms(
        cap=cap,
        rob_coupling=rob_coupling,
        leak=leak,
        task_entropy=task_entropy,
        channel=channel_mi(proxy),
        source="analytic",
        task_entropy_units="differential",
    )


def _sign_with_default(values, default_sign):
    s = np.sign(values)
    zero = s == 0.0
    if np.any(zero):
        s = np.where(zero, default_sign, s)
    return s


def _adaptive_sign_batch(proxy, x, steps):
    cfg = proxy.config
    if steps < 1:
        raise InvalidCount("adaptive attack needs steps >= 1")
    if cfg.epsilon <= 0.0:
        raise ValueError("adaptive attack needs epsilon > 0")
    eta = cfg.epsilon / steps
    gram = proxy.w_pi.T @ proxy.w_pi
    fallback = _sign_with_default(x, 1.0)
    delta = np.zeros_like(x)
    for _ in range(steps):
        grad = delta @ gram.T
        step_sign = _sign_with_default(grad, 0.0)
        step_sign = np.where(step_sign == 0.0, fallback, step_sign)
        delta = np.clip(delta + eta * step_sign, -cfg.epsilon, cfg.epsilon)
    return delta


def adaptive_sign_attack(proxy, x_row, steps):
    """Deterministic sign-ascent perturbation for a single input row.

    Ascends the policy-output displacement ||W_pi (x + delta) - W_pi x||^2
    with step epsilon/steps, projecting onto the l_inf ball each iteration;
    the first step (zero gradient) moves along sign(x).
    """
    x_row = np.asarray(x_row, dtype=np.float64).reshape(1, -1)
    return _adaptive_sign_batch(proxy, x_row, steps)[0]


def sample(proxy, n, rng_seed):
    """Draw n i.i.d. joint realizations.

    The attacked action always uses a fresh internal-noise draw,
    independent of the clean action's noise.
    """
    if n < 1:
        raise InvalidCount(f"sample count must be >= 1, got {n}")
    cfg = proxy.config
    rng = np.random.default_rng(rng_seed)
    scale = np.sqrt(cfg.input_variances())
    x = rng.standard_normal((n, cfg.dx)) * scale
    if isinstance(cfg.attack, ObliviousGaussian):
        delta = cfg.epsilon * rng.standard_normal((n, cfg.dx))
    else:
        delta = _adaptive_sign_batch(proxy, x, cfg.attack.steps)
        np.clip(delta, -cfg.epsilon, cfg.epsilon, out=delta)
    m, l = proxy.action_maps()
    s_pi = cfg.sigma_pi_effective
    a_star = x @ proxy.w_star.T + cfg.sigma_star * rng.standard_normal((n, cfg.da))
    a_pi = x @ m.T + delta @ l.T + s_pi * rng.standard_normal((n, cfg.da))
    a_pi_tilde = (
        (x + delta) @ m.T + delta @ l.T + s_pi * rng.standard_normal((n, cfg.da))
    )
    return SampleBatch(
        n=n,
        x=x,
        delta=delta,
        x_tilde=x + delta,
        a_star=a_star,
        a_pi=a_pi,
        a_pi_tilde=a_pi_tilde,
    )


# --- finite-alphabet equality construction -----------------------------------


def discrete_entropy(pmf):
    """Shannon entropy of a pmf array, in nats (0 ln 0 = 0)."""
    p = np.asarray(pmf, dtype=np.float64).ravel()
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def discrete_mi(joint_pmf):
    """Mutual information of a 2-d joint pmf table, in nats.

    Rounding dust on exactly-independent tables is clamped to zero, the
    same convention as the Gaussian oracle.
    """
    joint = np.asarray(joint_pmf, dtype=np.float64)
    pu = joint.sum(axis=1)
    pv = joint.sum(axis=0)
    value = discrete_entropy(pu) + discrete_entropy(pv) - discrete_entropy(joint)
    return max(value, 0.0)


@dataclass(frozen=True)
class IdentityPolicyResult:
    terms: BoundTerms
    record: SlackRecord
    channel_closed_form: float


def identity_policy_equality(num_symbols=8, flip_prob=0.1):
    """Finite construction achieving the budget with equality.

    X uniform over num_symbols (a power of two), oracle A* = X, identity
    policy, and an input-independent per-bit flip channel with the given
    flip probability. Every term is computed by exact enumeration over the
    (x, flip-pattern) table; the per-bit closed form
    bits * (ln 2 - h(flip)) is returned alongside as a cross-check.
    """
    bits = int(round(math.log2(num_symbols)))
    if 2**bits != num_symbols or bits < 1:
        raise ValueError("num_symbols must be a power of two >= 2")
    if not 0.0 < flip_prob < 0.5:
        raise ValueError("flip_prob must lie in (0, 0.5)")

    n_sym = num_symbols
    p_x = np.full(n_sym, 1.0 / n_sym)
    # joint over (x, x_tilde) under independent per-bit flips
    joint_xxt = np.zeros((n_sym, n_sym))
    joint_x_pattern = np.zeros((n_sym, n_sym))
    for x_val in range(n_sym):
        for pattern in range(n_sym):
            flips = bin(pattern).count("1")
            p_pattern = (flip_prob**flips) * ((1 - flip_prob) ** (bits - flips))
            joint_xxt[x_val, x_val ^ pattern] += p_x[x_val] * p_pattern
            joint_x_pattern[x_val, pattern] += p_x[x_val] * p_pattern

    task_entropy = discrete_entropy(p_x)
    cap = discrete_mi(np.diag(p_x))  # A* = A_pi = X exactly
    rob_coupling = discrete_mi(joint_xxt)  # A_pi = X, A~_pi = X~
    leak = discrete_mi(joint_x_pattern)  # delta independent of X: 0
    channel = discrete_mi(joint_xxt)

    terms = BoundTerms(
        cap=cap,
        rob_coupling=rob_coupling,
        leak=leak,
        task_entropy=task_entropy,
        channel=channel,
        source="analytic",
        task_entropy_units="discrete",
    )
    h_flip = -(flip_prob * math.log(flip_prob) + (1 - flip_prob) * math.log(1 - flip_prob))
    closed_form = bits * (math.log(2.0) - h_flip)
    return IdentityPolicyResult(
        terms=terms,
        record=slack(terms, cell_id="identity-policy"),
        channel_closed_form=closed_form,
    )
