"""Neural variational MI estimators: Donsker-Varadhan (MINE) and InfoNCE.

Both use cross-fitting: the sample is split into two folds, a critic is
trained on each fold and evaluated on the other, and the two held-out
values are averaged. Training on the evaluation points would let the
critic memorize pair identities and report spurious MI on independent
data; with cross-fitting the reported value stays a (noisy) lower bound.
Negative outputs are possible and are a documented small-sample artifact,
not an error.
"""

import math
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from ..errors import NonFinite, TooFewSamples
from .common import MIEstimate

_CLAMP_T = 80.0  # caps exp() inside the DV partition term
_DIVERGENCE_LIMIT = 1e6
_NCE_EMBED_DIM = 128


@dataclass(frozen=True)
class CriticConfig:
    """Critic architecture and training schedule.

    epochs counts gradient steps (one random minibatch per step); the
    final value is evaluated on held-out folds, never on training points.
    """

    hidden_width: int = 512
    depth: int = 2
    learning_rate: float = 1e-4
    ema_decay: float = 0.999
    epochs: int = 2000
    batch_size: int = 256

    def __post_init__(self):
        if min(self.hidden_width, self.depth, self.epochs, self.batch_size) < 1:
            raise ValueError("architecture and schedule values must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 < self.ema_decay < 1.0:
            raise ValueError("ema_decay must lie in (0, 1)")


def _mlp(d_in, width, depth, d_out):
    layers, last = [], d_in
    for _ in range(depth):
        layers += [nn.Linear(last, width), nn.ReLU()]
        last = width
    layers.append(nn.Linear(last, d_out))
    return nn.Sequential(*layers)


def _to_tensor(x):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return torch.as_tensor(x, dtype=torch.float32)


def _folds(n, rng):
    perm = rng.permutation(n)
    half = n // 2
    return (perm[:half], perm[half:]), (perm[half:], perm[:half])


class _JointCritic(nn.Module):
    def __init__(self, d_u, d_v, config):
        super().__init__()
        self.net = _mlp(d_u + d_v, config.hidden_width, config.depth, 1)

    def forward(self, u, v):
        return self.net(torch.cat([u, v], dim=1)).squeeze(-1)


def _train_dv_critic(u, v, config, rng):
    critic = _JointCritic(u.shape[1], v.shape[1], config)
    opt = torch.optim.Adam(critic.parameters(), lr=config.learning_rate)
    n = u.shape[0]
    ema = None
    trace_len = 0
    for _ in range(config.epochs):
        idx = rng.integers(0, n, size=config.batch_size)
        perm = rng.permutation(config.batch_size)
        ub, vb = u[idx], v[idx]
        t_joint = critic(ub, vb)
        t_marg = critic(ub, vb[perm])
        mean_exp = torch.mean(torch.exp(torch.clamp(t_marg, max=_CLAMP_T)))
        if ema is None:
            ema = mean_exp.detach()
        else:
            ema = config.ema_decay * ema + (1.0 - config.ema_decay) * mean_exp.detach()
        # EMA-denominator gradient: d/dtheta uses mean_exp / ema, which has
        # the DV gradient in expectation without the batch-size bias
        loss = -(torch.mean(t_joint) - mean_exp / ema)
        loss_value = float(loss.detach())
        if not math.isfinite(loss_value) or loss_value > _DIVERGENCE_LIMIT:
            raise NonFinite(
                "MINE training diverged; learning rate or input scale mismatch"
            )
        opt.zero_grad()
        loss.backward()
        opt.step()
        trace_len += 1
    return critic, trace_len, float(ema)


def _dv_value(critic, u, v, rng):
    with torch.no_grad():
        t_joint = critic(u, v)
        perm = rng.permutation(u.shape[0])
        t_marg = critic(u, v[perm])
        log_partition = torch.logsumexp(t_marg, dim=0) - math.log(u.shape[0])
        return float(torch.mean(t_joint) - log_partition)


def mine_mi(u, v, config=CriticConfig(), rng_seed=0):
    """Donsker-Varadhan MI lower-bound estimate, in nats.

    Minibatches are drawn with replacement from the training fold, so the
    estimator works down to n = batch_size (folds smaller than the batch
    simply resample).
    """
    ut, vt = _to_tensor(u), _to_tensor(v)
    n = ut.shape[0]
    if n < config.batch_size or n < 4:
        raise TooFewSamples(
            f"MINE needs n >= batch_size ({config.batch_size}), got {n}"
        )
    torch.manual_seed(rng_seed)
    rng = np.random.default_rng(rng_seed)
    fold_values = []
    trace_total = 0
    emas = []
    for train_idx, eval_idx in _folds(n, rng):
        critic, trace_len, ema = _train_dv_critic(
            ut[train_idx], vt[train_idx], config, rng
        )
        fold_values.append(_dv_value(critic, ut[eval_idx], vt[eval_idx], rng))
        trace_total += trace_len
        emas.append(ema)
    value = float(np.mean(fold_values))
    if not math.isfinite(value):
        raise NonFinite("MINE produced a non-finite estimate")
    return MIEstimate(
        value=value,
        estimator="mine",
        diagnostics={
            "loss_trace_len": trace_total,
            "fold_values": tuple(fold_values),
            "final_ema": tuple(emas),
            "saturated": False,
        },
        seed=rng_seed,
    )


class _PairEncoders(nn.Module):
    def __init__(self, d_u, d_v, config):
        super().__init__()
        self.f = _mlp(d_u, config.hidden_width, config.depth, _NCE_EMBED_DIM)
        self.g = _mlp(d_v, config.hidden_width, config.depth, _NCE_EMBED_DIM)

    def scores(self, u, v):
        return self.f(u) @ self.g(v).T


def _train_nce(u, v, batch_k, config, rng):
    model = _PairEncoders(u.shape[1], v.shape[1], config)
    opt = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    ce = nn.CrossEntropyLoss()
    labels = torch.arange(batch_k)
    n = u.shape[0]
    replace = n < batch_k
    for _ in range(config.epochs):
        idx = rng.choice(n, size=batch_k, replace=replace)
        loss = ce(model.scores(u[idx], v[idx]), labels)
        loss_value = float(loss.detach())
        if not math.isfinite(loss_value) or loss_value > _DIVERGENCE_LIMIT:
            raise NonFinite(
                "InfoNCE training diverged; learning rate or input scale mismatch"
            )
        opt.zero_grad()
        loss.backward()
        opt.step()
    return model


def _nce_value(model, u, v, batch_k, rng):
    ce = nn.CrossEntropyLoss()
    labels = torch.arange(batch_k)
    n = u.shape[0]
    values = []
    with torch.no_grad():
        if n < batch_k:
            idx = rng.choice(n, size=batch_k, replace=True)
            loss = ce(model.scores(u[idx], v[idx]), labels)
            values.append(math.log(batch_k) - float(loss))
        else:
            perm = rng.permutation(n)
            for start in range(0, n - batch_k + 1, batch_k):
                idx = perm[start : start + batch_k]
                loss = ce(model.scores(u[idx], v[idx]), labels)
                values.append(math.log(batch_k) - float(loss))
    return float(np.mean(values))


def infonce_mi(u, v, batch_k=128, config=CriticConfig(), rng_seed=0):
    """Contrastive MI lower bound; structurally capped at ln(batch_k).

    Folds smaller than batch_k resample with replacement, so the
    estimator works down to n = batch_k.
    """
    if batch_k < 2:
        raise TooFewSamples("InfoNCE needs batch_k >= 2")
    ut, vt = _to_tensor(u), _to_tensor(v)
    n = ut.shape[0]
    if n < batch_k:
        raise TooFewSamples(f"InfoNCE needs n >= batch_k ({batch_k}), got {n}")
    torch.manual_seed(rng_seed)
    rng = np.random.default_rng(rng_seed)
    fold_values = []
    for train_idx, eval_idx in _folds(n, rng):
        model = _train_nce(ut[train_idx], vt[train_idx], batch_k, config, rng)
        fold_values.append(_nce_value(model, ut[eval_idx], vt[eval_idx], batch_k, rng))
    ceiling = math.log(batch_k)
    value = min(float(np.mean(fold_values)), ceiling)
    if not math.isfinite(value):
        raise NonFinite("InfoNCE produced a non-finite estimate")
    return MIEstimate(
        value=value,
        estimator="infonce",
        diagnostics={
            "batch_k": batch_k,
            "ceiling": ceiling,
            "fold_values": tuple(fold_values),
            "saturated": bool(ceiling - value < 0.05),
        },
        seed=rng_seed,
    )
