"""Estimator audits at desk scale: hyperparameter stability, sample
complexity, distribution sensitivity (against quadrature references), and
high-dimension behavior with per-cell bound re-verification.

Medians are the headline numbers throughout; means are reported alongside
(failed seeds produce a heavy right tail).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from ..bounds import slack
from ..errors import QuadratureFailure
from ..estimators import HistogramSpec, ksg_mi, perdim_mi
from ..proxy import ProxyConfig, build_proxy, sample
from .grid import derive_seed
from .verify import estimated_bound_terms

AUDIT_KINDS = ("hyperparam", "sample_complexity", "distribution", "high_d")


def _awgn_pair(d, n, sigma, rng):
    u = rng.standard_normal((n, d))
    v = u + sigma * rng.standard_normal((n, d))
    return u, v, 0.5 * d * math.log1p(1.0 / sigma**2)


def _mine(u, v, seed, **config_kwargs):
    from ..estimators import neural

    config = neural.CriticConfig(**config_kwargs)
    return neural.mine_mi(u, v, config=config, rng_seed=seed).value


@dataclass
class AuditReport:
    kind: str
    cells: list = field(default_factory=list)  # list of flat dicts
    headline: dict = field(default_factory=dict)


# --- hyperparameter stability -------------------------------------------------

DEFAULT_WIDTHS = (128, 256, 512)
DEFAULT_LRS = (1e-3, 1e-4, 1e-5)
DEFAULT_DEPTHS = (1, 2)
DEFAULT_EMAS = (0.99, 0.999)


def audit_hyperparam(
    widths=DEFAULT_WIDTHS,
    lrs=DEFAULT_LRS,
    depths=DEFAULT_DEPTHS,
    emas=DEFAULT_EMAS,
    seeds=(0,),
    n=5000,
    d=7,
    epochs=800,
    master_seed=0,
):
    """MINE relative error across critic configurations on the AWGN cell."""
    report = AuditReport(kind="hyperparam")
    for width in widths:
        for lr in lrs:
            for depth in depths:
                for ema in emas:
                    errs = []
                    for rep in seeds:
                        data_seed = derive_seed(
                            master_seed,
                            (("w", width), ("lr", lr), ("dep", depth), ("ema", ema)),
                            rep,
                        )
                        rng = np.random.default_rng(data_seed)
                        u, v, true = _awgn_pair(d, n, 1.0, rng)
                        value = _mine(
                            u,
                            v,
                            data_seed,
                            hidden_width=width,
                            depth=depth,
                            learning_rate=lr,
                            ema_decay=ema,
                            epochs=epochs,
                        )
                        errs.append(abs(value - true) / true)
                    report.cells.append(
                        {
                            "hidden_width": width,
                            "learning_rate": lr,
                            "depth": depth,
                            "ema_decay": ema,
                            "median_rel_err": float(np.median(errs)),
                            "mean_rel_err": float(np.mean(errs)),
                        }
                    )
    best = min(report.cells, key=lambda c: c["median_rel_err"])
    report.headline = {"best": best}
    return report


# --- sample complexity ---------------------------------------------------------


def audit_sample_complexity(
    ns=(500, 2000, 5000, 20000),
    seeds=(0, 1, 2),
    d=7,
    epochs=2000,
    hidden_width=512,
    master_seed=0,
):
    """Median MINE relative error as a function of the sample count."""
    report = AuditReport(kind="sample_complexity")
    medians = {}
    for n in ns:
        errs = []
        for rep in seeds:
            data_seed = derive_seed(master_seed, (("n", n),), rep)
            rng = np.random.default_rng(data_seed)
            u, v, true = _awgn_pair(d, n, 1.0, rng)
            value = _mine(
                u, v, data_seed, hidden_width=hidden_width, epochs=epochs
            )
            errs.append(abs(value - true) / true)
        medians[n] = float(np.median(errs))
        report.cells.append(
            {
                "n": n,
                "median_rel_err": medians[n],
                "mean_rel_err": float(np.mean(errs)),
            }
        )
    report.headline = {"median_by_n": medians}
    return report


# --- distribution sensitivity ---------------------------------------------------


@dataclass(frozen=True)
class ScalarFamily:
    """1-d signal-plus-noise pair with exact densities for quadrature."""

    name: str
    pdf_u: object
    pdf_noise: object
    pdf_v: object
    sample_u: object
    sample_noise: object
    u_limits: tuple
    noise_limits: tuple


def _gauss_pdf(x, mu, sigma):
    return math.exp(-0.5 * ((x - mu) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))


def make_family(name):
    """Construct one of the audited scalar families (V = U + noise)."""
    if name == "gaussian":
        s = 0.5
        return ScalarFamily(
            name=name,
            pdf_u=lambda u: _gauss_pdf(u, 0.0, 1.0),
            pdf_noise=lambda e: _gauss_pdf(e, 0.0, s),
            pdf_v=lambda v: _gauss_pdf(v, 0.0, math.sqrt(1 + s * s)),
            sample_u=lambda rng, n: rng.standard_normal(n),
            sample_noise=lambda rng, n: s * rng.standard_normal(n),
            u_limits=(-9.0, 9.0),
            noise_limits=(-9.0 * s, 9.0 * s),
        )
    if name == "laplace":
        # unit-scale Laplace signal and noise; V-density is the exact
        # self-convolution (1 + |v|) e^{-|v|} / 4
        return ScalarFamily(
            name=name,
            pdf_u=lambda u: 0.5 * math.exp(-abs(u)),
            pdf_noise=lambda e: 0.5 * math.exp(-abs(e)),
            pdf_v=lambda v: 0.25 * (1.0 + abs(v)) * math.exp(-abs(v)),
            sample_u=lambda rng, n: rng.laplace(0.0, 1.0, n),
            sample_noise=lambda rng, n: rng.laplace(0.0, 1.0, n),
            u_limits=(-30.0, 30.0),
            noise_limits=(-30.0, 30.0),
        )
    if name == "uniform":
        # U(-1,1) + U(-1,1): triangular V on [-2, 2]
        return ScalarFamily(
            name=name,
            pdf_u=lambda u: 0.5 if -1.0 <= u <= 1.0 else 0.0,
            pdf_noise=lambda e: 0.5 if -1.0 <= e <= 1.0 else 0.0,
            pdf_v=lambda v: max(0.0, (2.0 - abs(v)) / 4.0),
            sample_u=lambda rng, n: rng.uniform(-1.0, 1.0, n),
            sample_noise=lambda rng, n: rng.uniform(-1.0, 1.0, n),
            u_limits=(-1.0, 1.0),
            noise_limits=(-1.0, 1.0),
        )
    if name == "gmm":
        mu, s0, s = 1.5, 0.5, 0.5
        sv = math.sqrt(s0 * s0 + s * s)
        return ScalarFamily(
            name=name,
            pdf_u=lambda u: 0.5 * (_gauss_pdf(u, -mu, s0) + _gauss_pdf(u, mu, s0)),
            pdf_noise=lambda e: _gauss_pdf(e, 0.0, s),
            pdf_v=lambda v: 0.5 * (_gauss_pdf(v, -mu, sv) + _gauss_pdf(v, mu, sv)),
            sample_u=lambda rng, n: np.where(
                rng.random(n) < 0.5,
                rng.normal(-mu, s0, n),
                rng.normal(mu, s0, n),
            ),
            sample_noise=lambda rng, n: s * rng.standard_normal(n),
            u_limits=(-mu - 8 * s0, mu + 8 * s0),
            noise_limits=(-8 * s, 8 * s),
        )
    raise ValueError(f"unknown family {name!r}")


def quadrature_mi(family, rel_tol=1e-7):
    """Exact-density reference MI via adaptive 2-d quadrature."""

    def integrand(v, u):
        fn = family.pdf_noise(v - u)
        if fn <= 0.0:
            return 0.0
        fv = family.pdf_v(v)
        if fv <= 0.0:
            return 0.0
        return family.pdf_u(u) * fn * math.log(fn / fv)

    u_lo, u_hi = family.u_limits
    n_lo, n_hi = family.noise_limits
    value, abserr = integrate.dblquad(
        integrand,
        u_lo,
        u_hi,
        lambda u: u + n_lo,
        lambda u: u + n_hi,
        epsabs=1e-10,
        epsrel=rel_tol,
    )
    if not math.isfinite(value) or abserr > max(1e-6, 1e-4 * abs(value)):
        raise QuadratureFailure(
            f"reference MI quadrature for {family.name} did not converge "
            f"(value {value}, abserr {abserr})"
        )
    return float(value)


def audit_distribution(
    families=("gaussian", "laplace", "uniform", "gmm"),
    estimators=("ksg", "histogram_mm"),
    seeds=(0, 1, 2),
    n=5000,
    master_seed=0,
    mine_epochs=2000,
):
    """Estimator relative error against exact-density quadrature references."""
    report = AuditReport(kind="distribution")
    spec = HistogramSpec(bins_k=16)
    for name in families:
        family = make_family(name)
        reference = quadrature_mi(family)
        for estimator in estimators:
            errs = []
            for rep in seeds:
                data_seed = derive_seed(master_seed, (("family", name),), rep)
                rng = np.random.default_rng(data_seed)
                u = family.sample_u(rng, n)
                v = u + family.sample_noise(rng, n)
                if estimator == "ksg":
                    value = ksg_mi(u, v).value
                elif estimator == "histogram_mm":
                    value = perdim_mi(u[:, None], v[:, None], spec)
                elif estimator == "mine":
                    value = _mine(u[:, None], v[:, None], data_seed, epochs=mine_epochs)
                else:
                    raise ValueError(f"unknown estimator {estimator!r}")
                errs.append(abs(value - reference) / max(reference, 1e-12))
            report.cells.append(
                {
                    "family": name,
                    "estimator": estimator,
                    "reference_mi": reference,
                    "median_rel_err": float(np.median(errs)),
                    "mean_rel_err": float(np.mean(errs)),
                }
            )
    report.headline = {
        "worst_median": max(c["median_rel_err"] for c in report.cells)
    }
    return report


# --- high dimension --------------------------------------------------------------


def fixed_mi_sigma(d, target_nats=5.0):
    """Noise scale making the AWGN MI equal target_nats at dimension d."""
    return 1.0 / math.sqrt(math.expm1(2.0 * target_nats / d))


def audit_high_d(
    ds=(8, 32, 64),
    regimes=("fixed_noise", "fixed_mi"),
    estimators=("histogram_mm", "ksg"),
    seeds=(0, 1),
    n=5000,
    master_seed=0,
):
    """Relative error at growing dimension, plus bound re-verification.

    Each cell also evaluates an estimated slack on a proxy cell with
    dx = d (epsilon matched to the regime noise); the bound must hold even
    where the estimators have collapsed.
    """
    report = AuditReport(kind="high_d")
    spec = HistogramSpec(bins_k=16)
    bound_ok = 0
    bound_cells = 0
    for d in ds:
        for regime in regimes:
            sigma = 1.0 if regime == "fixed_noise" else fixed_mi_sigma(d)
            true = 0.5 * d * math.log1p(1.0 / sigma**2)
            for estimator in estimators:
                errs = []
                for rep in seeds:
                    data_seed = derive_seed(
                        master_seed, (("d", d), ("regime", regime)), rep
                    )
                    rng = np.random.default_rng(data_seed)
                    u, v, _ = _awgn_pair(d, n, sigma, rng)
                    if estimator == "histogram_mm":
                        value = perdim_mi(u, v, spec)
                    elif estimator == "ksg":
                        value = ksg_mi(u, v).value
                    else:
                        raise ValueError(f"unknown estimator {estimator!r}")
                    errs.append(abs(value - true) / true)
                report.cells.append(
                    {
                        "d": d,
                        "regime": regime,
                        "estimator": estimator,
                        "true_mi": true,
                        "median_rel_err": float(np.median(errs)),
                        "mean_rel_err": float(np.mean(errs)),
                    }
                )
            # bound re-verification on a proxy cell at this dimension
            for rep in seeds:
                cell_seed = derive_seed(
                    master_seed, (("d", d), ("regime", regime), ("check", 1)), rep
                )
                proxy = build_proxy(
                    ProxyConfig(dx=d, da=7, sigma_pi=0.3, epsilon=sigma, seed=cell_seed)
                )
                batch = sample(proxy, n, cell_seed + 1)
                for estimator in estimators:
                    rec = slack(estimated_bound_terms(batch, estimator, spec))
                    bound_cells += 1
                    bound_ok += int(not rec.violated)
    report.headline = {
        "bound_satisfied": bound_ok,
        "bound_cells": bound_cells,
    }
    return report


def run_estimator_audit(kind, **kwargs):
    """Dispatch one of the four audit kinds with its documented defaults."""
    if kind == "hyperparam":
        return audit_hyperparam(**kwargs)
    if kind == "sample_complexity":
        return audit_sample_complexity(**kwargs)
    if kind == "distribution":
        return audit_distribution(**kwargs)
    if kind == "high_d":
        return audit_high_d(**kwargs)
    raise ValueError(f"unknown audit kind {kind!r}; expected one of {AUDIT_KINDS}")
