"""Bound bookkeeping: slack, channel-capacity upper bounds, the encoder
ceiling, the complementary discrete inequality and multi-step accumulation.

All quantities are in nats. The core identity throughout is

    Cap + Rob <= H(task) + I(channel),      Rob = coupling - leak

with slack S = H + I - Cap - Rob >= 0 for any policy; these helpers only
do exact arithmetic on terms produced elsewhere (analytically or by
estimators).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFeatures, DimMismatch, ShapeMismatch, ZeroNoise
from .gaussian import Spectrum, sample_spectrum


@dataclass(frozen=True)
class BoundTerms:
    """The five budget/realization terms of one cell, in nats.

    task_entropy_units records whether the entropy is differential (the
    Gaussian proxy's analytic slack) or discrete (quantized paths); the
    two must never be mixed inside one slack computation.
    """

    cap: float
    rob_coupling: float
    leak: float
    task_entropy: float
    channel: float
    source: str = "analytic"
    task_entropy_units: str = "differential"

    @property
    def rob(self):
        return self.rob_coupling - self.leak

    @property
    def lhs(self):
        return self.cap + self.rob

    @property
    def rhs(self):
        return self.task_entropy + self.channel


@dataclass(frozen=True)
class SlackRecord:
    terms: BoundTerms
    rob: float
    slack: float
    violated: bool
    cell_id: str = ""


def slack(terms, tolerance=0.0, cell_id=""):
    """Slack S = task_entropy + channel - cap - (coupling - leak).

    The violated flag fires when S < -tolerance (default 0: the bound is
    reported as violated on any negative slack).
    """
    rob = terms.rob
    value = terms.task_entropy + terms.channel - terms.cap - rob
    return SlackRecord(
        terms=terms,
        rob=rob,
        slack=value,
        violated=bool(value < -tolerance),
        cell_id=cell_id,
    )


def isotropic_channel_bound(d, sigma_x2, sigma_d2):
    """Flat-spectrum Gaussian channel bound (d/2) * ln(1 + sigma_x2/sigma_d2)."""
    if sigma_d2 <= 0.0:
        raise ZeroNoise("isotropic channel bound requires sigma_d2 > 0")
    return 0.5 * d * math.log1p(sigma_x2 / sigma_d2)


def pca_channel_bound(spectrum, sigma_d2):
    """Parallel-Gaussian channel bound sum_i 0.5 * ln(1 + lambda_i/sigma_d2).

    Tightens the isotropic bound by Jensen's inequality whenever the
    spectrum is non-flat (strictly, unless all eigenvalues are equal).
    """
    if sigma_d2 <= 0.0:
        raise ZeroNoise("PCA channel bound requires sigma_d2 > 0")
    return float(0.5 * np.sum(np.log1p(spectrum.eigenvalues / sigma_d2)))


@dataclass(frozen=True)
class EncoderAudit:
    """Worst-case channel ceiling of a frozen encoder under realized noise."""

    feature_dim: int
    n: int
    sigma2_delta_phi: float
    spectrum: Spectrum
    bound: float
    shift_vs_baseline: float = None


def encoder_ceiling(clean, perturbed):
    """Channel ceiling from paired clean/perturbed feature matrices.

    sigma2_delta_phi is the grand per-coordinate mean squared deviation;
    the spectrum comes from the mean-centered sample covariance of the
    clean features (rank <= n-1); the bound is the parallel-Gaussian
    channel bound of that spectrum at the realized noise.
    """
    clean = np.asarray(clean, dtype=np.float64)
    perturbed = np.asarray(perturbed, dtype=np.float64)
    if clean.shape != perturbed.shape:
        raise ShapeMismatch(
            f"clean {clean.shape} and perturbed {perturbed.shape} differ"
        )
    if clean.ndim != 2 or clean.shape[0] < 2:
        raise ShapeMismatch("feature matrices must be (n >= 2, d)")
    n, d = clean.shape
    sigma2 = float(np.mean((perturbed - clean) ** 2))
    if sigma2 == 0.0:
        raise DegenerateFeatures(
            "perturbed features equal clean features; realized noise is zero"
        )
    spectrum = sample_spectrum(clean)
    return EncoderAudit(
        feature_dim=d,
        n=n,
        sigma2_delta_phi=sigma2,
        spectrum=spectrum,
        bound=pca_channel_bound(spectrum, sigma2),
    )


@dataclass(frozen=True)
class ShiftSignature:
    delta: float
    classification: str  # "input_side" | "llm_side"


def shift_signature(defended, vanilla, rel_threshold=0.10):
    """Classify a defense by how far it moves the encoder ceiling.

    Input-side interventions shift the realized noise and hence the bound
    materially; adaptation inside the language model barely moves it. The
    default 10% relative threshold splits the two regimes.
    """
    if defended.feature_dim != vanilla.feature_dim:
        raise DimMismatch(
            f"feature dims differ: {defended.feature_dim} vs {vanilla.feature_dim}"
        )
    delta = defended.bound - vanilla.bound
    if vanilla.bound == 0.0:
        input_side = delta != 0.0
    else:
        input_side = abs(delta) / vanilla.bound > rel_threshold
    return ShiftSignature(
        delta=delta, classification="input_side" if input_side else "llm_side"
    )


@dataclass(frozen=True)
class DiscreteInequality:
    slack: float
    holds: bool


def discrete_inequality(cap_sc, rob_disc):
    """Complementary check rob_disc <= cap_sc for shared-quantizer estimates."""
    if cap_sc < 0.0 or rob_disc < 0.0:
        raise ValueError("both sides must be non-negative")
    value = cap_sc - rob_disc
    return DiscreteInequality(slack=value, holds=bool(value >= -1e-9))


@dataclass(frozen=True)
class MultiStepResult:
    lhs_sum: float
    rhs_sum: float
    slack_total: float
    per_step_slacks: tuple


def multistep_accumulate(per_step):
    """Sum LHS and RHS term-by-term across rollout steps.

    For i.i.d. steps the cumulative slack equals T times the single-step
    slack up to accumulation rounding; for mixed steps it is exactly the
    sum of per-step slacks.
    """
    if not per_step:
        raise ValueError("per_step must be non-empty")
    slacks = tuple(slack(t).slack for t in per_step)
    return MultiStepResult(
        lhs_sum=float(sum(t.lhs for t in per_step)),
        rhs_sum=float(sum(t.rhs for t in per_step)),
        slack_total=float(sum(slacks)),
        per_step_slacks=slacks,
    )
