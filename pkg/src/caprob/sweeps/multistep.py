"""Multi-step accumulation: cumulative budget over a T-step rollout.

With i.i.d. per-step cells the cumulative slack equals T times the
single-step slack up to float accumulation; with heterogeneous steps it
is exactly the sum of per-step slacks.
"""

import dataclasses
from dataclasses import dataclass

from ..bounds import multistep_accumulate, slack
from ..errors import InvalidCount
from ..proxy import analytic_bound_terms, build_proxy


@dataclass
class MultiStepReport:
    t_steps: int
    per_step_terms: list
    per_step_slacks: tuple
    lhs_sum: float
    rhs_sum: float
    slack_total: float
    single_step_slack: float
    relative_gap: float  # |slack_total - T * S_1| / (T * S_1)


def run_multistep(config, t_steps, epsilons=None):
    """Accumulate analytic bound terms over t_steps proxy steps.

    epsilons optionally overrides the attack scale per step (length
    t_steps) for the heterogeneous case; otherwise every step reuses the
    same cell.
    """
    if t_steps < 1:
        raise InvalidCount("t_steps must be >= 1")
    if epsilons is not None and len(epsilons) != t_steps:
        raise InvalidCount("epsilons must have one entry per step")
    per_step = []
    for t in range(t_steps):
        step_config = config
        if epsilons is not None:
            step_config = dataclasses.replace(config, epsilon=float(epsilons[t]))
        per_step.append(analytic_bound_terms(build_proxy(step_config)))
    acc = multistep_accumulate(per_step)
    s1 = slack(per_step[0]).slack
    expected = t_steps * s1
    gap = abs(acc.slack_total - expected) / abs(expected) if expected != 0 else 0.0
    return MultiStepReport(
        t_steps=t_steps,
        per_step_terms=per_step,
        per_step_slacks=acc.per_step_slacks,
        lhs_sum=acc.lhs_sum,
        rhs_sum=acc.rhs_sum,
        slack_total=acc.slack_total,
        single_step_slack=s1,
        relative_gap=gap,
    )
