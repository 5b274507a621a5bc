"""Leak-policy stress test: the debit term under a perturbation-copying policy.

Sweeps the leak ratio against the attack scale and reports, per cell, the
exact leak term, the action coupling, the debited slack, and what the
slack would read without the debit. The debit exists precisely to cancel
credit for policies that passively copy the perturbation into their
output; this sweep makes that cancellation observable.
"""

from dataclasses import dataclass

from ..bounds import slack
from ..proxy import Leak, ProxyConfig, analytic_bound_terms, build_proxy
from .grid import CellResult, SweepGrid

DESK_LAMBDAS = (0.0, 0.25, 0.5, 0.75, 0.99)
DESK_EPSILONS = (0.05, 0.2, 1.0)

# dims and noise scales reproduce the published peak magnitudes
# (leak 8.66, coupling 6.39 at lam=0.99, eps=1.0) almost exactly
DESK_DX = 7
DESK_DA = 7
DESK_SIGMA_PI = 0.3


def desk_grid(master_seed=0):
    return SweepGrid(
        name="leak-desk",
        axes=(("lam", DESK_LAMBDAS), ("epsilon", DESK_EPSILONS)),
        seeds=(0,),
        estimators=(),
        master_seed=master_seed,
    )


@dataclass
class LeakReport:
    results: list
    debited_violations: int
    debit_free_violations: int
    monotone_in_lam: bool


def run_leak_sweep(
    grid=None,
    dx=DESK_DX,
    da=DESK_DA,
    sigma_pi=DESK_SIGMA_PI,
    sigma_star=0.3,
    tolerance=0.0,
):
    """Analytic leak sweep over the lam-by-epsilon grid."""
    grid = grid or desk_grid()
    results = []
    for cell in grid.cells():
        config = ProxyConfig(
            dx=dx,
            da=da,
            sigma_star=sigma_star,
            sigma_pi=sigma_pi,
            epsilon=float(cell.axis("epsilon")),
            policy=Leak(lam=float(cell.axis("lam"))),
            seed=cell.seed,
        )
        terms = analytic_bound_terms(build_proxy(config))
        record = slack(terms, tolerance, cell_id=cell.cell_id)
        debit_free_slack = (
            terms.task_entropy + terms.channel - terms.cap - terms.rob_coupling
        )
        result = CellResult(cell=cell, slack_analytic=record)
        result.extras.update(
            leak=terms.leak,
            coupling=terms.rob_coupling,
            rob_debited=terms.rob,
            slack_debit_free=debit_free_slack,
            would_be_violation=bool(debit_free_slack < -tolerance),
        )
        results.append(result)
    results.sort(key=lambda r: r.cell_id)

    monotone = True
    by_eps = {}
    for res in results:
        eps = float(res.cell.axis("epsilon"))
        lam = float(res.cell.axis("lam"))
        by_eps.setdefault(eps, []).append((lam, res.extras["leak"]))
    for pairs in by_eps.values():
        pairs.sort()
        leaks = [leak for _, leak in pairs]
        if any(b < a - 1e-12 for a, b in zip(leaks, leaks[1:])):
            monotone = False
    return LeakReport(
        results=results,
        debited_violations=sum(r.slack_analytic.violated for r in results),
        debit_free_violations=sum(r.extras["would_be_violation"] for r in results),
        monotone_in_lam=monotone,
    )
