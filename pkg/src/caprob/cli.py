"""Command-line surface.

Exit codes: 0 success with zero violations, 1 bound violations found,
2 usage or configuration errors.
"""

import argparse
import os
import sys

from . import reference
from .errors import CaprobError
from .io.config import COMMAND_SCHEMAS, parse_config
from .io.featuredump import read_feature_dump
from .io.report import (
    markdown_table,
    prepare_run_dir,
    write_cells_csv,
    write_flat_csv,
    write_summary,
)

# values substituted for desk defaults when --preset paper is selected
PAPER_OVERRIDES = {
    "verify": {
        "epsilon": [0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0],
        "seeds": [0, 1, 2],
    },
    "achievability": {
        "dims": [[dx, da] for dx in (2, 4, 7, 16) for da in (2, 4, 7)],
        "epsilon": [0.05, 0.1, 0.2, 0.5, 1.0, 2.0],
        "seeds": [0, 1, 2],
    },
    "leak": {"seeds": [0, 1, 2]},
}


def _apply_preset(config):
    if config.preset != "paper":
        return config
    schema = COMMAND_SCHEMAS[config.command]
    for key, value in PAPER_OVERRIDES.get(config.command, {}).items():
        if config.params.get(key) == schema[key].default:
            config.params[key] = value
    return config


def _int_list(text):
    return [int(v) for v in text.split(",") if v]


def _float_list(text):
    return [float(v) for v in text.split(",") if v]


def _dims_list(text):
    # "2x7,4x4" -> [[2, 7], [4, 4]]
    out = []
    for pair in text.split(","):
        if not pair:
            continue
        dx, da = pair.lower().split("x")
        out.append([int(dx), int(da)])
    return out


def _add_common(parser):
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--preset", choices=("desk", "paper"))
    parser.add_argument("--seed", type=int)
    parser.add_argument("--jobs", type=int)
    parser.add_argument("--out")
    parser.add_argument("--tolerance-nats", type=float, dest="tolerance_nats")


_COMMON_KEYS = ("preset", "seed", "jobs", "out", "tolerance_nats")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="caprob",
        description="Capability-robustness budget laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="budget-inequality verification sweep")
    _add_common(p)
    p.add_argument("--dx", type=_int_list)
    p.add_argument("--da", type=_int_list)
    p.add_argument("--sigma-pi", type=_float_list, dest="sigma_pi")
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--samples-n", type=int, dest="samples_n")
    p.add_argument("--estimators", type=lambda t: t.split(","))
    p.add_argument("--analytic-only", action="store_true", dest="analytic_only", default=None)

    p = sub.add_parser("achievability", help="ridge-policy achievement-ratio sweep")
    _add_common(p)
    p.add_argument("--dims", type=_dims_list, help='e.g. "2x7,4x4"')
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--alphas", type=_float_list)
    p.add_argument("--sigma-pis", type=_float_list, dest="sigma_pis")
    p.add_argument("--bins", type=int)
    p.add_argument("--samples-n", type=int, dest="samples_n")
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--attack", choices=("oblivious", "adaptive"))

    p = sub.add_parser("leak", help="perturbation-copying policy stress test")
    _add_common(p)
    p.add_argument("--lambdas", type=_float_list)
    p.add_argument("--epsilon", type=_float_list)
    p.add_argument("--dx", type=int)
    p.add_argument("--da", type=int)
    p.add_argument("--sigma-pi", type=float, dest="sigma_pi")

    p = sub.add_parser("dpi-check", help="estimator-level data-processing sanity")
    _add_common(p)
    p.add_argument("--dx", type=_int_list)
    p.add_argument("--sigma1", type=_float_list)
    p.add_argument("--sigma2", type=_float_list)
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--samples-n", type=int, dest="samples_n")
    p.add_argument("--estimator", choices=("histogram_mm", "ksg"))

    p = sub.add_parser("audit-estimators", help="estimator audit suites")
    _add_common(p)
    p.add_argument("--kind", choices=("hyperparam", "sample_complexity", "distribution", "high_d"))
    p.add_argument("--seeds", type=_int_list)
    p.add_argument("--samples-n", type=int, dest="samples_n")
    p.add_argument("--epochs", type=int)
    p.add_argument("--ns", type=_int_list)
    p.add_argument("--ds", type=_int_list)
    p.add_argument("--families", type=lambda t: t.split(","))
    p.add_argument("--estimators", type=lambda t: t.split(","))

    p = sub.add_parser("multistep", help="cumulative budget over a T-step rollout")
    _add_common(p)
    p.add_argument("--steps", type=int)
    p.add_argument("--dx", type=int)
    p.add_argument("--da", type=int)
    p.add_argument("--sigma-pi", type=float, dest="sigma_pi")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--epsilons", type=_float_list, help="heterogeneous per-step scales")

    p = sub.add_parser("encoder-ceiling", help="channel ceiling from feature dumps")
    _add_common(p)
    p.add_argument("--clean", required=True)
    p.add_argument("--pert", required=True)

    p = sub.add_parser("shift-signature", help="defense shift classification")
    _add_common(p)
    p.add_argument("--defended-clean", required=True, dest="defended_clean")
    p.add_argument("--defended-pert", required=True, dest="defended_pert")
    p.add_argument("--vanilla-clean", required=True, dest="vanilla_clean")
    p.add_argument("--vanilla-pert", required=True, dest="vanilla_pert")
    p.add_argument("--rel-threshold", type=float, dest="rel_threshold")

    return parser


def _overrides_from(args):
    skip = {"command", "config"}
    out = {}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        out[key] = value
    return out


def _resolve_config(args):
    config = parse_config(args.command, args.config, _overrides_from(args))
    return _apply_preset(config)


# --- command handlers ---------------------------------------------------------


def _cmd_verify(config):
    from .sweeps.grid import SweepGrid
    from .sweeps.verify import run_verification_sweep

    p = config.params
    grid = SweepGrid(
        name="verify",
        axes=(
            ("dx", tuple(p["dx"])),
            ("da", tuple(p["da"])),
            ("sigma_pi", tuple(p["sigma_pi"])),
            ("epsilon", tuple(p["epsilon"])),
        ),
        seeds=tuple(p["seeds"]),
        estimators=() if p["analytic_only"] else tuple(p["estimators"]),
        samples_n=p["samples_n"],
        master_seed=config.seed,
    )
    report = run_verification_sweep(
        grid, jobs=config.jobs, tolerance=config.tolerance_nats,
        sigma_star=p["sigma_star"],
    )
    run_dir = prepare_run_dir(config)
    write_cells_csv(os.path.join(run_dir, "cells.csv"), report.results)

    lines = ["# Budget verification sweep", ""]
    lines.append(f"- cells: {len(report.results)}")
    for source, count in sorted(report.violations.items()):
        lines.append(f"- violations ({source}): {count}" + (" > 0" if count else ""))
    for source, stats in sorted(report.stats.items()):
        if stats:
            sig = sum(s.significant for s in stats)
            lines.append(
                f"- groups significant for slack > 0 ({source}, Holm-adjusted): "
                f"{sig}/{len(stats)}"
            )
    for source, medians in sorted(report.medians_by_epsilon.items()):
        if medians:
            lines += ["", f"## Median slack by attack scale ({source})", ""]
            lines += markdown_table(
                ["epsilon", "median slack (nats)"],
                [(eps, round(med, 3)) for eps, med in medians.items()],
            )
    lines += reference.reference_block(
        [
            ("median analytic slack by epsilon (full-size grid)",
             reference.SLACK_MEDIANS_ANALYTIC),
            ("median estimated slack by epsilon (full-size grid)",
             reference.SLACK_MEDIANS_ESTIMATED),
        ]
    )
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    total = report.total_violations()
    print(f"verify: {len(report.results)} cells, {total} violations -> {run_dir}")
    return 1 if total else 0


def _cmd_achievability(config):
    from .proxy import AdaptiveSign, ObliviousGaussian
    from .sweeps.achievability import run_achievability_sweep
    from .sweeps.grid import SweepGrid

    p = config.params
    grid = SweepGrid(
        name="achievability",
        axes=(
            ("dims", tuple(tuple(d) for d in p["dims"])),
            ("epsilon", tuple(p["epsilon"])),
        ),
        seeds=tuple(p["seeds"]),
        estimators=("histogram_mm",),
        samples_n=p["samples_n"],
        master_seed=config.seed,
    )
    attack = (
        AdaptiveSign(steps=p["attack_steps"])
        if p["attack"] == "adaptive"
        else ObliviousGaussian()
    )
    results = run_achievability_sweep(
        grid,
        alphas=tuple(p["alphas"]),
        sigma_pis=tuple(p["sigma_pis"]),
        bins=p["bins"],
        attack=attack,
    )
    run_dir = prepare_run_dir(config)
    write_cells_csv(os.path.join(run_dir, "cells.csv"), results)
    over = [r.extras["r"] for r in results if r.extras["regime"] == "over_actuated"]
    under = [r.extras["r"] for r in results if r.extras["regime"] == "under_actuated"]
    bad = sum(not r.extras["rhs_ge_lhs"] for r in results)
    lines = ["# Achievability sweep", ""]
    lines.append(f"- cells: {len(results)}")
    lines.append(f"- best ratio (over-actuated): {max(over) if over else float('nan'):.4f}")
    lines.append(f"- best ratio (under-actuated): {max(under) if under else float('nan'):.4f}")
    lines.append(f"- cells with LHS > RHS: {bad}" + (" > 0" if bad else ""))
    lines += reference.reference_block(
        [
            ("best-cell ratio (full-size sweep)", reference.ACHIEVABILITY_BEST_RATIO),
            ("under-actuated plateau", reference.ACHIEVABILITY_UNDERACTUATED_PLATEAU),
        ]
    )
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(f"achievability: {len(results)} cells -> {run_dir}")
    return 1 if bad else 0


def _cmd_leak(config):
    from .sweeps.grid import SweepGrid
    from .sweeps.leak import run_leak_sweep

    p = config.params
    grid = SweepGrid(
        name="leak",
        axes=(("lam", tuple(p["lambdas"])), ("epsilon", tuple(p["epsilon"]))),
        seeds=tuple(p["seeds"]),
        estimators=(),
        master_seed=config.seed,
    )
    report = run_leak_sweep(
        grid,
        dx=p["dx"],
        da=p["da"],
        sigma_pi=p["sigma_pi"],
        sigma_star=p["sigma_star"],
        tolerance=config.tolerance_nats,
    )
    run_dir = prepare_run_dir(config)
    write_cells_csv(os.path.join(run_dir, "cells.csv"), report.results)
    lines = ["# Leak-policy stress test", ""]
    lines.append(f"- cells: {len(report.results)}")
    lines.append(
        f"- debited-bound violations: {report.debited_violations}"
        + (" > 0" if report.debited_violations else "")
    )
    lines.append(f"- debit-free would-be violations: {report.debit_free_violations}")
    lines.append(f"- leak monotone in lam at every epsilon: {report.monotone_in_lam}")
    peak = max(r.extras["leak"] for r in report.results)
    peak_coupling = max(r.extras["coupling"] for r in report.results)
    lines.append(f"- peak leak: {peak:.3f} nats; peak coupling: {peak_coupling:.3f} nats")
    lines += reference.reference_block(
        [
            ("peak leak at (lam=0.99, eps=1.0)", reference.LEAK_PEAK_NATS),
            ("peak coupling at the same cell", reference.LEAK_PEAK_COUPLING_NATS),
        ]
    )
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(
        f"leak: {len(report.results)} cells, {report.debited_violations} "
        f"violations -> {run_dir}"
    )
    return 1 if report.debited_violations else 0


def _cmd_dpi(config):
    from .sweeps.dpi import run_dpi_check
    from .sweeps.grid import SweepGrid

    p = config.params
    grid = SweepGrid(
        name="dpi",
        axes=(
            ("dx", tuple(p["dx"])),
            ("sigma1", tuple(p["sigma1"])),
            ("sigma2", tuple(p["sigma2"])),
        ),
        seeds=tuple(p["seeds"]),
        estimators=(p["estimator"],),
        samples_n=p["samples_n"],
        master_seed=config.seed,
    )
    report = run_dpi_check(grid, tolerance=p["dpi_tolerance"])
    run_dir = prepare_run_dir(config)
    write_cells_csv(os.path.join(run_dir, "cells.csv"), report.results)
    lines = ["# Data-processing sanity check", ""]
    lines.append(f"- groups: {report.n_groups}")
    lines.append(
        f"- group-mean violations (tolerance {report.tolerance} nats): "
        f"{report.group_mean_violations}"
        + (" > 0" if report.group_mean_violations else "")
    )
    lines.append(f"- per-seed exceedances: {report.per_seed_exceedances}")
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(
        f"dpi-check: {report.n_groups} groups, "
        f"{report.group_mean_violations} violations -> {run_dir}"
    )
    return 1 if report.group_mean_violations else 0


def _cmd_audit(config):
    from .sweeps.audits import run_estimator_audit

    p = config.params
    kind = p["kind"]
    kwargs = {"seeds": tuple(p["seeds"]), "master_seed": config.seed}
    if kind == "hyperparam":
        kwargs.update(n=p["samples_n"], epochs=p["epochs"])
    elif kind == "sample_complexity":
        kwargs.update(ns=tuple(p["ns"]), epochs=p["epochs"])
    elif kind == "distribution":
        kwargs.update(
            families=tuple(p["families"]),
            estimators=tuple(p["estimators"]),
            n=p["samples_n"],
            mine_epochs=p["epochs"],
        )
    elif kind == "high_d":
        kwargs.update(
            ds=tuple(p["ds"]), estimators=tuple(p["estimators"]), n=p["samples_n"]
        )
    report = run_estimator_audit(kind, **kwargs)
    run_dir = prepare_run_dir(config)
    write_flat_csv(os.path.join(run_dir, "cells.csv"), report.cells)
    lines = [f"# Estimator audit: {kind}", ""]
    for key, value in sorted(report.headline.items()):
        lines.append(f"- {key}: {value}")
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(f"audit-estimators[{kind}]: {len(report.cells)} cells -> {run_dir}")
    return 0


def _cmd_multistep(config):
    from .proxy import ProxyConfig
    from .sweeps.multistep import run_multistep

    p = config.params
    proxy_config = ProxyConfig(
        dx=p["dx"],
        da=p["da"],
        sigma_star=p["sigma_star"],
        sigma_pi=p["sigma_pi"],
        epsilon=p["epsilon"],
        seed=p["seed_cell"],
    )
    epsilons = p["epsilons"] or None
    report = run_multistep(proxy_config, p["steps"], epsilons=epsilons)
    run_dir = prepare_run_dir(config)
    rows = [
        {
            "step": t,
            "cap": terms.cap,
            "rob_coupling": terms.rob_coupling,
            "leak": terms.leak,
            "task_entropy": terms.task_entropy,
            "channel": terms.channel,
            "slack": report.per_step_slacks[t],
        }
        for t, terms in enumerate(report.per_step_terms)
    ]
    write_flat_csv(
        os.path.join(run_dir, "cells.csv"),
        rows,
        field_order=["step", "cap", "rob_coupling", "leak", "task_entropy", "channel", "slack"],
    )
    violated = report.slack_total < -config.tolerance_nats
    lines = ["# Multi-step accumulation", ""]
    lines.append(f"- steps: {report.t_steps}")
    lines.append(f"- cumulative slack: {report.slack_total!r}")
    lines.append(f"- single-step slack: {report.single_step_slack!r}")
    lines.append(f"- relative gap vs T * S1: {report.relative_gap:.3e}")
    lines.append(f"- violated: {violated}")
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(
        f"multistep: T={report.t_steps}, slack_T={report.slack_total:.4f}, "
        f"gap={report.relative_gap:.2e} -> {run_dir}"
    )
    return 1 if violated else 0


def _cmd_encoder_ceiling(config):
    from .bounds import encoder_ceiling

    p = config.params
    clean = read_feature_dump(p["clean"])
    pert = read_feature_dump(p["pert"])
    audit = encoder_ceiling(clean.matrix, pert.matrix)
    run_dir = prepare_run_dir(config)
    write_flat_csv(
        os.path.join(run_dir, "cells.csv"),
        [
            {
                "n": audit.n,
                "feature_dim": audit.feature_dim,
                "sigma2_delta_phi": audit.sigma2_delta_phi,
                "bound_nats": audit.bound,
                "spectrum_trace": audit.spectrum.trace,
            }
        ],
        field_order=["n", "feature_dim", "sigma2_delta_phi", "bound_nats", "spectrum_trace"],
    )
    lines = ["# Encoder ceiling", ""]
    lines.append(f"- samples: {audit.n}, feature dim: {audit.feature_dim}")
    lines.append(f"- realized noise variance sigma2_delta_phi: {audit.sigma2_delta_phi!r}")
    lines.append(f"- channel ceiling: {audit.bound!r} nats")
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(f"sigma2_delta_phi = {audit.sigma2_delta_phi:.6g}")
    print(f"encoder ceiling = {audit.bound:.6g} nats")
    return 0


def _cmd_shift_signature(config):
    from .bounds import encoder_ceiling, shift_signature

    p = config.params
    defended = encoder_ceiling(
        read_feature_dump(p["defended_clean"]).matrix,
        read_feature_dump(p["defended_pert"]).matrix,
    )
    vanilla = encoder_ceiling(
        read_feature_dump(p["vanilla_clean"]).matrix,
        read_feature_dump(p["vanilla_pert"]).matrix,
    )
    sig = shift_signature(defended, vanilla, rel_threshold=p["rel_threshold"])
    run_dir = prepare_run_dir(config)
    write_flat_csv(
        os.path.join(run_dir, "cells.csv"),
        [
            {
                "defended_bound": defended.bound,
                "vanilla_bound": vanilla.bound,
                "delta_nats": sig.delta,
                "classification": sig.classification,
            }
        ],
        field_order=["defended_bound", "vanilla_bound", "delta_nats", "classification"],
    )
    lines = ["# Defense shift signature", ""]
    lines.append(f"- defended ceiling: {defended.bound!r} nats")
    lines.append(f"- vanilla ceiling: {vanilla.bound!r} nats")
    lines.append(f"- shift: {sig.delta!r} nats")
    lines.append(f"- classification: {sig.classification}")
    lines += reference.reference_block(
        [
            (
                "language-model-side adaptation shifted the ceiling by at most",
                f"{reference.LLM_SIDE_MAX_RELATIVE_SHIFT:.1%} of vanilla",
            )
        ]
    )
    write_summary(os.path.join(run_dir, "summary.md"), lines)
    print(f"shift = {sig.delta:.6g} nats ({sig.classification})")
    return 0


_HANDLERS = {
    "verify": _cmd_verify,
    "achievability": _cmd_achievability,
    "leak": _cmd_leak,
    "dpi-check": _cmd_dpi,
    "audit-estimators": _cmd_audit,
    "multistep": _cmd_multistep,
    "encoder-ceiling": _cmd_encoder_ceiling,
    "shift-signature": _cmd_shift_signature,
}


def cli_main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 2
    try:
        config = _resolve_config(args)
        return _HANDLERS[args.command](config)
    except CaprobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(cli_main())


if __name__ == "__main__":
    main()
