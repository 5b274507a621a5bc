"""Deterministic result emission: cells.csv, summary.md, effective-config.json.

Rows are ordered by cell id, floats use shortest-repr formatting, and no
timestamps appear anywhere, so re-running a sweep with the same config
produces byte-identical files.
"""

import csv
import hashlib
import os

CSV_SCHEMA = "caprob-cells-v1"

TERM_FIELDS = (
    "cap",
    "rob_coupling",
    "leak",
    "task_entropy",
    "channel",
    "rob",
    "slack",
    "violated",
)


def _fmt(value):
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_id_for(config):
    digest = hashlib.blake2b(config.to_json().encode(), digest_size=4).hexdigest()
    return f"{config.command}-{digest}"


def _result_rows(result):
    """(source, SlackRecord-or-None) pairs for one cell result."""
    rows = []
    if result.slack_analytic is not None:
        rows.append(("analytic", result.slack_analytic))
    for name in sorted(result.slack_estimated):
        rows.append((name, result.slack_estimated[name]))
    if not rows:
        rows.append(("-", None))
    return rows


def write_cells_csv(path, results):
    """One row per (cell, source) with fixed column order."""
    if not results:
        raise ValueError("no results to emit")
    axis_names = [k for k, _ in results[0].cell.axis_items]
    extra_keys = sorted({key for res in results for key in res.extras})
    header = axis_names + ["rep", "seed", "source", *TERM_FIELDS, *extra_keys]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# schema={CSV_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for res in sorted(results, key=lambda r: r.cell_id):
            for source, rec in _result_rows(res):
                row = [_fmt(res.cell.axis(name)) for name in axis_names]
                row += [_fmt(res.cell.replicate), _fmt(res.cell.seed), source]
                if rec is None:
                    row += [""] * len(TERM_FIELDS)
                else:
                    t = rec.terms
                    row += [
                        _fmt(t.cap),
                        _fmt(t.rob_coupling),
                        _fmt(t.leak),
                        _fmt(t.task_entropy),
                        _fmt(t.channel),
                        _fmt(rec.rob),
                        _fmt(rec.slack),
                        _fmt(rec.violated),
                    ]
                row += [_fmt(res.extras[k]) if k in res.extras else "" for k in extra_keys]
                writer.writerow(row)


def write_flat_csv(path, rows, field_order=None):
    """CSV from a list of flat dicts (estimator audits)."""
    if not rows:
        raise ValueError("no rows to emit")
    keys = field_order or sorted({k for row in rows for k in row})
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# schema={CSV_SCHEMA}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(keys)
        for row in rows:
            writer.writerow([_fmt(row[k]) if k in row else "" for k in keys])


def markdown_table(header, rows):
    lines = ["| " + " | ".join(header) + " |"]
    lines.append("|" + "|".join(" --- " for _ in header) + "|")
    for row in rows:
        lines.append("| " + " | ".join(_fmt(v) for v in row) + " |")
    return lines


def write_summary(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def prepare_run_dir(config):
    """Create out/<run-id>/ and echo the effective config into it."""
    run_dir = os.path.join(config.out, run_id_for(config))
    os.makedirs(run_dir, exist_ok=True)
    with open(
        os.path.join(run_dir, "effective-config.json"), "w", encoding="utf-8"
    ) as fh:
        fh.write(config.to_json())
    return run_dir
