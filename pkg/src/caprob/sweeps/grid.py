"""Sweep grids, deterministic cell seeding, and grouped statistics."""

import hashlib
import itertools
from dataclasses import dataclass, field

import numpy as np

from .stats import holm_bonferroni, one_sided_t


def derive_seed(master_seed, axis_items, replicate, tag=""):
    """Stable 63-bit seed from (master seed, axis tuple, replicate).

    Hash-based derivation means extending an axis value list never
    perturbs the seeds of existing cells.
    """
    text = f"{master_seed}|" + "|".join(f"{k}={v!r}" for k, v in axis_items)
    text += f"|rep={replicate}|{tag}"
    digest = hashlib.blake2b(text.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big") >> 1


def cell_id_string(axis_items, replicate=None):
    parts = [f"{k}={v}" for k, v in axis_items]
    if replicate is not None:
        parts.append(f"rep={replicate}")
    return "|".join(parts)


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian experiment grid with per-cell replicate seeds."""

    name: str
    axes: tuple  # ordered ((param, (values...)), ...)
    seeds: tuple = (0,)
    estimators: tuple = ("histogram_mm",)
    samples_n: int = 5000
    master_seed: int = 0

    def __post_init__(self):
        axes = tuple((str(k), tuple(v)) for k, v in self.axes)
        names = [k for k, _ in axes]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate axis names in {names}")
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "seeds", tuple(self.seeds))
        object.__setattr__(self, "estimators", tuple(self.estimators))

    def cells(self):
        names = [k for k, _ in self.axes]
        for values in itertools.product(*(v for _, v in self.axes)):
            axis_items = tuple(zip(names, values))
            for rep in self.seeds:
                yield Cell(
                    axis_items=axis_items,
                    replicate=rep,
                    seed=derive_seed(self.master_seed, axis_items, rep),
                )

    def n_cells(self):
        count = 1
        for _, values in self.axes:
            count *= len(values)
        return count * len(self.seeds)


@dataclass(frozen=True)
class Cell:
    axis_items: tuple
    replicate: int
    seed: int

    @property
    def cell_id(self):
        return cell_id_string(self.axis_items, self.replicate)

    @property
    def group_id(self):
        return cell_id_string(self.axis_items)

    def axis(self, name):
        for k, v in self.axis_items:
            if k == name:
                return v
        raise KeyError(name)

    def sampling_seed(self):
        return derive_seed(self.seed, self.axis_items, self.replicate, tag="sample")


@dataclass
class CellResult:
    cell: Cell
    slack_analytic: object = None  # SlackRecord
    slack_estimated: dict = field(default_factory=dict)  # estimator id -> SlackRecord
    extras: dict = field(default_factory=dict)

    @property
    def cell_id(self):
        return self.cell.cell_id

    @property
    def group_id(self):
        return self.cell.group_id


@dataclass(frozen=True)
class GroupStats:
    group_id: str
    source: str
    n: int
    mean: float
    std: float
    t_stat: float
    p_one_sided: float
    p_holm_adjusted: float
    significant: bool


def _slack_for(result, source):
    if source == "analytic":
        rec = result.slack_analytic
    else:
        rec = result.slack_estimated.get(source)
    return None if rec is None else rec.slack


def group_stats(results, source, alpha=0.05):
    """Per-group one-sided t statistics on slack, Holm-adjusted across groups.

    Groups with a single replicate get degenerate statistics (p = 1) and
    are still listed so violation counting stays complete.
    """
    by_group = {}
    for res in sorted(results, key=lambda r: r.cell_id):
        value = _slack_for(res, source)
        if value is not None and np.isfinite(value):
            by_group.setdefault(res.group_id, []).append(value)
    group_ids = sorted(by_group)
    raw = []
    t_stats = []
    for gid in group_ids:
        values = by_group[gid]
        if len(values) < 2:
            t_stats.append(0.0)
            raw.append(1.0)
        else:
            t, p = one_sided_t(values, null=0.0)
            t_stats.append(t)
            raw.append(p)
    adjusted = holm_bonferroni(raw) if raw else np.array([])
    out = []
    for gid, t, p, ph in zip(group_ids, t_stats, raw, adjusted):
        values = np.asarray(by_group[gid])
        out.append(
            GroupStats(
                group_id=gid,
                source=source,
                n=values.size,
                mean=float(values.mean()),
                std=float(values.std(ddof=1)) if values.size > 1 else 0.0,
                t_stat=t,
                p_one_sided=p,
                p_holm_adjusted=float(ph),
                significant=bool(ph < alpha),
            )
        )
    return out
