"""Run configuration: JSON file plus flag overrides, schema-validated.

Every parameter has a default; unknown keys are rejected with a
nearest-key suggestion; the fully-resolved config is echoed into the
output directory and reparses to an identical RunConfig.
"""

import difflib
import json
from dataclasses import dataclass, field

from ..errors import ParseError, TypeMismatch, UnknownKey

PRESETS = ("desk", "paper")


@dataclass(frozen=True)
class Key:
    """One config key: python type, default, optional element type/choices."""

    type: type
    default: object
    elem: type = None
    choices: tuple = None


GLOBAL_SCHEMA = {
    "out": Key(str, "results"),
    "seed": Key(int, 0),
    "jobs": Key(int, 1),
    "preset": Key(str, "desk", choices=PRESETS),
    "tolerance_nats": Key(float, 0.0),
}

COMMAND_SCHEMAS = {
    "verify": {
        "dx": Key(list, [4, 7, 16], elem=int),
        "da": Key(list, [3, 7], elem=int),
        "sigma_pi": Key(list, [0.3, 1.0], elem=float),
        "sigma_star": Key(float, 0.3),
        "epsilon": Key(list, [0.05, 0.1, 0.2, 0.5, 1.0, 2.0], elem=float),
        "seeds": Key(list, [0, 1], elem=int),
        "samples_n": Key(int, 5000),
        "estimators": Key(list, ["histogram_mm", "ksg"], elem=str),
        "analytic_only": Key(bool, False),
    },
    "achievability": {
        "dims": Key(list, [[2, 7], [2, 4], [4, 4], [4, 2], [7, 4], [16, 7]]),
        "epsilon": Key(list, [0.05, 0.5, 2.0], elem=float),
        "alphas": Key(list, [1.0, 3.0, 10.0, 30.0], elem=float),
        "sigma_pis": Key(list, [0.01, 0.05, 0.1], elem=float),
        "bins": Key(int, 32),
        "samples_n": Key(int, 100_000),
        "seeds": Key(list, [0], elem=int),
        "attack": Key(str, "oblivious", choices=("oblivious", "adaptive")),
        "attack_steps": Key(int, 10),
    },
    "leak": {
        "lambdas": Key(list, [0.0, 0.25, 0.5, 0.75, 0.99], elem=float),
        "epsilon": Key(list, [0.05, 0.2, 1.0], elem=float),
        "dx": Key(int, 7),
        "da": Key(int, 7),
        "sigma_pi": Key(float, 0.3),
        "sigma_star": Key(float, 0.3),
        "seeds": Key(list, [0], elem=int),
    },
    "dpi-check": {
        "dx": Key(list, [1, 2, 4], elem=int),
        "sigma1": Key(list, [0.3, 1.0, 3.0], elem=float),
        "sigma2": Key(list, [0.3, 1.0, 3.0], elem=float),
        "seeds": Key(list, [0, 1, 2, 3, 4], elem=int),
        "samples_n": Key(int, 5000),
        "estimator": Key(str, "histogram_mm", choices=("histogram_mm", "ksg")),
        "dpi_tolerance": Key(float, 0.05),
    },
    "audit-estimators": {
        "kind": Key(
            str,
            "hyperparam",
            choices=("hyperparam", "sample_complexity", "distribution", "high_d"),
        ),
        "seeds": Key(list, [0, 1, 2], elem=int),
        "samples_n": Key(int, 5000),
        "epochs": Key(int, 2000),
        "ns": Key(list, [500, 2000, 5000, 20000], elem=int),
        "ds": Key(list, [8, 32, 64], elem=int),
        "families": Key(list, ["gaussian", "laplace", "uniform", "gmm"], elem=str),
        "estimators": Key(list, ["ksg", "histogram_mm"], elem=str),
    },
    "multistep": {
        "steps": Key(int, 10),
        "dx": Key(int, 7),
        "da": Key(int, 7),
        "sigma_pi": Key(float, 0.3),
        "sigma_star": Key(float, 0.3),
        "epsilon": Key(float, 0.2),
        "epsilons": Key(list, [], elem=float),
        "seed_cell": Key(int, 0),
    },
    "encoder-ceiling": {
        "clean": Key(str, ""),
        "pert": Key(str, ""),
    },
    "shift-signature": {
        "defended_clean": Key(str, ""),
        "defended_pert": Key(str, ""),
        "vanilla_clean": Key(str, ""),
        "vanilla_pert": Key(str, ""),
        "rel_threshold": Key(float, 0.10),
    },
}


@dataclass
class RunConfig:
    command: str
    out: str = "results"
    seed: int = 0
    jobs: int = 1
    preset: str = "desk"
    tolerance_nats: float = 0.0
    params: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "command": self.command,
            "out": self.out,
            "seed": self.seed,
            "jobs": self.jobs,
            "preset": self.preset,
            "tolerance_nats": self.tolerance_nats,
            **self.params,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _coerce(key, spec, value):
    if spec.type is bool:
        if not isinstance(value, bool):
            raise TypeMismatch(f"key {key!r} expects bool, got {type(value).__name__}")
        return value
    if spec.type is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeMismatch(f"key {key!r} expects int, got {type(value).__name__}")
        return value
    if spec.type is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise TypeMismatch(f"key {key!r} expects float, got {type(value).__name__}")
        return float(value)
    if spec.type is str:
        if not isinstance(value, str):
            raise TypeMismatch(f"key {key!r} expects str, got {type(value).__name__}")
        if spec.choices and value not in spec.choices:
            raise TypeMismatch(
                f"key {key!r} expects one of {spec.choices}, got {value!r}"
            )
        return value
    if spec.type is list:
        if not isinstance(value, (list, tuple)):
            raise TypeMismatch(f"key {key!r} expects list, got {type(value).__name__}")
        values = list(value)
        if spec.elem is not None:
            out = []
            for i, item in enumerate(values):
                if spec.elem is float:
                    if isinstance(item, bool) or not isinstance(item, (int, float)):
                        raise TypeMismatch(
                            f"key {key!r}[{i}] expects float, got {type(item).__name__}"
                        )
                    out.append(float(item))
                elif spec.elem is int:
                    if isinstance(item, bool) or not isinstance(item, int):
                        raise TypeMismatch(
                            f"key {key!r}[{i}] expects int, got {type(item).__name__}"
                        )
                    out.append(item)
                elif spec.elem is str:
                    if not isinstance(item, str):
                        raise TypeMismatch(
                            f"key {key!r}[{i}] expects str, got {type(item).__name__}"
                        )
                    out.append(item)
                else:
                    out.append(item)
            return out
        return values
    raise TypeMismatch(f"unhandled schema type for key {key!r}")


def _schema_for(command):
    if command not in COMMAND_SCHEMAS:
        raise UnknownKey(f"unknown command {command!r}")
    return {**GLOBAL_SCHEMA, **COMMAND_SCHEMAS[command]}


def _reject_unknown(key, schema):
    suggestion = difflib.get_close_matches(key, schema.keys(), n=1)
    hint = f"; nearest valid key: {suggestion[0]!r}" if suggestion else ""
    raise UnknownKey(f"unknown config key {key!r}{hint}")


def parse_config(command, path=None, overrides=None):
    """Resolve the effective RunConfig: defaults <- file <- flag overrides."""
    schema = _schema_for(command)
    raw = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        if text.strip():
            try:
                raw = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(
                    f"config {path}: {exc.msg} at line {exc.lineno}, column {exc.colno}",
                    line=exc.lineno,
                    column=exc.colno,
                ) from exc
            if not isinstance(raw, dict):
                raise ParseError(f"config {path}: top level must be a JSON object")
    merged = {}
    for source in (raw, overrides or {}):
        for key, value in source.items():
            if key == "command":
                continue
            if key not in schema:
                _reject_unknown(key, schema)
            merged[key] = value

    resolved = {key: spec.default for key, spec in schema.items()}
    for key, value in merged.items():
        resolved[key] = _coerce(key, schema[key], value)

    return RunConfig(
        command=command,
        out=resolved.pop("out"),
        seed=resolved.pop("seed"),
        jobs=resolved.pop("jobs"),
        preset=resolved.pop("preset"),
        tolerance_nats=resolved.pop("tolerance_nats"),
        params=resolved,
    )
