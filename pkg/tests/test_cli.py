import json
import os

import numpy as np

from caprob.cli import cli_main
from caprob.io.featuredump import FeatureDump, write_feature_dump

FAST_VERIFY = [
    "verify",
    "--dx", "4",
    "--da", "3",
    "--sigma-pi", "0.3",
    "--epsilon", "0.2,1.0",
    "--seeds", "0,1",
    "--analytic-only",
]


def _run_dir(out):
    entries = [d for d in os.listdir(out) if os.path.isdir(os.path.join(out, d))]
    assert len(entries) == 1
    return os.path.join(out, entries[0])


def test_verify_writes_outputs_and_exits_zero(tmp_path, capsys):
    out = str(tmp_path / "results")
    assert cli_main(FAST_VERIFY + ["--out", out]) == 0
    run_dir = _run_dir(out)
    for name in ("cells.csv", "summary.md", "effective-config.json"):
        assert os.path.exists(os.path.join(run_dir, name))
    with open(os.path.join(run_dir, "cells.csv")) as fh:
        assert fh.readline().startswith("# schema=")
    summary = open(os.path.join(run_dir, "summary.md")).read()
    assert "violations (analytic): 0" in summary
    assert "Published reference" in summary


def test_verify_rerun_byte_identical(tmp_path):
    out_a = str(tmp_path / "a")
    out_b = str(tmp_path / "b")
    assert cli_main(FAST_VERIFY + ["--out", out_a]) == 0
    assert cli_main(FAST_VERIFY + ["--out", out_b]) == 0
    cells_a = open(os.path.join(_run_dir(out_a), "cells.csv"), "rb").read()
    cells_b = open(os.path.join(_run_dir(out_b), "cells.csv"), "rb").read()
    assert cells_a == cells_b


def test_verify_effective_config_round_trip(tmp_path):
    from caprob.io.config import parse_config

    out = str(tmp_path / "results")
    assert cli_main(FAST_VERIFY + ["--out", out]) == 0
    echo = os.path.join(_run_dir(out), "effective-config.json")
    reparsed = parse_config("verify", echo)
    assert reparsed.params["epsilon"] == [0.2, 1.0]
    assert reparsed.params["analytic_only"] is True
    assert reparsed.out == out


def test_violation_exit_code(tmp_path):
    # a negative tolerance forces every finite-slack cell to "violate",
    # exercising the exit-code contract without a real counterexample
    out = str(tmp_path / "results")
    code = cli_main(FAST_VERIFY + ["--out", out, "--tolerance-nats", "-1000"])
    assert code == 1
    summary = open(os.path.join(_run_dir(out), "summary.md")).read()
    assert "> 0" in summary


def test_config_file_plus_flag_override(tmp_path):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"epsilon": [0.1], "analytic_only": True,
                                       "dx": [4], "da": [3], "sigma_pi": [0.3],
                                       "seeds": [0]}))
    out = str(tmp_path / "results")
    code = cli_main(
        ["verify", "--config", str(config_path), "--epsilon", "0.5", "--out", out]
    )
    assert code == 0
    echo = json.load(open(os.path.join(_run_dir(out), "effective-config.json")))
    assert echo["epsilon"] == [0.5]  # flag wins over file


def test_unknown_key_exits_two(tmp_path, capsys):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"epsilonn": [0.1]}))
    code = cli_main(["verify", "--config", str(config_path)])
    assert code == 2
    assert "epsilon" in capsys.readouterr().err


def test_unknown_subcommand_exits_two(capsys):
    assert cli_main(["frobnicate"]) == 2


def test_multistep_command(tmp_path, capsys):
    out = str(tmp_path / "results")
    code = cli_main(["multistep", "--steps", "10", "--dx", "4", "--da", "3",
                     "--epsilon", "0.2", "--out", out])
    assert code == 0
    assert "gap=" in capsys.readouterr().out


def test_leak_command(tmp_path):
    out = str(tmp_path / "results")
    assert cli_main(["leak", "--out", out]) == 0
    summary = open(os.path.join(_run_dir(out), "summary.md")).read()
    assert "debited-bound violations: 0" in summary


def _write_dumps(tmp_path, noise_scale, tag):
    rng = np.random.default_rng(0)
    clean = rng.standard_normal((400, 3)) * np.sqrt([4.0, 1.0, 0.5])
    pert = clean + noise_scale * rng.standard_normal(clean.shape)
    clean_path = str(tmp_path / f"{tag}-clean.csv")
    pert_path = str(tmp_path / f"{tag}-pert.csv")
    write_feature_dump(clean_path, FeatureDump(400, 3, f"{tag} clean", clean))
    write_feature_dump(pert_path, FeatureDump(400, 3, f"{tag} pert", pert))
    return clean_path, pert_path


def test_encoder_ceiling_command(tmp_path, capsys):
    clean, pert = _write_dumps(tmp_path, 0.5, "vanilla")
    out = str(tmp_path / "results")
    code = cli_main(["encoder-ceiling", "--clean", clean, "--pert", pert, "--out", out])
    assert code == 0
    printed = capsys.readouterr().out
    assert "sigma2_delta_phi" in printed
    assert "nats" in printed


def test_shift_signature_command(tmp_path, capsys):
    van_clean, van_pert = _write_dumps(tmp_path, 0.75, "vanilla")
    def_clean, def_pert = _write_dumps(tmp_path, 0.40, "defended")  # 3.5x var cut
    out = str(tmp_path / "results")
    code = cli_main(
        [
            "shift-signature",
            "--defended-clean", def_clean,
            "--defended-pert", def_pert,
            "--vanilla-clean", van_clean,
            "--vanilla-pert", van_pert,
            "--out", out,
        ]
    )
    assert code == 0
    assert "input_side" in capsys.readouterr().out


def test_missing_dump_exits_two(tmp_path, capsys):
    code = cli_main(
        ["encoder-ceiling", "--clean", "/nonexistent.csv", "--pert", "/also-missing.csv"]
    )
    assert code == 2


def test_paper_preset_expands_grid(tmp_path):
    from caprob.cli import _apply_preset
    from caprob.io.config import parse_config

    config = _apply_preset(parse_config("verify", None, {"preset": "paper"}))
    assert 0.0 in config.params["epsilon"]
    assert config.params["seeds"] == [0, 1, 2]
    # explicit values survive the preset
    config = _apply_preset(
        parse_config("verify", None, {"preset": "paper", "epsilon": [0.3]})
    )
    assert config.params["epsilon"] == [0.3]
