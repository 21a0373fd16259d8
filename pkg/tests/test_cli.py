"""End-to-end CLI behaviour through main(argv)."""

import json

import pytest

from cfiama.cli import build_parser, main
from cfiama.experiment import read_results, read_summary


def test_help_mentions_the_knobs(capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(["--help"])
    assert exc.value.code == 0
    out = capsys.readouterr().out
    for flag in ("--config", "--schemes", "--precoder", "--setups", "--seed", "--out"):
        assert flag in out


def test_unknown_scheme_is_a_clean_error(tmp_path, capsys):
    code = main(["--schemes", "bogus", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "bogus" in capsys.readouterr().err


def test_empty_scheme_list_is_rejected(tmp_path, capsys):
    code = main(["--schemes", " , ", "--out", str(tmp_path / "o")])
    assert code == 2
    assert "at least one scheme" in capsys.readouterr().err


def _write_tiny_config(path):
    path.write_text(
        "# tiny deterministic run\n"
        "L = 3\nK = 4\nN = 2\ntau_p = 2\n"
        "n_setups = 3\nn_channel_reals = 12\nseed = 21\n")


def test_end_to_end_run_and_overrides(tmp_path, capsys):
    config_path = tmp_path / "tiny.cfg"
    _write_tiny_config(config_path)
    out_dir = tmp_path / "run"
    code = main(["--config", str(config_path), "--schemes", "scalable,random",
                 "--precoder", "mr", "--seed", "5", "--out", str(out_dir)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "results.csv" in printed and "summary.csv" in printed

    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["seed"] == 5          # --seed override wins
    assert manifest["config"]["n_setups"] == 3      # file value kept
    assert manifest["schemes"] == ["scalable", "random"]
    assert manifest["precoders"] == ["mr"]

    rows = read_results(out_dir / "results.csv")
    assert len(rows) == 4 * 3 * 2
    summary = read_summary(out_dir / "summary.csv")
    assert {(s["scheme"], s["precoder"]) for s in summary} == \
        {("scalable", "mr"), ("random", "mr")}


def test_setups_override(tmp_path):
    config_path = tmp_path / "tiny.cfg"
    _write_tiny_config(config_path)
    out_dir = tmp_path / "run"
    code = main(["--config", str(config_path), "--schemes", "scalable",
                 "--precoder", "mr", "--setups", "4", "--out", str(out_dir)])
    assert code == 0
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["config"]["n_setups"] == 4
    assert len(read_results(out_dir / "results.csv")) == 4 * 4


def test_missing_config_file_reports_error(tmp_path, capsys):
    code = main(["--config", str(tmp_path / "nope.cfg"), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "error:" in capsys.readouterr().err
