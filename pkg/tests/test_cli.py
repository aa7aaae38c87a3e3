"""Tests for the command-line layer: config parsing, reports, catalog, plots."""
import json
from pathlib import Path

import numpy as np
import pytest

from qntl.cli.catalog import catalog_sha256, filter_catalog, load_catalog
from qntl.cli.config import ConfigError, parse_int_list, parse_range, parse_str_list
from qntl.cli.main import main
from qntl.cli.report import ExperimentReport, format_cell, rows_to_csv

PINNED_SHA = Path(__file__).parent / "data" / "catalog.sha256"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    monkeypatch.delenv("QNTL_SEED", raising=False)


# ---------------------------------------------------------------- parsing

def test_parse_range_forms():
    values = parse_range("0:0.9:0.1")
    assert len(values) == 9
    assert values[0] == 0.0 and values[-1] == 0.8
    assert values[3] == 0.3  # accumulation noise must be rounded away
    assert parse_range("5") == [5.0]
    assert parse_range("1,2.5,3") == [1.0, 2.5, 3.0]


def test_parse_range_rejections():
    for bad in ("", "1:2", "a:b:c", "0:1:0", "0:1:-0.1", "2:1:0.5", "1:1:1", "x,y"):
        with pytest.raises(ConfigError):
            parse_range(bad)


def test_parse_int_list():
    assert parse_int_list("2:8:2") == [2, 4, 6]
    assert parse_int_list("1,2") == [1, 2]
    with pytest.raises(ConfigError):
        parse_int_list("0.5")


def test_parse_str_list():
    assert parse_str_list("grid, tree") == ["grid", "tree"]
    with pytest.raises(ConfigError):
        parse_str_list(" , ")


# ---------------------------------------------------------------- reports

def test_format_cell_is_plain_decimal():
    assert format_cell(np.float64(0.25)) == "0.25"  # not the numpy repr
    assert format_cell(0.1 + 0.2) == "0.30000000000000004"  # honest round trip
    assert format_cell(True) == "1"
    assert format_cell(7) == "7"
    assert format_cell("x") == "x"


def test_rows_to_csv():
    text = rows_to_csv(("a", "b"), [(1, 2.5), (3, np.float64(0.5))])
    assert text == "a,b\n1,2.5\n3,0.5\n"
    with pytest.raises(ValueError):
        rows_to_csv(("a", "b"), [(1,)])


def test_report_json_round_trip():
    report = ExperimentReport(
        config={"experiment": "pns", "seed": 3, "params": {}},
        columns=("k", "v"),
        rows=((1, 0.5), (2, 0.25)),
        summary={"total": 2},
        duration_ms=1.25,
    )
    again = ExperimentReport.from_json(report.to_json())
    assert again.columns == report.columns
    assert again.rows == report.rows
    assert again.summary == {"total": 2}
    with pytest.raises(ValueError):
        ExperimentReport.from_json(json.dumps({"config": {}, "rows": []}))


# ---------------------------------------------------------------- run command

def run_json_report(tmp_path, name, *args):
    out = tmp_path / "report.json"
    code = main(["run", name, "--format", "json", "--out", str(out), *args])
    assert code == 0
    return json.loads(out.read_text())


def test_run_writes_csv(tmp_path, capsys):
    out = tmp_path / "pns.csv"
    code = main(
        ["run", "pns", "--pulses", "10000", "--strategies", "no-eve", "--seed", "1",
         "--out", str(out)]
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "series,record,bin,value"
    assert any(line.startswith("baseline,count,") for line in lines[1:])


def test_run_is_byte_identical(tmp_path):
    argv = ["run", "pns", "--pulses", "10000", "--strategies", "no-eve,always-minus-one",
            "--seed", "42"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--out", str(a)]) == 0
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_rejects_unknown_experiment_and_flags(tmp_path, capsys):
    assert main(["run", "warp-drive"]) == 2
    assert "warp-drive" in capsys.readouterr().err
    assert main(["run", "pns", "--bogus", "1"]) == 2
    assert main(["run"]) == 2
    assert main(["frobnicate"]) == 2


def test_run_runtime_failure_is_exit_3(tmp_path, capsys):
    # pulses parses fine but the experiment itself refuses tiny samples
    assert main(["run", "pns", "--pulses", "100"]) == 3
    assert "qntl: ValueError" in capsys.readouterr().err


def test_config_file_unknown_key_is_named(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "pns", "params": {"bogus": 1}}))
    assert main(["run", "pns", "--config", str(cfg)]) == 2
    assert "bogus" in capsys.readouterr().err
    cfg.write_text(json.dumps({"experimnt": "pns"}))
    assert main(["run", "pns", "--config", str(cfg)]) == 2
    assert "experimnt" in capsys.readouterr().err
    cfg.write_text("{not json")
    assert main(["run", "pns", "--config", str(cfg)]) == 2


def test_config_file_experiment_mismatch(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "trojan"}))
    assert main(["run", "pns", "--config", str(cfg)]) == 2
    assert "trojan" in capsys.readouterr().err


def test_seed_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"experiment": "pns", "seed": 5}))
    base = ["--pulses", "10000", "--strategies", "no-eve"]

    monkeypatch.setenv("QNTL_SEED", "123")
    report = run_json_report(tmp_path, "pns", *base)
    assert report["config"]["seed"] == 123  # env fills the gap

    report = run_json_report(tmp_path, "pns", "--config", str(cfg), *base)
    assert report["config"]["seed"] == 5  # file beats env

    report = run_json_report(tmp_path, "pns", "--config", str(cfg), "--seed", "9", *base)
    assert report["config"]["seed"] == 9  # flag beats file

    monkeypatch.delenv("QNTL_SEED")
    report = run_json_report(tmp_path, "pns", *base)
    assert report["config"]["seed"] == 0  # default


def test_seed_validation(tmp_path, capsys, monkeypatch):
    assert main(["run", "pns", "--seed", "abc"]) == 2
    assert main(["run", "pns", "--seed", "-1"]) == 2
    monkeypatch.setenv("QNTL_SEED", "not-a-number")
    assert main(["run", "pns", "--pulses", "10000"]) == 2


def test_config_file_params_merge_with_flag_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(
        json.dumps(
            {"experiment": "pns",
             "params": {"pulses": 10000, "strategies": ["no-eve"], "mu": 2.0}}
        )
    )
    report = run_json_report(tmp_path, "pns", "--config", str(cfg), "--mu", "4.0")
    assert report["config"]["params"]["mu"] == 4.0
    assert report["config"]["params"]["pulses"] == 10000
    assert report["summary"]["mean_photons"] == 4.0


# ---------------------------------------------------------------- catalog

def test_catalog_hash_is_pinned():
    assert catalog_sha256() == PINNED_SHA.read_text().strip()


def test_catalog_shape():
    entries = load_catalog()
    assert len(entries) == 11
    assert len(filter_catalog(entries, "network")) == 3
    pns = [e for e in entries if e.attack == "PNS"]
    assert len(pns) == 1 and pns[0].layer == "Physical" and pns[0].readiness == "Low"


def test_catalog_command_text(capsys):
    assert main(["catalog"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split() == ["Layer", "Attack", "Requirements", "Readiness"]
    assert len(lines) == 2 + 11
    assert main(["catalog", "--layer", "network"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 2 + 3


def test_catalog_command_json(capsys):
    assert main(["catalog", "--format", "json", "--layer", "Physical"]) == 0
    entries = json.loads(capsys.readouterr().out)
    assert [e["attack"] for e in entries] == ["PNS", "Trojan-Horse", "Phase-Remapping"]


def test_catalog_unknown_layer(capsys):
    assert main(["catalog", "--layer", "transport"]) == 2
    assert "transport" in capsys.readouterr().err


# ---------------------------------------------------------------- plotting

def test_plot_pns_series(tmp_path, capsys):
    report = tmp_path / "report.json"
    assert main(
        ["run", "pns", "--pulses", "10000", "--strategies", "no-eve,always-minus-one",
         "--seed", "3", "--format", "json", "--out", str(report)]
    ) == 0
    out_dir = tmp_path / "plots"
    assert main(["plot", "fig3", "--report", str(report), "--out-dir", str(out_dir)]) == 0
    written = sorted(p.name for p in out_dir.iterdir())
    # three count series (baseline + both strategies) and two z-score series
    assert len(written) == 5
    assert sum("-z" in name for name in written) == 2
    baseline = out_dir / "fig3-baseline.csv"
    assert baseline.read_text().splitlines()[0] == "bin,count"
    assert (out_dir / "fig3-no-eve-z.csv").read_text().splitlines()[0] == "bin,zscore"
    paths_printed = capsys.readouterr().out.strip().splitlines()
    assert len(paths_printed) == 5


def test_plot_svg_output(tmp_path):
    report = tmp_path / "report.json"
    main(["run", "trojan", "--photons", "2000", "--policies", "no-shift",
          "--seed", "1", "--format", "json", "--out", str(report)])
    out_dir = tmp_path / "plots"
    assert main(["plot", "fig4", "--report", str(report), "--out-dir", str(out_dir),
                 "--svg"]) == 0
    svgs = list(out_dir.glob("*.svg"))
    assert len(svgs) == 1
    assert svgs[0].read_text().lstrip().startswith("<svg")


def test_plot_decay_figures(tmp_path):
    report = tmp_path / "report.json"
    main(["run", "topology-decay", "--kinds", "grid", "--fractions", "0,0.2",
          "--trials", "2", "--pairs", "4", "--seed", "7", "--format", "json",
          "--out", str(report)])
    agg_dir, dist_dir = tmp_path / "a", tmp_path / "b"
    assert main(["plot", "fig6a", "--report", str(report), "--out-dir", str(agg_dir)]) == 0
    assert [p.name for p in agg_dir.iterdir()] == ["fig6a-grid.csv"]
    assert main(["plot", "fig6b", "--report", str(report), "--out-dir", str(dist_dir)]) == 0
    names = sorted(p.name for p in dist_dir.iterdir())
    assert names and all(name.startswith("fig6b-grid-d") for name in names)


def test_plot_mismatch_and_unknown_figure(tmp_path, capsys):
    report = tmp_path / "report.json"
    main(["run", "pns", "--pulses", "10000", "--strategies", "no-eve",
          "--format", "json", "--out", str(report)])
    assert main(["plot", "fig4", "--report", str(report)]) == 2
    assert "fig4" in capsys.readouterr().err
    assert main(["plot", "fig9", "--report", str(report)]) == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{}")
    assert main(["plot", "fig3", "--report", str(broken)]) == 2
    assert main(["plot", "fig3", "--report", str(tmp_path / "missing.json")]) == 2


# ---------------------------------------------------------------- entry point

def test_usage_and_exit_codes(capsys):
    assert main([]) == 0
    out = capsys.readouterr().out
    assert "usage: qntl" in out and "topology-decay" in out
    assert main(["--help"]) == 0
