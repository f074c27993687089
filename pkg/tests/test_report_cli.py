import json
import os

import pytest

from ltwist import cli
from ltwist.checks import build_registry
from ltwist.report import (
    RunConfig,
    config_from_env,
    config_from_mapping,
    load_config_file,
    report_all,
    report_to_csv,
    report_to_json,
    report_to_text,
)


def small_config(**over):
    base = dict(
        moduli_exact=(5,),
        moduli_numeric=(5,),
        moduli_bracket=(3,),
        moduli_decomposition=(),
        moduli_energy=(5,),
        cutoff=16,
        euler_order=50,
        jacobi_order=24,
        jacobi_z_range=4,
        series_order=24,
        qtrace_order=12,
        modular_order=200,
        n_terms=20_000,
    )
    base.update(over)
    return config_from_mapping(base, RunConfig())


def test_registry_size():
    assert len(build_registry(RunConfig())) >= 40


def test_report_document_and_determinism():
    cfg = small_config()
    doc1 = report_all(cfg)
    doc2 = report_all(small_config())
    assert report_to_json(doc1) == report_to_json(doc2)
    assert doc1["summary"]["total"] == len(doc1["checks"])
    for row in doc1["checks"]:
        assert set(row) == {"id", "formula", "status", "value", "witness", "runtime_ms"}
        assert row["runtime_ms"] is None  # timings disabled by default
    # the one designed failure is the printed squares value; nothing else fails
    failing = [r["id"] for r in doc1["checks"] if r["status"] == "fail"]
    assert failing == ["summation:squares"]


def test_report_small_cutoff_skips():
    cfg = small_config(cutoff=4)
    doc = report_all(cfg)
    skipped = {r["id"]: r for r in doc["checks"] if r["status"] == "skip"}
    assert any(r.startswith("fock:") for r in skipped)
    for row in skipped.values():
        assert row["witness"]  # skip always carries a reason


def test_report_formats():
    cfg = small_config(cutoff=4, moduli_bracket=(), moduli_energy=())
    doc = report_all(cfg)
    csv_text = report_to_csv(doc)
    header = csv_text.splitlines()[0]
    assert header == "id,status,value,witness,runtime_ms,formula"
    assert len(csv_text.splitlines()) == len(doc["checks"]) + 1
    text = report_to_text(doc)
    assert "passed" in text.splitlines()[-1]


def test_config_file_and_env(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("cutoff = 18\nseed=3\nmoduli_bracket = 3 5\n# comment\n\n")
    cfg = load_config_file(str(p))
    assert cfg.cutoff == 18 and cfg.seed == 3 and cfg.moduli_bracket == (3, 5)
    cfg2 = config_from_env({"LTWIST_CUTOFF": "22", "OTHER": "1"}, cfg)
    assert cfg2.cutoff == 22
    with pytest.raises(ValueError):
        config_from_mapping({"not_a_key": 1})
    bad = tmp_path / "bad.cfg"
    bad.write_text("just a line\n")
    with pytest.raises(ValueError):
        load_config_file(str(bad))


def test_cli_exact_commands(capsys):
    assert cli.dispatch(["classnumber", "--q", "7"]) == 0
    assert capsys.readouterr().out.strip() == "1"
    assert cli.dispatch(["lvalue", "--modulus", "5", "--char", "2", "--point", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "-2/5"
    assert cli.dispatch(["classnumber", "--q", "5"]) == 2
    assert "out of scope" in capsys.readouterr().err


def test_cli_cesaro(capsys):
    code = cli.dispatch([
        "cesaro", "--modulus", "5", "--char", "2", "--weight", "linear", "--exact",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["value"] == "-2/5"
    assert doc["mode"] == "exact-closed-form"
    code = cli.dispatch([
        "cesaro", "--modulus", "5", "--char", "2", "--weight", "linear",
        "--depth", "2", "--terms", "50000", "--tol", "1e-3",
    ])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert abs(float(doc["value"]) + 0.4) < 1e-3
    assert doc["residual"] < 1e-3


def test_cli_fock_and_qseries(capsys):
    assert cli.dispatch([
        "fock", "verify", "--modulus", "5", "--cutoff", "14", "--theorem", "3.28",
        "--json",
    ]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rows"][0]["status"] == "pass"
    assert cli.dispatch([
        "qseries", "verify", "--identity", "euler", "--order", "80",
    ]) == 0
    capsys.readouterr()
    assert cli.dispatch([
        "qseries", "verify", "--identity", "316", "--k", "2", "--j", "1",
        "--order", "30",
    ]) == 0
    capsys.readouterr()
    assert cli.dispatch(["qseries", "verify", "--identity", "euler", "--order", "0"]) == 2
    capsys.readouterr()
    assert cli.dispatch(["cocycle", "verify", "--field", "Q", "--height", "4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["dimension"] == 2


def test_cli_usage_errors(capsys):
    assert cli.dispatch(["no-such-command"]) == 2
    capsys.readouterr()
    assert cli.dispatch(["qseries", "verify", "--identity", "nope"]) == 2
    capsys.readouterr()


def test_cli_fock_small_cutoff_skips(capsys):
    code = cli.dispatch([
        "fock", "verify", "--modulus", "5", "--cutoff", "4", "--theorem", "2.4",
        "--json",
    ])
    assert code == 0  # window problems skip with a reason, they do not fail
    doc = json.loads(capsys.readouterr().out)
    assert any(r["status"] == "skip" and r["witness"] for r in doc["rows"])


def test_build_L_cutoff_guard():
    from ltwist.characters import dirichlet_characters
    from ltwist.fock import build_L

    chi = dirichlet_characters(5)[2]
    with pytest.raises(ValueError, match="cutoff too small"):
        build_L(chi, 2, D=8)


def test_cli_report(tmp_path, capsys, monkeypatch):
    cfgfile = tmp_path / "r.cfg"
    cfgfile.write_text(
        "moduli_exact = 5\nmoduli_numeric =\nmoduli_bracket =\n"
        "moduli_decomposition =\nmoduli_energy =\ncutoff = 4\n"
        "euler_order = 30\njacobi_order = 16\njacobi_z_range = 3\n"
        "series_order = 16\nqtrace_order = 10\nmodular_order = 200\n"
        "n_terms = 20000\n"
    )
    out = tmp_path / "report.json"
    code = cli.dispatch([
        "report", "--config", str(cfgfile), "--format", "json", "--out", str(out),
    ])
    doc = json.loads(out.read_text())
    failing = [r["id"] for r in doc["checks"] if r["status"] == "fail"]
    assert failing == ["summation:squares"]
    assert code == 1  # the designed red check keeps the exit honest
    assert doc["config"]["cutoff"] == 4
