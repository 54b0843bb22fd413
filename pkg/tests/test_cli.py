"""End-to-end checks of the command line front end."""

import json
import math
import re

import pytest

import skewpress as sp
from skewpress.cli import main
from skewpress.report import format_number


def _write_scenario(tmp_path, doc, name="case.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_validate_every_bundled_scenario(capsys):
    names = sorted(sp.bundled_scenarios())
    assert len(names) >= 6
    for name in names:
        assert main(["validate", name]) == 0
        out = capsys.readouterr().out
        assert out.startswith(f"ok: {name.removesuffix('.json')}")


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for name in ("example_z_lambda", "kesten_f2", "trivial_group",
                 "z2_lattice", "s3_pair", "golden_mean_z"):
        assert name in out
    assert "INVALID" not in out


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_run_trivial_group_end_to_end(tmp_path, capsys):
    rc = main(["run", "trivial_group", "--outdir", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    run_dir = tmp_path / "trivial_group"
    for stem in ("pressure-base", "pressure-ext", "spectral-radius",
                 "dichotomy", "gibbs-audit", "lemma33-audit"):
        assert (run_dir / f"{stem}.csv").exists(), stem
        assert (run_dir / f"{stem}.png").exists(), stem
    assert "wrote" in out and "run-manifest.json" in out

    manifest = json.loads((run_dir / "run-manifest.json").read_text())
    assert set(manifest["versions"]) == {"python", "numpy", "skewpress"}
    assert len(manifest["tasks"]) == 6
    assert all(t["status"] == "ok" for t in manifest["tasks"])
    assert manifest["total_wall_time_s"] > 0.0

    # the per-n table of the norm sweep is a pinned interface
    lines = (run_dir / "spectral-radius.csv").read_text().splitlines()
    header = next(ln for ln in lines if not ln.startswith("#"))
    assert header == "n,method,norm,error_bar,k_used,pruned_mass"

    # audits additionally keep their payload next to the delimited table
    gibbs = json.loads((run_dir / "gibbs-audit.json").read_text())
    assert set(gibbs) >= {"c_hat", "n_max", "worst_word"}
    assert gibbs["c_hat"] == pytest.approx(1.0, abs=1e-9)


def test_run_symmetry_payload_and_digits(tmp_path):
    rc = main(["run", "example_z_lambda", "--outdir", str(tmp_path),
               "--no-figures"])
    assert rc == 0
    run_dir = tmp_path / "example_z_lambda"
    sym = json.loads((run_dir / "symmetry.json").read_text())
    assert set(sym) >= {"n", "N_n", "c_n", "argmax_g", "alpha_hat"}
    assert sym["alpha_hat"] == pytest.approx(math.e, abs=1e-6)
    assert sym["n"] == list(range(2, 13))
    assert all(w == 0 for w in sym["N_n"])
    assert sym["c_n"][0] == pytest.approx(math.exp(4.0), rel=1e-9)

    base = (run_dir / "pressure-base.csv").read_text()
    want = math.log(math.exp(1.0) + math.exp(-1.0))
    assert re.search(r"# pressure_base = (\S+)", base).group(1) == format_number(want)

    dich = (run_dir / "dichotomy.csv").read_text()
    assert "AMENABLE-CONSISTENT" in dich


def test_twelve_significant_digits():
    assert format_number(math.pi) == "3.14159265359"
    assert format_number(2.0) == "2"
    assert format_number(1e-7) == "1e-07"


def test_schema_error_missing_psi(tmp_path, capsys):
    doc = {
        "shift": {"full_shift": 2},
        "potential": {"memory": 1, "values": {"1": 0.0, "2": 0.0}},
        "group": {"type": "free_abelian", "rank": 1},
        "tasks": [{"verb": "pressure-base"}],
    }
    rc = main(["run", _write_scenario(tmp_path, doc), "--outdir", str(tmp_path)])
    err = capsys.readouterr().err
    assert rc == 2
    assert 'missing "psi" key' in err


def test_schema_error_unknown_verb(tmp_path, capsys):
    doc = {
        "shift": {"full_shift": 2},
        "potential": {"memory": 1, "values": {"1": 0.0, "2": 0.0}},
        "group": {"type": "free_abelian", "rank": 1},
        "psi": {"1": [1], "2": [-1]},
        "tasks": [{"verb": "explode"}],
    }
    rc = main(["validate", _write_scenario(tmp_path, doc)])
    err = capsys.readouterr().err
    assert rc == 2
    for verb in sp.VERBS:
        assert verb in err


def test_unknown_bundled_name_lists_choices(capsys):
    rc = main(["run", "no_such_case"])
    err = capsys.readouterr().err
    assert rc == 2
    assert "kesten_f2" in err and "trivial_group" in err


def test_failed_audit_exits_one(tmp_path, capsys):
    doc = {
        "shift": {"full_shift": 2},
        "potential": {"memory": 1, "values": {"1": 0.0, "2": 0.0}},
        "group": {"type": "free_abelian", "rank": 1},
        "psi": {"1": [1], "2": [1]},
        "tasks": [{"verb": "symmetry", "params": {"n_range": [2, 5]}}],
        "output": "json",
    }
    rc = main(["run", _write_scenario(tmp_path, doc), "--outdir", str(tmp_path),
               "--no-figures"])
    capsys.readouterr()
    assert rc == 1
    run_dir = tmp_path / "case"
    payload = json.loads((run_dir / "symmetry.json").read_text())
    assert payload["ok"] is False
    assert payload["alpha_hat"] == "inf"
    assert payload["obstructions"]
    manifest = json.loads((run_dir / "run-manifest.json").read_text())
    assert manifest["tasks"][0]["audit_ok"] is False


def test_output_json_override(tmp_path):
    rc = main(["run", "trivial_group", "--output", "json", "--outdir",
               str(tmp_path), "--no-figures"])
    assert rc == 0
    run_dir = tmp_path / "trivial_group"
    assert not list(run_dir.glob("*.csv"))
    doc = json.loads((run_dir / "pressure-base.json").read_text())
    assert "summary" in doc and "rows" in doc
    assert doc["summary"]["pressure_base"] == pytest.approx(
        math.log(math.exp(0.3) + math.exp(-0.2)), abs=1e-9
    )


def test_runs_are_deterministic(tmp_path, capsys):
    for sub, threads in (("one", "1"), ("two", "3")):
        rc = main(["run", "golden_mean_z", "--outdir", str(tmp_path / sub),
                   "--threads", threads, "--no-figures"])
        assert rc == 0
    capsys.readouterr()
    d1 = tmp_path / "one" / "golden_mean_z"
    d2 = tmp_path / "two" / "golden_mean_z"
    names = sorted(p.name for p in d1.iterdir())
    assert names == sorted(p.name for p in d2.iterdir())
    for name in names:
        if name == "run-manifest.json":
            continue  # carries wall times and the thread flag
        assert (d1 / name).read_bytes() == (d2 / name).read_bytes(), name
