"""Experiment runner: file formats, manifests, determinism, CLI exit codes."""

import hashlib
import json

import pytest

from tentlab import cli, harness
from tentlab.harness import ExperimentConfig, emit_report, run_experiment


def read_manifest(out_dir):
    return json.loads((out_dir / "manifest.json").read_text())


def test_five_bit_table_report(tmp_path):
    out = tmp_path / "fb"
    run_experiment("five-bit-table", out)
    m = read_manifest(out)
    traj = m["results"]["decimal_trajectory"]
    assert traj[:5] == ["0.375", "0.75", "0.5", "1", "0"]
    assert set(traj[5:]) == {"0"}
    assert any("0.25" in e["detail"] for e in m["errata"])
    csv = (out / "trajectory.csv").read_text().splitlines()
    assert csv[0] == "step,value,bits"
    assert csv[1] == "0,0.375,0.0110"


def test_n100_orbits_report(tmp_path):
    out = tmp_path / "orbits"
    run_experiment("n100-orbits", out)
    orbits = json.loads((out / "orbits.json").read_text())
    cycles = [sorted(float(v) for v in o["cycle"]) for o in orbits]
    assert cycles[0] == [8, 16, 24, 32, 48, 56, 64, 72, 88, 96]
    assert cycles[1] == [40, 80]
    assert cycles[2] == [0]
    assert all(o["even_cycle"] for o in orbits)


def test_basin_forest_files(tmp_path):
    out = tmp_path / "basins"
    run_experiment("basin-forests", out)
    m = read_manifest(out)
    assert m["results"]["basins_disjoint"] is True
    assert m["results"]["integers_covered"] == 101
    edges = (out / "edges_0.csv").read_text().splitlines()
    assert edges[0] == "parent,child,depth"
    assert (out / "tree_0.txt").exists()
    cycles = json.loads((out / "cycles.json").read_text())
    assert sorted(len(c["cycle"]) for c in cycles) == [1, 2, 10]


def test_error_sum_files(tmp_path):
    out = tmp_path / "err"
    run_experiment("error-sum", out)
    rows = (out / "errsum.csv").read_text().splitlines()
    assert rows[0] == "t,E_t"
    assert rows[11] == "10,4.375"


def test_manifest_lists_every_output_with_digest(tmp_path):
    out = tmp_path / "fb"
    run_experiment("five-bit-table", out)
    m = read_manifest(out)
    produced = {p.name for p in out.iterdir()} - {"manifest.json"}
    assert set(m["outputs"]) == produced
    for name, meta in m["outputs"].items():
        data = (out / name).read_bytes()
        assert hashlib.sha256(data).hexdigest() == meta["sha256"]
        assert len(data) == meta["bytes"]


def test_reruns_are_byte_identical(tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / tag
        run_experiment("five-bit-table", out)
        outs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outs[0] == outs[1]

    cfg = ExperimentConfig(experiment="walk", bound="100", x0="67.2",
                           steps=1500, seed=11)
    files_a, _ = harness.walk_files(cfg)
    files_b, _ = harness.walk_files(cfg)
    assert files_a == files_b


def test_unknown_experiment():
    with pytest.raises(ValueError):
        run_experiment("does-not-exist", "out")


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="x", bins=1)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="x", steps=0)


def test_emit_report_returns_manifest_path(tmp_path):
    path = emit_report(tmp_path / "r", {"a.txt": "hello\n"}, {"config": {}})
    assert path.name == "manifest.json"
    m = json.loads(path.read_text())
    assert m["outputs"]["a.txt"]["bytes"] == 6


# --- CLI ---------------------------------------------------------------------

def test_cli_iterate(tmp_path, capsys):
    out = tmp_path / "it"
    rc = cli.main(["iterate", "--N", "1", "--x0", "0.4",
                   "--backend", "fixed:1,4", "--steps", "6",
                   "--out", str(out)])
    assert rc == 0
    assert (out / "trajectory.csv").exists()
    assert "manifest.json" in capsys.readouterr().out


def test_cli_cycle_and_histogram(tmp_path):
    assert cli.main(["cycle", "--N", "100", "--x0", "12.5",
                     "--out", str(tmp_path / "cy")]) == 0
    orbit = json.loads((tmp_path / "cy" / "orbit.json").read_text())
    assert orbit["transient"] == 4 and orbit["period"] == 1

    assert cli.main(["histogram", "--N", "100", "--x0", "67.2",
                     "--steps", "500", "--seed", "3", "--bins", "10",
                     "--out", str(tmp_path / "h")]) == 0
    rows = (tmp_path / "h" / "histogram.csv").read_text().splitlines()
    assert rows[0] == "bin_lo,bin_hi,count"
    assert len(rows) == 11


def test_cli_histogram_from_input_file(tmp_path):
    src = tmp_path / "values.txt"
    src.write_text("1.5\n2.5\n99.5\n")
    assert cli.main(["histogram", "--N", "100", "--bins", "4",
                     "--input", str(src), "--out", str(tmp_path / "h")]) == 0
    rows = (tmp_path / "h" / "histogram.csv").read_text().splitlines()
    assert rows[1].endswith(",2") and rows[4].endswith(",1")


def test_cli_backward_and_basin_and_errsum(tmp_path):
    assert cli.main(["backward", "--N", "100", "--x0", "67.2", "--steps", "20",
                     "--seed", "5", "--out", str(tmp_path / "bw")]) == 0
    rows = (tmp_path / "bw" / "walk.csv").read_text().splitlines()
    assert rows[0] == "step,value,choice" and len(rows) == 22

    assert cli.main(["basin", "--N", "100", "--out", str(tmp_path / "ba")]) == 0
    assert (tmp_path / "ba" / "cycles.json").exists()

    assert cli.main(["errsum", "--N", "1", "--x0", "0.4",
                     "--backend", "fixed:1,4", "--steps", "12",
                     "--out", str(tmp_path / "es")]) == 0
    assert (tmp_path / "es" / "errsum.csv").read_text().splitlines()[11] \
        == "10,4.375"


def test_cli_repro(tmp_path):
    assert cli.main(["repro", "five-bit-table",
                     "--out", str(tmp_path / "re")]) == 0
    assert (tmp_path / "re" / "orbit.json").exists()


def test_cli_usage_errors_exit_1(capsys):
    for argv in (
        ["cycle", "--backend", "bogus"],
        ["cycle", "--x0", "-4"],
        ["repro", "no-such-experiment"],
        ["nosuchcommand"],
        [],
    ):
        with pytest.raises(SystemExit) as exc:
            cli.main(argv)
        assert exc.value.code == 1, argv
        capsys.readouterr()


def test_cli_runtime_errors_exit_2(tmp_path, capsys):
    # bound not representable in the requested fixed-point format
    rc = cli.main(["errsum", "--N", "100", "--x0", "0.4",
                   "--backend", "fixed:1,4", "--steps", "5",
                   "--out", str(tmp_path / "x")])
    assert rc == 2
    assert "tentlab:" in capsys.readouterr().err
