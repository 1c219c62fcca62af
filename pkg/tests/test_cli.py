import json
import os

import numpy as np
import pytest
from click.testing import CliRunner

from qosc import DeformationContext, rescaled_mode
from qosc.cli import main
from qosc.serialize import load_lattice_function, write_lattice_function


@pytest.fixture
def runner():
    return CliRunner()


def test_spectrum_success(runner, tmp_path):
    out = str(tmp_path / "s.csv")
    r = runner.invoke(main, ["spectrum", "--q", "0.5", "--fock-dim", "60",
                             "--require-s", "8", "--out", out])
    assert r.exit_code == 0, r.output
    assert "s_match=28" in r.output
    assert os.path.exists(out)


def test_spectrum_requirement_failure(runner, tmp_path):
    out = str(tmp_path / "s.csv")
    r = runner.invoke(main, ["spectrum", "--fock-dim", "24", "--require-s",
                             "25", "--out", out])
    assert r.exit_code == 2


def test_spectrum_json_format(runner, tmp_path):
    out = str(tmp_path / "s.json")
    r = runner.invoke(main, ["spectrum", "--format", "json", "--out", out])
    assert r.exit_code == 0
    doc = json.load(open(out))
    assert doc["schema_version"] == 1


def test_hermite_lattice_table(runner, tmp_path):
    out = str(tmp_path / "m.csv")
    r = runner.invoke(main, ["hermite", "--n-max", "4", "--lattice-depth",
                             "6", "--out", out])
    assert r.exit_code == 0
    header = open(out).readline().strip()
    assert header == "sign,s,x,n,value_re,value_im"


def test_hermite_grid(runner, tmp_path):
    out = str(tmp_path / "g.csv")
    r = runner.invoke(main, ["hermite", "--family", "hermite", "--n-max", "2",
                             "--grid", "0.0:1.0:0.5", "--out", out])
    assert r.exit_code == 0
    lines = open(out).read().splitlines()
    assert lines[0] == "n,sign,s,x,value"
    assert len(lines) == 1 + 3 * 3


def test_hermite_bad_grid_is_validation_error(runner):
    r = runner.invoke(main, ["hermite", "--grid", "1:0:nope"])
    assert r.exit_code == 1


def test_hermite_bad_n_max(runner):
    r = runner.invoke(main, ["hermite", "--n-max", "200"])
    assert r.exit_code == 1


def test_kernel_writes_metadata(runner, tmp_path):
    out = str(tmp_path / "k.csv")
    r = runner.invoke(main, ["kernel", "--tau", "0.5", "--lattice-depth",
                             "8", "--fock-dim", "40", "--out", out])
    assert r.exit_code == 0
    first = open(out).readline()
    assert first.startswith("#") and "tau=" in first


def test_evolve_roundtrip(runner, tmp_path):
    ctx = DeformationContext(q=0.5, lattice_depth=10, fock_dim=44)
    src = str(tmp_path / "in.csv")
    write_lattice_function(rescaled_mode(1, ctx), ctx, src)
    out = str(tmp_path / "out.csv")
    r = runner.invoke(main, ["evolve", "--input", src, "--lattice-depth",
                             "10", "--fock-dim", "44", "--tau", "0.0",
                             "--out", out])
    assert r.exit_code == 0, r.output
    back = load_lattice_function(out)
    orig = load_lattice_function(src)
    assert np.allclose(back.values, orig.values, atol=1e-9)


def test_evolve_rejects_bare_input(runner, tmp_path):
    ctx = DeformationContext(q=0.5, lattice_depth=10, fock_dim=44)
    from qosc import mode_function
    src = str(tmp_path / "bare.csv")
    write_lattice_function(mode_function(1, ctx), ctx, src)
    r = runner.invoke(main, ["evolve", "--input", src, "--lattice-depth",
                             "10", "--fock-dim", "44"])
    assert r.exit_code == 1
    r = runner.invoke(main, ["evolve", "--input", src, "--lattice-depth",
                             "10", "--fock-dim", "44", "--rescale-input",
                             "--out", str(tmp_path / "o.csv")])
    assert r.exit_code == 0, r.output


def test_evolve_missing_input_is_io_error(runner, tmp_path):
    r = runner.invoke(main, ["evolve", "--input",
                             str(tmp_path / "absent.csv")])
    assert r.exit_code == 3


def test_evolve_window_mismatch(runner, tmp_path):
    ctx = DeformationContext(q=0.5, lattice_depth=10, fock_dim=44)
    src = str(tmp_path / "in.csv")
    write_lattice_function(rescaled_mode(0, ctx), ctx, src)
    r = runner.invoke(main, ["evolve", "--input", src,
                             "--lattice-depth", "12"])
    assert r.exit_code == 1


def test_config_file_and_flag_precedence(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("q = 0.3\nfock_dim = 24\n")
    out = str(tmp_path / "s.json")
    r = runner.invoke(main, ["spectrum", "--config", str(cfg), "--format",
                             "json", "--out", out])
    assert r.exit_code == 0
    assert json.load(open(out))["q"] == 0.3
    # explicit flag beats the file
    r = runner.invoke(main, ["spectrum", "--config", str(cfg), "--q", "0.5",
                             "--format", "json", "--out", out])
    assert r.exit_code == 0
    assert json.load(open(out))["q"] == 0.5


def test_config_json_variant(runner, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"q": 0.3, "fock_dim": 24}))
    out = str(tmp_path / "s.json")
    r = runner.invoke(main, ["spectrum", "--config", str(cfg), "--format",
                             "json", "--out", out])
    assert r.exit_code == 0
    assert json.load(open(out))["q"] == 0.3


def test_config_unknown_key(runner, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("qq = 0.5\n")
    r = runner.invoke(main, ["spectrum", "--config", str(cfg)])
    assert r.exit_code == 1


def test_invalid_q_is_validation_error(runner):
    r = runner.invoke(main, ["spectrum", "--q", "1.7"])
    assert r.exit_code == 1


def test_outputs_byte_identical_across_runs(runner, tmp_path):
    a, b = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    for out in (a, b):
        r = runner.invoke(main, ["kernel", "--tau", "0.9", "--lattice-depth",
                                 "8", "--fock-dim", "40", "--out", out])
        assert r.exit_code == 0
    assert open(a, "rb").read() == open(b, "rb").read()


def test_verify_battery_passes(runner, tmp_path):
    out = str(tmp_path / "report.csv")
    r = runner.invoke(main, ["verify", "--out", out])
    assert r.exit_code == 0, r.output[-2000:]
    lines = [ln for ln in r.output.splitlines() if ln.startswith("PASS ")]
    assert len(lines) >= 21  # >= 20 named checks plus the overall line
    assert "overall" in r.output.splitlines()[-1]
    assert os.path.exists(out)


def test_verify_corrupt_coupling_fails(runner):
    r = runner.invoke(main, ["verify", "--corrupt-coupling"])
    assert r.exit_code == 2
    assert "FAIL" in r.output
