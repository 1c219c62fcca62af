import json
import os

import numpy as np
import pytest

from qosc import (DeformationContext, ValidationError, build_Q,
                  build_mode_table, fractional_ft, kernel_K, load_kernel,
                  load_lattice_function, load_mode_table,
                  load_spectrum_report, mode_function, rescale,
                  spectrum_report, spectrum_report_payload,
                  verify_report_payload, write_kernel, write_lattice_function,
                  write_mode_table, write_spectrum_report,
                  write_verify_report)
from qosc.serialize import atomic_write_text


@pytest.fixture
def sctx():
    return DeformationContext(q=0.5, fock_dim=20, lattice_depth=8)


def test_mode_table_roundtrip_csv(tmp_path, sctx):
    t = build_mode_table("position", sctx)
    p = str(tmp_path / "t.csv")
    write_mode_table(t, p)
    back = load_mode_table(p)
    assert back.q == t.q
    assert back.fock_dim == t.fock_dim
    assert np.array_equal(back.values, t.values)


def test_mode_table_roundtrip_json(tmp_path, sctx):
    t = build_mode_table("momentum", sctx)
    p = str(tmp_path / "t.json")
    write_mode_table(t, p)
    back = load_mode_table(p)
    assert back.kind == "momentum"
    assert np.array_equal(back.values, t.values)
    assert np.array_equal(back.tail_start, t.tail_start)


def test_lattice_function_roundtrip(tmp_path, sctx):
    f = mode_function(3, sctx)
    for name in ("f.csv", "f.json"):
        p = str(tmp_path / name)
        write_lattice_function(f, sctx, p)
        back = load_lattice_function(p)
        assert back.kind == "position"
        assert not back.rescaled
        assert np.array_equal(back.values, f.values)


def test_lattice_function_rescaled_flag_roundtrip(tmp_path, sctx):
    f = rescale(mode_function(1, sctx), sctx)
    p = str(tmp_path / "r.json")
    write_lattice_function(f, sctx, p)
    assert load_lattice_function(p).rescaled


def test_kernel_roundtrip(tmp_path, sctx):
    for variant, maker in (("rescaled", fractional_ft), ("raw", kernel_K)):
        k = maker(0.37, sctx)
        for name in (f"k_{variant}.csv", f"k_{variant}.json"):
            p = str(tmp_path / name)
            write_kernel(k, p)
            back = load_kernel(p)
            assert back.variant == k.variant
            assert back.tau == k.tau
            assert back.s_match == k.s_match
            assert np.array_equal(back.matrix, k.matrix)


def test_kernel_csv_flags_low_confidence_rows(tmp_path, sctx):
    k = fractional_ft(0.3, sctx)
    p = str(tmp_path / "k.csv")
    write_kernel(k, p)
    lines = open(p).read().splitlines()
    assert lines[0].startswith("#")
    header = lines[1].split(",")
    flag_col = header.index("low_confidence")
    rows = [ln.split(",") for ln in lines[2:]]
    for r in rows:
        s = int(r[1])
        assert (r[flag_col] == "1") == k.low_confidence(s)


def test_spectrum_report_roundtrip(tmp_path, sctx):
    rep = spectrum_report(build_Q(sctx), sctx)
    p = str(tmp_path / "s.json")
    write_spectrum_report(rep, p)
    back = load_spectrum_report(p)
    assert back.s_match == rep.s_match
    assert len(back.matched) == len(rep.matched)
    assert back.matched[0].value == rep.matched[0].value
    payload = spectrum_report_payload(rep)
    assert payload["schema_version"] == 1


def test_spectrum_csv_has_unmatched_rows(tmp_path):
    ctx = DeformationContext(q=0.5, fock_dim=24, lattice_depth=4)
    rep = spectrum_report(build_Q(ctx), ctx)
    assert rep.unmatched
    p = "s.csv"
    write_spectrum_report(rep, str(p))
    try:
        rows = open(p).read().splitlines()[1:]
        empties = [r for r in rows if r.startswith(",")]
        assert len(empties) == len(rep.unmatched)
    finally:
        os.remove(p)


def test_write_is_deterministic(tmp_path, sctx):
    t = build_mode_table("position", sctx)
    p1, p2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    write_mode_table(t, p1)
    write_mode_table(t, p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_format_inference_and_override(tmp_path, sctx):
    t = build_mode_table("position", sctx)
    with pytest.raises(ValidationError):
        write_mode_table(t, str(tmp_path / "t.xml"))
    p = str(tmp_path / "t.dat")
    write_mode_table(t, p, fmt="json")
    back = load_mode_table(p, fmt="json")
    assert np.array_equal(back.values, t.values)


def test_schema_version_is_enforced(tmp_path, sctx):
    f = mode_function(0, sctx)
    p = str(tmp_path / "f.json")
    write_lattice_function(f, sctx, p)
    doc = json.load(open(p))
    doc["schema_version"] = 99
    open(p, "w").write(json.dumps(doc))
    with pytest.raises(ValidationError):
        load_lattice_function(p)


def test_csv_mixed_rescaled_flag_rejected(tmp_path, sctx):
    f = mode_function(0, sctx)
    p = str(tmp_path / "f.csv")
    write_lattice_function(f, sctx, p)
    lines = open(p).read().splitlines()
    parts = lines[1].split(",")
    parts[-1] = "1"
    lines[1] = ",".join(parts)
    open(p, "w").write("\n".join(lines) + "\n")
    with pytest.raises(ValidationError):
        load_lattice_function(p)


def test_malformed_csv_rejected(tmp_path):
    p = str(tmp_path / "junk.csv")
    open(p, "w").write("sign,s,x,re,im,rescaled_flag\n1,0,1.0,not_a_number,0,0\n")
    with pytest.raises(ValidationError):
        load_lattice_function(p)


def test_atomic_write_leaves_no_droppings(tmp_path, monkeypatch):
    target = tmp_path / "out.txt"
    real_replace = os.replace

    def boom(src, dst):
        raise OSError("disk full")

    monkeypatch.setattr(os, "replace", boom)
    with pytest.raises(OSError):
        atomic_write_text(str(target), "payload")
    monkeypatch.setattr(os, "replace", real_replace)
    assert not target.exists()
    assert list(tmp_path.iterdir()) == []


def test_verify_report_payload_shape():
    # a tiny report built by hand instead of running the full battery
    from qosc import CheckResult, VerifyReport
    checks = [CheckResult(name="x", passed=True, residual=0.0,
                          tolerance=1.0, runtime_s=0.01)]
    vr = VerifyReport(overall_pass=True, seed=3, qs=(0.5,), runtime_s=0.01,
                      checks=checks)
    payload = verify_report_payload(vr)
    assert payload["overall_pass"] is True
    assert payload["checks"][0]["name"] == "x"


def test_verify_report_write(tmp_path):
    from qosc import CheckResult, VerifyReport
    checks = [CheckResult(name="a", passed=True, residual=1e-12,
                          tolerance=1e-9, runtime_s=0.0),
              CheckResult(name="b", passed=False, residual=2.0,
                          tolerance=1e-9, runtime_s=0.0)]
    vr = VerifyReport(overall_pass=False, seed=0, qs=(0.5,), runtime_s=0.1,
                      checks=checks)
    for name in ("v.csv", "v.json"):
        p = str(tmp_path / name)
        write_verify_report(vr, p)
        body = open(p).read()
        assert "a" in body and "b" in body
