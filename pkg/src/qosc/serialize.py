"""CSV/JSON persistence for tables, functions, kernels and reports.

All writers go through an atomic temp-file-plus-rename, so a crashed run
never leaves a half-written artifact. Floats are emitted with repr,
which round-trips exactly; identical inputs produce identical bytes.

Column layouts:

    mode table CSV        sign,s,x,n,value_re,value_im
    lattice function CSV  sign,s,x,re,im,rescaled_flag
    kernel CSV            row_sign,row_s,col_sign,col_s,re,im,low_confidence
                          (metadata on a leading '#' line)
    spectrum CSV          sign,s,lambda,error  (unmatched rows leave
                          sign and s empty)
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict
from typing import Optional

import numpy as np

from .context import DeformationContext
from .errors import ValidationError
from .evolution import EvolutionKernel
from .fock import MatchedLevel, SpectrumReport
from .hilbert import LatticeFunction
from .qhermite import ModeTable, window_levels, window_signs, window_values

SCHEMA_VERSION = 1


def atomic_write_text(path: str, text: str) -> None:
    """Write text then rename into place; never exposes partial content."""
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".qosc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _infer_format(path: str, fmt: Optional[str]) -> str:
    if fmt is None:
        fmt = os.path.splitext(path)[1].lstrip(".").lower()
    if fmt not in ("csv", "json"):
        raise ValidationError(f"format must be 'csv' or 'json', got {fmt!r}")
    return fmt


def _json_dump(payload: dict) -> str:
    return json.dumps(payload, indent=1) + "\n"


def _require(payload: dict, obj: str):
    if not isinstance(payload, dict):
        raise ValidationError("top-level JSON payload must be an object")
    if payload.get("schema_version") != SCHEMA_VERSION:
        raise ValidationError(
            f"unsupported schema_version {payload.get('schema_version')!r}")
    if payload.get("object") != obj:
        raise ValidationError(
            f"expected object {obj!r}, found {payload.get('object')!r}")


def _site_triples(q: float, depth: int):
    for s in range(depth):
        yield 1, s, q**s
        yield -1, s, -(q**s)


# -- mode tables -------------------------------------------------------

def write_mode_table(table: ModeTable, path: str, fmt: Optional[str] = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sign", "s", "x", "n", "value_re", "value_im"])
        sites = list(_site_triples(table.q, table.lattice_depth))
        for n in range(table.fock_dim):
            for i, (sign, s, x) in enumerate(sites):
                v = complex(table.values[n, i])
                w.writerow([sign, s, repr(x), n, repr(v.real), repr(v.imag)])
        atomic_write_text(path, buf.getvalue())
        return
    payload = {
        "schema_version": SCHEMA_VERSION,
        "object": "mode_table",
        "kind": table.kind,
        "q": table.q,
        "fock_dim": table.fock_dim,
        "lattice_depth": table.lattice_depth,
        "tail_start": [int(t) for t in table.tail_start],
        "values": [[[complex(v).real, complex(v).imag] for v in row]
                   for row in table.values],
    }
    atomic_write_text(path, _json_dump(payload))


def load_mode_table(path: str, fmt: Optional[str] = None,
                    kind: str = "position") -> ModeTable:
    fmt = _infer_format(path, fmt)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "json":
        payload = json.loads(text)
        _require(payload, "mode_table")
        vals = np.array([[complex(re, im) for re, im in row]
                         for row in payload["values"]])
        if vals.shape != (payload["fock_dim"], 2 * payload["lattice_depth"]):
            raise ValidationError("mode table values have the wrong shape")
        if payload["kind"] == "position":
            vals = vals.real
        return ModeTable(kind=payload["kind"], q=float(payload["q"]),
                         fock_dim=int(payload["fock_dim"]),
                         lattice_depth=int(payload["lattice_depth"]),
                         values=vals,
                         tail_start=np.asarray(payload["tail_start"], dtype=int))
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["sign", "s", "x", "n", "value_re", "value_im"]:
        raise ValidationError("mode table CSV header is wrong")
    body = rows[1:]
    if not body:
        raise ValidationError("mode table CSV has no rows")
    try:
        degrees = sorted({int(r[3]) for r in body})
        levels = sorted({int(r[1]) for r in body})
        q_est = None
        depth = len(levels)
        nmax = len(degrees)
        vals = np.zeros((nmax, 2 * depth), dtype=complex)
        for r in body:
            sign, s, x, n = int(r[0]), int(r[1]), float(r[2]), int(r[3])
            if s == 1 and sign == 1:
                q_est = x
            vals[n, 2 * s + (0 if sign > 0 else 1)] = complex(float(r[4]), float(r[5]))
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"mode table CSV is malformed: {exc}") from exc
    if degrees != list(range(nmax)) or levels != list(range(depth)) or q_est is None:
        raise ValidationError("mode table CSV does not cover a full window")
    if kind == "position":
        vals = vals.real
    return ModeTable(kind=kind, q=q_est, fock_dim=nmax, lattice_depth=depth,
                     values=vals, tail_start=np.full(2 * depth, nmax, dtype=int))


# -- lattice functions -------------------------------------------------

def write_lattice_function(f: LatticeFunction, ctx: DeformationContext,
                           path: str, fmt: Optional[str] = None) -> None:
    fmt = _infer_format(path, fmt)
    if f.values.shape[0] != 2 * ctx.lattice_depth:
        raise ValidationError(
            f"function has {f.values.shape[0]} sites, context wants "
            f"{2 * ctx.lattice_depth}")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sign", "s", "x", "re", "im", "rescaled_flag"])
        flag = 1 if f.rescaled else 0
        for i, (sign, s, x) in enumerate(_site_triples(ctx.q, ctx.lattice_depth)):
            v = complex(f.values[i])
            w.writerow([sign, s, repr(x), repr(v.real), repr(v.imag), flag])
        atomic_write_text(path, buf.getvalue())
        return
    payload = {
        "schema_version": SCHEMA_VERSION,
        "object": "lattice_function",
        "kind": f.kind,
        "q": ctx.q,
        "lattice_depth": ctx.lattice_depth,
        "rescaled": bool(f.rescaled),
        "values": [[complex(v).real, complex(v).imag] for v in f.values],
    }
    atomic_write_text(path, _json_dump(payload))


def load_lattice_function(path: str, fmt: Optional[str] = None,
                          kind: str = "position") -> LatticeFunction:
    fmt = _infer_format(path, fmt)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
        _require(payload, "lattice_function")
        vals = np.array([complex(re, im) for re, im in payload["values"]])
        if vals.shape[0] != 2 * int(payload["lattice_depth"]):
            raise ValidationError("lattice function length mismatch")
        return LatticeFunction(payload["kind"], vals,
                               rescaled=bool(payload["rescaled"]))
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["sign", "s", "x", "re", "im", "rescaled_flag"]:
        raise ValidationError("lattice function CSV header is wrong")
    body = rows[1:]
    if not body or len(body) % 2 != 0:
        raise ValidationError("lattice function CSV needs an even, nonzero "
                              "number of site rows")
    vals = np.zeros(len(body), dtype=complex)
    flags = set()
    try:
        for r in body:
            sign, s = int(r[0]), int(r[1])
            idx = 2 * s + (0 if sign > 0 else 1)
            if not 0 <= idx < len(body):
                raise ValidationError(f"site (sign={sign}, s={s}) out of range")
            vals[idx] = complex(float(r[3]), float(r[4]))
            flags.add(int(r[5]))
    except (ValueError, IndexError) as exc:
        raise ValidationError(f"lattice function CSV is malformed: {exc}") from exc
    if len(flags) != 1:
        raise ValidationError("rescaled_flag must be constant across rows")
    return LatticeFunction(kind, vals, rescaled=bool(flags.pop()))


# -- evolution kernels -------------------------------------------------

def _kernel_meta(k: EvolutionKernel) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "object": "evolution_kernel",
        "variant": k.variant,
        "tau": k.tau,
        "q": k.q,
        "n_max": k.n_max,
        "lattice_depth": k.lattice_depth,
        "s_match": k.s_match,
        "tail_estimate": k.tail_estimate,
    }


def write_kernel(k: EvolutionKernel, path: str, fmt: Optional[str] = None) -> None:
    fmt = _infer_format(path, fmt)
    sites = list(_site_triples(k.q, k.lattice_depth))
    if fmt == "csv":
        buf = io.StringIO()
        meta = _kernel_meta(k)
        buf.write("# " + " ".join(f"{key}={meta[key]}" for key in meta) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row_sign", "row_s", "col_sign", "col_s", "re", "im",
                    "low_confidence"])
        for i, (rs, rl, _) in enumerate(sites):
            flag = 1 if k.low_confidence(rl) else 0
            for j, (cs_, cl, _) in enumerate(sites):
                v = complex(k.matrix[i, j])
                w.writerow([rs, rl, cs_, cl, repr(v.real), repr(v.imag), flag])
        atomic_write_text(path, buf.getvalue())
        return
    payload = _kernel_meta(k)
    payload["entries"] = [
        {"row_sign": rs, "row_s": rl, "col_sign": cs_, "col_s": cl,
         "re": complex(k.matrix[i, j]).real, "im": complex(k.matrix[i, j]).imag,
         "low_confidence": k.low_confidence(rl)}
        for i, (rs, rl, _) in enumerate(sites)
        for j, (cs_, cl, _) in enumerate(sites)
    ]
    atomic_write_text(path, _json_dump(payload))


def load_kernel(path: str, fmt: Optional[str] = None) -> EvolutionKernel:
    fmt = _infer_format(path, fmt)
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if fmt == "json":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
        _require(payload, "evolution_kernel")
        depth = int(payload["lattice_depth"])
        m = np.zeros((2 * depth, 2 * depth), dtype=complex)
        for e in payload["entries"]:
            i = 2 * int(e["row_s"]) + (0 if int(e["row_sign"]) > 0 else 1)
            j = 2 * int(e["col_s"]) + (0 if int(e["col_sign"]) > 0 else 1)
            m[i, j] = complex(float(e["re"]), float(e["im"]))
        return EvolutionKernel(tau=float(payload["tau"]),
                               variant=payload["variant"],
                               q=float(payload["q"]),
                               n_max=int(payload["n_max"]),
                               lattice_depth=depth, matrix=m,
                               tail_estimate=float(payload["tail_estimate"]),
                               s_match=int(payload["s_match"]))
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# "):
        raise ValidationError("kernel CSV is missing its metadata line")
    meta = {}
    for tok in lines[0][2:].split():
        key, _, val = tok.partition("=")
        meta[key] = val
    try:
        depth = int(meta["lattice_depth"])
        rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
        if rows[0] != ["row_sign", "row_s", "col_sign", "col_s", "re", "im",
                       "low_confidence"]:
            raise ValidationError("kernel CSV header is wrong")
        m = np.zeros((2 * depth, 2 * depth), dtype=complex)
        for r in rows[1:]:
            i = 2 * int(r[1]) + (0 if int(r[0]) > 0 else 1)
            j = 2 * int(r[3]) + (0 if int(r[2]) > 0 else 1)
            m[i, j] = complex(float(r[4]), float(r[5]))
        return EvolutionKernel(tau=float(meta["tau"]), variant=meta["variant"],
                               q=float(meta["q"]), n_max=int(meta["n_max"]),
                               lattice_depth=depth, matrix=m,
                               tail_estimate=float(meta["tail_estimate"]),
                               s_match=int(meta["s_match"]))
    except (KeyError, ValueError, IndexError) as exc:
        raise ValidationError(f"kernel CSV is malformed: {exc}") from exc


# -- reports -----------------------------------------------------------

def spectrum_report_payload(rep: SpectrumReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "object": "spectrum_report",
        "q": rep.q,
        "fock_dim": rep.fock_dim,
        "lattice_depth": rep.lattice_depth,
        "match_tol": rep.match_tol,
        "s_match": rep.s_match,
        "max_error": rep.max_error,
        "matched": [{"sign": m.sign, "s": m.s, "lambda": m.value,
                     "error": m.error} for m in rep.matched],
        "unmatched": list(rep.unmatched),
    }


def write_spectrum_report(rep: SpectrumReport, path: str,
                          fmt: Optional[str] = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        atomic_write_text(path, _json_dump(spectrum_report_payload(rep)))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sign", "s", "lambda", "error"])
    for m in rep.matched:
        w.writerow([m.sign, m.s, repr(m.value), repr(m.error)])
    for v in rep.unmatched:
        w.writerow(["", "", repr(v), ""])
    atomic_write_text(path, buf.getvalue())


def load_spectrum_report(path: str) -> SpectrumReport:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"not valid JSON: {exc}") from exc
    _require(payload, "spectrum_report")
    matched = [MatchedLevel(int(m["sign"]), int(m["s"]), float(m["lambda"]),
                            float(m["error"])) for m in payload["matched"]]
    return SpectrumReport(q=float(payload["q"]),
                          fock_dim=int(payload["fock_dim"]),
                          lattice_depth=int(payload["lattice_depth"]),
                          match_tol=float(payload["match_tol"]),
                          matched=matched,
                          unmatched=[float(v) for v in payload["unmatched"]],
                          s_match=int(payload["s_match"]),
                          max_error=float(payload["max_error"]))


def verify_report_payload(rep) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "object": "verify_report",
        "overall_pass": bool(rep.overall_pass),
        "seed": rep.seed,
        "qs": list(rep.qs),
        "runtime_s": rep.runtime_s,
        "checks": [asdict(c) for c in rep.checks],
    }


def write_verify_report(rep, path: str, fmt: Optional[str] = None) -> None:
    fmt = _infer_format(path, fmt)
    if fmt == "json":
        atomic_write_text(path, _json_dump(verify_report_payload(rep)))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "status", "residual", "tolerance", "runtime_s"])
    for c in rep.checks:
        w.writerow([c.name, "pass" if c.passed else "fail",
                    repr(c.residual), repr(c.tolerance), repr(c.runtime_s)])
    atomic_write_text(path, buf.getvalue())
