"""Command line interface.

Exit codes: 0 success, 1 invalid input or configuration, 2 a verification
or matching requirement failed, 3 I/O failure. Data outputs are
byte-identical across runs for a fixed configuration and seed; the verify
report is the one exception, since it embeds wall-clock timings.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click

from .context import DeformationContext
from .errors import QoscError, ValidationError
from .evolution import evolve, fractional_ft, kernel_K, rescale
from .fock import build_Q, spectrum_report
from .qhermite import build_mode_table, hermite_eval, mode_poly
from .serialize import (atomic_write_text, load_lattice_function,
                        write_kernel, write_lattice_function,
                        write_mode_table, write_spectrum_report,
                        write_verify_report)
from .verify import run_verification

_DEFAULTS = {
    "q": 0.5,
    "fock_dim": 64,
    "lattice_depth": 32,
    "tail_tol": 1e-15,
    "match_tol": 1e-10,
}

_CONFIG_KEYS = set(_DEFAULTS) | {"seed"}


def _parse_config_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config {path!r} is not valid JSON: {exc}")
        if not isinstance(raw, dict):
            raise ValidationError(f"config {path!r} must hold an object")
    else:
        raw = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValidationError(
                    f"config {path!r} line {lineno}: expected key=value")
            key, _, value = line.partition("=")
            raw[key.strip()] = value.strip()
    out = {}
    for key, value in raw.items():
        if key not in _CONFIG_KEYS:
            raise ValidationError(f"config {path!r}: unknown key {key!r}")
        try:
            out[key] = int(value) if key in ("fock_dim", "lattice_depth",
                                             "seed") else float(value)
        except (TypeError, ValueError):
            raise ValidationError(
                f"config {path!r}: bad value for {key}: {value!r}")
    return out


def _resolve(config, **flags):
    """Defaults, then config file, then explicit flags."""
    merged = dict(_DEFAULTS)
    merged["seed"] = 0
    if config is not None:
        merged.update(_parse_config_file(config))
    for key, value in flags.items():
        if value is not None:
            merged[key] = value
    seed = int(merged.pop("seed"))
    return DeformationContext(**merged), seed


def common_options(fn):
    opts = [
        click.option("--q", type=float, default=None,
                     help="Deformation parameter in (0, 1). [default: 0.5]"),
        click.option("--fock-dim", type=int, default=None,
                     help="Truncation dimension N. [default: 64]"),
        click.option("--lattice-depth", type=int, default=None,
                     help="Lattice levels per sign S. [default: 32]"),
        click.option("--tol", "tail_tol", type=float, default=None,
                     help="Infinite-product tail tolerance. [default: 1e-15]"),
        click.option("--match-tol", type=float, default=None,
                     help="Spectrum matching tolerance. [default: 1e-10]"),
        click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                     default="csv", show_default=True),
        click.option("--out", type=click.Path(dir_okay=False), default=None,
                     help="Output path; a per-command default is used if omitted."),
        click.option("--seed", type=int, default=None,
                     help="Seed for randomized checks. [default: 0]"),
        click.option("--config", type=click.Path(dir_okay=False), default=None,
                     help="JSON or key=value file; explicit flags win."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except QoscError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except OSError as exc:
            click.echo(f"io error: {exc}", err=True)
            sys.exit(3)
    return wrapper


@click.group()
def main():
    """Numerics for a q-deformed oscillator on the lattice {+-q^s}."""


@main.command()
@common_options
@click.option("--n-max", type=int, default=None,
              help="Highest degree to tabulate; defaults to fock_dim - 1.")
@click.option("--grid", type=str, default=None,
              help="Evaluate on start:stop:step instead of the lattice.")
@click.option("--family", type=click.Choice(["orthonormal", "hermite"]),
              default="orthonormal", show_default=True)
@guarded
def hermite(q, fock_dim, lattice_depth, tail_tol, match_tol, fmt, out, seed,
            config, n_max, grid, family):
    """Tabulate wavefunction polynomials on the lattice or a grid."""
    ctx, _ = _resolve(config, q=q, fock_dim=fock_dim,
                      lattice_depth=lattice_depth, tail_tol=tail_tol,
                      match_tol=match_tol)
    if n_max is not None:
        if n_max < 0 or n_max >= ctx.fock_dim:
            raise ValidationError(
                f"--n-max must lie in [0, {ctx.fock_dim}), got {n_max}")
        top = n_max
    else:
        top = ctx.fock_dim - 1

    if grid is None and family == "orthonormal":
        path = out or f"modes.{fmt}"
        table = build_mode_table("position", ctx)
        if top < ctx.fock_dim - 1:
            table = type(table)(kind=table.kind, q=table.q,
                                fock_dim=top + 1,
                                lattice_depth=table.lattice_depth,
                                values=table.values[: top + 1],
                                tail_start=table.tail_start[: top + 1])
        write_mode_table(table, path, fmt)
        click.echo(path)
        return

    if grid is None:
        xs = [(f"{sg}", f"{s}", x)
              for s in range(ctx.lattice_depth)
              for sg, x in ((1, ctx.q**s), (-1, -(ctx.q**s)))]
    else:
        try:
            start, stop, step = (float(p) for p in grid.split(":"))
        except ValueError:
            raise ValidationError(
                f"--grid expects start:stop:step, got {grid!r}")
        if step <= 0 or stop < start:
            raise ValidationError(f"--grid range is empty: {grid!r}")
        count = int((stop - start) / step + 1e-9) + 1
        xs = [("", "", start + k * step) for k in range(count)]

    evalf = hermite_eval if family == "hermite" else mode_poly
    lines = ["n,sign,s,x,value"]
    for n in range(top + 1):
        for sg, s, x in xs:
            lines.append(f"{n},{sg},{s},{x!r},{float(evalf(n, x, ctx))!r}")
    path = out or f"hermite.{fmt}"
    if fmt == "json":
        rows = [{"n": n, "x": x, "value": float(evalf(n, x, ctx))}
                for n in range(top + 1) for _, _, x in xs]
        atomic_write_text(path, json.dumps(
            {"schema_version": 1, "family": family, "q": ctx.q,
             "rows": rows}, indent=1) + "\n")
    else:
        atomic_write_text(path, "\n".join(lines) + "\n")
    click.echo(path)


@main.command()
@common_options
@click.option("--require-s", type=int, default=0, show_default=True,
              help="Fail (exit 2) unless the matched prefix reaches this depth.")
@guarded
def spectrum(q, fock_dim, lattice_depth, tail_tol, match_tol, fmt, out, seed,
             config, require_s):
    """Diagonalize the position operator and match levels to +-q^s."""
    ctx, _ = _resolve(config, q=q, fock_dim=fock_dim,
                      lattice_depth=lattice_depth, tail_tol=tail_tol,
                      match_tol=match_tol)
    rep = spectrum_report(build_Q(ctx), ctx)
    path = out or f"spectrum.{fmt}"
    write_spectrum_report(rep, path, fmt)
    click.echo(f"{path} s_match={rep.s_match} max_error={rep.max_error:.3e}")
    if rep.s_match < require_s:
        click.echo(f"matched prefix {rep.s_match} < required {require_s}",
                   err=True)
        sys.exit(2)


@main.command()
@common_options
@click.option("--tau", type=float, default=math.pi / 2, show_default="pi/2",
              help="Evolution angle.")
@click.option("--variant", type=click.Choice(["rescaled", "raw"]),
              default="rescaled", show_default=True)
@guarded
def kernel(q, fock_dim, lattice_depth, tail_tol, match_tol, fmt, out, seed,
           config, tau, variant):
    """Write the finite-time evolution kernel on the lattice window."""
    ctx, _ = _resolve(config, q=q, fock_dim=fock_dim,
                      lattice_depth=lattice_depth, tail_tol=tail_tol,
                      match_tol=match_tol)
    k = fractional_ft(tau, ctx) if variant == "rescaled" else kernel_K(tau, ctx)
    path = out or f"kernel.{fmt}"
    write_kernel(k, path, fmt)
    click.echo(f"{path} s_match={k.s_match} tail={k.tail_estimate:.3e}")


@main.command(name="evolve")
@common_options
@click.option("--input", "input_path", type=click.Path(dir_okay=False),
              required=True, help="Lattice function to evolve.")
@click.option("--tau", type=float, default=math.pi / 2, show_default="pi/2")
@click.option("--rescale-input", is_flag=True,
              help="Apply the sqrt-weight rescaling to the input first.")
@guarded
def evolve_cmd(q, fock_dim, lattice_depth, tail_tol, match_tol, fmt, out,
               seed, config, input_path, tau, rescale_input):
    """Evolve a rescaled position-realization function by angle tau."""
    ctx, _ = _resolve(config, q=q, fock_dim=fock_dim,
                      lattice_depth=lattice_depth, tail_tol=tail_tol,
                      match_tol=match_tol)
    f = load_lattice_function(input_path)
    if len(f.values) != 2 * ctx.lattice_depth:
        raise ValidationError(
            f"input has {len(f.values)} samples, window needs "
            f"{2 * ctx.lattice_depth}; pass --lattice-depth to match")
    if rescale_input and not f.rescaled:
        f = rescale(f, ctx)
    result = evolve(f, tau, ctx)
    path = out or f"evolved.{fmt}"
    write_lattice_function(result, ctx, path, fmt)
    click.echo(path)


@main.command()
@common_options
@click.option("--corrupt-coupling", is_flag=True,
              help="Deliberately break one coupling; the run must then fail.")
@guarded
def verify(q, fock_dim, lattice_depth, tail_tol, match_tol, fmt, out, seed,
           config, corrupt_coupling):
    """Run the named verification battery and report per-check results."""
    _, run_seed = _resolve(config, q=q, fock_dim=fock_dim,
                           lattice_depth=lattice_depth, tail_tol=tail_tol,
                           match_tol=match_tol, seed=seed)
    rep = run_verification(seed=run_seed, corrupt_coupling=corrupt_coupling)
    for c in rep.checks:
        status = "PASS" if c.passed else "FAIL"
        click.echo(f"{status} {c.name:40s} residual={c.residual:.3e} "
                   f"tol={c.tolerance:.1e} ({c.runtime_s:.2f}s)")
    click.echo(f"{'PASS' if rep.overall_pass else 'FAIL'} overall "
               f"{sum(c.passed for c in rep.checks)}/{len(rep.checks)} checks "
               f"in {rep.runtime_s:.1f}s (seed={rep.seed})")
    if out is not None:
        write_verify_report(rep, out, fmt)
    if not rep.overall_pass:
        sys.exit(2)


if __name__ == "__main__":
    main()
