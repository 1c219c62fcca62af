"""Lattice realizations: wavefunctions, inner products, operator actions.

A state with number-basis coefficients b_n becomes the lattice function
f(x) = sum_n b_n p_n(x) on the position window, or
F(p) = sum_n b_n i^n p_n(p) on the momentum window (same grid). Both
carry the inner product

    <f, g> = sum_s c_s [ f(+q^s) conj(g(+q^s)) + f(-q^s) conj(g(-q^s)) ]

with the normalized weights c_s from qhermite. Opposite-sign terms are
paired before accumulation, so parity-odd products cancel exactly, not
just approximately.

The generating-function wavefunctions are

    psi_x(y) = sum_n h_n(x) y^n / (q; q)_n = (y^2; q^2)_inf / (x y; q)_inf
    phi_p(y) = sum_n h_n(p) (i y)^n / (q; q)_n

for |y| < 1. phi's closed product form is contested between three
numerator candidates; phi_product_residuals reports all of them against
the series, which is the ground truth here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .context import DeformationContext
from .errors import (DimensionMismatch, DomainError, KindMismatch,
                     NonConvergent, TailTooLarge, ValidationError)
from .qcore import coupling, qpoch_inf
from .qhermite import (LatticePoint, ModeTable, _p_matrix, build_mode_table,
                       mode_poly, norm_c, norm_c_window, window_values)

_KINDS = ("position", "momentum")
_SERIES_CAP = 100000


@dataclass(frozen=True)
class LatticeFunction:
    """Values over the interleaved window, tagged by kind and rescaling."""

    kind: str
    values: np.ndarray
    rescaled: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        object.__setattr__(self, "values",
                           np.asarray(self.values, dtype=complex).reshape(-1))


@dataclass(frozen=True)
class WavefunctionQuery:
    """Evaluation request: lattice label, generating argument, route."""

    point: LatticePoint
    y: complex
    mode: str = "series"


def _check_window(f: LatticeFunction, ctx: DeformationContext):
    if f.values.shape[0] != 2 * ctx.lattice_depth:
        raise DimensionMismatch(
            f"function has {f.values.shape[0]} sites, window wants "
            f"{2 * ctx.lattice_depth}")


def _check_kind(f: LatticeFunction, kind: str, ctx: DeformationContext):
    _check_window(f, ctx)
    if f.kind != kind:
        raise KindMismatch(f"expected a {kind} function, got {f.kind}")
    if f.rescaled:
        raise KindMismatch("expected bare values, got rescaled ones")


def _series_sum(x: float, y: complex, ctx: DeformationContext,
                phase: complex = 1.0) -> complex:
    """sum_n h_n(x) (phase*y)^n / (q; q)_n, truncated at tail_tol.

    Stops only after three consecutive terms fall below the running
    threshold: individual h_n values pass through zero, so one small
    term proves nothing.
    """
    if abs(y) >= 1.0:
        raise DomainError(f"generating argument must satisfy |y| < 1, got |y|={abs(y)}")
    q = ctx.q
    z = phase * complex(y)
    if z == 0:
        return 1.0 + 0.0j
    h_prev, h_cur = 1.0, x
    poch = 1.0 - q
    total = 1.0 + 0.0j
    zn = z
    small_run = 0
    n = 1
    while True:
        term = h_cur * zn / poch
        if abs(term) < ctx.tail_tol * (1.0 + abs(total)):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
        total += term
        h_prev, h_cur = h_cur, x * h_cur - q ** (n - 1) * (1.0 - q**n) * h_prev
        poch *= 1.0 - q ** (n + 1)
        zn *= z
        n += 1
        if n > _SERIES_CAP:
            raise NonConvergent(f"wavefunction series did not settle by n={n}")
    return total


def psi_eval(qry: WavefunctionQuery, ctx: DeformationContext) -> complex:
    """Position eigenfunction generating value psi_x(y).

    mode "series" sums h_n(x) y^n / (q;q)_n; mode "product" evaluates the
    closed form (y^2; q^2)_inf / (x y; q)_inf. The two agree to the
    series truncation level for |y| < 1.
    """
    x = qry.point.value
    if qry.mode == "series":
        return _series_sum(x, qry.y, ctx)
    if qry.mode == "product":
        if abs(qry.y) >= 1.0:
            raise DomainError(f"|y| must be < 1, got {abs(qry.y)}")
        q2 = ctx.q * ctx.q
        num = qpoch_inf(complex(qry.y) ** 2, ctx, base=q2).value
        den = qpoch_inf(x * complex(qry.y), ctx).value
        return complex(num) / complex(den)
    raise ValidationError(f"mode must be 'series' or 'product', got {qry.mode!r}")


def phi_eval(qry: WavefunctionQuery, ctx: DeformationContext) -> complex:
    """Momentum-side generating value phi_p(y) = sum h_n(p) (iy)^n/(q;q)_n.

    mode "product" evaluates (y^2; q^2)_inf / (i p y; q)_inf, the stated
    closed form; see phi_product_residuals before trusting it, the
    numerator is contested and the series is authoritative.
    """
    p = qry.point.value
    if qry.mode == "series":
        return _series_sum(p, qry.y, ctx, phase=1j)
    if qry.mode == "product":
        if abs(qry.y) >= 1.0:
            raise DomainError(f"|y| must be < 1, got {abs(qry.y)}")
        q2 = ctx.q * ctx.q
        num = qpoch_inf(complex(qry.y) ** 2, ctx, base=q2).value
        den = qpoch_inf(1j * p * complex(qry.y), ctx).value
        return complex(num) / complex(den)
    raise ValidationError(f"mode must be 'series' or 'product', got {qry.mode!r}")


def phi_product_residuals(qry: WavefunctionQuery,
                          ctx: DeformationContext) -> Dict[str, float]:
    """|candidate - series| for each closed-form numerator candidate.

    Candidates share the denominator (i p y; q)_inf and differ in the
    numerator: (y^2; q^2)_inf, (y^2; q)_inf, (-y^2; q^2)_inf. Substituting
    y -> iy in the position closed form gives the third; the measured
    residuals confirm it is the one that matches the series.
    """
    p = qry.point.value
    series = _series_sum(p, qry.y, ctx, phase=1j)
    y2 = complex(qry.y) ** 2
    q2 = ctx.q * ctx.q
    den = complex(qpoch_inf(1j * p * complex(qry.y), ctx).value)
    out: Dict[str, float] = {}
    for label, num in (
        ("(y^2;q^2)", qpoch_inf(y2, ctx, base=q2).value),
        ("(y^2;q)", qpoch_inf(y2, ctx).value),
        ("(-y^2;q^2)", qpoch_inf(-y2, ctx, base=q2).value),
    ):
        out[label] = abs(complex(num) / den - series)
    return out


def normalized_eigenfunction(kind: str, pt: LatticePoint, n_max: int,
                             ctx: DeformationContext) -> np.ndarray:
    """Number-basis coefficients of the unit eigenvector with eigenvalue
    sign*q^s: b_n = sqrt(c_s) p_n(x) for position, times i^n for momentum."""
    if kind not in _KINDS:
        raise ValidationError(f"kind must be one of {_KINDS}, got {kind!r}")
    col, _ = _p_matrix(np.array([pt.value]), n_max, ctx)
    b = math.sqrt(norm_c(pt.s, ctx)) * col[:, 0].astype(complex)
    if kind == "momentum":
        b = b * 1j ** np.arange(n_max)
    return b


def fock_to_position(b: np.ndarray, ctx: DeformationContext,
                     table: Optional[ModeTable] = None) -> LatticeFunction:
    """Realize coefficients as a window function sum_n b_n p_n(x)."""
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.shape[0] > ctx.fock_dim:
        raise DimensionMismatch(
            f"{b.shape[0]} coefficients exceed fock_dim={ctx.fock_dim}")
    if table is None:
        table = build_mode_table("position", ctx)
    return LatticeFunction("position", b @ table.values[: b.shape[0]])


def fock_to_momentum(b: np.ndarray, ctx: DeformationContext,
                     table: Optional[ModeTable] = None) -> LatticeFunction:
    """Realize coefficients on the momentum window: sum_n b_n i^n p_n(p)."""
    b = np.asarray(b, dtype=complex).reshape(-1)
    if b.shape[0] > ctx.fock_dim:
        raise DimensionMismatch(
            f"{b.shape[0]} coefficients exceed fock_dim={ctx.fock_dim}")
    if table is None:
        table = build_mode_table("momentum", ctx)
    return LatticeFunction("momentum", b @ table.values[: b.shape[0]])


def _paired_inner(v1: np.ndarray, v2: np.ndarray,
                  ctx: DeformationContext) -> complex:
    prod = v1 * np.conj(v2)
    paired = prod[0::2] + prod[1::2]
    cs = norm_c_window(ctx)[0::2]
    return complex(np.sum(cs * paired))


def position_inner(f1: LatticeFunction, f2: LatticeFunction,
                   ctx: DeformationContext) -> complex:
    """Weighted window inner product of two bare position functions."""
    _check_kind(f1, "position", ctx)
    _check_kind(f2, "position", ctx)
    return _paired_inner(f1.values, f2.values, ctx)


def momentum_inner(f1: LatticeFunction, f2: LatticeFunction,
                   ctx: DeformationContext) -> complex:
    """Same weights as position_inner, on the momentum window."""
    _check_kind(f1, "momentum", ctx)
    _check_kind(f2, "momentum", ctx)
    return _paired_inner(f1.values, f2.values, ctx)


@dataclass(frozen=True)
class ModeExpansion:
    coeffs: np.ndarray
    tail: float


def decompose(f: LatticeFunction, ctx: DeformationContext,
              table: Optional[ModeTable] = None) -> ModeExpansion:
    """Project a bare window function onto the modes.

    coeffs[n] = <f, mode_n> with the window weights; tail is the mass
    |<f, f> - sum |coeffs|^2| the window could not attribute to modes
    n < fock_dim. Callers that resum after acting on coefficients should
    treat a large tail as a failure (the apply_* helpers do).
    """
    if f.kind not in _KINDS:
        raise KindMismatch(f"unknown kind {f.kind!r}")
    _check_window(f, ctx)
    if f.rescaled:
        raise KindMismatch("decompose wants bare values, got rescaled ones")
    if table is None:
        table = build_mode_table(f.kind, ctx)
    cs = norm_c_window(ctx)
    b = np.conj(table.values) @ (cs * f.values)
    norm = _paired_inner(f.values, f.values, ctx).real
    tail = abs(norm - float(np.sum(np.abs(b) ** 2)))
    return ModeExpansion(coeffs=b, tail=tail)


def _roundtrip(f: LatticeFunction, ctx: DeformationContext, action) -> LatticeFunction:
    """decompose -> act on coefficients -> resum, guarding the tail.

    The tail guard fires at sqrt(match_tol): window-edge noise sits many
    orders below that, genuinely unresolvable content many above.
    """
    table = build_mode_table(f.kind, ctx)
    exp = decompose(f, ctx, table=table)
    if exp.tail >= math.sqrt(ctx.match_tol):
        raise TailTooLarge(
            f"mode expansion discards {exp.tail:.3e} of the norm "
            f"(limit {math.sqrt(ctx.match_tol):.1e}); deepen the window "
            "or raise fock_dim")
    out = action(exp.coeffs)
    return LatticeFunction(f.kind, out @ table.values)


def _tridiag_action(b: np.ndarray, ctx: DeformationContext,
                    upper_scale: complex, lower_scale: complex) -> np.ndarray:
    a = coupling(np.arange(b.shape[0] - 1, dtype=float), ctx)
    out = np.zeros_like(b)
    out[1:] += lower_scale * a * b[:-1]
    out[:-1] += upper_scale * a * b[1:]
    return out


def apply_Q_position(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    """Position operator on its own window: multiply by the site value."""
    _check_kind(f, "position", ctx)
    return LatticeFunction("position", window_values(ctx) * f.values)


def apply_P_position(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    """Momentum operator on position functions, through the mode side:
    coefficients map by b_n -> i a_{n-1} b_{n-1} - i a_n b_{n+1}."""
    _check_kind(f, "position", ctx)
    return _roundtrip(f, ctx, lambda b: _tridiag_action(b, ctx, -1j, 1j))


def apply_H_position(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    """Oscillator Hamiltonian: multiplies mode n by n + 1/2."""
    _check_kind(f, "position", ctx)
    n = np.arange(ctx.fock_dim, dtype=float) + 0.5
    return _roundtrip(f, ctx, lambda b: n * b)


def apply_Q_momentum(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    """Position operator on momentum functions: the same real tridiagonal
    coefficient action as Q has on the number basis."""
    _check_kind(f, "momentum", ctx)
    return _roundtrip(f, ctx, lambda b: _tridiag_action(b, ctx, 1.0, 1.0))


def apply_P_momentum(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    """Momentum operator on its own window: multiply by the site value."""
    _check_kind(f, "momentum", ctx)
    return LatticeFunction("momentum", window_values(ctx) * f.values)


def apply_H_momentum(f: LatticeFunction, ctx: DeformationContext) -> LatticeFunction:
    _check_kind(f, "momentum", ctx)
    n = np.arange(ctx.fock_dim, dtype=float) + 0.5
    return _roundtrip(f, ctx, lambda b: n * b)


def mode_function(n: int, ctx: DeformationContext,
                  kind: str = "position") -> LatticeFunction:
    """The n-th mode as a window function (a table row)."""
    table = build_mode_table(kind, ctx)
    return LatticeFunction(kind, table.values[n].copy())


def q_difference_bracket(n: int, ctx: DeformationContext) -> np.ndarray:
    """[D_q + q^{-2} W^{-1} D_{1/q} W] applied to p_n over the window.

    W(x) = (q^2 x^2; q^2)_inf; the evaluation uses the functional
    equation W(x/q) = (1 - x^2) W(x), so no infinite products appear.
    Forward-recurrence evaluation keeps this honest for shallow n.
    """
    q = ctx.q
    x = window_values(ctx)
    pn = np.asarray(mode_poly(n, x, ctx), dtype=float)
    pn_down = np.asarray(mode_poly(n, q * x, ctx), dtype=float)
    pn_up = np.asarray(mode_poly(n, x / q, ctx), dtype=float)
    dq = (pn - pn_down) / ((1.0 - q) * x)
    dqi = (pn - (1.0 - x * x) * pn_up) / ((1.0 - 1.0 / q) * x) / (q * q)
    return dq + dqi


def q_difference_components(n: int, ctx: DeformationContext):
    """Least-squares split of the bracket over {p_{n+1}, p_{n-1}}.

    Returns (u, v, fit_residual): bracket = u p_{n+1} + v p_{n-1} with
    fit_residual the sup-norm defect of the two-mode fit (v is 0 for
    n = 0 where no lower neighbor exists).
    """
    x = window_values(ctx)
    B = q_difference_bracket(n, ctx)
    cols = [np.asarray(mode_poly(n + 1, x, ctx), dtype=float)]
    if n >= 1:
        cols.append(np.asarray(mode_poly(n - 1, x, ctx), dtype=float))
    A = np.stack(cols, axis=1)
    sol, *_ = np.linalg.lstsq(A, B, rcond=None)
    resid = float(np.max(np.abs(B - A @ sol)))
    u = float(sol[0])
    v = float(sol[1]) if n >= 1 else 0.0
    return u, v, resid


def q_difference_P_oracle(n: int, ctx: DeformationContext) -> LatticeFunction:
    """P applied to mode n via the q-difference form, not the recurrence.

    P = -i (1 - q) q^{exponent of the level above the ground} times the
    bracket, where the diagonal factor weights the p_{n+1} component by
    q^{n+1} and the p_{n-1} component by q^{n-1}. Serves as an
    independent check of apply_P_position.
    """
    q = ctx.q
    x = window_values(ctx)
    u, v, _ = q_difference_components(n, ctx)
    vals = q ** (n + 1) * u * np.asarray(mode_poly(n + 1, x, ctx), dtype=float)
    if n >= 1:
        vals = vals + q ** (n - 1) * v * np.asarray(mode_poly(n - 1, x, ctx), dtype=float)
    return LatticeFunction("position", -1j * (1.0 - q) * vals)
