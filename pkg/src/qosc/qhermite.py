"""Discrete q-Hermite polynomials on the geometric lattice {+-q^s}.

Two polynomial families appear:

* h_n: the monic-style family with recurrence
      h_{n+1}(z) = z h_n(z) - q^{n-1} (1 - q^n) h_{n-1}(z),
      h_0 = 1, h_1 = z.
* p_n: the orthonormal family with recurrence
      a_n p_{n+1}(x) = x p_n(x) - a_{n-1} p_{n-1}(x),
      a_n = sqrt(q^n (1 - q^{n+1})),
  related by p_n = (q; q)_n^{-1/2} q^{-n(n-1)/4} h_n.

The lattice window interleaves signs: index 2s holds +q^s, index 2s+1
holds -q^s, for s = 0 .. lattice_depth-1. Orthogonality weights:

    w_s    = (q^{2s+2}; q^2)_inf           (bare weight)
    c_s    = q^s w_s / (2 (q;q)_inf (-q;q)_inf^2)   (normalized weight)

so that sum over the window of c_{s(x)} p_k(x) p_m(x) = delta_km up to
the lattice tail.

build_mode_table is the authoritative evaluator: the three-term
recurrence run forward is unstable past the turning point n > 2s, so the
decaying tail of each column is re-filled by backward (Miller) recurrence.
Pointwise mode_poly/hermite_eval use the plain forward recurrence and are
meant for shallow degrees.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .context import DeformationContext, thread_limit
from .errors import IndexOutOfRange, ValidationError
from .qcore import coupling, qpoch, qpoch_inf

TAIL_MARGIN = 4

# Miller backfill keeps the decaying band down to ~1e-22 of the column
# scale; 50.7 = -ln(1e-22), and the Gaussian decay exponent is
# (n - 2s)^2 ln(1/q) / 4.
_BAND_LOG = 50.7


@dataclass(frozen=True)
class LatticePoint:
    """One lattice site. Identity and ordering use (sign, s) only."""

    sign: int
    s: int
    value: float = field(compare=False)

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValidationError(f"sign must be +1 or -1, got {self.sign!r}")
        if not isinstance(self.s, (int, np.integer)) or self.s < 0:
            raise ValidationError(f"level must be a non-negative int, got {self.s!r}")


def lattice_point(sign: int, s: int, ctx: DeformationContext) -> LatticePoint:
    if not 0 <= s < ctx.lattice_depth:
        raise IndexOutOfRange(
            f"level {s!r} outside [0, {ctx.lattice_depth})")
    return LatticePoint(sign, int(s), sign * ctx.q ** int(s))


def lattice_window(ctx: DeformationContext) -> List[LatticePoint]:
    """All 2S sites, interleaved: +q^0, -q^0, +q^1, -q^1, ..."""
    pts = []
    for s in range(ctx.lattice_depth):
        pts.append(LatticePoint(1, s, ctx.q**s))
        pts.append(LatticePoint(-1, s, -(ctx.q**s)))
    return pts


def window_index(sign: int, s: int) -> int:
    return 2 * s + (0 if sign > 0 else 1)


def window_values(ctx: DeformationContext) -> np.ndarray:
    x = np.empty(2 * ctx.lattice_depth)
    levels = ctx.q ** np.arange(ctx.lattice_depth, dtype=float)
    x[0::2] = levels
    x[1::2] = -levels
    return x


def window_levels(ctx: DeformationContext) -> np.ndarray:
    return np.repeat(np.arange(ctx.lattice_depth), 2)


def window_signs(ctx: DeformationContext) -> np.ndarray:
    return np.tile(np.array([1, -1]), ctx.lattice_depth)


def hermite_eval(n: int, z, ctx: DeformationContext):
    """h_n(z) by the forward three-term recurrence."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise IndexOutOfRange(f"degree must be a non-negative int, got {n!r}")
    if n == 0:
        return 1.0 if np.isscalar(z) else np.ones_like(np.asarray(z, dtype=float))
    q = ctx.q
    prev = 1.0 if np.isscalar(z) else np.ones_like(np.asarray(z, dtype=float))
    cur = z
    for k in range(1, int(n)):
        prev, cur = cur, z * cur - q ** (k - 1) * (1.0 - q**k) * prev
    return cur


def mode_poly(n: int, x, ctx: DeformationContext):
    """Orthonormal p_n(x) by the forward recurrence.

    Fine for shallow degrees; past the turning point n > 2s the forward
    recurrence loses relative accuracy, use build_mode_table there.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise IndexOutOfRange(f"degree must be a non-negative int, got {n!r}")
    if n == 0:
        return 1.0 if np.isscalar(x) else np.ones_like(np.asarray(x, dtype=float))
    prev = 1.0 if np.isscalar(x) else np.ones_like(np.asarray(x, dtype=float))
    cur = x / coupling(0, ctx)
    for k in range(1, int(n)):
        prev, cur = cur, (x * cur - coupling(k - 1, ctx) * prev) / coupling(k, ctx)
    return cur


def tail_width(q: float) -> int:
    return int(np.ceil(np.sqrt(4.0 * _BAND_LOG / np.log(1.0 / q))))


def _backfill_column(P: np.ndarray, col: int, x: float, meet: int,
                     a_all: np.ndarray, w: int) -> int:
    """Replace the decaying tail of one column by Miller's backward pass.

    Returns the first degree whose entry was set to exact zero (the tail
    flag for this column); P.shape[0] if the whole column is kept.
    """
    nmax = P.shape[0]
    keep_hi = min(meet + w, nmax - 1)
    n_start = meet + 2 * w + 8
    v = np.zeros(n_start - meet + 2)
    v[-2] = 1.0
    for n in range(n_start, meet, -1):
        i = n - meet
        v[i - 1] = (x * v[i] - a_all[n] * v[i + 1]) / a_all[n - 1]
        if abs(v[i - 1]) > 1e250:
            v[i - 1:] /= abs(v[i - 1])
    if v[0] == 0.0:
        return nmax
    scale = P[meet, col] / v[0]
    P[meet + 1:keep_hi + 1, col] = v[1:keep_hi - meet + 1] * scale
    P[keep_hi + 1:, col] = 0.0
    return keep_hi + 1


def _p_matrix(x: np.ndarray, nmax: int, ctx: DeformationContext) -> tuple[np.ndarray, np.ndarray]:
    """p_n at the given points for n < nmax, hybrid forward/backward.

    Returns (values, tail_start) where values[n, c] = p_n(x[c]) and
    tail_start[c] is the first degree stored as exact zero (nmax if the
    column has no flagged tail).
    """
    m = x.shape[0]
    a = coupling(np.arange(max(nmax, 2), dtype=float), ctx)
    P = np.zeros((nmax, m))
    P[0] = 1.0
    tail_start = np.full(m, nmax, dtype=int)
    if nmax == 1:
        return P, tail_start
    ax = np.abs(x)
    w = tail_width(ctx.q)
    P[1] = x / a[0]
    colmax = np.maximum(1.0, np.abs(P[1]))
    meet = np.full(m, -1, dtype=int)
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, nmax - 1):
            P[n + 1] = (x * P[n] - a[n - 1] * P[n - 1]) / a[n]
            hit = (meet < 0) & (a[n] < ax) & (np.abs(P[n]) < 1e-2 * colmax)
            meet[hit] = n
            live = meet < 0
            colmax[live] = np.maximum(colmax[live], np.abs(P[n + 1][live]))
    a_all = coupling(np.arange(nmax + 2 * w + 16, dtype=float), ctx)
    todo = [c for c in range(m) if 0 <= meet[c] < nmax - 1]

    def run(cols):
        for c in cols:
            tail_start[c] = _backfill_column(P, c, float(x[c]), int(meet[c]), a_all, w)

    workers = thread_limit()
    if workers > 1 and len(todo) > 1:
        chunks = [todo[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(run, chunks))
    else:
        run(todo)
    return P, tail_start


def lattice_weight(pt: LatticePoint, ctx: DeformationContext) -> float:
    """Bare weight w_s = (q^{2s+2}; q^2)_inf; sign-independent, in (0, 1]."""
    q2 = ctx.q * ctx.q
    return float(qpoch_inf(q2 ** (pt.s + 1), ctx, base=q2).value)


def _weight_prefactor(ctx: DeformationContext) -> float:
    """2 (q; q)_inf (-q; q)_inf^2, the normalization under every c_s."""
    q = ctx.q
    pq = qpoch_inf(q, ctx).value
    mq = qpoch_inf(-q, ctx).value
    return 2.0 * float(pq) * float(mq) ** 2


def norm_c(s: int, ctx: DeformationContext) -> float:
    """Normalized weight c_s = q^s w_s / (2 (q;q)_inf (-q;q)_inf^2)."""
    if not isinstance(s, (int, np.integer)) or s < 0:
        raise IndexOutOfRange(f"level must be a non-negative int, got {s!r}")
    q2 = ctx.q * ctx.q
    ws = float(qpoch_inf(q2 ** (int(s) + 1), ctx, base=q2).value)
    return ctx.q ** int(s) * ws / _weight_prefactor(ctx)


def norm_c_window(ctx: DeformationContext) -> np.ndarray:
    """c_{s(x)} for every window site, interleaved like the window."""
    q2 = ctx.q * ctx.q
    pref = _weight_prefactor(ctx)
    cs = np.empty(2 * ctx.lattice_depth)
    for s in range(ctx.lattice_depth):
        ws = float(qpoch_inf(q2 ** (s + 1), ctx, base=q2).value)
        cs[2 * s] = cs[2 * s + 1] = ctx.q**s * ws / pref
    return cs


def lattice_weight_window(ctx: DeformationContext) -> np.ndarray:
    """w_{s(x)} for every window site."""
    q2 = ctx.q * ctx.q
    w = np.empty(2 * ctx.lattice_depth)
    for s in range(ctx.lattice_depth):
        ws = float(qpoch_inf(q2 ** (s + 1), ctx, base=q2).value)
        w[2 * s] = w[2 * s + 1] = ws
    return w


def normalized_hermite(n: int, pt: LatticePoint, ctx: DeformationContext) -> float:
    """sqrt(c_s) p_n at the site: the unit-norm lattice mode value."""
    return math.sqrt(norm_c(pt.s, ctx)) * float(mode_poly(n, pt.value, ctx))


@dataclass(frozen=True)
class ModeTable:
    """p_n (or i^n p_n) tabulated over the window.

    values[n, i] is the degree-n mode at window index i. kind "position"
    stores real p_n; kind "momentum" stores complex i^n p_n on the same
    grid. tail_start[i] is the first degree stored as exact zero after
    the flagged tail cut (fock_dim if none).
    """

    kind: str
    q: float
    fock_dim: int
    lattice_depth: int
    values: np.ndarray
    tail_start: np.ndarray

    @property
    def points(self) -> List[LatticePoint]:
        ctx = DeformationContext(q=self.q, fock_dim=self.fock_dim,
                                 lattice_depth=self.lattice_depth)
        return lattice_window(ctx)


def build_mode_table(kind: str, ctx: DeformationContext) -> ModeTable:
    """Tabulate all modes n < fock_dim over the window.

    Set QOSC_THREADS to parallelize the per-column tail refill; outputs
    are bit-identical at any thread count.
    """
    if kind not in ("position", "momentum"):
        raise ValidationError(
            f"kind must be 'position' or 'momentum', got {kind!r}")
    x = window_values(ctx)
    P, tail_start = _p_matrix(x, ctx.fock_dim, ctx)
    if kind == "momentum":
        phases = 1j ** np.arange(ctx.fock_dim)
        values = phases[:, None] * P
    else:
        values = P
    return ModeTable(kind=kind, q=ctx.q, fock_dim=ctx.fock_dim,
                     lattice_depth=ctx.lattice_depth, values=values,
                     tail_start=tail_start)


def orthogonality_residual(k: int, m: int, ctx: DeformationContext) -> float:
    """Scale-normalized defect of the windowed orthogonality sum.

    LHS = sum_s q^s w_s [h_k h_m(q^s) + h_k h_m(-q^s)] over the window,
    RHS = 2 (q;q)_inf (-q;q)_inf^2 (q;q)_m q^{m(m-1)/2} delta_km, and the
    residual is |LHS - RHS| / (1 + sqrt(RHS_kk RHS_mm)). Normalizing by
    the diagonal scale keeps the figure meaningful at depths where the
    exact lattice tail already exceeds tiny absolute thresholds. Opposite
    signs are paired before accumulation, so odd k+m cancels exactly.
    """
    if k < 0 or m < 0:
        raise IndexOutOfRange("degrees must be non-negative")
    q = ctx.q
    pref = _weight_prefactor(ctx)

    def diag(j: int) -> float:
        return pref * float(qpoch(q, j, ctx)) * q ** (j * (j - 1) // 2)

    lhs = 0.0
    for s in range(ctx.lattice_depth):
        xs = q**s
        ws = lattice_weight(LatticePoint(1, s, xs), ctx)
        plus = float(hermite_eval(k, xs, ctx)) * float(hermite_eval(m, xs, ctx))
        minus = float(hermite_eval(k, -xs, ctx)) * float(hermite_eval(m, -xs, ctx))
        lhs += q**s * ws * (plus + minus)
    rhs = diag(m) if k == m else 0.0
    return abs(lhs - rhs) / (1.0 + math.sqrt(diag(k) * diag(m)))


def dual_orthogonality_residual(ctx: DeformationContext,
                                margin: int = TAIL_MARGIN) -> float:
    """Max defect of sum_n c_{s'} p_n(x) p_n(x') = delta over the core.

    The weight sits on the second (summed-against) site, matching the
    evolution kernel convention. Core means both sites at levels
    s <= lattice_depth - margin; the outermost levels never resolve.
    """
    table = build_mode_table("position", ctx)
    cs = norm_c_window(ctx)
    G = table.values.T @ table.values * cs[None, :]
    core = 2 * max(ctx.lattice_depth - margin, 0)
    G = G[:core, :core]
    return float(np.max(np.abs(G - np.eye(core))))


def completeness_defect(table: ModeTable, ctx: DeformationContext) -> float:
    """Max over sites of |1 - sum_n c_x |p_n(x)|^2|, the bilinear tail."""
    cs = norm_c_window(ctx)
    sums = cs * np.sum(np.abs(table.values) ** 2, axis=0)
    return float(np.max(np.abs(1.0 - sums)))
