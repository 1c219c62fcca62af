"""Named end-to-end verification checks.

run_verification executes every analytic identity the library claims,
across q in {0.3, 0.5, 0.8, 0.95}, and reports one named result per
check: residual, tolerance, pass flag, wall time. The whole battery is
sized to finish in well under a minute.

corrupt_coupling=True deliberately perturbs one off-diagonal coupling
inside the q=0.5 commutator check; it exists so callers can confirm the
battery actually fails when the algebra is broken.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from .context import DeformationContext, suggested_depth
from .errors import QoscError
from .evolution import (fractional_ft, group_law_residual,
                        heisenberg_rotation_check, identity_residual,
                        intertwine_residual, inverse_residual, kernel_K,
                        kernel_sign_flip_residual, norm_drift_max,
                        periodicity_residual, phase_map_residual,
                        unitarity_residual)
from .fock import (build_F_of_H, build_H, build_ladders, build_P, build_Q,
                   commutator, eigendecompose, spectrum_report)
from .hilbert import (WavefunctionQuery, apply_P_position, apply_Q_position,
                      fock_to_position, mode_function,
                      normalized_eigenfunction, phi_product_residuals,
                      position_inner, psi_eval, q_difference_P_oracle)
from .qcore import (CoefficientVector, apply_lowering, apply_raising,
                    basis_coeff, coupling, fock_inner, fock_monomial, qpoch,
                    qpoch_inf, scale_op)
from .qhermite import (build_mode_table, dual_orthogonality_residual,
                       hermite_eval, lattice_point, mode_poly, norm_c,
                       norm_c_window, orthogonality_residual, window_values)

QS = (0.3, 0.5, 0.8, 0.95)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    runtime_s: float
    detail: str = ""


@dataclass(frozen=True)
class VerifyReport:
    overall_pass: bool
    seed: int
    qs: Tuple[float, ...]
    runtime_s: float
    checks: List[CheckResult] = field(default_factory=list)


def _ctx(q: float, **kw) -> DeformationContext:
    return DeformationContext(q=q, **kw)


# -- individual check bodies (residual, tolerance, detail) --------------

def _spectrum_match(q: float, n: int, s_cap: int, tol: float):
    ctx = _ctx(q, fock_dim=n)
    rep = spectrum_report(build_Q(ctx), ctx)
    errs = [m.error for m in rep.matched if m.s <= s_cap]
    return max(errs), tol, f"N={n}, s<= {s_cap}, s_match={rep.s_match}"


def _spectrum_negation(q: float):
    ctx = _ctx(q, fock_dim=60)
    vals, _ = eigendecompose(build_Q(ctx), ctx)
    v = np.sort(vals)
    return float(np.max(np.abs(v + v[::-1]))), 1e-12, "spectrum symmetric under negation"


def _spectrum_bound(q: float):
    ctx = _ctx(q, fock_dim=60)
    vals, _ = eigendecompose(build_Q(ctx), ctx)
    return max(0.0, float(np.max(np.abs(vals))) - 1.0), 1e-12, "|lambda| <= 1"


def _commutators(q: float, corrupt: bool = False):
    ctx = _ctx(q)
    Q = build_Q(ctx).to_dense().astype(complex)
    if corrupt:
        Q[3, 4] *= 1.0 + 1e-6
        Q[4, 3] *= 1.0 + 1e-6
    P = build_P(ctx).to_dense()
    H = build_H(ctx).to_dense().astype(complex)
    F = build_F_of_H(ctx).to_dense().astype(complex)
    d = ctx.fock_dim - 2
    r1 = np.max(np.abs((H @ Q - Q @ H + 1j * P)[:d, :d]))
    r2 = np.max(np.abs((H @ P - P @ H - 1j * Q)[:d, :d]))
    r3 = np.max(np.abs((Q @ P - P @ Q - 1j * F)[:d, :d]))
    detail = "interior block, [H,Q]+iP, [H,P]-iQ, [Q,P]-iF(H)"
    if corrupt:
        detail += " (coupling a_3 deliberately corrupted)"
    return float(max(r1, r2, r3)), 1e-12, detail


def _ladder_conjugation(q: float):
    ctx = _ctx(q)
    low, rai = build_ladders(ctx)
    Q = build_Q(ctx).to_dense().astype(complex)
    P = build_P(ctx).to_dense()
    target = 0.5 * math.sqrt(q / (1.0 - q)) * (Q - 1j * P)
    r1 = np.max(np.abs(rai.to_dense() - target))
    C = commutator(low, rai)
    r2 = abs(C[0, 0] - q)
    return float(max(r1, r2)), 1e-13, "raising = (1/2)sqrt(q/(1-q))(Q-iP); [low,rai] e_0 = q e_0"


def _ladder_limit(q: float, n_cap: int, tol: float):
    ctx = _ctx(q, fock_dim=n_cap + 2)
    low, rai = build_ladders(ctx)
    diag = np.diag(commutator(low, rai)).real
    dev = float(np.max(np.abs(diag[: n_cap + 1] - 1.0)))
    return dev, tol, f"diag of [lowering, raising] near 1 for n <= {n_cap}"


def _y_realization(q: float):
    # n capped at 40: past that the basis normalizer c_n underflows at
    # small q and the monomial inner products degenerate
    ctx = _ctx(q)
    worst = 0.0
    for n in range(0, 41, 5):
        e_n = fock_monomial(n, ctx)
        up = apply_raising(e_n, ctx)
        expect_up = math.sqrt(q ** (n + 1) * (1.0 - q ** (n + 1)) / (1.0 - q))
        coef = fock_inner(up, fock_monomial(n + 1, ctx), ctx)
        worst = max(worst, abs(coef - expect_up))
        if n >= 1:
            down = apply_lowering(e_n, ctx)
            expect_dn = math.sqrt(q**n * (1.0 - q**n) / (1.0 - q))
            coef = fock_inner(down, fock_monomial(n - 1, ctx), ctx)
            worst = max(worst, abs(coef - expect_dn))
        tq = scale_op(e_n, q)
        worst = max(worst, abs(fock_inner(tq, e_n, ctx) - q**n))
    return worst, 1e-12, "raising/lowering/scale reproduce ladder coefficients on e_n"


def _qpoch_recurrence(q: float):
    ctx = _ctx(q)
    worst = 0.0
    for a in (-0.9, -0.3, 0.1, 0.5, 0.99):
        for n in (0, 1, 2, 5, 11):
            lhs = qpoch(a, n + 1, ctx)
            rhs = qpoch(a, n, ctx) * (1.0 - a * ctx.q**n)
            worst = max(worst, abs(lhs - rhs))
    return worst, 0.0, "(a;q)_{n+1} = (a;q)_n (1 - a q^n), exact float identity"


def _qpoch_pinned():
    r1 = abs(qpoch_inf(0.25, _ctx(0.25)).value - 0.6885375371203405)
    r2 = abs(qpoch_inf(0.5, _ctx(0.5)).value - 0.2887880950866029)
    return float(max(r1, r2)), 1e-12, "(0.25;0.25)_inf and (0.5;0.5)_inf frozen values"


def _qpoch_stability(q: float):
    loose = qpoch_inf(0.7, _ctx(q, tail_tol=1e-12)).value
    tight = qpoch_inf(0.7, _ctx(q, tail_tol=1e-14)).value
    return abs(loose - tight) / abs(tight), 1e-10, "tail_tol 1e-12 vs 1e-14"


def _mode_parity(q: float):
    ctx = _ctx(q)
    t = build_mode_table("position", ctx)
    signs = (-1.0) ** np.arange(ctx.fock_dim)
    diff = t.values[:, 1::2] - signs[:, None] * t.values[:, 0::2]
    return float(np.max(np.abs(diff))), 0.0, "p_n(-x) = (-1)^n p_n(x), bitwise"


def _hermite_mode_consistency(q: float):
    # generic abscissas only: at lattice points both forward recurrences
    # shed the minimal branch and stop agreeing past n ~ 2s
    ctx = _ctx(q)
    worst = 0.0
    for n in range(0, 31, 3):
        scale = 1.0 / math.sqrt(float(qpoch(q, n, ctx))) / q ** (n * (n - 1) / 4.0)
        for x in (0.7, 0.2, -0.43, 1.3):
            p = float(mode_poly(n, x, ctx))
            h = float(hermite_eval(n, x, ctx))
            worst = max(worst, abs(p - scale * h) / max(abs(p), 1e-30))
    return worst, 1e-9, "p_n vs rescaled h_n at generic points, n <= 30"


def _dual_orth(q: float, depth: int, n: int):
    ctx = _ctx(q, lattice_depth=depth, fock_dim=n)
    return dual_orthogonality_residual(ctx), 1e-8, f"S={depth}, N={n}, core margin 4"


def _sum_orth(q: float, depth: int, tol: float):
    ctx = _ctx(q, lattice_depth=depth)
    worst = 0.0
    for k in range(0, 11):
        for m in range(k, 11):
            worst = max(worst, orthogonality_residual(k, m, ctx))
    return worst, tol, f"S={depth}, degrees k,m <= 10, normalized residual"


def _euler_weights(q: float):
    ctx = _ctx(q)
    q2 = q * q
    lhs = qpoch_inf(q, ctx).value * qpoch_inf(-q, ctx).value
    rhs = qpoch_inf(q2, ctx, base=q2).value
    r1 = abs(lhs - rhs) / abs(rhs)
    m1 = qpoch_inf(-1.0, ctx).value
    r2 = abs(m1 - 2.0 * qpoch_inf(-q, ctx).value) / abs(m1)
    return float(max(r1, r2)), 1e-13, "(q;q)(-q;q) = (q^2;q^2); (-1;q) = 2(-q;q)"


def _row_completeness(q: float):
    # |p_n(x)| grows like q^{-n/4} toward x = 0, so the lattice must reach
    # n/2 levels past the nominal tail depth before row sums settle
    ctx0 = _ctx(q)
    depth = ctx0.fock_dim // 2 + suggested_depth(q, 1e-15)
    ctx = _ctx(q, lattice_depth=depth)
    t = build_mode_table("position", ctx)
    cs = norm_c_window(ctx)
    sums = np.sum(cs[None, :] * t.values**2, axis=1)
    return float(np.max(np.abs(sums - 1.0))), 1e-8, f"sum_x c_x p_n(x)^2 = 1, S={depth}"


def _norm_c_ratio(q: float):
    ctx = _ctx(q)
    worst = 0.0
    for s in range(0, 25):
        ratio = norm_c(s + 1, ctx) / norm_c(s, ctx)
        target = q / (1.0 - q ** (2 * s + 2))
        worst = max(worst, abs(ratio - target) / target)
    return worst, 1e-12, "c_{s+1}/c_s = q / (1 - q^{2s+2})"


def _psi_closed_form(qs=(0.3, 0.5, 0.8)):
    worst = 0.0
    for q in qs:
        ctx = _ctx(q)
        for s in (0, 1, 3):
            for sign in (1, -1):
                pt = lattice_point(sign, s, ctx)
                for y in (0.3, -0.55, 0.2 + 0.6j, 0.85j):
                    a = psi_eval(WavefunctionQuery(pt, y, "series"), ctx)
                    b = psi_eval(WavefunctionQuery(pt, y, "product"), ctx)
                    worst = max(worst, abs(a - b) / max(abs(b), 1e-30))
    return worst, 1e-10, "series vs product over lattice points and |y| < 1"


def _psi_pinned():
    ctx = _ctx(0.5)
    val = psi_eval(WavefunctionQuery(lattice_point(1, 0, ctx), 0.5, "product"), ctx)
    return abs(val - 2.3842310), 1e-6, "psi_{x=1}(0.5) at q=0.5"


def _phi_candidates(q: float):
    ctx = _ctx(q)
    pt = lattice_point(1, 1, ctx)
    res = phi_product_residuals(WavefunctionQuery(pt, 0.5, "series"), ctx)
    good = res["(-y^2;q^2)"]
    others = min(res["(y^2;q^2)"], res["(y^2;q)"])
    ok_margin = 0.0 if others > 1e-3 else 1.0
    return float(max(good, ok_margin)), 1e-10, (
        f"(-y^2;q^2) matches the series; alternatives off by {others:.2e}")


def _eigenfunction_orthonormal(q: float):
    ctx = _ctx(q, fock_dim=60)
    pts = [lattice_point(sg, s, ctx) for sg in (1, -1) for s in (0, 1, 3)]
    vecs = [normalized_eigenfunction("position", p, ctx.fock_dim, ctx)
            for p in pts]
    worst = 0.0
    for i, u in enumerate(vecs):
        for j, v in enumerate(vecs):
            val = complex(np.vdot(v, u))
            worst = max(worst, abs(val - (1.0 if i == j else 0.0)))
    cn = np.array([basis_coeff(n, ctx) for n in range(ctx.fock_dim)])
    f0 = CoefficientVector(vecs[0] * cn)
    f1 = CoefficientVector(vecs[2] * cn)
    worst = max(worst, abs(fock_inner(f0, f0, ctx) - 1.0),
                abs(fock_inner(f0, f1, ctx)))
    return worst, 1e-8, "mode coefficients orthonormal; fock_inner pairing agrees"


def _eigenvector_mode_ratio(q: float):
    # past n ~ 9 the q^{-n^2/4} dominant branch amplifies the eigenvalue's
    # truncation error and the comparison stops being meaningful
    ctx = _ctx(q, fock_dim=60)
    vals, vecs = eigendecompose(build_Q(ctx), ctx)
    worst = 0.0
    for s in (0, 2, 5, 8):
        idx = int(np.argmin(np.abs(vals - q**s)))
        v = vecs[:, idx]
        x = q**s
        for n in range(1, 10):
            worst = max(worst, abs(v[n] / v[0] - float(mode_poly(n, x, ctx))))
    return worst, 1e-8, "eigenvector component ratios equal p_n(q^s), n <= 9"


def _position_eigenrelation(q: float):
    ctx = _ctx(q, fock_dim=60)
    worst = 0.0
    table = build_mode_table("position", ctx)
    for s in (0, 3, 7):
        pt = lattice_point(1, s, ctx)
        b = normalized_eigenfunction("position", pt, ctx.fock_dim, ctx)
        f = fock_to_position(b, ctx, table=table)
        xf = apply_Q_position(f, ctx)
        worst = max(worst, float(np.max(np.abs(xf.values - q**s * f.values))))
    return worst, 1e-8, "multiplication by x fixes the eigenfunction, up to truncation"


def _momentum_equivalence(q: float):
    ctx = _ctx(q)
    n = ctx.fock_dim
    D = np.diag(1j ** np.arange(n))
    Q = build_Q(ctx).to_dense().astype(complex)
    P = build_P(ctx).to_dense()
    r = np.max(np.abs(D @ Q @ np.conj(D.T) - P))
    return float(r), 1e-13, "diag(i^n) Q diag(i^n)^* = P"


def _q_difference_P(q: float):
    # roundoff in the divided differences is amplified by 1/x, so compare
    # on levels s <= 20 where the amplification stays below the tolerance
    ctx = _ctx(q)
    core = slice(0, 42)
    worst = 0.0
    for n in (1, 2, 3):
        oracle = q_difference_P_oracle(n, ctx)
        direct = apply_P_position(mode_function(n, ctx), ctx)
        diff = oracle.values[core] - direct.values[core]
        worst = max(worst, float(np.max(np.abs(diff))))
    return worst, 5e-9, "q-difference route vs recurrence route for P, s <= 20"


def _parseval(q: float, seed: int, draws: int = 20):
    depth = suggested_depth(q, 1e-15)
    ctx = _ctx(q, lattice_depth=depth)
    table = build_mode_table("position", ctx)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        b1 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        b2 = rng.standard_normal(32) + 1j * rng.standard_normal(32)
        f1 = fock_to_position(b1, ctx, table=table)
        f2 = fock_to_position(b2, ctx, table=table)
        lhs = complex(np.sum(b1 * np.conj(b2)))
        rhs = position_inner(f1, f2, ctx)
        worst = max(worst, abs(lhs - rhs))
    return worst, 1e-8, f"mode-space vs window inner product, S={depth}, {draws} draws"


def _evolve_identity(q: float, depth: int, n: int, tol: float):
    ctx = _ctx(q, lattice_depth=depth, fock_dim=n)
    return identity_residual(ctx), tol, f"S={depth}, N={n}"


def _evolve_group(q: float):
    ctx = _ctx(q)
    r = max(group_law_residual(0.3, 1.0, ctx),
            group_law_residual(math.pi / 2, math.pi / 2, ctx))
    return r, 1e-8, "pairs (0.3, 1.0) and (pi/2, pi/2), buffered window"


def _evolve_inverse(q: float):
    return inverse_residual(math.pi / 2, _ctx(q)), 1e-8, "Phi(pi/2) Phi(-pi/2) = I, buffered"


def _evolve_phase_map(q: float):
    return phase_map_residual(_ctx(q)), 1e-8, "Phi(pi/2) F_n = i^n F_n, n <= 20, buffered"


def _evolve_intertwine(q: float, seed: int):
    return intertwine_residual(_ctx(q), seed=seed), 1e-7, (
        "pi/2 evolution lands on the momentum realization, buffered")


def _evolve_unitarity(q: float):
    ctx = _ctx(q)
    k = fractional_ft(1.0, ctx)
    resid, bound = unitarity_residual(k, ctx)
    return resid, bound, f"Gram defect vs lattice tail bound {bound:.2e}"


def _evolve_drift(q: float, seed: int):
    ctx = _ctx(q, lattice_depth=30, fock_dim=80)
    return norm_drift_max(ctx, seed=seed, n_draws=50), 1e-7, (
        "relative norm drift, S=30, N=80, modes n < 10, 50 draws")


def _evolve_periodicity(q: float):
    return periodicity_residual(0.7, _ctx(q)), 1e-10, "Phi(tau + 2 pi) = Phi(tau)"


def _kernel_sign_flip(q: float):
    ctx = _ctx(q, lattice_depth=30, fock_dim=80)
    return kernel_sign_flip_residual(ctx), 1e-12, "K(2 pi) = -K(0)"


def _kernel_column_symmetry(q: float):
    ctx = _ctx(q)
    k = kernel_K(0.7, ctx)
    cs = norm_c_window(ctx)
    G = k.matrix / cs[None, :]
    r = float(np.max(np.abs(G - G.T)) / np.max(np.abs(G)))
    return r, 1e-12, "K / c_{col} is symmetric (relative)"


def _heisenberg(q: float):
    ctx = _ctx(q)
    r = max(heisenberg_rotation_check(t, ctx)
            for t in (math.pi / 6, math.pi / 2, math.pi))
    return r, 1e-12, "phase rotation turns Q into cos Q + sin P"


def _wavefunction_recurrence(q: float):
    ctx = _ctx(q)
    t = build_mode_table("position", ctx)
    xs = window_values(ctx)
    worst = 0.0
    for col in (0, 2, 5, 11):
        x = xs[col]
        for n in range(1, 40):
            lhs = coupling(n, ctx) * t.values[n + 1, col] + \
                coupling(n - 1, ctx) * t.values[n - 1, col]
            worst = max(worst, abs(lhs - x * t.values[n, col]))
    return worst, 1e-10, "three-term recurrence holds across tabulated columns"


def default_checks(seed: int, corrupt_coupling: bool = False):
    """The named battery; returns (name, thunk) pairs in run order."""
    checks: List[Tuple[str, Callable]] = [
        ("qpoch-recurrence[q=0.5]", lambda: _qpoch_recurrence(0.5)),
        ("qpoch-pinned-values", _qpoch_pinned),
        ("qpoch-tail-stability[q=0.8]", lambda: _qpoch_stability(0.8)),
        ("y-realization[q=0.3]", lambda: _y_realization(0.3)),
        ("y-realization[q=0.5]", lambda: _y_realization(0.5)),
        ("y-realization[q=0.8]", lambda: _y_realization(0.8)),
        ("y-realization[q=0.95]", lambda: _y_realization(0.95)),
        ("mode-parity[q=0.5]", lambda: _mode_parity(0.5)),
        ("mode-parity[q=0.95]", lambda: _mode_parity(0.95)),
        ("hermite-mode-consistency[q=0.5]", lambda: _hermite_mode_consistency(0.5)),
        ("euler-weight-identities[q=0.5]", lambda: _euler_weights(0.5)),
        ("euler-weight-identities[q=0.8]", lambda: _euler_weights(0.8)),
        ("norm-c-ratio[q=0.8]", lambda: _norm_c_ratio(0.8)),
        ("row-completeness[q=0.5]", lambda: _row_completeness(0.5)),
        ("sum-orthogonality[q=0.3]", lambda: _sum_orth(0.3, 40, 1e-9)),
        ("sum-orthogonality[q=0.5]", lambda: _sum_orth(0.5, 40, 1e-9)),
        ("sum-orthogonality[q=0.8]", lambda: _sum_orth(0.8, 80, 1e-7)),
        ("dual-orthogonality[q=0.3]", lambda: _dual_orth(0.3, 40, 128)),
        ("dual-orthogonality[q=0.5]", lambda: _dual_orth(0.5, 40, 128)),
        ("dual-orthogonality[q=0.8]", lambda: _dual_orth(0.8, 80, 224)),
        ("dual-orthogonality[q=0.95]", lambda: _dual_orth(0.95, 24, 120)),
        ("spectrum-match[q=0.3]", lambda: _spectrum_match(0.3, 64, 8, 1e-10)),
        ("spectrum-match[q=0.5]", lambda: _spectrum_match(0.5, 60, 8, 1e-10)),
        ("spectrum-match[q=0.8]", lambda: _spectrum_match(0.8, 120, 12, 1e-8)),
        ("spectrum-match[q=0.95]", lambda: _spectrum_match(0.95, 64, 6, 1e-8)),
        ("spectrum-negation[q=0.5]", lambda: _spectrum_negation(0.5)),
        ("spectrum-norm-bound[q=0.5]", lambda: _spectrum_bound(0.5)),
        ("commutators[q=0.3]", lambda: _commutators(0.3)),
        ("commutators[q=0.5]", lambda: _commutators(0.5, corrupt=corrupt_coupling)),
        ("commutators[q=0.8]", lambda: _commutators(0.8)),
        ("commutators[q=0.95]", lambda: _commutators(0.95)),
        ("ladder-conjugation[q=0.5]", lambda: _ladder_conjugation(0.5)),
        ("ladder-limit[q=0.999]", lambda: _ladder_limit(0.999, 10, 0.05)),
        ("ladder-limit[q=0.9999]", lambda: _ladder_limit(0.9999, 5, 0.005)),
        ("eigenvector-mode-ratio[q=0.5]", lambda: _eigenvector_mode_ratio(0.5)),
        ("position-eigenrelation[q=0.5]", lambda: _position_eigenrelation(0.5)),
        ("momentum-equivalence[q=0.5]", lambda: _momentum_equivalence(0.5)),
        ("q-difference-P[q=0.5]", lambda: _q_difference_P(0.5)),
        ("psi-closed-form", _psi_closed_form),
        ("psi-pinned-value", _psi_pinned),
        ("phi-candidate-ranking[q=0.5]", lambda: _phi_candidates(0.5)),
        ("wavefunction-recurrence[q=0.5]", lambda: _wavefunction_recurrence(0.5)),
        ("parseval-isometry[q=0.5]", lambda: _parseval(0.5, seed)),
        ("evolve-identity[q=0.5]", lambda: _evolve_identity(0.5, 30, 80, 1e-10)),
        ("evolve-identity[q=0.8]", lambda: _evolve_identity(0.8, 60, 144, 1e-8)),
        ("evolve-group-law[q=0.5]", lambda: _evolve_group(0.5)),
        ("evolve-inverse[q=0.5]", lambda: _evolve_inverse(0.5)),
        ("evolve-phase-map[q=0.5]", lambda: _evolve_phase_map(0.5)),
        ("evolve-intertwine[q=0.5]", lambda: _evolve_intertwine(0.5, seed)),
        ("evolve-unitarity[q=0.5]", lambda: _evolve_unitarity(0.5)),
        ("evolve-norm-drift[q=0.5]", lambda: _evolve_drift(0.5, seed)),
        ("evolve-periodicity[q=0.5]", lambda: _evolve_periodicity(0.5)),
        ("kernel-sign-flip[q=0.5]", lambda: _kernel_sign_flip(0.5)),
        ("kernel-column-symmetry[q=0.5]", lambda: _kernel_column_symmetry(0.5)),
        ("heisenberg-rotation[q=0.5]", lambda: _heisenberg(0.5)),
        ("heisenberg-rotation[q=0.95]", lambda: _heisenberg(0.95)),
    ]
    return checks


def run_verification(seed: int = 0, corrupt_coupling: bool = False) -> VerifyReport:
    t0 = time.perf_counter()
    results: List[CheckResult] = []
    for name, thunk in default_checks(seed, corrupt_coupling):
        c0 = time.perf_counter()
        try:
            residual, tol, detail = thunk()
            passed = residual <= tol
        except QoscError as exc:
            residual, tol, detail, passed = float("inf"), 0.0, f"raised {exc!r}", False
        results.append(CheckResult(name=name, passed=bool(passed),
                                   residual=float(residual),
                                   tolerance=float(tol),
                                   runtime_s=time.perf_counter() - c0,
                                   detail=detail))
    return VerifyReport(overall_pass=all(c.passed for c in results),
                        seed=seed, qs=QS,
                        runtime_s=time.perf_counter() - t0,
                        checks=results)
