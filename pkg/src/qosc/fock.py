"""Truncated number-basis operators and their spectra.

All operators here are tridiagonal in the orthonormal basis e_n,
n < fock_dim. With a_n = sqrt(q^n (1 - q^{n+1})):

    Q e_n = a_n e_{n+1} + a_{n-1} e_{n-1}
    P e_n = i a_n e_{n+1} - i a_{n-1} e_{n-1}
    H e_n = (n + 1/2) e_n
    F(H) e_n = 2 (1 - 1/q) (q^n - (1+q) q^{2n}) e_n

and [Q, P] = -i F(H) away from the truncation edge. The spectrum of the
truncated Q fills the geometric lattice {+-q^s} from the outside in;
spectrum_report performs the matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .context import DeformationContext
from .errors import (DimensionMismatch, NoConvergence, NotHermitian,
                     ValidationError)
from .qcore import coupling

_RESIDUAL_FACTOR = 1e-12


@dataclass(frozen=True)
class TridiagonalOperator:
    """Operator with one nonzero band above and/or below the diagonal.

    hermitian=True: dense[n, n+1] = offdiag[n], dense[n+1, n] = conj.
    hermitian=False: the single band sits on the given side only
    ("upper": entries (n, n+1); "lower": entries (n+1, n)).
    """

    diag: np.ndarray
    offdiag: np.ndarray
    hermitian: bool = True
    side: str = "upper"

    def __post_init__(self):
        object.__setattr__(self, "diag", np.asarray(self.diag))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag))
        if self.side not in ("upper", "lower"):
            raise ValidationError(f"side must be 'upper' or 'lower', got {self.side!r}")
        if self.offdiag.shape[0] != max(self.diag.shape[0] - 1, 0):
            raise DimensionMismatch(
                f"offdiag length {self.offdiag.shape[0]} does not fit "
                f"dimension {self.diag.shape[0]}")

    @property
    def dim(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        dtype = np.result_type(self.diag, self.offdiag)
        out = np.zeros((self.dim, self.dim), dtype=dtype)
        np.fill_diagonal(out, self.diag)
        idx = np.arange(self.dim - 1)
        if self.hermitian:
            out[idx, idx + 1] = self.offdiag
            out[idx + 1, idx] = np.conj(self.offdiag)
        elif self.side == "upper":
            out[idx, idx + 1] = self.offdiag
        else:
            out[idx + 1, idx] = self.offdiag
        return out


def build_Q(ctx: DeformationContext) -> TridiagonalOperator:
    """Position: real symmetric, zero diagonal, offdiag a_n."""
    n = np.arange(ctx.fock_dim - 1, dtype=float)
    return TridiagonalOperator(np.zeros(ctx.fock_dim), coupling(n, ctx))


def build_P(ctx: DeformationContext) -> TridiagonalOperator:
    """Momentum: Hermitian, zero diagonal, upper offdiag -i a_n."""
    n = np.arange(ctx.fock_dim - 1, dtype=float)
    return TridiagonalOperator(np.zeros(ctx.fock_dim),
                               -1j * coupling(n, ctx).astype(complex))


def build_H(ctx: DeformationContext) -> TridiagonalOperator:
    n = np.arange(ctx.fock_dim, dtype=float)
    return TridiagonalOperator(n + 0.5, np.zeros(max(ctx.fock_dim - 1, 0)))


def build_F_of_H(ctx: DeformationContext) -> TridiagonalOperator:
    """The commutation defect operator: [Q, P] = i F(H) in the interior."""
    q = ctx.q
    n = np.arange(ctx.fock_dim, dtype=float)
    diag = 2.0 * (1.0 - 1.0 / q) * (q**n - (1.0 + q) * q ** (2.0 * n))
    return TridiagonalOperator(diag, np.zeros(max(ctx.fock_dim - 1, 0)))


def build_ladders(ctx: DeformationContext) -> Tuple[TridiagonalOperator,
                                                    TridiagonalOperator]:
    """(lowering, raising) with lowering e_n = sqrt(q^n [n]_q) e_{n-1}.

    The raising operator is the conjugate transpose. On e_0 the
    commutator [lowering, raising] acts as multiplication by q, and its
    diagonal tends to 1 as q -> 1-.
    """
    q = ctx.q
    k = np.arange(1, ctx.fock_dim, dtype=float)
    vals = np.sqrt(q**k * (1.0 - q**k) / (1.0 - q))
    lowering = TridiagonalOperator(np.zeros(ctx.fock_dim), vals,
                                   hermitian=False, side="upper")
    raising = TridiagonalOperator(np.zeros(ctx.fock_dim), vals,
                                  hermitian=False, side="lower")
    return lowering, raising


def commutator(A, B) -> np.ndarray:
    """[A, B] as a dense matrix; accepts operators or arrays."""
    a = A.to_dense() if isinstance(A, TridiagonalOperator) else np.asarray(A)
    b = B.to_dense() if isinstance(B, TridiagonalOperator) else np.asarray(B)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"incompatible shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def _gauge_phases(offdiag: np.ndarray) -> np.ndarray:
    """Diagonal phases d with conj(d_n) t_n d_{n+1} = |t_n|."""
    n = offdiag.shape[0] + 1
    d = np.ones(n, dtype=complex)
    for k in range(n - 1):
        t = offdiag[k]
        d[k + 1] = d[k] * (np.conj(t) / abs(t) if t != 0 else 1.0)
    return d


def eigendecompose(T: TridiagonalOperator,
                   ctx: DeformationContext) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and eigenvectors of a Hermitian operator.

    Complex off-diagonals are rotated to the real nonnegative gauge by a
    diagonal phase similarity first; bisection plus inverse iteration
    does the real work, with implicit QL as fallback. Each eigenpair is
    residual-checked against 1e-12 times the operator scale.
    """
    if not T.hermitian:
        raise NotHermitian("eigendecompose requires a Hermitian operator")
    if np.any(np.abs(np.imag(T.diag)) > 0):
        raise NotHermitian("Hermitian operator must have a real diagonal")
    d = np.real(T.diag).astype(float)
    if T.dim == 1:
        return d.copy(), np.ones((1, 1))
    complex_gauge = np.iscomplexobj(T.offdiag) and np.any(np.imag(T.offdiag) != 0)
    e = np.abs(T.offdiag).astype(float) if complex_gauge else np.real(T.offdiag).astype(float)
    try:
        vals, vecs = eigh_tridiagonal(d, e, lapack_driver="stebz")
    except Exception:
        try:
            vals, vecs = eigh_tridiagonal(d, e, lapack_driver="stev")
        except Exception as exc:
            raise NoConvergence(f"tridiagonal eigensolver failed: {exc}") from exc
    if complex_gauge:
        vecs = _gauge_phases(T.offdiag)[:, None] * vecs
    dense = T.to_dense()
    scale = float(np.max(np.abs(d))) + 2.0 * float(np.max(np.abs(e))) if e.size else float(np.max(np.abs(d)))
    resid = np.linalg.norm(dense @ vecs - vecs * vals[None, :], axis=0)
    if np.any(resid > _RESIDUAL_FACTOR * max(scale, 1e-300)):
        raise NoConvergence(
            f"eigenpair residual {float(np.max(resid)):.3e} exceeds "
            f"{_RESIDUAL_FACTOR:.0e} * scale")
    return vals, vecs


@dataclass(frozen=True)
class MatchedLevel:
    sign: int
    s: int
    value: float
    error: float


@dataclass(frozen=True)
class SpectrumReport:
    """Greedy matching of eigenvalues against the geometric lattice.

    matched pairs are assigned outside-in per sign (largest positive to
    +q^0, most negative to -q^0, and so on); s_match is the deepest level
    through which every pair meets match_tol. Eigenvalues left over once
    the window buckets run out are reported raw in unmatched.
    """

    q: float
    fock_dim: int
    lattice_depth: int
    match_tol: float
    matched: List[MatchedLevel] = field(default_factory=list)
    unmatched: List[float] = field(default_factory=list)
    s_match: int = -1
    max_error: float = 0.0


def spectrum_report(T: TridiagonalOperator,
                    ctx: DeformationContext) -> SpectrumReport:
    vals, _ = eigendecompose(T, ctx)
    pos = sorted([float(v) for v in vals if v > 0], reverse=True)
    neg = sorted([float(v) for v in vals if v <= 0])
    matched: List[MatchedLevel] = []
    unmatched: List[float] = []
    per_level: dict[int, list[float]] = {}
    for sign, pool in ((1, pos), (-1, neg)):
        for s, v in enumerate(pool):
            if s >= ctx.lattice_depth:
                unmatched.extend(pool[s:])
                break
            target = sign * ctx.q**s
            err = abs(v - target)
            matched.append(MatchedLevel(sign, s, v, err))
            per_level.setdefault(s, []).append(err)
    s_match = -1
    for s in range(ctx.lattice_depth):
        errs = per_level.get(s)
        if errs is None or len(errs) < 2 or max(errs) >= ctx.match_tol:
            break
        s_match = s
    max_error = max((m.error for m in matched), default=0.0)
    return SpectrumReport(q=ctx.q, fock_dim=ctx.fock_dim,
                          lattice_depth=ctx.lattice_depth,
                          match_tol=ctx.match_tol, matched=matched,
                          unmatched=unmatched, s_match=s_match,
                          max_error=max_error)
