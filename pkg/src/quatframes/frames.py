"""Synthesis/analysis/frame operators and K-frame classification.

A finite family {f_k} in H^n is held as the columns of an n x m quaternion
matrix F.  Analysis coefficients are taken as inner(f_k, x) so that the
analysis map is right-linear and equals F.H acting on the left; synthesis is
F itself and the frame operator is S = F @ F.H.

The optimal lower K-frame bound is the largest A with S - A * K @ K.H
positive semidefinite, i.e. the smallest generalized eigenvalue of the pencil
(S reduced onto R(K) by a Schur complement, K K* restricted to R(K)).  The
reduction matters: minimising the Rayleigh ratio <Sx,x>/|K*x|^2 over all of
H^n lets x pick up a component orthogonal to R(K) that lowers the numerator,
and the Schur complement S11 - S12 pinv(S22) S21 accounts for exactly that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qlinalg as qla
from .qlinalg import QMatrix, QVector

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class FrameSystem:
    """A finite vector family: column k of `matrix` is the k-th frame vector."""

    matrix: QMatrix

    def __post_init__(self):
        if self.matrix.ncols < 1:
            raise ValueError("a frame system needs at least one vector")

    @property
    def n(self) -> int:
        return self.matrix.nrows

    @property
    def m(self) -> int:
        return self.matrix.ncols

    @classmethod
    def from_vectors(cls, vectors) -> "FrameSystem":
        return cls(QMatrix.from_columns(list(vectors)))

    def vector(self, k: int) -> QVector:
        return self.matrix.column(k)

    def vectors(self):
        return self.matrix.columns()


def _as_frame(f) -> FrameSystem:
    if isinstance(f, FrameSystem):
        return f
    if isinstance(f, QMatrix):
        return FrameSystem(f)
    raise TypeError(f"expected FrameSystem or QMatrix, got {type(f).__name__}")


@dataclass
class KFrameCertificate:
    """Optimal bounds plus classification flags for one family.

    a_opt is math.inf for the degenerate K = 0 (the defining inequality is
    vacuous).  The witnesses are unit vectors at which the lower/upper
    Rayleigh ratios are attained; they are None when undefined.
    """

    a_opt: float
    b_opt: float
    is_bessel: bool
    is_k_frame: bool
    is_parseval_k: bool
    is_tight: bool
    is_exact: bool
    residuals: dict = field(default_factory=dict)
    lower_witness: QVector | None = None
    upper_witness: QVector | None = None


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------


def synthesis(f, c: QVector) -> QVector:
    """T_F c = sum_k f_k * c_k, i.e. F @ c."""
    f = _as_frame(f)
    if len(c) != f.m:
        raise ValueError(f"coefficient length {len(c)} != family size {f.m}")
    return f.matrix @ c


def analysis(f, x: QVector) -> QVector:
    """Coefficient vector {inner(f_k, x)}_k, i.e. F.H @ x."""
    f = _as_frame(f)
    if len(x) != f.n:
        raise ValueError(f"vector length {len(x)} != ambient dimension {f.n}")
    return f.matrix.H @ x


def frame_operator(f) -> QMatrix:
    """S = F @ F.H; Hermitian positive semidefinite."""
    f = _as_frame(f)
    return qla.matmul(f.matrix, f.matrix.H)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------


def _herm_sqrt_inv(m: QMatrix) -> QMatrix:
    """Inverse square root of a Hermitian positive definite matrix."""
    pairs = qla.herm_eig(m)
    lams = np.array([lam for lam, _ in pairs])
    if lams.min() <= 0:
        raise np.linalg.LinAlgError("matrix is numerically singular")
    z = QMatrix.from_columns([v for _, v in pairs], n=m.nrows)
    return qla.matmul(qla.matmul(z, QMatrix.diag(1.0 / np.sqrt(lams))), z.H)


def k_frame_bounds(f, k: QMatrix, tol: float = DEFAULT_TOL) -> KFrameCertificate:
    """Optimal K-frame bounds of the family with respect to the operator K.

    b_opt is the top eigenvalue of the frame operator S.  a_opt is the
    largest constant A with A * |K.H x|^2 <= sum_k |inner(f_k, x)|^2 for all
    x, computed from the pencil of the Schur-complement reduction of S onto
    R(K) against the restriction of K @ K.H.  is_k_frame holds when a_opt
    clears tol and R(K) sits inside R(F) within tol.
    """
    f = _as_frame(f)
    if k.nrows != k.ncols or k.nrows != f.n:
        raise ValueError(f"K must be {f.n} x {f.n}, got {k.shape}")
    s = frame_operator(f)
    eig_s = qla.herm_eig(s)
    b_opt = max(eig_s[0][0], 0.0)
    upper_witness = eig_s[0][1]

    residuals = {
        "parseval": qla.opnorm(s - qla.matmul(k, k.H)),
        "hermiticity": (s - s.H).frob(),
    }

    ksvd = qla.svd(k)
    if ksvd.rank == 0:
        # K = 0: the defining inequality is vacuous.
        residuals["range"] = 0.0
        return KFrameCertificate(
            a_opt=math.inf,
            b_opt=b_opt,
            is_bessel=True,
            is_k_frame=True,
            is_parseval_k=residuals["parseval"] <= tol * (1.0 + qla.opnorm(k) ** 2),
            is_tight=False,
            is_exact=False,
            residuals=residuals,
            lower_witness=None,
            upper_witness=upper_witness,
        )

    uk = ksvd.u                      # n x r orthonormal basis of R(K)
    r = ksvd.rank
    n = f.n

    s11 = qla.matmul(qla.matmul(uk.H, s), uk)
    if r < n:
        w = qla.complement_basis(uk)   # n x (n - r)
        s12 = qla.matmul(qla.matmul(uk.H, s), w)
        s22 = qla.matmul(qla.matmul(w.H, s), w)
        s22_pinv = qla.pinv(s22)
        schur = s11 - qla.matmul(qla.matmul(s12, s22_pinv), s12.H)
    else:
        w = None
        s12 = None
        s22_pinv = None
        schur = s11

    lk = qla.matmul(uk.H, k)          # r x n
    n11 = qla.matmul(lk, lk.H)        # r x r positive definite
    white = _herm_sqrt_inv(n11)
    c = qla.matmul(qla.matmul(white, schur), white)
    c = (c + c.H) * 0.5
    pairs = qla.herm_eig(c)
    a_opt = max(pairs[-1][0], 0.0)

    # Witness for the lower ratio: R(K)-coordinates from the whitened
    # eigenvector, complement coordinates from the Schur minimiser.
    u_min = pairs[-1][1]
    v_coord = white @ u_min
    x_low = uk @ v_coord
    if r < n:
        w_coord = (s22_pinv @ (s12.H @ v_coord)) * (-1.0)
        x_low = x_low + (w @ w_coord)
    nrm = qla.vnorm(x_low)
    lower_witness = x_low * (1.0 / nrm) if nrm > 0 else None

    pf = qla.range_projector(f.matrix)
    residuals["range"] = qla.opnorm(k - qla.matmul(pf, k))
    range_ok = residuals["range"] <= tol * (1.0 + qla.opnorm(k))

    return KFrameCertificate(
        a_opt=a_opt,
        b_opt=b_opt,
        is_bessel=True,
        is_k_frame=bool(a_opt > tol and range_ok),
        is_parseval_k=residuals["parseval"] <= tol * (1.0 + qla.opnorm(k) ** 2),
        is_tight=False,
        is_exact=False,
        residuals=residuals,
        lower_witness=lower_witness,
        upper_witness=upper_witness,
    )


def is_parseval_k_frame(f, k: QMatrix, tol: float = DEFAULT_TOL) -> bool:
    """True iff the frame operator equals K @ K.H within tol * (1 + |K|^2)."""
    f = _as_frame(f)
    dev = qla.opnorm(frame_operator(f) - qla.matmul(k, k.H))
    return bool(dev <= tol * (1.0 + qla.opnorm(k) ** 2))


def classify_frame(f, tol: float = DEFAULT_TOL) -> KFrameCertificate:
    """Ordinary-frame certificate (K = identity) with tightness and exactness.

    Tight means S = A * I within tol; exact means the family is a frame and
    dropping any single vector destroys the frame property (checked by brute
    force over the m subfamilies).
    """
    f = _as_frame(f)
    eye = QMatrix.identity(f.n)
    cert = k_frame_bounds(f, eye, tol=tol)
    mid = 0.5 * (cert.a_opt + cert.b_opt)
    s = frame_operator(f)
    tight_dev = qla.opnorm(s - eye * mid)
    cert.residuals["tight"] = tight_dev
    cert.is_tight = bool(cert.is_k_frame and tight_dev <= tol * (1.0 + mid))

    is_exact = False
    if cert.is_k_frame:
        is_exact = True
        for drop in range(f.m):
            keep = [c for j, c in enumerate(f.matrix.columns()) if j != drop]
            if not keep:
                is_exact = False
                break
            sub = QMatrix.from_columns(keep, n=f.n)
            pairs = qla.herm_eig(qla.matmul(sub, sub.H))
            if pairs[-1][0] > tol:
                is_exact = False   # a proper subfamily is still a frame
                break
    cert.is_exact = is_exact
    return cert


# ---------------------------------------------------------------------------
# sampling helper used by the verification layer
# ---------------------------------------------------------------------------


def squared_coefficient_sums(f, xs: QMatrix) -> np.ndarray:
    """sum_k |inner(f_k, x)|^2 for each column x of xs, as a real vector."""
    f = _as_frame(f)
    coeffs = qla.matmul(f.matrix.H, xs)
    return np.sum(np.abs(coeffs.a) ** 2 + np.abs(coeffs.b) ** 2, axis=0).real
