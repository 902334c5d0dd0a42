"""K-dual constructions, characterizations, and approximate-dual machinery.

A family G is a K-dual of F when the operator identity K = T_F T_G* holds,
i.e. K == F @ G.H in matrix form; the reconstruction it encodes is
K x = sum_k f_k * inner(g_k, x).  Everything here works at the operator
level, so the identity is insensitive to the coefficient-ordering choice
made for the analysis map.

Tolerance policy: construction residuals are expected at 1e-9, verification
assertions run at 1e-8, and strict comparisons against the constant 1 (the
approximate-dual threshold) use a 1e-6 margin.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import qlinalg as qla
from .frames import FrameSystem, _as_frame, frame_operator, squared_coefficient_sums
from .qlinalg import QMatrix, random_qmatrix

TOL_CONSTRUCT = 1e-9
TOL_VERIFY = 1e-8
ONE_MARGIN = 1e-6


@dataclass
class DualPair:
    """Two families with the operator they reproduce and the duality residual."""

    f: FrameSystem
    g: FrameSystem
    k: QMatrix
    duality_residual: float

    @property
    def is_exact(self) -> bool:
        return self.duality_residual <= TOL_VERIFY

    @property
    def is_approximate(self) -> bool:
        return self.duality_residual < 1.0 - ONE_MARGIN


@dataclass
class FreeFactor:
    """Parameter of the dual characterizations: an m x n operator into
    coefficient space whose admissibility residual is recorded alongside."""

    m: QMatrix
    constraint_residual: float


def _shapes_agree(f: FrameSystem, g: FrameSystem, k: QMatrix):
    if f.n != g.n or f.m != g.m:
        raise ValueError(f"family shapes disagree: F is {f.n}x{f.m}, G is {g.n}x{g.m}")
    if k.nrows != k.ncols or k.nrows != f.n:
        raise ValueError(f"K must be {f.n} x {f.n}, got {k.shape}")


def duality_residual(f, g, k: QMatrix) -> float:
    """Operator-norm defect |K - F @ G.H|."""
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    return qla.opnorm(k - qla.matmul(f.matrix, g.matrix.H))


def is_k_dual(f, g, k: QMatrix, tol: float = TOL_VERIFY):
    """(flag, residual): G is a K-dual of F iff |K - F @ G.H| <= tol.

    The adjoint identity K.H == G @ F.H holds at exactly the same residual,
    so a single defect certifies both reconstruction formulas.
    """
    res = duality_residual(f, g, k)
    return bool(res <= tol), res


def duality_lower_bound(f, g, k: QMatrix, tol: float = TOL_VERIFY,
                        samples: int = 100, seed: int = 0) -> float:
    """Lower K*-frame bound 1/B_F certified for a dual pair.

    For a K-dual pair, the dual family satisfies
    (1/B_F) |K x|^2 <= sum_k |inner(g_k, x)|^2 with B_F the Bessel bound of
    F; the inequality is spot-checked on `samples` random vectors before the
    bound is returned.
    """
    f, g = _as_frame(f), _as_frame(g)
    ok, res = is_k_dual(f, g, k, tol)
    if not ok:
        raise ValueError(f"not a K-dual pair (residual {res:.3e} > {tol:.1e})")
    b_f = qla.herm_eig(frame_operator(f))[0][0]
    bound = 1.0 / b_f
    rng = np.random.default_rng(seed)
    xs = random_qmatrix(rng, f.n, samples)
    kx = qla.matmul(k, xs)
    kx_sq = np.sum(np.abs(kx.a) ** 2 + np.abs(kx.b) ** 2, axis=0).real
    g_sums = squared_coefficient_sums(g, xs)
    slack = 1e-10 * (1.0 + kx_sq.max(initial=0.0))
    worst = float(np.max(bound * kx_sq - g_sums, initial=0.0))
    if worst > slack:
        raise ArithmeticError(f"certified bound violated by {worst:.3e}")
    return bound


# ---------------------------------------------------------------------------
# canonical dual and the two characterizations
# ---------------------------------------------------------------------------


def _require_k_frame(f: FrameSystem, k: QMatrix, tol: float):
    pf = qla.range_projector(f.matrix)
    leak = qla.opnorm(k - qla.matmul(pf, k))
    if leak > tol * (1.0 + qla.opnorm(k)):
        raise ValueError(
            f"family is not a K-frame: range(K) leaks out of range(F) by {leak:.3e}"
        )


def canonical_k_dual(f, k: QMatrix, tol: float = TOL_VERIFY):
    """The distinguished dual {K.H D f_k} of the projected family {P f_k}.

    Here P projects onto R(K) and D = solve_on_subspace(S, K) inverts the
    frame operator from S(R(K)) back onto R(K).  Returns (g_canon, f_proj);
    g_canon is a K-dual of f_proj, with K*-frame bounds confined to
    [1/B, |K|^2 |K+|^2 / A] for (A, B) the K-frame bounds of F.
    """
    f = _as_frame(f)
    if k.nrows != k.ncols or k.nrows != f.n:
        raise ValueError(f"K must be {f.n} x {f.n}, got {k.shape}")
    _require_k_frame(f, k, tol)
    s = frame_operator(f)
    d = qla.solve_on_subspace(s, k, tol=tol)
    p = qla.range_projector(k)
    g = qla.matmul(qla.matmul(k.H, d), f.matrix)
    f_proj = qla.matmul(p, f.matrix)
    return FrameSystem(g), FrameSystem(f_proj)


def extract_free_factor(f, g, k: QMatrix, tol: float = TOL_VERIFY) -> FreeFactor:
    """Recover the free parameter M = T_G* - T_F* D* K of a dual of {P f_k}.

    M satisfies the admissibility constraint P @ F @ M == 0 and the original
    family is recovered by dual_from_free_factor(F, K, M).
    """
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    p = qla.range_projector(k)
    res = qla.opnorm(k - qla.matmul(qla.matmul(p, f.matrix), g.matrix.H))
    if res > tol:
        raise ValueError(
            f"G is not a K-dual of the projected family (residual {res:.3e})"
        )
    s = frame_operator(f)
    d = qla.solve_on_subspace(s, k, tol=tol)
    m = g.matrix.H - qla.matmul(qla.matmul(f.matrix.H, d.H), k)
    constraint = qla.opnorm(qla.matmul(qla.matmul(p, f.matrix), m))
    return FreeFactor(m=m, constraint_residual=constraint)


def dual_from_free_factor(f, k: QMatrix, m: QMatrix,
                          tol: float = TOL_VERIFY) -> FrameSystem:
    """Dual of the projected family from an admissible free factor.

    Column k of the result is (canonical dual column k) + M.H e_k.  The
    factor must satisfy P @ F @ M == 0 within tol.
    """
    f = _as_frame(f)
    if m.nrows != f.m or m.ncols != f.n:
        raise ValueError(f"free factor must be {f.m} x {f.n}, got {m.shape}")
    p = qla.range_projector(k)
    violation = qla.opnorm(qla.matmul(qla.matmul(p, f.matrix), m))
    if violation > tol:
        raise ValueError(f"free factor violates P F M = 0 by {violation:.3e}")
    g_canon, _ = canonical_k_dual(f, k, tol=tol)
    return FrameSystem(g_canon.matrix + m.H)


def dual_from_synthesis_factor(f, k: QMatrix, m: QMatrix,
                               tol: float = TOL_VERIFY) -> FrameSystem:
    """Dual of F itself from a synthesis factor with F @ M.H == K.

    The dual vectors are simply the columns of M.  This is the
    characterization that needs no range projection, so it applies even when
    the dual is sought for the unprojected family.
    """
    f = _as_frame(f)
    if m.nrows != f.n or m.ncols != f.m:
        raise ValueError(f"synthesis factor must be {f.n} x {f.m}, got {m.shape}")
    res = qla.opnorm(qla.matmul(f.matrix, m.H) - k)
    if res > tol:
        raise ValueError(f"factor fails F M* = K by {res:.3e}")
    return FrameSystem(m)


def extract_synthesis_factor(f, g, k: QMatrix, tol: float = TOL_VERIFY) -> QMatrix:
    """Inverse of dual_from_synthesis_factor: a valid dual G yields M = G."""
    f, g = _as_frame(f), _as_frame(g)
    ok, res = is_k_dual(f, g, k, tol)
    if not ok:
        raise ValueError(f"not a K-dual pair (residual {res:.3e})")
    return g.matrix


def atomic_sequence(f, g, k: QMatrix, tol: float = TOL_VERIFY) -> FrameSystem:
    """The reproducing family {h_k} with x = sum_k f_k inner(h_k, x) on R(K).

    h_k = adjoint(pinv(K) @ P_{R(K)}) g_k.  The synthesis matrix H also
    satisfies the left-inverse identity H @ F.H == I on R(K).
    """
    f, g = _as_frame(f), _as_frame(g)
    ok, res = is_k_dual(f, g, k, tol)
    if not ok:
        raise ValueError(f"not a K-dual pair (residual {res:.3e})")
    restricted = qla.matmul(qla.pinv(k), qla.range_projector(k))
    return FrameSystem(qla.matmul(restricted.H, g.matrix))


# ---------------------------------------------------------------------------
# approximate duals
# ---------------------------------------------------------------------------


def approx_deficit(f, g, k: QMatrix):
    """(deficit, flag): deficit = |K - F @ G.H|, flag true when deficit < 1.

    The comparison against 1 uses a strict ONE_MARGIN guard band.
    """
    res = duality_residual(f, g, k)
    return res, bool(res < 1.0 - ONE_MARGIN)


def _restrict(m: QMatrix, uk: QMatrix) -> QMatrix:
    return qla.matmul(qla.matmul(uk.H, m), uk)


def psi_operator(f, g, k: QMatrix, tol: float = TOL_VERIFY):
    """(Psi, flag) with Psi = P_{R(K)} @ F @ G.H @ pinv(K).

    The flag reports whether the restriction of Psi to R(K) is invertible
    (smallest singular value above tol).  When G is an approximate K-dual
    with deficit d and |pinv(K)| = 1, that smallest singular value is at
    least 1 - d.
    """
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    ksvd = qla.svd(k)
    p = qla.range_projector(k)
    psi = qla.matmul(qla.matmul(qla.matmul(p, f.matrix), g.matrix.H), qla.pinv(k))
    if ksvd.rank == 0:
        return psi, False
    core = _restrict(psi, ksvd.u)
    smin = qla.svd(core, rtol=0.0).sigma
    smallest = float(smin[-1]) if smin.size == core.nrows else 0.0
    return psi, bool(smallest > tol)


def approx_upgrade(f, g, k: QMatrix, tol: float = TOL_VERIFY):
    """Upgrade an approximate K-dual into two exact dual pairs.

    With Psi = P F G.H pinv(K) invertible on R(K):

      pair A:  ({Psi^-1 P f_k}, {K.H pinv(K).H g_k}) reproduces K exactly;
      pair B:  ({pinv(K).H g_k}, {K.H Psi^-1 P f_k}) reproduces K exactly.

    The inversion of Psi happens on an orthonormal basis of R(K) only.
    Raises ValueError when that restriction is numerically singular.  The
    hypothesis |pinv(K)| = 1 is the caller's responsibility; a warning is
    emitted when it fails.
    """
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    kd = qla.pinv(k)
    kd_norm = qla.opnorm(kd)
    if abs(kd_norm - 1.0) > ONE_MARGIN:
        warnings.warn(
            f"smallest nonzero singular value of K is {1.0 / kd_norm:.6f}, not 1; "
            "the upgrade theorem assumes |pinv(K)| = 1",
            stacklevel=2,
        )
    ksvd = qla.svd(k)
    if ksvd.rank == 0:
        raise ValueError("K = 0 admits no invertible Psi restriction")
    uk = ksvd.u
    p = qla.matmul(uk, uk.H)
    psi = qla.matmul(qla.matmul(qla.matmul(p, f.matrix), g.matrix.H), kd)
    core = _restrict(psi, uk)
    core_svd = qla.svd(core, rtol=0.0)
    if core_svd.rank < core.nrows or core_svd.sigma[-1] <= tol:
        raise ValueError("Psi is not invertible on range(K)")
    core_inv = qla.matmul(
        qla.matmul(core_svd.v, QMatrix.diag(1.0 / core_svd.sigma)), core_svd.u.H
    )
    psi_inv = qla.matmul(qla.matmul(uk, core_inv), uk.H)

    f_a = qla.matmul(psi_inv, qla.matmul(p, f.matrix))
    g_a = qla.matmul(qla.matmul(k.H, kd.H), g.matrix)
    res_a = qla.opnorm(k - qla.matmul(f_a, g_a.H))
    pair_a = DualPair(FrameSystem(f_a), FrameSystem(g_a), k, res_a)

    f_b = qla.matmul(kd.H, g.matrix)
    g_b = qla.matmul(k.H, qla.matmul(psi_inv, qla.matmul(p, f.matrix)))
    res_b = qla.opnorm(k - qla.matmul(f_b, g_b.H))
    pair_b = DualPair(FrameSystem(f_b), FrameSystem(g_b), k, res_b)
    return pair_a, pair_b


def projected_dual_approx(f, g, k: QMatrix, tol: float = TOL_VERIFY) -> bool:
    """Check: a dual of the projected family with |F @ G.H| < 1 is an
    approximate K-dual of F itself.

    Requires G to be a K-dual of {P f_k}.  Returns the verified implication:
    True when the norm hypothesis fails (vacuous) or when the deficit indeed
    drops below 1; False on a counterexample.
    """
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    p = qla.range_projector(k)
    res = qla.opnorm(k - qla.matmul(qla.matmul(p, f.matrix), g.matrix.H))
    if res > tol:
        raise ValueError(
            f"G is not a K-dual of the projected family (residual {res:.3e})"
        )
    if qla.opnorm(qla.matmul(f.matrix, g.matrix.H)) >= 1.0 - ONE_MARGIN:
        return True
    deficit, ok = approx_deficit(f, g, k)
    return ok


def approx_transfer(f, g, k: QMatrix, tol: float = TOL_VERIFY) -> bool:
    """Check: an approximate dual of the projected family transfers to F when
    the off-range part obeys |(I - P) F G.H| <= 1 - |K - P F G.H|.

    Requires |K - P F G.H| < 1.  Returns the verified implication (vacuous
    True when the margin hypothesis fails).  The conclusion follows from the
    triangle inequality, which is also how it is checked here.
    """
    f, g = _as_frame(f), _as_frame(g)
    _shapes_agree(f, g, k)
    p = qla.range_projector(k)
    fg = qla.matmul(f.matrix, g.matrix.H)
    on_range = qla.opnorm(k - qla.matmul(p, fg))
    if on_range >= 1.0 - ONE_MARGIN:
        raise ValueError(
            f"G is not an approximate K-dual of the projected family "
            f"(on-range deficit {on_range:.6f})"
        )
    off_range = qla.opnorm(fg - qla.matmul(p, fg))
    if off_range > 1.0 - on_range - ONE_MARGIN:
        return True
    deficit, ok = approx_deficit(f, g, k)
    return ok


