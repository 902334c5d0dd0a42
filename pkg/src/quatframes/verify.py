"""Seeded random instances and a one-shot theorem-verification engine.

An Instance packages an operator K (smallest nonzero singular value pinned to
1), a family F guaranteed to be a K-frame, and a companion family G that is
an exact dual, a controlled approximate dual, or deliberately unrelated.
run_suite replays every verifiable statement about the instance and returns a
structured report: one record per check with the hypothesis status, the
conclusion status, the measured residual and the tolerance it was held to.
A report passes when every check whose hypothesis is met also has its
conclusion hold; checks with failed hypotheses count as vacuous.

Randomness comes from numpy's PCG64 via default_rng, so identical seeds give
bit-identical instances and reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import qlinalg as qla
from .duals import (
    ONE_MARGIN,
    TOL_VERIFY,
    approx_deficit,
    atomic_sequence,
    canonical_k_dual,
    dual_from_free_factor,
    dual_from_synthesis_factor,
    duality_residual,
    extract_free_factor,
    psi_operator,
    approx_upgrade,
)
from .frames import FrameSystem, _as_frame, k_frame_bounds, squared_coefficient_sums
from .qlinalg import QMatrix, random_qmatrix
from .quaternion import Quaternion

KINDS = ("exact-dual", "approx-dual", "non-dual")
GENERATOR_NAME = "numpy PCG64 (numpy.random.default_rng)"


@dataclass
class Instance:
    """One verification problem; regeneration from the same seed is bit-identical."""

    seed: int | None
    n: int
    m: int
    rank_k: int
    kind: str | None
    k: QMatrix
    f: FrameSystem
    g: FrameSystem | None

    def meta(self) -> dict:
        return {
            "seed": self.seed,
            "n": self.n,
            "m": self.m,
            "rankK": self.rank_k,
            "kind": self.kind,
            "generator": GENERATOR_NAME,
        }


@dataclass
class CheckRecord:
    name: str
    hypothesis_met: bool
    conclusion_holds: bool
    residual: float | None
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "hypothesisMet": self.hypothesis_met,
            "conclusionHolds": self.conclusion_holds,
            "residual": self.residual,
            "tolerance": self.tolerance,
        }


@dataclass
class VerificationReport:
    instance: dict
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.conclusion_holds for c in self.checks if c.hypothesis_met)

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# instance generation
# ---------------------------------------------------------------------------


def _random_orthonormal(rng, n: int, cols: int) -> QMatrix:
    basis = qla.orthonormalize_columns(random_qmatrix(rng, n, cols), tol=1e-8)
    while basis.ncols < cols:      # astronomically unlikely rank drop
        extra = qla.orthonormalize_columns(
            QMatrix.from_columns(basis.columns() + random_qmatrix(rng, n, cols).columns(), n=n),
            tol=1e-8,
        )
        basis = extra
    return QMatrix.from_columns(basis.columns()[:cols], n=n)


def gen_instance(seed: int, n: int, m: int, rank_k: int, kind: str) -> Instance:
    """Deterministically build one verification instance.

    K is a random operator of the requested rank, rescaled so its smallest
    nonzero singular value is exactly 1 (hence |pinv(K)| = 1).  F spans all
    of H^n with singular values in [0.7, 1.5], so it is a K-frame for any K.
    G depends on `kind`: an exact dual built through a synthesis factor, the
    same dual perturbed to a target deficit drawn from [0.1, 0.5], or an
    unrelated random family.
    """
    if not (1 <= rank_k <= n <= m):
        raise ValueError(f"need 1 <= rankK <= n <= m, got rankK={rank_k}, n={n}, m={m}")
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    rng = np.random.default_rng(seed)

    u = _random_orthonormal(rng, n, rank_k)
    v = _random_orthonormal(rng, n, rank_k)
    sig = np.sort(rng.uniform(1.0, 2.0, size=rank_k))[::-1]
    sig[-1] = 1.0
    k = qla.matmul(qla.matmul(u, QMatrix.diag(sig)), v.H)

    ql = _random_orthonormal(rng, n, n)
    qr = _random_orthonormal(rng, m, n)
    sf = rng.uniform(0.7, 1.5, size=n)
    f_mat = qla.matmul(qla.matmul(ql, QMatrix.diag(sf)), qr.H)
    f = FrameSystem(f_mat)

    f_pinv = qla.pinv(f_mat)
    z = random_qmatrix(rng, m, n)
    kernel = QMatrix.identity(m) - qla.matmul(f_pinv, f_mat)
    m_star = qla.matmul(f_pinv, k) + qla.matmul(kernel, z) * 0.3
    g_exact = m_star.H                                   # K = F @ g_exact.H

    if kind == "exact-dual":
        g_mat = g_exact
    elif kind == "approx-dual":
        delta = rng.uniform(0.1, 0.5)
        p = qla.range_projector(k)
        t = random_qmatrix(rng, n, n)
        t_mix = t - qla.matmul(p, t) * 0.5               # off-range leaning mix
        nu = qla.opnorm(t_mix)
        dg_star = qla.matmul(f_pinv, t_mix) * (delta / nu)
        g_mat = g_exact + dg_star.H
    else:
        g_mat = random_qmatrix(rng, n, m)
        while duality_residual(FrameSystem(f_mat), FrameSystem(g_mat), k) < 0.1:
            g_mat = random_qmatrix(rng, n, m)

    return Instance(
        seed=int(seed), n=n, m=m, rank_k=rank_k, kind=kind,
        k=k, f=f, g=FrameSystem(g_mat),
    )


# ---------------------------------------------------------------------------
# the verification engine
# ---------------------------------------------------------------------------


def _column_norms(m: QMatrix) -> np.ndarray:
    return np.sqrt(np.sum(np.abs(m.a) ** 2 + np.abs(m.b) ** 2, axis=0).real)


def _effective_kind(inst: Instance, tol: float) -> str:
    if inst.kind in KINDS:
        return inst.kind
    if inst.g is None:
        return "frame-only"
    res = duality_residual(inst.f, inst.g, inst.k)
    if res <= tol:
        return "exact-dual"
    if res < 1.0 - ONE_MARGIN:
        return "approx-dual"
    return "non-dual"


def _axiom_spot_checks(rng, n: int) -> float:
    worst = 0.0
    for _ in range(10):
        p, q, r = (Quaternion(*rng.uniform(-2, 2, 4)) for _ in range(3))
        worst = max(worst, ((p * q) * r - p * (q * r)).modulus())
        worst = max(worst, ((p * q).conjugate() - q.conjugate() * p.conjugate()).modulus())
        worst = max(worst, abs((p * q).modulus() - p.modulus() * q.modulus()))
    for _ in range(10):
        x = qla.random_qvector(rng, n)
        y = qla.random_qvector(rng, n)
        s = Quaternion(*rng.uniform(-2, 2, 4))
        lhs = qla.inner(x, y * s)
        rhs = qla.inner(x, y) * s
        worst = max(worst, (lhs - rhs).modulus())
        worst = max(worst, (qla.inner(x, y) - qla.inner(y, x).conjugate()).modulus())
        cs = qla.inner(x, y).modulus_squared() - (x.norm() * y.norm()) ** 2
        worst = max(worst, max(cs, 0.0) / (1.0 + (x.norm() * y.norm()) ** 2))
    return worst


def run_suite(inst: Instance, tol: float = TOL_VERIFY) -> VerificationReport:
    """Run every in-scope check against one instance.

    Failures are report entries, never exceptions.  Checks whose hypotheses
    are not satisfied by the instance are recorded as vacuous.
    """
    report = VerificationReport(instance=inst.meta())
    add = lambda *a: report.checks.append(CheckRecord(*a))
    rng = np.random.default_rng([inst.seed if inst.seed is not None else 0, 0x5EED])
    kind = _effective_kind(inst, tol)
    f, g, k = inst.f, inst.g, inst.k
    n = inst.n

    # 1. scalar algebra and inner-product axioms, spot-checked
    ax = _axiom_spot_checks(rng, n)
    add("quaternion-axioms", True, ax <= 1e-10, ax, 1e-10)

    # 2. pseudo-inverse identities for K
    kd = qla.pinv(k)
    p_right = qla.matmul(k, kd)
    p_left = qla.matmul(kd, k)
    pen = max(
        qla.opnorm(qla.matmul(p_right, k) - k),
        qla.opnorm(qla.matmul(p_left, kd) - kd),
        qla.opnorm(p_right - p_right.H),
        qla.opnorm(p_left - p_left.H),
    )
    pen_tol = 1e-10 * (1.0 + qla.opnorm(k))
    add("penrose-pinv", True, pen <= pen_tol, pen, pen_tol)

    # 3. optimal bounds: sampled two-sided inequality plus range criterion
    cert = k_frame_bounds(f, k, tol=tol)
    xs = random_qmatrix(rng, n, 100)
    sums = squared_coefficient_sums(f, xs)
    x_norms = _column_norms(xs) ** 2
    kx = qla.matmul(k.H, xs)
    kx_norms = _column_norms(kx) ** 2
    scale = 1.0 + float(np.max(sums))
    viol = float(np.max(sums - cert.b_opt * x_norms, initial=0.0))
    if math.isfinite(cert.a_opt):
        viol = max(viol, float(np.max(cert.a_opt * kx_norms - sums, initial=0.0)))
    tight = 0.0
    if cert.lower_witness is not None and math.isfinite(cert.a_opt) and cert.a_opt > 0:
        w = cert.lower_witness
        num = squared_coefficient_sums(f, QMatrix.from_columns([w]))[0]
        den = (qla.matmul(k.H, QMatrix.from_columns([w]))).frob() ** 2
        tight = abs(num / den - cert.a_opt) / cert.a_opt if den > 0 else math.inf
    bw = cert.upper_witness
    num_b = squared_coefficient_sums(f, QMatrix.from_columns([bw]))[0]
    tight = max(tight, abs(num_b - cert.b_opt) / cert.b_opt) if cert.b_opt > 0 else tight
    douglas = cert.residuals["range"] <= tol * (1.0 + qla.opnorm(k))
    concl = (viol / scale <= tol) and (tight <= 1e-6) and (cert.is_k_frame == douglas) \
        and cert.is_k_frame
    add("k-frame-bounds", True, concl, viol / scale, tol)

    res_dual = duality_residual(f, g, k) if g is not None else None

    # 4/5. label consistency of the duality defect
    add("exact-duality", kind == "exact-dual" and g is not None,
        res_dual is not None and res_dual <= tol, res_dual, tol)
    add("non-dual-rejected", kind == "non-dual" and g is not None,
        res_dual is not None and res_dual > tol, res_dual, tol)

    is_exact = g is not None and res_dual is not None and res_dual <= tol

    # 6. lower-bound lemma for the dual family
    hyp = is_exact
    worst = None
    if hyp:
        b_f = cert.b_opt
        xs2 = random_qmatrix(rng, n, 100)
        kx2 = qla.matmul(k, xs2)
        kx2_sq = _column_norms(kx2) ** 2
        g_sums = squared_coefficient_sums(g, xs2)
        worst = float(np.max(kx2_sq / b_f - g_sums, initial=0.0))
        worst = worst / (1.0 + float(np.max(kx2_sq)))
    add("lemma-lower-bound", hyp, worst is not None and worst <= tol if hyp else True,
        worst, tol)

    # 7. canonical dual: duality plus the bound bracket
    hyp = cert.is_k_frame
    res = None
    concl = True
    if hyp:
        g_can, f_proj = canonical_k_dual(f, k, tol=tol)
        res = duality_residual(f_proj, g_can, k)
        cert_g = k_frame_bounds(g_can, k.H, tol=tol)
        lo = 1.0 / cert.b_opt
        hi = (qla.opnorm(k) * qla.opnorm(qla.pinv(k))) ** 2 / cert.a_opt
        bracket_miss = max(lo - cert_g.a_opt, cert_g.b_opt - hi, 0.0)
        concl = res <= tol and bracket_miss <= 1e-6
        res = max(res, bracket_miss)
    add("canonical-dual", hyp, concl, res, tol)

    # 8. restricted characterization: free factor and its round trip
    p = qla.range_projector(k)
    res_proj = None
    if g is not None:
        res_proj = qla.opnorm(k - qla.matmul(qla.matmul(p, f.matrix), g.matrix.H))
    hyp = res_proj is not None and res_proj <= tol
    res = None
    if hyp:
        ff = extract_free_factor(f, g, k, tol=tol)
        recon = dual_from_free_factor(f, k, ff.m, tol=tol)
        res = max(ff.constraint_residual, qla.opnorm(recon.matrix - g.matrix))
    add("free-factor-roundtrip", hyp, res is not None and res <= tol if hyp else True,
        res, tol)

    # 9. unrestricted characterization: synthesis factor both ways
    hyp = is_exact
    res = None
    if hyp:
        res = qla.opnorm(qla.matmul(f.matrix, g.matrix.H) - k)   # M = G direction
        f_pinv = qla.pinv(f.matrix)
        z = random_qmatrix(rng, inst.m, n)
        kernel = QMatrix.identity(inst.m) - qla.matmul(f_pinv, f.matrix)
        m_new = (qla.matmul(f_pinv, k) + qla.matmul(kernel, z) * 0.5).H
        g_new = dual_from_synthesis_factor(f, k, m_new, tol=tol)
        res = max(res, duality_residual(f, g_new, k))
    add("synthesis-factor", hyp, res is not None and res <= tol if hyp else True,
        res, tol)

    # 10. atomic sequence: reconstruction on R(K) and the left-inverse identity
    hyp = is_exact
    res = None
    if hyp:
        h = atomic_sequence(f, g, k, tol=tol)
        uk = qla.svd(k).u
        coeff = random_qmatrix(rng, uk.ncols, 100)
        xs3 = qla.matmul(uk, coeff)
        recon = qla.matmul(f.matrix, qla.matmul(h.matrix.H, xs3))
        rel = _column_norms(recon - xs3) / np.maximum(_column_norms(xs3), 1e-30)
        left = qla.opnorm(qla.matmul(qla.matmul(h.matrix, f.matrix.H), uk) - uk)
        res = max(float(np.max(rel, initial=0.0)), left)
    add("atomic-sequence", hyp, res is not None and res <= tol if hyp else True, res, tol)

    # 11. approximate-dual defect
    hyp = g is not None and kind in ("exact-dual", "approx-dual")
    flag = None
    if g is not None:
        _, flag = approx_deficit(f, g, k)
    add("approx-deficit", hyp, bool(flag) if hyp else True, res_dual, 1.0)

    # 12-14. Psi operator: invertibility and both upgrade identities
    kd_norm = qla.opnorm(kd)
    hyp = (
        g is not None
        and res_dual is not None
        and res_dual < 1.0 - ONE_MARGIN
        and abs(kd_norm - 1.0) <= ONE_MARGIN
    )
    invertible = None
    pair_res = (None, None)
    if hyp:
        _, invertible = psi_operator(f, g, k, tol=tol)
        if invertible:
            pair_a, pair_b = approx_upgrade(f, g, k, tol=tol)
            pair_res = (pair_a.duality_residual, pair_b.duality_residual)
    add("psi-invertible", hyp, bool(invertible) if hyp else True, None, tol)
    add("psi-upgrade-a", hyp, pair_res[0] is not None and pair_res[0] <= tol if hyp else True,
        pair_res[0], tol)
    add("psi-upgrade-b", hyp, pair_res[1] is not None and pair_res[1] <= tol if hyp else True,
        pair_res[1], tol)

    # 15. small-norm product implication for duals of the projected family
    fg_norm = qla.opnorm(qla.matmul(f.matrix, g.matrix.H)) if g is not None else None
    hyp = (
        res_proj is not None and res_proj <= tol
        and fg_norm is not None and fg_norm < 1.0 - ONE_MARGIN
    )
    add("projected-dual-implication", hyp,
        (res_dual < 1.0 - ONE_MARGIN) if hyp else True, res_dual, 1.0)

    # 16. transfer of an approximate dual from the projected family
    off_range = None
    if g is not None:
        fg = qla.matmul(f.matrix, g.matrix.H)
        off_range = qla.opnorm(fg - qla.matmul(p, fg))
    hyp = (
        res_proj is not None and res_proj < 1.0 - ONE_MARGIN
        and off_range is not None
        and off_range <= 1.0 - res_proj - ONE_MARGIN
    )
    add("transfer-implication", hyp,
        (res_dual < 1.0 - ONE_MARGIN) if hyp else True, res_dual, 1.0)

    return report


# ---------------------------------------------------------------------------
# independent sampling oracle for the optimal bounds
# ---------------------------------------------------------------------------


def brute_force_bound_oracle(f, k: QMatrix, trials: int = 100_000, seed: int = 0):
    """Estimate the extremal Rayleigh ratios by randomized search.

    Works entirely on the complex embedding (no eigensolver or SVD anywhere):
    uniform sampling over the unit sphere followed by a shrinking random-step
    descent from the incumbent.  Because the embedding is a bijection onto
    H^n that preserves all three quadratic forms, the estimates converge to
    the same optimal bounds computed spectrally, and by construction

        A_est >= A_opt    and    B_est <= B_opt.

    Returns (A_est, B_est); A_est is inf when K = 0.
    """
    if trials < 1000:
        raise ValueError("need at least 1000 trials")
    f = _as_frame(f)
    rng = np.random.default_rng(seed)
    fc = np.conj(qla.embed(f.matrix)).T
    kc = np.conj(qla.embed(k)).T
    dim = 2 * f.n
    k_scale = np.linalg.norm(kc, 2) if kc.size else 0.0

    def ratios(x):
        num = np.sum(np.abs(fc @ x) ** 2, axis=0)
        den_k = np.sum(np.abs(kc @ x) ** 2, axis=0)
        den_x = np.sum(np.abs(x) ** 2, axis=0)
        return num, den_k, den_x

    def sample(count):
        return rng.standard_normal((dim, count)) + 1j * rng.standard_normal((dim, count))

    n_uniform = trials // 2
    x = sample(n_uniform)
    num, den_k, den_x = ratios(x)
    b_ratio = num / den_x
    i_b = int(np.argmax(b_ratio))
    best_b, xb = float(b_ratio[i_b]), x[:, i_b].copy()

    usable = den_k > 1e-14 * den_x
    if k_scale == 0.0 or not np.any(usable):
        a_est = math.inf
        xa = None
    else:
        a_ratio = np.where(usable, num / np.maximum(den_k, 1e-300), np.inf)
        i_a = int(np.argmin(a_ratio))
        best_a, xa = float(a_ratio[i_a]), x[:, i_a].copy()

    rounds = 80
    batch = max(100, (trials - n_uniform) // (2 * rounds))
    sigma = 0.5
    for _ in range(rounds):
        if xa is not None:
            props = xa[:, None] / np.linalg.norm(xa) + sigma * sample(batch)
            num, den_k, den_x = ratios(props)
            ok = den_k > 1e-14 * den_x
            vals = np.where(ok, num / np.maximum(den_k, 1e-300), np.inf)
            j = int(np.argmin(vals))
            if vals[j] < best_a:
                best_a, xa = float(vals[j]), props[:, j].copy()
        props = xb[:, None] / np.linalg.norm(xb) + sigma * sample(batch)
        num, _, den_x = ratios(props)
        vals = num / den_x
        j = int(np.argmax(vals))
        if vals[j] > best_b:
            best_b, xb = float(vals[j]), props[:, j].copy()
        sigma *= 0.87

    a_est = math.inf if xa is None else best_a
    return a_est, float(best_b)
