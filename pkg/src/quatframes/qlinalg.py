"""Dense linear algebra over right quaternionic vector spaces.

Vectors live in H^n with scalars acting on the right; right-linear operators
are n x m quaternion matrices acting on the left, so T(x*q) = (T x)*q holds
identically.  Internally every object is stored as a pair of complex arrays
via the split q = a + b*j, which turns the Hamilton product into four complex
products and makes the 2n x 2m complex embedding

    chi(M) = [[A, B], [-conj(B), conj(A)]]      (M = A + B*j)

a cheap block assembly.  All decompositions (SVD, Hermitian eigensolve,
pseudo-inverse, operator square root) run LAPACK on the embedding and pull
the factors back to quaternion form; singular values and eigenvalues of the
embedding occur in pairs, and the pullback keeps one member of each pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quaternion import Quaternion

# Relative Frobenius tolerance below which a matrix is accepted as Hermitian.
HERMITICITY_RTOL = 1e-10

# Residual threshold for accepting a candidate direction in the structured
# Gram-Schmidt pullback (see _extract_structured_columns).
_ACCEPT_TOL = 1e-6


# ---------------------------------------------------------------------------
# value types
# ---------------------------------------------------------------------------


class QVector:
    """Element of H^n.  Stored as complex arrays (a, b) with entries a + b*j."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = np.asarray(a, dtype=np.complex128)
        b = np.asarray(b, dtype=np.complex128)
        if a.ndim != 1 or a.shape != b.shape:
            raise ValueError("QVector needs two equal-length 1-d arrays")
        self.a = a
        self.b = b

    # -- constructors ---------------------------------------------------

    @classmethod
    def zeros(cls, n: int) -> "QVector":
        return cls(np.zeros(n, dtype=np.complex128), np.zeros(n, dtype=np.complex128))

    @classmethod
    def basis(cls, n: int, k: int) -> "QVector":
        a = np.zeros(n, dtype=np.complex128)
        a[k] = 1.0
        return cls(a, np.zeros(n, dtype=np.complex128))

    @classmethod
    def from_real(cls, values) -> "QVector":
        a = np.asarray(values, dtype=float).astype(np.complex128)
        return cls(a, np.zeros_like(a))

    @classmethod
    def from_components(cls, comp) -> "QVector":
        """From an (n, 4) real array of [w, x, y, z] rows."""
        comp = np.asarray(comp, dtype=float)
        if comp.ndim != 2 or comp.shape[1] != 4:
            raise ValueError("expected an (n, 4) component array")
        return cls(comp[:, 0] + 1j * comp[:, 1], comp[:, 2] + 1j * comp[:, 3])

    @classmethod
    def from_quaternions(cls, quats) -> "QVector":
        return cls.from_components([q.to_list() for q in quats])

    # -- views ------------------------------------------------------------

    def to_components(self) -> np.ndarray:
        out = np.empty((len(self), 4))
        out[:, 0] = self.a.real
        out[:, 1] = self.a.imag
        out[:, 2] = self.b.real
        out[:, 3] = self.b.imag
        return out

    def __len__(self):
        return self.a.shape[0]

    def __getitem__(self, i) -> Quaternion:
        return Quaternion.from_complex_pair(self.a[i], self.b[i])

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        return QVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return QVector(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QVector(-self.a, -self.b)

    def __mul__(self, q):
        """Right scalar action x * q (entrywise quaternion product on the right)."""
        if isinstance(q, (int, float)):
            return QVector(self.a * q, self.b * q)
        if isinstance(q, Quaternion):
            qa, qb = q.complex_pair()
            return QVector(
                self.a * qa - self.b * np.conj(qb),
                self.a * qb + self.b * np.conj(qa),
            )
        return NotImplemented

    def norm(self) -> float:
        return vnorm(self)

    def __repr__(self):
        return f"QVector(n={len(self)})"


class QMatrix:
    """n x m quaternion matrix, acting on the left of QVectors."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        a = np.asarray(a, dtype=np.complex128)
        b = np.asarray(b, dtype=np.complex128)
        if a.ndim != 2 or a.shape != b.shape:
            raise ValueError("QMatrix needs two equal-shape 2-d arrays")
        self.a = a
        self.b = b

    # -- constructors -----------------------------------------------------

    @classmethod
    def zeros(cls, n: int, m: int) -> "QMatrix":
        return cls(
            np.zeros((n, m), dtype=np.complex128),
            np.zeros((n, m), dtype=np.complex128),
        )

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(np.eye(n, dtype=np.complex128), np.zeros((n, n), dtype=np.complex128))

    @classmethod
    def diag(cls, values) -> "QMatrix":
        """Diagonal matrix from real numbers or Quaternions."""
        vals = list(values)
        n = len(vals)
        out = cls.zeros(n, n)
        for i, v in enumerate(vals):
            if isinstance(v, Quaternion):
                va, vb = v.complex_pair()
            else:
                va, vb = complex(v), 0.0
            out.a[i, i] = va
            out.b[i, i] = vb
        return out

    @classmethod
    def from_real(cls, values) -> "QMatrix":
        a = np.asarray(values, dtype=float).astype(np.complex128)
        return cls(a, np.zeros_like(a))

    @classmethod
    def from_components(cls, comp) -> "QMatrix":
        """From an (n, m, 4) real array of [w, x, y, z] entries."""
        comp = np.asarray(comp, dtype=float)
        if comp.ndim != 3 or comp.shape[2] != 4:
            raise ValueError("expected an (n, m, 4) component array")
        return cls(comp[..., 0] + 1j * comp[..., 1], comp[..., 2] + 1j * comp[..., 3])

    @classmethod
    def from_columns(cls, vectors, n: int | None = None) -> "QMatrix":
        vectors = list(vectors)
        if not vectors:
            if n is None:
                raise ValueError("need the row count for an empty column list")
            return cls.zeros(n, 0)
        a = np.stack([v.a for v in vectors], axis=1)
        b = np.stack([v.b for v in vectors], axis=1)
        return cls(a, b)

    # -- views -------------------------------------------------------------

    @property
    def shape(self) -> tuple:
        return self.a.shape

    @property
    def nrows(self) -> int:
        return self.a.shape[0]

    @property
    def ncols(self) -> int:
        return self.a.shape[1]

    def column(self, k: int) -> QVector:
        return QVector(self.a[:, k].copy(), self.b[:, k].copy())

    def columns(self):
        return [self.column(k) for k in range(self.ncols)]

    def entry(self, i: int, j: int) -> Quaternion:
        return Quaternion.from_complex_pair(self.a[i, j], self.b[i, j])

    def __getitem__(self, key) -> Quaternion:
        i, j = key
        return self.entry(i, j)

    def to_components(self) -> np.ndarray:
        out = np.empty(self.shape + (4,))
        out[..., 0] = self.a.real
        out[..., 1] = self.a.imag
        out[..., 2] = self.b.real
        out[..., 3] = self.b.imag
        return out

    def trace(self) -> Quaternion:
        return Quaternion.from_complex_pair(np.trace(self.a), np.trace(self.b))

    def frob(self) -> float:
        return float(np.sqrt(np.linalg.norm(self.a) ** 2 + np.linalg.norm(self.b) ** 2))

    # -- algebra ---------------------------------------------------------

    @property
    def H(self) -> "QMatrix":
        """Adjoint (conjugate transpose)."""
        return QMatrix(np.conj(self.a).T, -self.b.T)

    def __add__(self, other):
        return QMatrix(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        return QMatrix(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QMatrix(-self.a, -self.b)

    def __mul__(self, s):
        if isinstance(s, (int, float)):
            return QMatrix(self.a * s, self.b * s)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            return matmul(self, other)
        if isinstance(other, QVector):
            return matvec(self, other)
        return NotImplemented

    def __repr__(self):
        return f"QMatrix(shape={self.shape})"


@dataclass
class SVDResult:
    """Economy quaternionic SVD: M ~ u @ diag(sigma) @ v.H with rank columns."""

    u: QMatrix
    sigma: np.ndarray
    v: QMatrix
    rank: int


# ---------------------------------------------------------------------------
# elementary operations
# ---------------------------------------------------------------------------


def inner(x: QVector, y: QVector) -> Quaternion:
    """Quaternionic inner product sum_i conj(x_i) * y_i.

    Conjugate-symmetric and right-linear in the second argument:
    inner(x, y * q) == inner(x, y) * q.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    a = np.sum(np.conj(x.a) * y.a + x.b * np.conj(y.b))
    b = np.sum(np.conj(x.a) * y.b - x.b * np.conj(y.a))
    return Quaternion.from_complex_pair(a, b)


def vnorm(x: QVector) -> float:
    """Euclidean norm sqrt(Re inner(x, x))."""
    s = np.sum(np.abs(x.a) ** 2 + np.abs(x.b) ** 2)
    return float(np.sqrt(s.real))


def matvec(m: QMatrix, x: QVector) -> QVector:
    if m.ncols != len(x):
        raise ValueError(f"shape mismatch: {m.shape} @ vector of length {len(x)}")
    ca = np.conj(x.b)
    return QVector(m.a @ x.a - m.b @ ca, m.a @ x.b + m.b @ np.conj(x.a))


def matmul(m1: QMatrix, m2: QMatrix) -> QMatrix:
    """Quaternion matrix product, entries sum_j m1[i,j] * m2[j,l] in that order."""
    if m1.ncols != m2.nrows:
        raise ValueError(f"shape mismatch: {m1.shape} @ {m2.shape}")
    a = m1.a @ m2.a - m1.b @ np.conj(m2.b)
    b = m1.a @ m2.b + m1.b @ np.conj(m2.a)
    return QMatrix(a, b)


def adjoint(m: QMatrix) -> QMatrix:
    """Conjugate transpose; satisfies inner(adjoint(M) @ x, y) == inner(x, M @ y)."""
    return m.H


# ---------------------------------------------------------------------------
# complex embedding
# ---------------------------------------------------------------------------


def embed(m: QMatrix) -> np.ndarray:
    """Complex 2n x 2m image [[A, B], [-conj(B), conj(A)]] of M = A + B*j.

    Multiplicative (embed(M @ N) == embed(M) @ embed(N)), *-preserving, and
    J-symmetric: embed(M) @ J_m == J_n @ conj(embed(M)) with J as in
    symplectic_form.
    """
    top = np.hstack([m.a, m.b])
    bottom = np.hstack([-np.conj(m.b), np.conj(m.a)])
    return np.vstack([top, bottom])


def symplectic_form(k: int) -> np.ndarray:
    """The 2k x 2k block form [[0, I], [-I, 0]] used in the J-symmetry identity."""
    eye = np.eye(k)
    zero = np.zeros((k, k))
    return np.block([[zero, eye], [-eye, zero]])


def from_embedding(c: np.ndarray) -> QMatrix:
    """Inverse of embed on block-structured 2n x 2m complex matrices."""
    c = np.asarray(c, dtype=np.complex128)
    if c.ndim != 2 or c.shape[0] % 2 or c.shape[1] % 2:
        raise ValueError("expected a 2n x 2m complex matrix")
    n = c.shape[0] // 2
    m = c.shape[1] // 2
    return QMatrix(c[:n, :m], c[:n, m:])


def _qvec_from_embedded_column(col: np.ndarray) -> QVector:
    """Pull a complex 2n-vector back to H^n (first-column convention of embed)."""
    n = col.shape[0] // 2
    return QVector(col[:n].copy(), -np.conj(col[n:]))


def _project_out(v: QVector, basis) -> QVector:
    for z in basis:
        v = v - z * inner(z, v)
    return v


def _extract_structured_columns(cols: np.ndarray, values, count: int,
                                stop_below: float | None = None):
    """Pull quaternionic directions out of complex singular/eigen vector columns.

    Columns of an embedded matrix's factor come in pairs (u and its
    j-partner span one quaternionic line), and inside degenerate clusters
    LAPACK returns an arbitrary unitary mix of pairs.  Walking the columns in
    order and keeping those with a healthy residual after quaternionic
    Gram-Schmidt against everything accepted so far yields exactly one
    quaternionic vector per pair.

    Returns (list of values, list of unit QVectors), at most `count` entries;
    stops early once a value drops below `stop_below`.
    """
    picked_vals = []
    picked_vecs = []
    for l in range(cols.shape[1]):
        if len(picked_vals) == count:
            break
        if stop_below is not None and values[l] < stop_below:
            break
        v = _qvec_from_embedded_column(cols[:, l])
        v = _project_out(v, picked_vecs)
        v = _project_out(v, picked_vecs)  # second pass for orthogonality
        r = vnorm(v)
        if r > _ACCEPT_TOL:
            picked_vals.append(float(values[l]))
            picked_vecs.append(v * (1.0 / r))
    return picked_vals, picked_vecs


# ---------------------------------------------------------------------------
# decompositions
# ---------------------------------------------------------------------------


def svd(m: QMatrix, rtol: float | None = None) -> SVDResult:
    """Quaternionic SVD via the complex embedding.

    Singular values below rtol * sigma_max are treated as zero; the default
    cutoff is max(n, m) * machine epsilon, matching the usual dense
    numerical-rank convention.
    """
    n, mm = m.shape
    if n == 0 or mm == 0:
        return SVDResult(QMatrix.zeros(n, 0), np.zeros(0), QMatrix.zeros(mm, 0), 0)
    c = embed(m)
    _, sc, vch = np.linalg.svd(c)
    if rtol is None:
        rtol = max(n, mm) * np.finfo(float).eps
    smax = sc[0] if sc.size else 0.0
    cutoff = rtol * smax
    if smax == 0.0:
        return SVDResult(QMatrix.zeros(n, 0), np.zeros(0), QMatrix.zeros(mm, 0), 0)
    vc = np.conj(vch).T
    vals, vecs = _extract_structured_columns(vc, sc, min(n, mm), stop_below=cutoff)
    kept = [(s, v) for s, v in zip(vals, vecs) if s > cutoff]
    if not kept:
        return SVDResult(QMatrix.zeros(n, 0), np.zeros(0), QMatrix.zeros(mm, 0), 0)
    sigma = np.array([s for s, _ in kept])
    v_cols = [v for _, v in kept]
    u_cols = [matvec(m, v) * (1.0 / s) for s, v in kept]
    return SVDResult(
        QMatrix.from_columns(u_cols, n=n),
        sigma,
        QMatrix.from_columns(v_cols, n=mm),
        len(kept),
    )


def pinv(m: QMatrix, rtol: float | None = None) -> QMatrix:
    """Moore-Penrose pseudo-inverse.

    Satisfies the four defining identities: M M+ M = M, M+ M M+ = M+, and
    both M M+ and M+ M Hermitian.  The zero matrix maps to zero.
    """
    res = svd(m, rtol=rtol)
    if res.rank == 0:
        return QMatrix.zeros(m.ncols, m.nrows)
    inv_sigma = QMatrix.diag(1.0 / res.sigma)
    return matmul(matmul(res.v, inv_sigma), res.u.H)


def opnorm(m: QMatrix) -> float:
    """Operator (spectral) norm: the largest singular value."""
    if m.nrows == 0 or m.ncols == 0:
        return 0.0
    return float(np.linalg.norm(embed(m), 2))


def range_projector(m: QMatrix) -> QMatrix:
    """Orthogonal projector onto the range of M (equals M @ pinv(M))."""
    res = svd(m)
    if res.rank == 0:
        return QMatrix.zeros(m.nrows, m.nrows)
    return matmul(res.u, res.u.H)


def _check_hermitian(m: QMatrix, what: str):
    if m.nrows != m.ncols:
        raise ValueError(f"{what} expects a square matrix, got {m.shape}")
    dev = (m - m.H).frob()
    if dev > HERMITICITY_RTOL * (1.0 + m.frob()):
        raise ValueError(f"{what} expects a Hermitian matrix (deviation {dev:.3e})")


def herm_eig(m: QMatrix):
    """Eigendecomposition of a Hermitian quaternion matrix.

    Returns a list of (eigenvalue, unit QVector) pairs in descending
    eigenvalue order; eigenvalues are real and each quaternionic eigenvalue
    appears once (its doubled copy in the embedding is removed).
    """
    _check_hermitian(m, "herm_eig")
    n = m.nrows
    if n == 0:
        return []
    c = embed(m)
    c = 0.5 * (c + np.conj(c).T)
    w, z = np.linalg.eigh(c)
    order = np.argsort(w)[::-1]
    w = w[order]
    z = z[:, order]
    vals, vecs = _extract_structured_columns(z, w, n)
    if len(vals) != n:
        raise np.linalg.LinAlgError("failed to recover a full quaternionic eigenbasis")
    return list(zip(vals, vecs))


def sqrt_psd(m: QMatrix, tol: float = 1e-10) -> QMatrix:
    """Unique positive-semidefinite square root of a Hermitian PSD matrix.

    Eigenvalues in [-tol*(1+lambda_max), 0) are clamped to zero; anything
    more negative raises ValueError.
    """
    pairs = herm_eig(m)
    if not pairs:
        return QMatrix.zeros(0, 0)
    lams = np.array([lam for lam, _ in pairs])
    floor = -tol * (1.0 + max(lams.max(), 0.0))
    if lams.min() < floor:
        raise ValueError(f"matrix is not PSD (eigenvalue {lams.min():.3e})")
    roots = np.sqrt(np.clip(lams, 0.0, None))
    z = QMatrix.from_columns([v for _, v in pairs], n=m.nrows)
    return matmul(matmul(z, QMatrix.diag(roots)), z.H)


def solve_on_subspace(s: QMatrix, k: QMatrix, tol: float = 1e-8) -> QMatrix:
    """Restricted inverse of a Hermitian PSD operator over the range of K.

    Returns D = pinv(S) @ range_projector(S @ K), the operator that inverts S
    from S(R(K)) back onto R(K) and annihilates the orthogonal complement of
    S(R(K)); in particular D @ S @ x == x for every x in R(K).

    Raises ValueError when R(K) is not contained in R(S) within tol.
    """
    _check_hermitian(s, "solve_on_subspace")
    if s.nrows != k.nrows:
        raise ValueError(f"shape mismatch: S {s.shape} vs K {k.shape}")
    ps = range_projector(s)
    leak = opnorm(k - matmul(ps, k))
    if leak > tol * (1.0 + opnorm(k)):
        raise ValueError(f"range(K) is not inside range(S) (leak {leak:.3e})")
    return matmul(pinv(s), range_projector(matmul(s, k)))


# ---------------------------------------------------------------------------
# orthonormal-set helpers shared by the frame/dual layers
# ---------------------------------------------------------------------------


def orthonormal_range_basis(m: QMatrix, rtol: float | None = None) -> QMatrix:
    """Orthonormal columns spanning the range of M (left singular vectors)."""
    return svd(m, rtol=rtol).u


def complement_basis(u: QMatrix) -> QMatrix:
    """Orthonormal basis of the orthogonal complement of span(columns of u)."""
    n = u.nrows
    have = u.columns()
    out = []
    for i in range(n):
        if len(have) == n:
            break
        cand = _project_out(QVector.basis(n, i), have)
        cand = _project_out(cand, have)
        r = vnorm(cand)
        if r > 1e-3:
            cand = cand * (1.0 / r)
            have.append(cand)
            out.append(cand)
    if len(have) != n:
        raise np.linalg.LinAlgError("complement basis construction fell short")
    return QMatrix.from_columns(out, n=n)


def orthonormalize_columns(m: QMatrix, tol: float = 1e-10) -> QMatrix:
    """Quaternionic modified Gram-Schmidt over the columns, dropping dependents."""
    kept = []
    for k in range(m.ncols):
        v = _project_out(m.column(k), kept)
        v = _project_out(v, kept)
        r = vnorm(v)
        if r > tol:
            kept.append(v * (1.0 / r))
    return QMatrix.from_columns(kept, n=m.nrows)


def random_qmatrix(rng: np.random.Generator, n: int, m: int) -> QMatrix:
    """Quaternion matrix with the four components i.i.d. uniform on [-1, 1]."""
    comp = rng.uniform(-1.0, 1.0, size=(n, m, 4))
    return QMatrix.from_components(comp)


def random_qvector(rng: np.random.Generator, n: int) -> QVector:
    comp = rng.uniform(-1.0, 1.0, size=(n, 4))
    return QVector.from_components(comp)
