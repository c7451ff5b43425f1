"""Dense complex Hermitian linear algebra with an explicit tolerance policy.

Everything downstream (forms, decompositions, kernels) is built on two value
types defined here: :class:`HermitianPsd`, a positive semidefinite matrix with
its eigendecomposition cached and small eigenvalues clamped to exact zeros,
and :class:`Subspace`, an orthonormal column basis.  All values are immutable
after construction and all operations are pure functions, so they can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EigenSolverError,
    NotHermitianError,
    NotPsdError,
    ValidationError,
)


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used throughout the package.

    sym    -- allowed relative deviation from Hermitian symmetry / orthonormality
    psd    -- relative floor for "eigenvalue >= 0" decisions
    recon  -- allowed error in reconstruction identities (A = V L V^H etc.)
    rank   -- relative eigenvalue threshold for rank decisions; ties at the
              threshold count as zero (the smaller rank wins)

    Defaults target double precision at dimensions up to a few dozen.
    """

    sym: float = 1e-10
    psd: float = 1e-10
    recon: float = 1e-8
    rank: float = 1e-10

    def replace(self, **kwargs) -> "Tolerances":
        data = {"sym": self.sym, "psd": self.psd, "recon": self.recon, "rank": self.rank}
        data.update(kwargs)
        return Tolerances(**data)


DEFAULT_TOLERANCES = Tolerances()


def _herm(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def max_abs(m: np.ndarray) -> float:
    """Largest entry magnitude; 0 for empty arrays."""
    return float(np.max(np.abs(m))) if m.size else 0.0


def matrices_close(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """Entrywise closeness with a mixed absolute/relative scale."""
    scale = 1.0 + max(max_abs(a), max_abs(b))
    return max_abs(a - b) <= tol * scale


def as_complex_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Validate and convert to a finite complex128 matrix.

    Raises ValidationError on wrong rank, wrong shape, or non-finite entries.
    """
    m = np.asarray(data, dtype=np.complex128)
    if m.ndim != 2:
        raise ValidationError(f"expected a matrix, got array of rank {m.ndim}")
    if rows is not None and m.shape[0] != rows:
        raise ValidationError(f"expected {rows} rows, got {m.shape[0]}")
    if cols is not None and m.shape[1] != cols:
        raise ValidationError(f"expected {cols} columns, got {m.shape[1]}")
    if m.size and not np.all(np.isfinite(m.view(np.float64))):
        raise ValidationError("matrix contains non-finite entries")
    return m


def _readonly(m: np.ndarray) -> np.ndarray:
    m = np.ascontiguousarray(m)
    m.flags.writeable = False
    return m


class HermitianPsd:
    """A Hermitian positive semidefinite matrix with cached spectral data.

    Construction symmetrizes the input, verifies Hermitian symmetry within
    ``tol.sym``, eigendecomposes, rejects matrices with an eigenvalue below
    ``-tol.psd * (1 + lambda_max)`` and clamps eigenvalues at or below the
    positive threshold to exact zeros.  PSD-ness is therefore an enforced
    invariant of the type, not a per-call check.

    Attributes
    ----------
    matrix : ndarray, read-only
        The (possibly re-assembled after clamping) matrix.
    eigenvalues : ndarray, read-only
        Real eigenvalues in nonincreasing order; clamped entries are exact 0.
    eigenvectors : ndarray, read-only
        Unitary matrix whose columns match ``eigenvalues``.
    """

    __slots__ = ("dim", "matrix", "eigenvalues", "eigenvectors", "tol")

    def __init__(self, matrix, tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        m = as_complex_matrix(matrix)
        if m.shape[0] != m.shape[1]:
            raise ValidationError(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
        n = m.shape[0]
        scale = max_abs(m)
        if max_abs(m - m.conj().T) > tol.sym * (1.0 + scale):
            raise NotHermitianError(
                f"matrix deviates from its conjugate transpose by "
                f"{max_abs(m - m.conj().T):.3e} (tol {tol.sym:.1e} relative)"
            )
        h = _herm(m)
        try:
            lam, vec = np.linalg.eigh(h) if n else (np.zeros(0), np.zeros((0, 0), dtype=np.complex128))
        except np.linalg.LinAlgError as exc:  # pragma: no cover - not reachable for finite input
            raise EigenSolverError(f"Hermitian eigensolver did not converge: {exc}") from exc
        lam_max = float(lam[-1]) if n else 0.0
        lam_max = max(lam_max, 0.0)
        thr = tol.psd * (1.0 + lam_max)
        if n and float(lam[0]) < -thr:
            raise NotPsdError(
                f"matrix has eigenvalue {float(lam[0]):.6e} below the floor {-thr:.3e}"
            )
        clamped = np.where(lam > thr, lam, 0.0)
        if n and np.any(clamped != lam):
            h = _herm((vec * clamped) @ vec.conj().T)
        # store in nonincreasing order
        self.dim = n
        self.matrix = _readonly(h)
        self.eigenvalues = _readonly(clamped[::-1].astype(np.float64))
        self.eigenvectors = _readonly(vec[:, ::-1])
        self.tol = tol

    @classmethod
    def _from_spectral(cls, eigenvalues: np.ndarray, eigenvectors: np.ndarray,
                       tol: Tolerances, matrix: np.ndarray | None = None) -> "HermitianPsd":
        """Trusted constructor from an already-known decomposition.

        ``eigenvalues`` must be nonnegative and nonincreasing, ``eigenvectors``
        unitary.  Used internally where the decomposition is exact by
        construction (pinv, sqrt, scaling), to avoid a redundant eigh.
        """
        obj = cls.__new__(cls)
        obj.dim = eigenvectors.shape[0]
        if matrix is None:
            matrix = _herm((eigenvectors * eigenvalues) @ eigenvectors.conj().T)
        obj.matrix = _readonly(matrix)
        obj.eigenvalues = _readonly(np.asarray(eigenvalues, dtype=np.float64))
        obj.eigenvectors = _readonly(eigenvectors)
        obj.tol = tol
        return obj

    @classmethod
    def zero(cls, dim: int, tol: Tolerances | None = None) -> "HermitianPsd":
        return cls(np.zeros((dim, dim), dtype=np.complex128), tol)

    @classmethod
    def identity(cls, dim: int, tol: Tolerances | None = None) -> "HermitianPsd":
        return cls(np.eye(dim, dtype=np.complex128), tol)

    @property
    def lam_max(self) -> float:
        return float(self.eigenvalues[0]) if self.dim else 0.0

    def _rank_threshold(self, rank_tol: float | None = None) -> float:
        rt = self.tol.rank if rank_tol is None else rank_tol
        return rt * (1.0 + self.lam_max)

    def rank(self, rank_tol: float | None = None) -> int:
        """Number of eigenvalues strictly above the relative threshold."""
        return int(np.sum(self.eigenvalues > self._rank_threshold(rank_tol)))

    def scaled(self, alpha: float) -> "HermitianPsd":
        """alpha * self for alpha >= 0; exact on the cached spectral data."""
        if alpha < 0:
            raise ValidationError("scaling factor must be nonnegative")
        return HermitianPsd._from_spectral(
            alpha * self.eigenvalues, self.eigenvectors, self.tol, alpha * self.matrix
        )

    def __repr__(self):
        return f"HermitianPsd(dim={self.dim}, rank={self.rank()})"


class Subspace:
    """A linear subspace of C^n given by an orthonormal column basis.

    The zero subspace is represented by a basis with no columns.
    """

    __slots__ = ("ambient_dim", "basis", "tol")

    def __init__(self, ambient_dim: int, basis, tol: Tolerances | None = None):
        tol = tol or DEFAULT_TOLERANCES
        b = as_complex_matrix(basis, rows=ambient_dim)
        if b.shape[1] > ambient_dim:
            raise ValidationError(
                f"{b.shape[1]} basis columns exceed ambient dimension {ambient_dim}"
            )
        gram = b.conj().T @ b
        if max_abs(gram - np.eye(b.shape[1])) > tol.sym * 2.0:
            raise ValidationError("basis columns are not orthonormal")
        self.ambient_dim = ambient_dim
        self.basis = _readonly(b)
        self.tol = tol

    @classmethod
    def zero(cls, ambient_dim: int, tol: Tolerances | None = None) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128), tol)

    @classmethod
    def full(cls, ambient_dim: int, tol: Tolerances | None = None) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128), tol)

    @classmethod
    def from_span(cls, ambient_dim: int, vectors, tol: Tolerances | None = None) -> "Subspace":
        """Orthonormalize a (possibly dependent, possibly empty) spanning set."""
        tol = tol or DEFAULT_TOLERANCES
        v = as_complex_matrix(vectors, rows=ambient_dim)
        if v.shape[1] == 0 or max_abs(v) == 0.0:
            return cls.zero(ambient_dim, tol)
        u, s, _ = np.linalg.svd(v, full_matrices=False)
        keep = s > tol.rank * (1.0 + float(s[0]))
        return cls(ambient_dim, u[:, keep], tol)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projection(self) -> np.ndarray:
        """Orthogonal projection matrix onto the subspace."""
        return self.basis @ self.basis.conj().T

    def complement(self) -> "Subspace":
        """Orthonormal basis of the orthogonal complement."""
        n, k = self.ambient_dim, self.dim
        if k == 0:
            return Subspace.full(n, self.tol)
        if k == n:
            return Subspace.zero(n, self.tol)
        q, _ = np.linalg.qr(self.basis, mode="complete")
        return Subspace(n, q[:, k:], self.tol)

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"


def _require_same_dim(a: HermitianPsd, b: HermitianPsd):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimension mismatch: {a.dim} vs {b.dim}")


def eig_hermitian(m: HermitianPsd) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (nonincreasing) and a unitary of eigenvectors."""
    return m.eigenvalues, m.eigenvectors


def pinv(m: HermitianPsd, rank_tol: float | None = None) -> HermitianPsd:
    """Moore-Penrose pseudo-inverse, inverting eigenvalues above the rank
    threshold and zeroing the rest."""
    lam = m.eigenvalues
    thr = m._rank_threshold(rank_tol)
    inv = np.where(lam > thr, 1.0 / np.where(lam > thr, lam, 1.0), 0.0)
    # nonincreasing order: reciprocals of the support, zeros last
    order = np.argsort(-inv, kind="stable")
    return HermitianPsd._from_spectral(inv[order], m.eigenvectors[:, order], m.tol)


def sqrt_psd(m: HermitianPsd) -> HermitianPsd:
    """Positive semidefinite square root."""
    return HermitianPsd._from_spectral(np.sqrt(m.eigenvalues), m.eigenvectors, m.tol)


def kernel_subspace(m: HermitianPsd, rank_tol: float | None = None) -> Subspace:
    """Orthonormal basis of the null space (eigenvalues at or below the
    rank threshold)."""
    small = m.eigenvalues <= m._rank_threshold(rank_tol)
    return Subspace(m.dim, m.eigenvectors[:, small], m.tol)


def range_subspace(m: HermitianPsd, rank_tol: float | None = None) -> Subspace:
    """Orthonormal basis of the range (eigenvalues above the rank threshold)."""
    big = m.eigenvalues > m._rank_threshold(rank_tol)
    return Subspace(m.dim, m.eigenvectors[:, big], m.tol)


def range_intersection_rank(a: HermitianPsd, b: HermitianPsd,
                            rank_tol: float | None = None) -> int:
    """dim(ran a  intersect  ran b) for PSD summands, via
    rank(a) + rank(b) - rank(a + b).

    The rank of the sum is computed on a norm-balanced combination
    a/|a| + b/|b|, which has the same kernel as a + b for any positive
    weights; this keeps the rank decision meaningful when the two
    operands have very different scales.
    """
    _require_same_dim(a, b)
    ra, rb = a.rank(rank_tol), b.rank(rank_tol)
    if ra == 0 or rb == 0:
        return 0
    bal = a.matrix / a.lam_max + b.matrix / b.lam_max
    rs = HermitianPsd(_herm(bal), a.tol).rank(rank_tol)
    return ra + rb - rs


def is_psd_within(m: np.ndarray, tol: Tolerances, extra_scale: float = 0.0) -> bool:
    """Whether a Hermitian matrix is PSD up to the relative psd tolerance.

    ``extra_scale`` lets callers fold in the magnitude of the operands the
    matrix was computed from (differences of large matrices carry their
    rounding noise).
    """
    h = _herm(m)
    if h.size == 0:
        return True
    lam = np.linalg.eigvalsh(h)
    scale = 1.0 + max(float(lam[-1]), 0.0, extra_scale)
    return float(lam[0]) >= -tol.psd * scale
