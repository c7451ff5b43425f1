"""Nonnegative sesquilinear forms on C^n and their order-theoretic predicates.

Convention, used everywhere in this package: a form t with matrix T acts as

    t(x, y) = y^H T x

so t is linear in its *first* argument and antilinear in the second, and the
quadratic form is t[x] = x^H T x >= 0.  The form is recovered from its
quadratic values by polarization:

    t(x, y) = 1/4 * sum_{k=0..3} i^k t[x + i^k y].

Predicates implemented here:

* ``leq``            -- pointwise order t[x] <= w[x] for all x
* ``domination_constant`` -- least c with t <= c*w, if any
* ``absolutely_continuous`` -- w[x] = 0 implies t[x] = 0
* ``strongly_absolutely_continuous`` -- the sequential strengthening, which
  on a finite-dimensional space coincides with plain absolute continuity
* ``singular``       -- the only common lower bound of t and w is zero
* ``is_minimal``     -- the nonzero forms below t are exactly its multiples
* ``quotient_space`` -- the inner-product space X / ker t
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, ValidationError
from .linalg import (
    HermitianPsd,
    Subspace,
    Tolerances,
    kernel_subspace,
    max_abs,
    pinv,
    range_subspace,
    range_intersection_rank,
    sqrt_psd,
    _herm,
)


class Form:
    """A nonnegative sesquilinear form, backed by a Hermitian PSD matrix."""

    __slots__ = ("dim", "psd")

    def __init__(self, matrix, tol: Tolerances | None = None):
        if isinstance(matrix, HermitianPsd):
            self.psd = matrix
        else:
            self.psd = HermitianPsd(matrix, tol)
        self.dim = self.psd.dim
        if self.dim == 0:
            raise ValidationError("a form needs an ambient dimension of at least 1")

    @classmethod
    def zero(cls, dim: int, tol: Tolerances | None = None) -> "Form":
        return cls(HermitianPsd.zero(dim, tol))

    @classmethod
    def identity(cls, dim: int, tol: Tolerances | None = None) -> "Form":
        return cls(HermitianPsd.identity(dim, tol))

    @property
    def matrix(self) -> np.ndarray:
        return self.psd.matrix

    @property
    def tol(self) -> Tolerances:
        return self.psd.tol

    def sesq(self, x, y) -> complex:
        """t(x, y) = y^H T x."""
        x = np.asarray(x, dtype=np.complex128)
        y = np.asarray(y, dtype=np.complex128)
        return complex(np.vdot(y, self.matrix @ x))

    def quad(self, x) -> float:
        """t[x] = t(x, x), always real and nonnegative up to roundoff."""
        x = np.asarray(x, dtype=np.complex128)
        return float(np.real(np.vdot(x, self.matrix @ x)))

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        if other.dim != self.dim:
            raise DimensionMismatchError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return Form(self.matrix + other.matrix, self.tol)

    def scaled(self, alpha: float) -> "Form":
        return Form(self.psd.scaled(alpha))

    def rank(self) -> int:
        return self.psd.rank()

    def is_zero(self) -> bool:
        return self.psd.rank() == 0

    def __repr__(self):
        return f"Form(dim={self.dim}, rank={self.rank()})"


def forms_close(a: Form, b: Form, tol: float | None = None) -> bool:
    """Entrywise agreement of two forms, relative to their magnitude."""
    if a.dim != b.dim:
        return False
    t = a.tol.recon if tol is None else tol
    scale = 1.0 + max(max_abs(a.matrix), max_abs(b.matrix))
    return max_abs(a.matrix - b.matrix) <= t * scale


def _check_pair(t: Form, w: Form):
    if t.dim != w.dim:
        raise DimensionMismatchError(f"dimension mismatch: {t.dim} vs {w.dim}")


def leq(t: Form, w: Form, tol: Tolerances | None = None) -> bool:
    """t <= w, i.e. w - t is positive semidefinite within tolerance."""
    _check_pair(t, w)
    tol = tol or t.tol
    diff = _herm(w.matrix - t.matrix)
    lam = np.linalg.eigvalsh(diff)
    scale = 1.0 + max(float(lam[-1]), 0.0, max_abs(t.matrix), max_abs(w.matrix))
    return float(lam[0]) >= -tol.psd * scale


def absolutely_continuous(t: Form, w: Form, tol: Tolerances | None = None) -> bool:
    """Whether w[x] = 0 forces t[x] = 0, i.e. ker W is contained in ker T."""
    _check_pair(t, w)
    tol = tol or t.tol
    basis = kernel_subspace(w.psd).basis
    if basis.shape[1] == 0:
        return True
    vals = np.real(np.einsum("ij,ik,kj->j", basis.conj(), t.matrix, basis))
    return bool(np.all(vals <= tol.recon * (1.0 + t.psd.lam_max)))


def strongly_absolutely_continuous(t: Form, w: Form, tol: Tolerances | None = None) -> bool:
    """Sequential absolute continuity (closability of the canonical embedding).

    On a finite-dimensional space every densely defined operator between the
    induced inner-product spaces is closable, so this coincides with
    :func:`absolutely_continuous`.  It is kept as a named operation because
    the two notions split the theory differently: this one is the form that
    is provably equivalent to almost domination.
    """
    return absolutely_continuous(t, w, tol)


def domination_constant(t: Form, w: Form, tol: Tolerances | None = None) -> float | None:
    """Least c >= 0 with t <= c * w, or None when no constant works.

    A constant exists exactly when ker W is contained in ker T; the optimal
    one is the largest eigenvalue of W^{+1/2} T W^{+1/2}.
    """
    _check_pair(t, w)
    if not absolutely_continuous(t, w, tol):
        return None
    ws = pinv(sqrt_psd(w.psd))
    m = _herm(ws.matrix @ t.matrix @ ws.matrix)
    lam = np.linalg.eigvalsh(m)
    return max(float(lam[-1]), 0.0) if lam.size else 0.0


def singular(t: Form, w: Form, tol: Tolerances | None = None) -> bool:
    """Whether the zero form is the only common lower bound of t and w.

    For matrices this is the statement that ran T and ran W intersect
    trivially.
    """
    _check_pair(t, w)
    return range_intersection_rank(t.psd, w.psd) == 0


def is_minimal(t: Form) -> bool:
    """Whether t is nonzero and every form below it is one of its multiples.

    Rank one is an exact characterization: if T = lam * v v^H then any
    W <= T has range inside span{v}, hence W is a multiple of T; if T has
    rank >= 2, compressing T to a single eigenvector gives a lower bound
    that is not a multiple.  The zero form is not minimal by definition.
    """
    return t.rank() == 1


@dataclass(frozen=True)
class QuotientSpace:
    """The inner-product space X / ker t, realized on (ker T)^perp.

    ``coset_basis`` is an orthonormal basis B of the orthogonal complement of
    ker T (the coordinates of a coset x + ker t are B^H x) and ``gram`` is the
    positive definite matrix of the induced inner product in those
    coordinates, i.e. B^H T B.
    """

    source_dim: int
    form: Form
    coset_basis: Subspace
    gram: HermitianPsd

    @property
    def dim(self) -> int:
        return self.coset_basis.dim

    def coords(self, x) -> np.ndarray:
        """Coordinates of the coset of x."""
        return self.coset_basis.basis.conj().T @ np.asarray(x, dtype=np.complex128)

    def inner(self, a_coords, b_coords) -> complex:
        """(a | b) in the quotient, linear in the first slot."""
        a = np.asarray(a_coords, dtype=np.complex128)
        b = np.asarray(b_coords, dtype=np.complex128)
        return complex(np.vdot(b, self.gram.matrix @ a))

    def norm(self, coords) -> float:
        return float(np.sqrt(max(np.real(self.inner(coords, coords)), 0.0)))


def quotient_space(t: Form) -> QuotientSpace:
    """Build X / ker t with its inner product.  The zero form gives the
    (valid) zero-dimensional quotient."""
    basis = range_subspace(t.psd)
    b = basis.basis
    gram = HermitianPsd(_herm(b.conj().T @ t.matrix @ b), t.tol)
    return QuotientSpace(source_dim=t.dim, form=t, coset_basis=basis, gram=gram)
