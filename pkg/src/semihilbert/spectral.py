"""Spectral calculus for positive semidefinite matrices.

Everything downstream branches on whether a vector lies in R(A) or N(A), so
the decomposition here makes the numerical rank crisp: eigenvalues inside the
clamp band are replaced by exact zeros and the eigenvector basis is put in a
canonical phase.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotPositive, ZeroOperator
from .tolerances import RANK_TOL

_EPS = np.finfo(float).eps


def field_of(*arrays):
    """Return ``"complex"`` if any argument has a complex dtype, else ``"real"``."""
    return "complex" if any(np.iscomplexobj(a) for a in arrays) else "real"


def as_square(a, name="matrix"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if not np.issubdtype(a.dtype, np.number):
        raise DimensionMismatch(f"{name} must be numeric")
    if np.iscomplexobj(a):
        return a.astype(complex)
    return a.astype(float)


def canonical_phase(v, tol=1e-10):
    """Rotate ``v`` so its first coordinate above ``tol * max|v|`` is positive real."""
    v = np.asarray(v)
    mags = np.abs(v)
    top = mags.max() if v.size else 0.0
    if top == 0.0:
        return v.copy()
    idx = int(np.argmax(mags > tol * top))
    lead = v[idx]
    return v * (np.conj(lead) / abs(lead))


def canonicalize_columns(u, tol=1e-10):
    return np.column_stack([canonical_phase(u[:, j], tol) for j in range(u.shape[1])])


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PsdForm:
    """Spectral decomposition ``A = U diag(eigenvalues) U*`` with numerical rank.

    ``eigenvalues`` are descending and exactly zero past ``rank``.
    ``rank_tol`` is the relative threshold, ``threshold`` the absolute one.
    """

    matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank: int
    rank_tol: float
    threshold: float
    hermit_tol: float
    field: str

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def range_vectors(self):
        """The first ``rank`` eigenvector columns ``U_r``."""
        return self.eigenvectors[:, : self.rank]

    @property
    def range_eigenvalues(self):
        return self.eigenvalues[: self.rank]

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T


def decompose_psd(a, rank_tol_rel=RANK_TOL):
    """Decompose a positive semidefinite matrix.

    The input is symmetrized when its asymmetry is within
    ``hermit_tol = n * eps * max|a_ij| * 100`` and rejected otherwise.
    Eigenvalues in ``[-hermit_tol, rank_tol_rel * lambda_1]`` are clamped to 0.

    Raises
    ------
    NotHermitian, NotPositive, ZeroOperator
    """
    a = as_square(a, "A")
    n = a.shape[0]
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    hermit_tol = n * _EPS * scale * 100
    asym = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if asym > hermit_tol:
        raise NotHermitian(f"A is not Hermitian: max|A - A*| = {asym:.3e} > {hermit_tol:.3e}")
    a = (a + a.conj().T) / 2

    w, u = np.linalg.eigh(a)
    order = np.argsort(-w, kind="stable")
    w = w[order]
    u = u[:, order]
    if n == 0 or w[-1] < -hermit_tol:
        lowest = w[-1] if n else float("nan")
        raise NotPositive(f"A is not positive: eigenvalue {lowest:.3e} < -{hermit_tol:.3e}")
    lam1 = float(w[0])
    if lam1 <= 0.0:
        raise ZeroOperator("A must be a nonzero positive operator")

    threshold = rank_tol_rel * lam1
    rank = int(np.count_nonzero(w > threshold))
    w = w.copy()
    w[rank:] = 0.0
    u = canonicalize_columns(u)
    return PsdForm(
        matrix=_frozen(a),
        eigenvalues=_frozen(w),
        eigenvectors=_frozen(u),
        rank=rank,
        rank_tol=float(rank_tol_rel),
        threshold=float(threshold),
        hermit_tol=float(hermit_tol),
        field=field_of(a),
    )


def _spectral_function(f, values):
    u = f.range_vectors
    return (u * values) @ u.conj().T


def half_power(f):
    """``A^{1/2} = U diag(sqrt(lambda)) U*``."""
    return _spectral_function(f, np.sqrt(f.range_eigenvalues))


def pinv_half(f):
    """``A^{dagger 1/2}``: inverse square root on R(A), zero on N(A)."""
    return _spectral_function(f, 1.0 / np.sqrt(f.range_eigenvalues))


def pseudo_inverse(f):
    """Moore-Penrose inverse ``A^dagger`` at the numerical rank of ``f``."""
    return _spectral_function(f, 1.0 / f.range_eigenvalues)


def range_projector(f):
    """Orthogonal projector ``U_r U_r*`` onto R(A)."""
    u = f.range_vectors
    return u @ u.conj().T
