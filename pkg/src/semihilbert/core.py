"""Semi-inner products, A-bounded operators and the reduced operator.

A positive matrix A induces ``<x, y>_A = y* A x``. All operator questions are
answered in *range coordinates*: for ``U_r`` the eigenvectors of A spanning
R(A) and ``D_r`` their eigenvalues, the map ``x -> D_r^{1/2} U_r* x`` is the
coordinate vector of ``A^{1/2} x``, and an A-bounded ``T`` acts there as the
``r x r`` matrix ``b = D_r^{1/2} U_r* T U_r D_r^{-1/2}``. Its spectral norm is
``||T||_A`` and its top right-singular subspace lifts back to the A-norm
attainment set of ``T`` inside R(A).
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from . import spectral
from .errors import DimensionMismatch, NoAdjoint, NotABounded, NumericalFailure, ZeroSeminorm
from .spectral import PsdForm, canonical_phase, decompose_psd
from .tolerances import BOUNDED_TOL, CLUSTER_TOL, RANK_TOL


@dataclass(frozen=True, eq=False)
class SemiSpace:
    """A space ``C^n`` (or ``R^n``) carrying the semi-inner product of ``psd``."""

    psd: PsdForm
    half: np.ndarray = field(init=False, repr=False)
    pinv_half: np.ndarray = field(init=False, repr=False)
    projector: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "half", spectral.half_power(self.psd))
        object.__setattr__(self, "pinv_half", spectral.pinv_half(self.psd))
        object.__setattr__(self, "projector", spectral.range_projector(self.psd))

    @classmethod
    def from_matrix(cls, a, rank_tol=RANK_TOL):
        return cls(decompose_psd(a, rank_tol))

    @property
    def dim(self):
        return self.psd.dim

    @property
    def rank(self):
        return self.psd.rank

    @property
    def field(self):
        return self.psd.field

    @property
    def matrix(self):
        return self.psd.matrix

    @property
    def u_r(self):
        return self.psd.range_vectors

    @property
    def d_r(self):
        return self.psd.range_eigenvalues

    @cached_property
    def pinv(self):
        return spectral.pseudo_inverse(self.psd)

    @property
    def full_rank(self):
        return self.rank == self.dim

    def coords(self, x):
        """Range coordinates ``D_r^{1/2} U_r* x`` of ``A^{1/2} x`` (vectors or columns)."""
        x = np.asarray(x)
        scale = np.sqrt(self.d_r)
        proj = self.u_r.conj().T @ x
        return proj * (scale if x.ndim == 1 else scale[:, None])

    def lift(self, y):
        """Inverse of :meth:`coords` on R(A): ``U_r D_r^{-1/2} y``."""
        y = np.asarray(y)
        scale = 1.0 / np.sqrt(self.d_r)
        return self.u_r @ (y * (scale if y.ndim == 1 else scale[:, None]))

    def compress(self, t):
        """Matrix of the operator induced by ``t`` in range coordinates."""
        t = self.check_operator(t)
        u = self.u_r
        s = np.sqrt(self.d_r)
        return (s[:, None] * (u.conj().T @ t @ u)) / s[None, :]

    def check_vector(self, x, name="x"):
        x = np.asarray(x)
        if x.shape != (self.dim,):
            raise DimensionMismatch(f"{name} has shape {x.shape}, expected ({self.dim},)")
        return x

    def check_operator(self, t, name="T"):
        t = np.asarray(t)
        if t.shape != (self.dim, self.dim):
            raise DimensionMismatch(
                f"{name} has shape {t.shape}, expected ({self.dim}, {self.dim})"
            )
        return t


def a_inner(x, y, sp):
    """``<x, y>_A = y* A x``: linear in ``x``, conjugate-linear in ``y``."""
    x = sp.check_vector(x, "x")
    y = sp.check_vector(y, "y")
    return complex(np.vdot(sp.coords(y), sp.coords(x)))


def a_norm_vec(x, sp):
    return float(np.linalg.norm(sp.coords(sp.check_vector(x))))


def _spec_norm(m):
    return float(np.linalg.norm(m, 2)) if m.size else 0.0


def is_a_bounded(t, sp, tol=BOUNDED_TOL):
    """True iff ``t`` maps N(A) into N(A), i.e. ``||T x||_A <= c ||x||_A``."""
    t = sp.check_operator(t)
    if sp.full_rank:
        return True
    leak = sp.half @ t @ (np.eye(sp.dim) - sp.projector)
    return _spec_norm(leak) <= tol * (1.0 + _spec_norm(sp.half @ t))


def admits_a_adjoint(t, sp, tol=BOUNDED_TOL):
    """Douglas criterion ``R(T* A) subset R(A)``."""
    t = sp.check_operator(t)
    if sp.full_rank:
        return True
    ta = t.conj().T @ sp.matrix
    leak = (np.eye(sp.dim) - sp.projector) @ ta
    return _spec_norm(leak) <= tol * (1.0 + _spec_norm(ta))


def a_adjoint(t, sp, tol=BOUNDED_TOL):
    """The A-adjoint ``A^dagger T* A``.

    Raises NoAdjoint when ``R(T* A)`` is not contained in ``R(A)``.
    """
    if not admits_a_adjoint(t, sp, tol):
        raise NoAdjoint("T admits no A-adjoint: R(T* A) is not contained in R(A)")
    return sp.pinv @ np.asarray(t).conj().T @ sp.matrix


def require_a_bounded(t, sp, tol=BOUNDED_TOL, name="T"):
    if not is_a_bounded(t, sp, tol):
        raise NotABounded(f"{name} is not A-bounded: it does not map N(A) into N(A)")


@dataclass(frozen=True, eq=False)
class ReducedOperator:
    """Range-coordinate matrix ``b`` of an A-bounded operator, with its SVD.

    ``right_singular_vectors`` holds the right singular vectors as columns.
    ``top_multiplicity`` counts singular values within ``cluster_tol * sigma_1``
    of ``sigma_1``.
    """

    b: np.ndarray
    singular_values: np.ndarray
    left_singular_vectors: np.ndarray
    right_singular_vectors: np.ndarray
    top_multiplicity: int
    cluster_tol: float

    @property
    def sigma1(self):
        return float(self.singular_values[0])

    @property
    def top_vectors(self):
        return self.right_singular_vectors[:, : self.top_multiplicity]

    @property
    def spectral_gap(self):
        s = self.singular_values
        return float(s[0] - s[1]) if len(s) > 1 else float(s[0])


def reduce_matrix(b, cluster_tol=CLUSTER_TOL):
    """SVD bookkeeping for an ``r x r`` range-coordinate matrix."""
    u, s, vh = np.linalg.svd(b)
    v = vh.conj().T
    k = int(np.count_nonzero(s[0] - s <= cluster_tol * s[0])) if s[0] > 0 else len(s)
    return ReducedOperator(
        b=b,
        singular_values=s,
        left_singular_vectors=u,
        right_singular_vectors=v,
        top_multiplicity=k,
        cluster_tol=float(cluster_tol),
    )


def reduced_operator(t, sp, cluster_tol=CLUSTER_TOL, bounded_tol=BOUNDED_TOL):
    require_a_bounded(t, sp, bounded_tol)
    return reduce_matrix(sp.compress(t), cluster_tol)


def a_op_norm_generalized(t, sp):
    """``||T||_A`` as ``sqrt(lambda_max)`` of ``(T* A T) v = lambda A v`` on R(A).

    Works from the untransformed A and ``T`` rather than range coordinates, so
    it serves as an independent check of :func:`a_op_norm`.
    """
    t = sp.check_operator(t)
    u = sp.u_r
    a = sp.matrix
    lhs = u.conj().T @ t.conj().T @ a @ t @ u
    rhs = u.conj().T @ a @ u
    lhs = (lhs + lhs.conj().T) / 2
    rhs = (rhs + rhs.conj().T) / 2
    top = scipy.linalg.eigh(lhs, rhs, eigvals_only=True)[-1]
    return float(np.sqrt(max(top, 0.0)))


def a_op_norm(t, sp, cross_check=False, bounded_tol=BOUNDED_TOL, check_rtol=1e-8):
    """A-operator seminorm ``sup_{||x||_A = 1} ||T x||_A``.

    With ``cross_check`` the generalized-eigenvalue route is evaluated as well
    and a :class:`NumericalFailure` is raised if the two disagree.
    """
    require_a_bounded(t, sp, bounded_tol)
    b = sp.compress(t)
    sigma1 = _spec_norm(b)
    if cross_check:
        other = a_op_norm_generalized(t, sp)
        if abs(other - sigma1) > check_rtol * max(sigma1, other, 1e-300) + 1e-14:
            raise NumericalFailure(
                f"seminorm routes disagree: svd {sigma1!r} vs generalized eig {other!r}"
            )
    return sigma1


def zero_seminorm_threshold(t, sp):
    """Seminorms at or below this are treated as exactly zero."""
    cond = np.sqrt(sp.d_r[0] / sp.d_r[-1])
    return sp.psd.rank_tol * _spec_norm(np.asarray(t)) * cond


def require_nonzero(red, t, sp, name="T"):
    if red.sigma1 <= zero_seminorm_threshold(t, sp):
        raise ZeroSeminorm(f"||{name}||_A is zero to working precision")


@dataclass(frozen=True, eq=False)
class AttainmentBasis:
    """Orthonormal description of ``M_A(T) cap R(A)``.

    ``coordinate_vectors`` (``r x k``) span the top right-singular subspace of
    the reduced operator; ``ambient_vectors`` (``n x k``) are their lifts, each
    with unit A-norm. A-normalized combinations of the ambient columns exhaust
    the attainment set inside R(A).
    """

    ambient_vectors: np.ndarray
    coordinate_vectors: np.ndarray
    norm: float

    @property
    def dimension(self):
        return self.coordinate_vectors.shape[1]


def attainment_basis(t, sp, cluster_tol=CLUSTER_TOL, bounded_tol=BOUNDED_TOL):
    red = reduced_operator(t, sp, cluster_tol, bounded_tol)
    require_nonzero(red, t, sp)
    return attainment_from_reduced(red, sp)


def attainment_from_reduced(red, sp):
    y = np.column_stack([canonical_phase(c) for c in red.top_vectors.T])
    return AttainmentBasis(ambient_vectors=sp.lift(y), coordinate_vectors=y, norm=red.sigma1)
