"""A-smoothness, Gateaux derivatives of the A-seminorm, block-diagonal operators.

In finite dimensions ``T`` is A-smooth exactly when the top singular value of
its reduced operator is simple. The one-sided derivatives of
``t -> ||T + t S||_A`` at 0 are the extreme eigenvalues of the Hermitian part
of the compressed matrix ``m`` divided by ``||T||_A``.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .core import (
    SemiSpace,
    a_op_norm,
    attainment_from_reduced,
    reduced_operator,
    require_nonzero,
    zero_seminorm_threshold,
)
from .errors import DimensionMismatch, NumericalFailure, SmoothOperator, ZeroSeminorm
from .orthogonality import compressed_form, is_birkhoff_orthogonal
from .sampling import random_direction
from .spectral import as_square, field_of
from .tolerances import BOUNDED_TOL, CLUSTER_TOL, GATEAUX_TOL, ORTH_TOL

_EPS = np.finfo(float).eps
BORDERLINE_FACTOR = 10.0


@dataclass(frozen=True, eq=False)
class SmoothnessReport:
    """Smoothness verdict with its evidence.

    ``spectral_gap`` is ``sigma_1 - sigma_2`` (``sigma_1`` when the range is
    one-dimensional). ``borderline`` flags a singular value whose distance to
    ``sigma_1`` is above roundoff but within ten cluster tolerances, where the
    verdict hinges on the tolerance rather than the operator.
    """

    smooth: bool
    top_multiplicity: int
    spectral_gap: float
    x0: Optional[np.ndarray]
    a_norm: float
    borderline: bool
    singular_values: np.ndarray


def _report_from_reduced(red, sp):
    s = red.singular_values
    sigma1 = red.sigma1
    floor = 64 * len(s) * _EPS * sigma1
    dist = sigma1 - s[1:]
    borderline = bool(np.any((dist > floor) & (dist <= BORDERLINE_FACTOR * red.cluster_tol * sigma1)))
    k = red.top_multiplicity
    x0 = attainment_from_reduced(red, sp).ambient_vectors[:, 0] if k == 1 else None
    return SmoothnessReport(
        smooth=k == 1,
        top_multiplicity=k,
        spectral_gap=red.spectral_gap,
        x0=x0,
        a_norm=sigma1,
        borderline=borderline,
        singular_values=s,
    )


def is_a_smooth(t, sp, cluster_tol=CLUSTER_TOL, bounded_tol=BOUNDED_TOL):
    red = reduced_operator(t, sp, cluster_tol, bounded_tol)
    require_nonzero(red, t, sp)
    return _report_from_reduced(red, sp)


@dataclass(frozen=True)
class GateauxPair:
    rho_minus: float
    rho_plus: float
    differentiable: bool


def _pair(lo, hi, s_norm, tol):
    gap = hi - lo
    ok = True if s_norm == 0 else gap / s_norm <= tol
    return GateauxPair(float(lo), float(hi), bool(ok))


def gateaux_derivatives(t, s, sp, tol=GATEAUX_TOL, cluster_tol=CLUSTER_TOL):
    """One-sided derivatives from the spectrum of ``Herm(m)``."""
    w = compressed_form(t, s, sp, cluster_tol)
    lo, hi = w.real_interval()
    return _pair(lo / w.sigma1, hi / w.sigma1, w.s_norm, tol)


def gateaux_fd(t, s, sp, h=1e-6, tol=GATEAUX_TOL):
    """One-sided difference quotients of ``||T + tau S||_A``, Richardson-extrapolated.

    Independent of :func:`gateaux_derivatives`: only the seminorm itself is
    evaluated.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    t = np.asarray(t)
    s = np.asarray(s)
    base = a_op_norm(t, sp)
    sc = sp.compress(s)
    require_nonzero(reduced_operator(t, sp), t, sp)

    def quotient(step):
        return (a_op_norm(t + step * s, sp) - base) / step

    plus = 2 * quotient(h / 2) - quotient(h)
    minus = 2 * quotient(-h / 2) - quotient(-h)
    return _pair(minus, plus, float(np.linalg.norm(sc, 2)), tol)


def is_gateaux_differentiable(
    t, sp, n_directions=50, rng_seed=0, tol=GATEAUX_TOL, cluster_tol=CLUSTER_TOL
):
    """Monte-Carlo check that ``rho_+ == rho_-`` along random A-bounded directions."""
    t = np.asarray(t)
    require_nonzero(reduced_operator(t, sp, cluster_tol), t, sp)
    rng = np.random.default_rng(rng_seed)
    field = field_of(sp.matrix, t)
    for _ in range(n_directions):
        s = random_direction(rng, sp, field)
        if not gateaux_derivatives(t, s, sp, tol, cluster_tol).differentiable:
            return False
    return True


def non_smooth_splitting(t, sp, cluster_tol=CLUSTER_TOL, tol_orth=ORTH_TOL):
    """Split a non-smooth ``T`` as ``S1 + S2`` with ``T`` orthogonal to each part.

    With ``z1, z2`` A-orthonormal norming vectors, ``S1 z = <z, z1>_A T z1``
    and ``S2 = T - S1``. Then ``S1 z2 = 0`` and ``S2 z1 = 0``, so both are
    orthogonal to ``T`` while their sum is ``T`` itself.
    """
    t = np.asarray(t)
    red = reduced_operator(t, sp, cluster_tol)
    require_nonzero(red, t, sp)
    if red.top_multiplicity < 2:
        raise SmoothOperator("T is A-smooth; no right-additivity counterexample exists")
    z1 = attainment_from_reduced(red, sp).ambient_vectors[:, 0]
    s1 = np.outer(t @ z1, (sp.matrix @ z1).conj())
    if field_of(sp.matrix, t) == "real":
        s1 = s1.real
    s2 = t - s1

    checks = (
        is_birkhoff_orthogonal(t, s1, sp, tol_orth, cluster_tol).orthogonal,
        is_birkhoff_orthogonal(t, s2, sp, tol_orth, cluster_tol).orthogonal,
        not is_birkhoff_orthogonal(t, s1 + s2, sp, tol_orth, cluster_tol).orthogonal,
    )
    if not all(checks):
        raise NumericalFailure(f"splitting certificates failed: {checks}")
    return s1, s2


def block_compose(m, n, sp_small):
    """``diag(M, N)`` on the doubled space with semi-inner product ``diag(A, A)``."""
    m = as_square(m, "M")
    n = as_square(n, "N")
    d = sp_small.dim
    if m.shape != (d, d) or n.shape != (d, d):
        raise DimensionMismatch(f"M and N must be {d}x{d} to match A")
    t = scipy.linalg.block_diag(m, n)
    a = scipy.linalg.block_diag(sp_small.matrix, sp_small.matrix)
    return t, SemiSpace.from_matrix(a, sp_small.psd.rank_tol)


@dataclass(frozen=True)
class BlockReport:
    norm_m: float
    norm_n: float
    branch: str
    predicted: bool
    computed: bool

    @property
    def consistent(self):
        return self.predicted == self.computed


def block_branch(norm_m, norm_n, cluster_tol=CLUSTER_TOL):
    top = max(norm_m, norm_n)
    if abs(norm_m - norm_n) <= cluster_tol * top:
        return "equal"
    return "M-dominant" if norm_m > norm_n else "N-dominant"


def block_smoothness_check(m, n, sp_small, cluster_tol=CLUSTER_TOL):
    """Compare the block-diagonal smoothness rule with a direct computation.

    The dominant block decides smoothness; equal seminorms force
    non-smoothness.
    """
    m = np.asarray(m)
    n = np.asarray(n)
    norm_m = a_op_norm(m, sp_small)
    norm_n = a_op_norm(n, sp_small)
    t, sp_block = block_compose(m, n, sp_small)
    zero_m = norm_m <= zero_seminorm_threshold(m, sp_small)
    zero_n = norm_n <= zero_seminorm_threshold(n, sp_small)
    if zero_m and zero_n:
        raise ZeroSeminorm("both diagonal blocks have zero A-seminorm")
    branch = block_branch(norm_m, norm_n, cluster_tol)
    if branch == "equal":
        predicted = False
    elif branch == "M-dominant":
        predicted = is_a_smooth(m, sp_small, cluster_tol).smooth
    else:
        predicted = is_a_smooth(n, sp_small, cluster_tol).smooth
    computed = is_a_smooth(t, sp_block, cluster_tol).smooth
    return BlockReport(norm_m, norm_n, branch, predicted, computed)


def block_norming_components(m, n, sp_small, cluster_tol=CLUSTER_TOL):
    """A-norms of the upper and lower blocks of each composite norming vector.

    Returns ``(upper, lower, vectors)`` where ``vectors`` are the composite
    attainment vectors as columns of a ``2n x k`` array.
    """
    t, sp_block = block_compose(m, n, sp_small)
    red = reduced_operator(t, sp_block, cluster_tol)
    require_nonzero(red, t, sp_block)
    vecs = attainment_from_reduced(red, sp_block).ambient_vectors
    d = sp_small.dim
    upper = np.linalg.norm(sp_small.coords(vecs[:d]), axis=0)
    lower = np.linalg.norm(sp_small.coords(vecs[d:]), axis=0)
    return upper, lower, vecs
