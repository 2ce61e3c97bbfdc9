"""A-Birkhoff-James orthogonality.

For A-bounded ``T`` and ``S`` the limit set ``W_A(T, S)`` of values
``<T x_n, S x_n>_A`` along A-norming sequences of ``T`` is, in finite
dimensions, the numerical range of ``m = V* C* B V``: ``B`` and ``C`` are the
range-coordinate matrices of ``T`` and ``S`` and ``V`` spans the top
right-singular subspace of ``B``. ``T`` is orthogonal to ``S`` exactly when
``0`` lies in that numerical range (over the reals: in the interval spanned by
the symmetric part of ``m``).
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from .core import (
    a_inner,
    attainment_basis,
    attainment_from_reduced,
    reduced_operator,
    require_a_bounded,
    require_nonzero,
    zero_seminorm_threshold,
)
from .errors import NotSmoothPrecondition
from .sampling import random_direction
from .spectral import canonical_phase, field_of
from .tolerances import BOUNDED_TOL, CLUSTER_TOL, N_ANGLES, ORTH_TOL, REFINE_XTOL, SINGLETON_TOL

TWO_PI = 2 * np.pi
_GOLDEN = (np.sqrt(5) - 1) / 2


def herm(x):
    return (x + x.conj().T) / 2


@dataclass(frozen=True, eq=False)
class WSetForm:
    """Compressed matrix whose numerical range is ``W_A(T, S)``.

    ``basis`` holds the A-orthonormal lifted attainment vectors (``n x k``);
    ``s_norm`` is ``||S||_A`` and sets the scale of orthogonality tolerances.
    """

    m: np.ndarray
    sigma1: float
    s_norm: float
    field: str
    basis: np.ndarray

    @property
    def k(self):
        return self.m.shape[0]

    @property
    def scale(self):
        return self.sigma1 * self.s_norm

    def real_interval(self):
        """``[lambda_min, lambda_max]`` of the Hermitian part: ``Re W(m)``."""
        w = np.linalg.eigvalsh(herm(self.m))
        return float(w[0]), float(w[-1])


def compressed_form(t, s, sp, cluster_tol=CLUSTER_TOL, bounded_tol=BOUNDED_TOL):
    require_a_bounded(s, sp, bounded_tol, name="S")
    red = reduced_operator(t, sp, cluster_tol, bounded_tol)
    require_nonzero(red, t, sp)
    att = attainment_from_reduced(red, sp)
    v = att.coordinate_vectors
    c = sp.compress(s)
    m = v.conj().T @ c.conj().T @ red.b @ v
    field = field_of(sp.matrix, t, s)
    if field == "real":
        m = m.real
    s_norm = float(np.linalg.norm(c, 2))
    if s_norm <= zero_seminorm_threshold(s, sp):
        # S is A-null: every value <T x, S x>_A vanishes
        s_norm = 0.0
        m = np.zeros_like(m)
    return WSetForm(m=m, sigma1=red.sigma1, s_norm=s_norm, field=field, basis=att.ambient_vectors)


def support_values(m, thetas):
    """``lambda_max(Herm(e^{i theta} m))`` for each angle."""
    rot = np.exp(1j * np.asarray(thetas))[:, None, None] * m[None, :, :]
    h = (rot + np.conj(np.swapaxes(rot, 1, 2))) / 2
    return np.linalg.eigvalsh(h)[:, -1]


def _golden_min(f, lo, hi, xtol):
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > xtol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
    x = (lo + hi) / 2
    return x, f(x)


def min_support(m, n_angles=N_ANGLES, xtol=REFINE_XTOL):
    """Minimum over angles of the support function of ``W(m)``, and its argmin."""
    if m.shape[0] == 1:
        c = complex(m[0, 0])
        if c == 0:
            return 0.0, 0.0
        return -abs(c), float((np.pi - np.angle(c)) % TWO_PI)
    grid = np.arange(n_angles) * (TWO_PI / n_angles)
    vals = support_values(m, grid)
    j = int(np.argmin(vals))
    step = TWO_PI / n_angles
    theta, val = _golden_min(
        lambda th: float(support_values(m, [th])[0]), grid[j] - step, grid[j] + step, xtol
    )
    if vals[j] < val:
        theta, val = grid[j], float(vals[j])
    return float(val), float(theta % TWO_PI)


class ZeroTest(NamedTuple):
    contains: bool
    margin: float
    certificate_angle: Optional[float]


def contains_zero(w, tol_orth=ORTH_TOL, n_angles=N_ANGLES):
    """Decide ``0 in W(m)``.

    ``margin`` is the minimum of the support function: nonnegative when 0 is
    inside, minus the distance of 0 to the set when outside. When 0 is outside,
    ``certificate_angle`` is a direction ``theta`` with ``Herm(e^{i theta} m)``
    negative definite.
    """
    if w.scale == 0.0:
        return ZeroTest(True, 0.0, None)
    if w.field == "real":
        lo, hi = w.real_interval()
        margin, theta = (hi, 0.0) if hi <= -lo else (-lo, float(np.pi))
    else:
        margin, theta = min_support(w.m, n_angles)
    inside = margin >= -tol_orth * w.scale
    return ZeroTest(inside, float(margin), None if inside else theta)


def w_is_singleton(w, tol=SINGLETON_TOL):
    """``W(m)`` is a point iff ``m`` is scalar (over the reals: its symmetric part)."""
    m = herm(w.m) if w.field == "real" else w.m
    k = m.shape[0]
    if k == 1:
        return True
    dev = m - (np.trace(m) / k) * np.eye(k)
    return float(np.linalg.norm(dev, 2)) <= tol * (1.0 + float(np.linalg.norm(m, 2)))


def _segment_preimage(m, y1, y2, s):
    """Unit ``z`` in span{y1, y2} with ``z* m z = (1 - s) w1 + s w2``."""
    w1 = complex(np.vdot(y1, m @ y1))
    w2 = complex(np.vdot(y2, m @ y2))
    d = w2 - w1
    if abs(d) <= 1e-15 * (1 + abs(w1)) or s <= 0:
        return y1
    if s >= 1:
        return y2
    g = (m - w1 * np.eye(m.shape[0])) * (np.conj(d) / abs(d))
    k_part = (g - g.conj().T) / 2j
    k12 = complex(np.vdot(y1, k_part @ y2))
    phase = 1j * np.conj(k12) / abs(k12) if abs(k12) > 0 else 1.0
    y2p = phase * y2
    gh = herm(g)

    def z_of(t):
        return np.cos(t) * y1 + np.sin(t) * y2p

    def f(t):
        z = z_of(t)
        return float(np.vdot(z, gh @ z).real / np.vdot(z, z).real) - s * abs(d)

    if f(0.0) >= 0:
        return y1
    if f(np.pi / 2) <= 0:
        return y2
    t = brentq(f, 0.0, np.pi / 2, xtol=1e-15, rtol=4 * np.finfo(float).eps)
    z = z_of(t)
    return z / np.linalg.norm(z)


def _closest_on_segments(pts):
    """Closest point to 0 on any segment between two of ``pts``."""
    a = pts[:, None]
    b = pts[None, :]
    d = b - a
    dd = np.abs(d) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(dd > 0, np.clip(-(np.conj(d) * a).real / dd, 0, 1), 0.0)
    q = a + s * d
    idx = np.unravel_index(np.argmin(np.abs(q)), q.shape)
    return idx, float(s[idx])


def zero_preimage(m, field="complex", n_angles=128):
    """A unit vector ``y`` with ``y* m y`` as close to 0 as ``W(m)`` allows."""
    k = m.shape[0]
    if k == 1:
        return np.ones(1, dtype=m.dtype)
    if field == "real":
        lam, u = np.linalg.eigh(herm(m))
        lo, hi = lam[0], lam[-1]
        if hi - lo <= 0:
            return u[:, -1]
        lo, hi = min(lo, 0.0), max(hi, 0.0)
        return np.sqrt(-lo / (hi - lo)) * u[:, -1] + np.sqrt(hi / (hi - lo)) * u[:, 0]

    _, theta_star = min_support(m)
    offsets = [0.0, 1e-6, -1e-6, 1e-4, -1e-4, 1e-2, -1e-2]
    thetas = np.concatenate([np.arange(n_angles) * (TWO_PI / n_angles), theta_star + np.array(offsets)])
    thetas = np.sort(thetas % TWO_PI)
    rot = np.exp(1j * thetas)[:, None, None] * m[None]
    _, vecs = np.linalg.eigh((rot + np.conj(np.swapaxes(rot, 1, 2))) / 2)
    us = vecs[:, :, -1]
    pts = np.einsum("ji,ik,jk->j", us.conj(), m, us)

    p0 = pts[0]
    for j in range(1, len(pts) - 1):
        tri = np.array([[p0.real, pts[j].real, pts[j + 1].real],
                        [p0.imag, pts[j].imag, pts[j + 1].imag],
                        [1.0, 1.0, 1.0]])
        if abs(np.linalg.det(tri)) < 1e-14 * (1 + np.abs(pts).max() ** 2):
            continue
        beta = np.linalg.solve(tri, np.array([0.0, 0.0, 1.0]))
        if np.all(beta >= 0):
            tail = beta[1] + beta[2]
            zq = _segment_preimage(m, us[j], us[j + 1], beta[2] / tail)
            return _segment_preimage(m, zq, us[0], beta[0])

    (i, j), s = _closest_on_segments(pts)
    return _segment_preimage(m, us[i], us[j], s)


@dataclass(frozen=True, eq=False)
class OrthogonalityVerdict:
    """Outcome of an orthogonality decision.

    ``witness`` (present iff orthogonal) is an A-unit vector attaining
    ``||T||_A`` with ``<T x, S x>_A`` at zero; ``certificate_angle`` is a
    separating direction when not orthogonal.
    """

    orthogonal: bool
    margin: float
    witness: Optional[np.ndarray]
    certificate_angle: Optional[float]
    witness_value: Optional[complex] = None


def is_birkhoff_orthogonal(
    t, s, sp, tol_orth=ORTH_TOL, cluster_tol=CLUSTER_TOL, n_angles=N_ANGLES, bounded_tol=BOUNDED_TOL
):
    w = compressed_form(t, s, sp, cluster_tol, bounded_tol)
    test = contains_zero(w, tol_orth, n_angles)
    if not test.contains:
        return OrthogonalityVerdict(False, test.margin, None, test.certificate_angle)
    y = zero_preimage(w.m, w.field)
    x = canonical_phase(w.basis @ y)
    value = a_inner(np.asarray(t) @ x, np.asarray(s) @ x, sp)
    return OrthogonalityVerdict(True, test.margin, x, None, value)


def bs_property_check(
    t, sp, n_directions=100, rng_seed=0, tol_orth=ORTH_TOL, cluster_tol=CLUSTER_TOL
):
    """Check orthogonality is witnessed at the unique norming vector ``x0``.

    Every other trial direction is projected so ``<T x0, S x0>_A = 0``; the
    rest are raw Gaussian directions. Returns True iff the orthogonality
    verdict matches ``|<T x0, S x0>_A| <= tol`` in every trial.
    """
    t = np.asarray(t)
    att = attainment_basis(t, sp, cluster_tol)
    if att.dimension != 1:
        raise NotSmoothPrecondition(
            f"T attains its A-norm on a {att.dimension}-dimensional subspace; need 1"
        )
    x0 = att.ambient_vectors[:, 0]
    sigma1 = att.norm
    rng = np.random.default_rng(rng_seed)
    tx0 = t @ x0
    for i in range(n_directions):
        s = random_direction(rng, sp, field_of(sp.matrix, t))
        if i % 2 == 0:
            s = s - (np.conj(a_inner(tx0, s @ x0, sp)) / sigma1**2) * t
            s = s.real if field_of(sp.matrix, t) == "real" else s
        s_norm = compressed_form(t, s, sp, cluster_tol).s_norm
        value = a_inner(tx0, s @ x0, sp) if s_norm > 0 else 0.0
        at_x0 = abs(value) <= tol_orth * sigma1 * s_norm
        verdict = is_birkhoff_orthogonal(t, s, sp, tol_orth, cluster_tol)
        if verdict.orthogonal != at_x0:
            return False
    return True
