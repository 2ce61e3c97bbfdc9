"""Seeded random generators for PSD forms and A-bounded operators."""

import numpy as np


def gaussian(rng, shape, field="real"):
    if field == "complex":
        return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return rng.standard_normal(shape)


def random_unitary(rng, n, field="real"):
    q, r = np.linalg.qr(gaussian(rng, (n, n), field))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_psd(rng, n, rank, field="real"):
    """``G G*`` with ``G`` an ``n x rank`` Gaussian matrix."""
    g = gaussian(rng, (n, rank), field)
    a = g @ g.conj().T
    return (a + a.conj().T) / 2


def random_direction(rng, sp, field=None):
    """``G P + (I - P) H (I - P)``: always A-bounded by construction."""
    field = field or sp.field
    n = sp.dim
    p = sp.projector
    q = np.eye(n) - p
    g = gaussian(rng, (n, n), field)
    h = gaussian(rng, (n, n), field)
    out = g @ p + q @ h @ q
    return out.real if field == "real" else out


def operator_from_coordinates(b, sp, rng=None, field=None):
    """An A-bounded operator whose range-coordinate matrix is exactly ``b``.

    A random ``(I - P) K`` summand is added when ``rng`` is given; it does not
    change the reduced operator.
    """
    field = field or sp.field
    s = np.sqrt(sp.d_r)
    u = sp.u_r
    t = u @ ((b / s[:, None]) * s[None, :]) @ u.conj().T
    if rng is not None and not sp.full_rank:
        q = np.eye(sp.dim) - sp.projector
        t = t + q @ gaussian(rng, (sp.dim, sp.dim), field)
    return t.real if field == "real" else t


def coordinates_with_multiplicity(rng, r, k, field="real", top=None):
    """A random ``r x r`` matrix whose top singular value has multiplicity ``k``."""
    w = random_unitary(rng, r, field)
    z = random_unitary(rng, r, field)
    top = 1.0 + rng.random() if top is None else top
    rest = np.sort(rng.uniform(0.05, 0.8, size=r - k))[::-1] * top
    s = np.concatenate([np.full(k, top), rest])
    return (w * s) @ z.conj().T


def random_a_bounded(rng, sp, field=None, multiplicity=None):
    """A random A-bounded operator; optionally force the top multiplicity."""
    field = field or sp.field
    if multiplicity is None:
        return random_direction(rng, sp, field)
    k = min(multiplicity, sp.rank)
    b = coordinates_with_multiplicity(rng, sp.rank, k, field)
    return operator_from_coordinates(b, sp, rng, field)
