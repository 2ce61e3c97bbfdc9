"""Randomized property checks for every structural law the library relies on.

Each trial draws a random PSD ``A`` (rank uniform in ``1..dim``) and A-bounded
``T`` and ``S``; half of the trials force a repeated top singular value so the
non-smooth branch is exercised. Trials are independent: trial ``i`` of root
seed ``s`` uses ``numpy.random.default_rng([s, i])``.
"""

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from . import core, orthogonality as orth, smoothness as sm
from .errors import SemiHilbertError
from .matrixfile import write_matrix_file
from .sampling import (
    coordinates_with_multiplicity,
    gaussian,
    operator_from_coordinates,
    random_direction,
    random_psd,
)
from .tolerances import Tolerances

FD_GAP = 1e-3


@dataclass
class Trial:
    index: int
    field: str
    a: np.ndarray
    t: np.ndarray
    s: np.ndarray
    sp: core.SemiSpace
    rng: np.random.Generator
    tol: Tolerances

    @property
    def dim(self):
        return self.sp.dim


def make_trial(root_seed, index, dim_max, field=None, tol=None):
    tol = tol or Tolerances()
    rng = np.random.default_rng([root_seed, index])
    dim = int(rng.integers(2, dim_max + 1))
    rank = int(rng.integers(1, dim + 1))
    if field is None:
        field = "complex" if rng.random() < 0.5 else "real"
    a = random_psd(rng, dim, rank, field)
    sp = core.SemiSpace.from_matrix(a, tol.rank_tol)
    if sp.rank >= 2 and rng.random() < 0.5:
        k = int(rng.integers(2, sp.rank + 1))
        t = operator_from_coordinates(coordinates_with_multiplicity(rng, sp.rank, k, field), sp, rng, field)
    else:
        t = random_direction(rng, sp, field)
    s = random_direction(rng, sp, field)
    return Trial(index, field, a, t, s, sp, rng, tol)


def random_a_unit_vectors(rng, sp, count, field):
    """``count`` random A-unit vectors lying in R(A)."""
    y = gaussian(rng, (sp.rank, count), field)
    y /= np.linalg.norm(y, axis=0)
    return sp.lift(y)


# -- properties ---------------------------------------------------------------

def prop_norm_upper_bound(tr):
    sigma = core.a_op_norm(tr.t, tr.sp)
    x = random_a_unit_vectors(tr.rng, tr.sp, 2000, tr.field)
    vals = np.linalg.norm(tr.sp.coords(tr.t @ x), axis=0)
    return bool(vals.max() <= sigma * (1 + 1e-9) + 1e-12)


def prop_norm_routes(tr):
    sigma = core.a_op_norm(tr.t, tr.sp)
    other = core.a_op_norm_generalized(tr.t, tr.sp)
    return abs(sigma - other) <= 1e-7 * max(sigma, 1e-300)


def prop_attainment(tr):
    att = core.attainment_basis(tr.t, tr.sp, tr.tol.cluster_tol)
    red = core.reduced_operator(tr.t, tr.sp, tr.tol.cluster_tol)
    if att.dimension < 1:
        return False
    q = np.eye(tr.dim) - tr.sp.projector
    for x, y in zip(att.ambient_vectors.T, att.coordinate_vectors.T):
        if abs(core.a_norm_vec(x, tr.sp) - 1) > 1e-9:
            return False
        if core.a_norm_vec(tr.t @ x, tr.sp) < att.norm * (1 - 1e-8):
            return False
        if np.linalg.norm(q @ x) > 1e-8 * max(1.0, np.linalg.norm(x)):
            return False
        # coordinates of A x in R(A^{1/2}) are a top right-singular vector of b
        gram = red.b.conj().T @ red.b
        yc = tr.sp.coords(x)
        if np.linalg.norm(gram @ yc - att.norm**2 * yc) > 1e-7 * att.norm**2:
            return False
        if np.linalg.norm(yc - y) > 1e-9:
            return False
    return True


def prop_adjoint_laws(tr):
    if not core.admits_a_adjoint(tr.t, tr.sp):
        return True
    w = core.a_adjoint(tr.t, tr.sp)
    a = tr.sp.matrix
    rhs = tr.t.conj().T @ a
    if np.linalg.norm(a @ w - rhs, 2) > 1e-10 * max(np.linalg.norm(rhs, 2), 1.0):
        return False
    if abs(core.a_op_norm(w, tr.sp) - core.a_op_norm(tr.t, tr.sp)) > 1e-9 * max(1.0, core.a_op_norm(tr.t, tr.sp)):
        return False
    x = gaussian(tr.rng, tr.dim, tr.field)
    y = gaussian(tr.rng, tr.dim, tr.field)
    lhs = core.a_inner(tr.t @ x, y, tr.sp)
    rhs_ip = core.a_inner(x, w @ y, tr.sp)
    return abs(lhs - rhs_ip) <= 1e-9 * (1 + abs(lhs)) * max(1.0, np.linalg.norm(x) * np.linalg.norm(y))


def prop_null_insensitivity(tr):
    if tr.sp.full_rank:
        return True
    q = np.eye(tr.dim) - tr.sp.projector
    x = gaussian(tr.rng, tr.dim, tr.field)
    n = q @ gaussian(tr.rng, tr.dim, tr.field)
    before = core.a_inner(tr.t @ x, tr.s @ x, tr.sp)
    after = core.a_inner(tr.t @ (x + n), tr.s @ (x + n), tr.sp)
    scale = np.linalg.norm(tr.t, 2) * np.linalg.norm(tr.s, 2) * np.linalg.norm(tr.a, 2) * np.linalg.norm(x + n) ** 2
    return abs(before - after) <= 1e-10 * max(scale, 1.0)


def prop_homogeneity(tr):
    base = orth.is_birkhoff_orthogonal(tr.t, tr.s, tr.sp, tr.tol.orth_tol, tr.tol.cluster_tol)
    for _ in range(3):
        a_, b_ = gaussian(tr.rng, 2, tr.field) + 0.1
        v = orth.is_birkhoff_orthogonal(a_ * tr.t, b_ * tr.s, tr.sp, tr.tol.orth_tol, tr.tol.cluster_tol)
        if v.orthogonal != base.orthogonal and abs(base.margin) > 1e-6 * _scale(tr):
            return False
    return True


def _scale(tr):
    return core.a_op_norm(tr.t, tr.sp) * core.a_op_norm(tr.s, tr.sp)


def orthogonal_partner(tr):
    """An ``S`` for which ``T`` is orthogonal whenever ``W(m)`` can contain 0.

    Shifts ``S`` by a multiple of ``T`` so the compressed matrix has zero trace,
    which puts 0 inside ``W(m)`` (the trace over ``k`` is an average of points
    of the numerical range).
    """
    w = orth.compressed_form(tr.t, tr.s, tr.sp, tr.tol.cluster_tol)
    shift = np.trace(w.m) / w.k / w.sigma1**2
    s = tr.s - np.conj(shift) * tr.t
    return s.real if tr.field == "real" else s


def witness_ok(t, s, sp, verdict):
    x = verdict.witness
    sigma = core.a_op_norm(t, sp)
    s_norm = core.a_op_norm(s, sp)
    return (
        abs(core.a_norm_vec(x, sp) - 1) <= 1e-9
        and core.a_norm_vec(t @ x, sp) >= sigma * (1 - 1e-8)
        and abs(core.a_inner(t @ x, s @ x, sp)) <= 1e-8 * sigma * max(1.0, s_norm)
    )


def grid_lambdas(field, radius, count=400):
    if field == "real":
        half = np.geomspace(radius * 1e-5, radius, count // 2)
        return np.concatenate([half, -half])
    radii = np.geomspace(radius * 1e-4, radius, 20)
    angles = np.arange(count // 20) * (2 * np.pi / (count // 20))
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def grid_min_norm(t, s, sp, field, count=400):
    """``min_lambda ||T + lambda S||_A``: grid search, then local refinement.

    The objective is convex in ``lambda``, so refining the best grid points
    with Nelder-Mead converges to the global minimum.
    """
    sigma = core.a_op_norm(t, sp)
    s_norm = core.a_op_norm(s, sp)
    if s_norm <= core.zero_seminorm_threshold(s, sp):
        return sigma
    radius = 2 * sigma / s_norm
    lams = grid_lambdas(field, radius, count)
    def norm(lam):
        return core.a_op_norm_generalized(t + lam * s, sp)

    vals = np.array([norm(lam) for lam in lams])
    best = float(vals.min())

    if field == "real":
        def f(p):
            return norm(p[0])
        starts = [np.array([0.0])] + [np.array([lams[j].real]) for j in np.argsort(vals)[:3]]
    else:
        def f(p):
            return norm(complex(p[0], p[1]))
        starts = [np.zeros(2)] + [np.array([lams[j].real, lams[j].imag]) for j in np.argsort(vals)[:3]]
    for x0 in starts:
        step = 1e-2 * radius
        simplex = np.vstack([x0] + [x0 + step * e for e in np.eye(len(x0))])
        res = scipy.optimize.minimize(
            f, x0, method="Nelder-Mead",
            options={"initial_simplex": simplex, "xatol": 1e-10 * radius, "fatol": 1e-13, "maxiter": 2000},
        )
        best = min(best, float(res.fun))
    return best


def prop_definition_check(tr):
    if tr.dim > 3:
        return True
    for s in (tr.s, orthogonal_partner(tr)):
        v = orth.is_birkhoff_orthogonal(tr.t, s, tr.sp, tr.tol.orth_tol, tr.tol.cluster_tol)
        if v.orthogonal and not witness_ok(tr.t, s, tr.sp, v):
            return False
        if abs(v.margin) < 2e-3:
            continue
        sigma = core.a_op_norm(tr.t, tr.sp)
        by_grid = grid_min_norm(tr.t, s, tr.sp, tr.field) >= sigma - 1e-6
        if by_grid != v.orthogonal:
            return False
    return True


def prop_witness_validity(tr):
    s = orthogonal_partner(tr)
    v = orth.is_birkhoff_orthogonal(tr.t, s, tr.sp, tr.tol.orth_tol, tr.tol.cluster_tol)
    if not v.orthogonal:
        return True
    return witness_ok(tr.t, s, tr.sp, v)


def prop_equivalence_triangle(tr, n_directions=50):
    rep = sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol)
    if rep.borderline:
        return True
    seed = int(tr.rng.integers(2**32))
    gat = sm.is_gateaux_differentiable(tr.t, tr.sp, n_directions, seed, tr.tol.gateaux_tol, tr.tol.cluster_tol)
    rng = np.random.default_rng(seed + 1)
    single = all(
        orth.w_is_singleton(
            orth.compressed_form(tr.t, random_direction(rng, tr.sp, tr.field), tr.sp, tr.tol.cluster_tol),
            tr.tol.singleton_tol,
        )
        for _ in range(n_directions)
    )
    return rep.smooth == gat == single


def prop_reduction_equivalence(tr):
    rep = sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol)
    b = tr.sp.compress(tr.t)
    ident = core.SemiSpace.from_matrix(np.eye(tr.sp.rank), tr.tol.rank_tol)
    return sm.is_a_smooth(b, ident, tr.tol.cluster_tol).smooth == rep.smooth


def prop_adjoint_smoothness(tr):
    if not core.admits_a_adjoint(tr.t, tr.sp):
        return True
    rep = sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol)
    if rep.borderline:
        return True
    w = core.a_adjoint(tr.t, tr.sp)
    return sm.is_a_smooth(w, tr.sp, tr.tol.cluster_tol).smooth == rep.smooth


def fd_reliable(t, sp, cluster_tol):
    """Finite differences resolve the one-sided derivatives only past a real gap."""
    red = core.reduced_operator(t, sp, cluster_tol)
    s = red.singular_values
    k = red.top_multiplicity
    return k == len(s) or s[k - 1] - s[k] >= FD_GAP * s[0]


def prop_derivative_range(tr):
    if not fd_reliable(tr.t, tr.sp, tr.tol.cluster_tol):
        return True
    w = orth.compressed_form(tr.t, tr.s, tr.sp, tr.tol.cluster_tol)
    lo, hi = w.real_interval()
    fd = sm.gateaux_fd(tr.t, tr.s, tr.sp)
    # absolute 1e-5 at unit scale; fd roundoff grows like sigma_1 * ||S||_A
    tol = 1e-5 * max(1.0, w.scale)
    return abs(lo - w.sigma1 * fd.rho_minus) <= tol and abs(hi - w.sigma1 * fd.rho_plus) <= tol


def prop_rank_one_law(tr):
    if tr.sp.rank != 1:
        return True
    return sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol).smooth


def prop_block_branch_rule(tr):
    sigma = core.a_op_norm(tr.t, tr.sp)
    n_raw = random_direction(tr.rng, tr.sp, tr.field)
    n_norm = core.a_op_norm(n_raw, tr.sp)
    if n_norm == 0:
        return True
    for factor in (0.5, 1.0, 2.0):
        n = n_raw * (factor * sigma / n_norm)
        rep = sm.block_smoothness_check(tr.t, n, tr.sp, tr.tol.cluster_tol)
        if not rep.consistent:
            return False
        if factor == 1.0 and (rep.branch != "equal" or rep.computed):
            return False
    return True


def prop_block_norming_support(tr):
    sigma = core.a_op_norm(tr.t, tr.sp)
    n_raw = random_direction(tr.rng, tr.sp, tr.field)
    n_norm = core.a_op_norm(n_raw, tr.sp)
    if n_norm == 0:
        return True
    n = n_raw * (0.5 * sigma / n_norm)
    upper, lower, vecs = sm.block_norming_components(tr.t, n, tr.sp, tr.tol.cluster_tol)
    if np.any(lower > 1e-8):
        return False
    att = core.attainment_basis(tr.t, tr.sp, tr.tol.cluster_tol)
    span = att.coordinate_vectors
    d = tr.dim
    for j in range(vecs.shape[1]):
        y = tr.sp.coords(vecs[:d, j]) / upper[j]
        if np.linalg.norm(y - span @ (span.conj().T @ y)) > 1e-7:
            return False
    # (x, 0) with x norming for M is norming for diag(M, N)
    big, sp_big = sm.block_compose(tr.t, n, tr.sp)
    top = core.a_op_norm(big, sp_big)
    for x in att.ambient_vectors.T:
        z = np.concatenate([x, np.zeros_like(x)])
        if abs(core.a_norm_vec(big @ z, sp_big) - top) > 1e-9 * max(1.0, top):
            return False
    return True


def prop_splitting_soundness(tr):
    rep = sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol)
    if rep.smooth or rep.borderline:
        return True
    s1, s2 = sm.non_smooth_splitting(tr.t, tr.sp, tr.tol.cluster_tol, tr.tol.orth_tol)
    return np.allclose(s1 + s2, tr.t)


def prop_bs_property(tr):
    rep = sm.is_a_smooth(tr.t, tr.sp, tr.tol.cluster_tol)
    if not rep.smooth:
        return True
    return orth.bs_property_check(tr.t, tr.sp, 4, int(tr.rng.integers(2**32)), tr.tol.orth_tol, tr.tol.cluster_tol)


PROPERTIES = {
    "norm_upper_bound": prop_norm_upper_bound,
    "norm_routes": prop_norm_routes,
    "attainment_correspondence": prop_attainment,
    "adjoint_laws": prop_adjoint_laws,
    "null_insensitivity": prop_null_insensitivity,
    "homogeneity": prop_homogeneity,
    "definition_check": prop_definition_check,
    "witness_validity": prop_witness_validity,
    "equivalence_triangle": prop_equivalence_triangle,
    "reduction_equivalence": prop_reduction_equivalence,
    "adjoint_smoothness": prop_adjoint_smoothness,
    "derivative_range": prop_derivative_range,
    "rank_one_law": prop_rank_one_law,
    "block_branch_rule": prop_block_branch_rule,
    "block_norming_support": prop_block_norming_support,
    "splitting_soundness": prop_splitting_soundness,
    "bs_property": prop_bs_property,
}


@dataclass
class Failure:
    trial: int
    prop: str
    detail: str
    bundle: str = None


@dataclass
class FuzzResult:
    trials: int
    pass_counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.failures


def write_bundle(out_dir, seed, trial, prop, detail):
    """Write a replayable counterexample directory and return its path."""
    path = os.path.join(out_dir, f"seed-{seed}-trial-{trial.index}")
    os.makedirs(path, exist_ok=True)
    for name, mat in (("A", trial.a), ("T", trial.t), ("S", trial.s)):
        write_matrix_file(os.path.join(path, f"{name}.shmat"), mat, trial.field)
    with open(os.path.join(path, "property.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"property {prop}\nseed {seed}\ntrial {trial.index}\nfield {trial.field}\n")
        fh.write(f"detail {detail}\n")
        fh.write("replay:\n")
        for cmd in ("norm", "attain", "smooth", "adjoint"):
            fh.write(f"  semihilbert {cmd} --a A.shmat --t T.shmat --json\n")
        fh.write("  semihilbert orth --a A.shmat --t T.shmat --s S.shmat --witness --json\n")
        fh.write("  semihilbert gateaux --a A.shmat --t T.shmat --s S.shmat --fd --json\n")
    return path


def run_fuzz(trials, dim_max, seed, field=None, tol=None, out_dir="fuzz-counterexamples",
             properties=None, corrupt=None):
    """Run ``trials`` independent trials; ``corrupt`` forces one property to fail."""
    props = properties or list(PROPERTIES)
    result = FuzzResult(trials, {p: 0 for p in props})
    for i in range(trials):
        tr = make_trial(seed, i, dim_max, field, tol)
        for name in props:
            try:
                ok = bool(PROPERTIES[name](tr)) and name != corrupt
                detail = "property returned false" if not ok else ""
            except SemiHilbertError as exc:
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            if ok:
                result.pass_counts[name] += 1
                continue
            fail = Failure(i, name, detail)
            if out_dir is not None:
                fail.bundle = write_bundle(out_dir, seed, tr, name, detail)
            result.failures.append(fail)
    result.failures.sort(key=lambda f: (f.trial, f.prop))
    return result

