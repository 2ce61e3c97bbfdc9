"""Acceptance criteria 1-9, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured quantity,
also when output capture is on. Run standalone with
``python -m pytest tests/test_acceptance.py -v``.
"""

import json
import math
import time

import numpy as np
import pytest

from semihilbert import (
    SemiSpace,
    a_adjoint,
    a_op_norm,
    admits_a_adjoint,
    attainment_basis,
    block_smoothness_check,
    compressed_form,
    gateaux_derivatives,
    gateaux_fd,
    is_a_smooth,
    is_birkhoff_orthogonal,
    is_gateaux_differentiable,
    w_is_singleton,
)
from semihilbert.cli import main
from semihilbert.fuzz import grid_min_norm, make_trial, witness_ok
from semihilbert.sampling import (
    coordinates_with_multiplicity,
    operator_from_coordinates,
    random_direction,
    random_psd,
    random_unitary,
)


@pytest.fixture
def verdict(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
        assert ok, detail

    return emit


def _space(a):
    return SemiSpace.from_matrix(np.asarray(a, dtype=float))


def _cli_json(*argv):
    chunks = []

    class Out:
        def write(self, s):
            chunks.append(s)

    code = main([*argv, "--json"], stdout=Out(), stderr=Out())
    return code, json.loads("".join(chunks)) if code == 0 else None


# -- worked examples ----------------------------------------------------------


def test_criterion_1_rank_one_example(verdict):
    start = time.perf_counter()
    sp, t = _space(np.diag([1.0, 0.0])), np.eye(2)
    norm = a_op_norm(t, sp, cross_check=True)
    rep = is_a_smooth(t, sp)
    diff = is_gateaux_differentiable(t, sp, n_directions=50, rng_seed=0)
    elapsed = time.perf_counter() - start
    ok = (
        abs(norm - 1) <= 1e-12
        and rep.smooth
        and np.allclose(np.abs(rep.x0), [1, 0], atol=1e-12)
        and diff
        and elapsed < 1
    )
    verdict(1, ok, f"norm={norm:.15g} smooth={rep.smooth} x0={np.round(rep.x0, 12)} "
                   f"gateaux={diff} time={elapsed:.3f}s")


def test_criterion_2_diagonal_example(verdict):
    start = time.perf_counter()
    sp, t = _space(np.diag([0.0, 1.0, 1.0])), np.diag([2.0, 1.0, 1.0])
    s = np.diag([0.0, 1.0, -1.0])
    norm = a_op_norm(t, sp, cross_check=True)
    k = attainment_basis(t, sp).dimension
    smooth = is_a_smooth(t, sp).smooth
    diff = is_gateaux_differentiable(t, sp, n_directions=50, rng_seed=0)
    g = gateaux_derivatives(t, s, sp)
    f = gateaux_fd(t, s, sp)
    elapsed = time.perf_counter() - start
    dev = max(abs(g.rho_minus + 1), abs(g.rho_plus - 1), abs(f.rho_minus + 1), abs(f.rho_plus - 1))
    ok = abs(norm - 1) <= 1e-12 and k == 2 and not smooth and not diff and dev <= 1e-5 and elapsed < 1
    verdict(2, ok, f"norm={norm:.15g} k={k} smooth={smooth} gateaux={diff} "
                   f"rho=({g.rho_minus:.6g},{g.rho_plus:.6g}) fd=({f.rho_minus:.9g},{f.rho_plus:.9g}) "
                   f"time={elapsed:.3f}s")


def test_criterion_3_weighted_l2_truncation(verdict):
    values = {}
    times = {}
    for n in (10, 100, 1000):
        start = time.perf_counter()
        code, rep = _cli_json("example-l2", "--n", str(n))
        times[n] = time.perf_counter() - start
        assert code == 0
        values[n] = rep["results"]["a_op_norm"]
    partial = math.sqrt(math.fsum(1 / k**2 for k in range(1, 1001)))
    limit = math.pi / math.sqrt(6)
    dev_partial = abs(values[1000] - partial)
    dev_limit = abs(values[1000] - limit)
    mono = values[10] < values[100] < values[1000]
    ok = dev_partial <= 1e-10 and dev_limit <= 1e-3 and mono and times[1000] < 5
    verdict(3, ok, f"norm(1000)={values[1000]:.12f} |dev partial sum|={dev_partial:.2e} "
                   f"|dev pi/sqrt6|={dev_limit:.2e} monotone={mono} time(1000)={times[1000]:.2f}s")


# -- property criteria --------------------------------------------------------


def test_criterion_4_rank_one_law(verdict):
    failures = checked = 0
    for i in range(100):
        rng = np.random.default_rng([4, i])
        field = "complex" if i % 2 else "real"
        n = int(rng.integers(2, 7))
        sp = SemiSpace.from_matrix(random_psd(rng, n, 1, field))
        t = random_direction(rng, sp, field)
        if a_op_norm(t, sp) <= 1e-6:
            continue
        checked += 1
        failures += not is_a_smooth(t, sp).smooth
    verdict(4, failures == 0, f"{checked} trials with rank(A)=1, {failures} failures")


def _block_pair(rng, branch):
    """``(M, N, A)`` in the requested branch; the dominant block is non-smooth half the time."""
    field = "complex" if rng.random() < 0.5 else "real"
    n = int(rng.integers(1, 4))
    small = SemiSpace.from_matrix(random_psd(rng, n, int(rng.integers(1, n + 1)), field))

    def block(force):
        if force and small.rank >= 2:
            b = coordinates_with_multiplicity(rng, small.rank, 2, field)
            return operator_from_coordinates(b, small, rng, field)
        return random_direction(rng, small, field)

    force = rng.random() < 0.5
    m = block(force and branch != "N-dominant")
    nn = block(force and branch == "N-dominant")
    ratio = {"equal": 1.0, "M-dominant": rng.uniform(0.1, 0.9), "N-dominant": rng.uniform(1.2, 5)}[branch]
    nn = nn * (ratio * a_op_norm(m, small) / a_op_norm(nn, small))
    return m, nn, small


def test_criterion_5_block_diagonal(verdict):
    start = time.perf_counter()
    bad = []
    counts = {}
    for branch in ("M-dominant", "N-dominant", "equal"):
        rng = np.random.default_rng([5, len(branch)])
        smooth_predictions = 0
        for i in range(100):
            m, n, small = _block_pair(rng, branch)
            rep = block_smoothness_check(m, n, small)
            smooth_predictions += rep.predicted
            if rep.branch != branch or not rep.consistent or (branch == "equal" and rep.computed):
                bad.append((branch, i, rep))
        counts[branch] = smooth_predictions
    elapsed = time.perf_counter() - start
    verdict(5, not bad and elapsed < 30,
            f"300 trials, {len(bad)} mismatches; predicted-smooth counts {counts}; time={elapsed:.1f}s")


def test_criterion_6_equivalence_triangle(verdict):
    disagreements = []
    excluded = smooth_count = 0
    for i in range(200):
        tr = make_trial(6, i, 6)
        rep = is_a_smooth(tr.t, tr.sp)
        if rep.borderline:
            excluded += 1
            continue
        diff = is_gateaux_differentiable(tr.t, tr.sp, n_directions=50, rng_seed=i)
        rng = np.random.default_rng([6, i, 1])
        singleton = all(
            w_is_singleton(compressed_form(tr.t, random_direction(rng, tr.sp, tr.field), tr.sp))
            for _ in range(50)
        )
        smooth_count += rep.smooth
        if not (rep.smooth == diff == singleton):
            disagreements.append((i, rep.smooth, diff, singleton))
    verdict(6, not disagreements,
            f"{200 - excluded} trials ({smooth_count} smooth), {excluded} borderline excluded, "
            f"{len(disagreements)} disagreements")


def test_criterion_7_orthogonality_oracle(verdict):
    agree = excluded = excluded_agree = orthogonal = 0
    mismatches, bad_witness = [], []
    for i in range(50):
        rng = np.random.default_rng([7, i])
        field = "complex" if i % 2 else "real"
        n = int(rng.integers(2, 4))
        sp = SemiSpace.from_matrix(random_psd(rng, n, int(rng.integers(1, n + 1)), field))
        if sp.rank >= 2 and i % 4 >= 1:
            k = int(rng.integers(2, sp.rank + 1))
            t = operator_from_coordinates(coordinates_with_multiplicity(rng, sp.rank, k, field), sp, rng, field)
        else:
            t = random_direction(rng, sp, field)
        s = random_direction(rng, sp, field)
        if i % 2 == 0:
            w = compressed_form(t, s, sp)
            s = s - np.conj(np.trace(w.m) / w.k / w.sigma1**2) * t
            s = s.real if field == "real" else s
        v = is_birkhoff_orthogonal(t, s, sp)
        if v.orthogonal:
            orthogonal += 1
            if not witness_ok(t, s, sp, v):
                bad_witness.append(i)
        by_definition = grid_min_norm(t, s, sp, field) >= a_op_norm(t, sp) - 1e-6
        if abs(v.margin) < 2e-3:
            excluded += 1
            excluded_agree += by_definition == v.orthogonal
            continue
        if by_definition == v.orthogonal:
            agree += 1
        else:
            mismatches.append(i)
    verdict(7, not mismatches and not bad_witness,
            f"{agree} agree, {len(mismatches)} mismatches, {excluded} borderline excluded "
            f"({excluded_agree} of them agree anyway); "
            f"{orthogonal} witnesses, {len(bad_witness)} violating bounds")


def test_criterion_8_adjoint_laws(verdict):
    worst_residual = worst_norm = 0.0
    verdict_mismatch = 0
    for i in range(100):
        tr = make_trial(8, i, 6)
        assert admits_a_adjoint(tr.t, tr.sp)
        w = a_adjoint(tr.t, tr.sp)
        rhs = tr.t.conj().T @ tr.sp.matrix
        worst_residual = max(worst_residual, np.linalg.norm(tr.sp.matrix @ w - rhs, 2) / np.linalg.norm(rhs, 2))
        nt, nw = a_op_norm(tr.t, tr.sp), a_op_norm(w, tr.sp)
        worst_norm = max(worst_norm, abs(nt - nw) / max(1.0, nt))
        verdict_mismatch += is_a_smooth(tr.t, tr.sp).smooth != is_a_smooth(w, tr.sp).smooth
    ok = worst_residual <= 1e-10 and worst_norm <= 1e-9 and verdict_mismatch == 0
    verdict(8, ok, f"max |A T# - T*A|/|T*A|={worst_residual:.2e}, "
                   f"max norm gap={worst_norm:.2e}, smoothness mismatches={verdict_mismatch}")


def _well_scaled_pair(rng, field):
    """Unit-seminorm ``T``, ``S`` under an A with spectrum in [0.1, 1].

    A third of the ``T`` have an exactly repeated top singular value; the rest
    are redrawn until the relative gap is at least 0.05.
    """
    n = int(rng.integers(2, 7))
    u = random_unitary(rng, n, field)
    a = (u * rng.uniform(0.1, 1.0, n)) @ u.conj().T
    sp = SemiSpace.from_matrix(a.real if field == "real" else a)
    if rng.random() < 1 / 3:
        b = coordinates_with_multiplicity(rng, n, int(rng.integers(2, n + 1)), field)
        t = operator_from_coordinates(b, sp, None, field)
    else:
        t = random_direction(rng, sp, field)
        while is_a_smooth(t, sp).spectral_gap < 0.05 * a_op_norm(t, sp):
            t = random_direction(rng, sp, field)
    t = t / a_op_norm(t, sp)
    s = random_direction(rng, sp, field)
    return sp, t, s / a_op_norm(s, sp)


def test_criterion_9_derivative_range(verdict):
    worst = 0.0
    non_smooth = 0
    for i in range(100):
        rng = np.random.default_rng([9, i])
        sp, t, s = _well_scaled_pair(rng, "complex" if i % 2 else "real")
        w = compressed_form(t, s, sp)
        lo, hi = w.real_interval()
        f = gateaux_fd(t, s, sp)
        non_smooth += w.k > 1
        worst = max(worst, abs(lo - w.sigma1 * f.rho_minus), abs(hi - w.sigma1 * f.rho_plus))
    verdict(9, worst <= 1e-5, f"100 trials ({non_smooth} non-smooth T), "
                              f"max |[lmin,lmax] - |T|[rho-,rho+]| = {worst:.2e}")
