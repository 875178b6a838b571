"""The twelve acceptance criteria, each at its stated tolerance.

Every test records a one-line verdict that the terminal summary prints.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from milnorsph import chart, charts, circle, clifford, connection, geodesic, liegroup, milnor, sphere
from milnorsph.liegroup import Family, InnerProductKind as IPK, LieGroupSpec

FAMILIES = [LieGroupSpec(Family.ORTHOGONAL, 3), LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 4),
            LieGroupSpec(Family.SPECIAL_UNITARY, 2), LieGroupSpec(Family.LORENTZ, 2)]


def test_01_fisher_rao_desingularization(record, rng):
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        x = np.abs(rng.standard_normal(n)) + 0.01
        x *= rng.choice([-1.0, 1.0], n)
        x /= np.linalg.norm(x)
        v = sphere.tangent_project(x, rng.standard_normal(n))
        worst = max(worst, sphere.fr_pullback_residual(x, v))
    elapsed = time.perf_counter() - t0
    ok = record(1, "Fisher-Rao pullback", worst <= 1e-10 and elapsed < 1.0,
                f"max residual {worst:.2e} (<= 1e-10), {elapsed:.2f} s (< 1 s)")
    assert ok


def test_02_quadratic_invisibility(record, rng):
    vs = rng.uniform(-5, 5, 100)
    first = max(abs(sphere.quadratic_invisibility(v)[0]) for v in vs)
    second = max(abs(sphere.quadratic_invisibility(v)[1] - 2 * v * v) for v in vs)
    ok = record(2, "quadratic invisibility", first <= 1e-8 and second <= 1e-4,
                f"|t'(0)| {first:.2e} (<= 1e-8), |t''(0) - 2v^2| {second:.2e} (<= 1e-4)")
    assert ok


def test_03_metric_kernel_law(record, rng):
    bad_dims, worst = 0, 0.0
    for spec in FAMILIES:
        for _ in range(8):
            p = milnor.random_point(spec, rng, max_support=3, max_index=6)
            extra = [i for i in range(6, 6 + int(rng.integers(1, 4)))]
            ambient = sorted(set(p.support) | set(extra))
            K = milnor.kernel_basis(p, ambient)
            bad_dims += len(K) != (len(ambient) - len(p.support)) * spec.dim
            tangents = milnor.tangent_basis(p, ambient)
            for k in K:
                for w in tangents + K:
                    worst = max(worst, abs(milnor.metric_eval(p, k, w)))
    ok = record(3, "metric kernel law", bad_dims == 0 and worst <= 1e-12,
                f"dimension mismatches {bad_dims}, max |g(k, .)| {worst:.1e} (<= 1e-12)")
    assert ok


def test_04_invariance(record, rng):
    ch = charts.s3_chart()
    s3 = ch.plot()
    two = charts.su2_two_node_plot(7)
    g_res = 0.0
    for _ in range(20):
        g_res = max(g_res, chart.invariance_residual(s3, ch.kind, liegroup.random_group(charts.SO2, rng), ch.scale))
        g_res = max(g_res, chart.invariance_residual(two, IPK.RE_TRACE, liegroup.random_group(charts.SU2, rng)))
    z_res = max(chart.invariance_residual(s3, ch.kind, -1, ch.scale),
                chart.invariance_residual(two, IPK.RE_TRACE, -1))
    ok = record(4, "G- and Z2-invariance", g_res <= 1e-8 and z_res <= 1e-8,
                f"G residual {g_res:.1e}, Z2 residual {z_res:.1e} (<= 1e-8)")
    assert ok


def test_05_warped_laplacian(record, rng):
    t0 = time.perf_counter()
    ch = charts.s3_chart()
    M = chart.pullback_metric(ch.plot(), ch.kind, ch.scale)
    pts = np.column_stack([rng.uniform(0.3, 1.2, 50), rng.uniform(-1, 1, 50), rng.uniform(-3, 3, 50)])
    f = lambda u: np.cos(u[..., 0]) * np.cos(u[..., 1])  # noqa: E731
    lap = chart.laplace_beltrami(M, f, pts, 1e-3)
    rel = float(np.max(np.abs(lap + 3 * f(pts)) / np.abs(f(pts))))
    dec = max(chart.warped_decomposition_residual(ch, f, u) for u in pts)
    elapsed = time.perf_counter() - t0
    ok = record(5, "warped Laplacian", rel <= 1e-3 and dec <= 1e-5 and elapsed < 10,
                f"|Df + 3f|/|f| {rel:.1e} (<= 1e-3), decomposition {dec:.1e} (<= 1e-5), {elapsed:.1f} s")
    assert ok


def test_06_geodesics(record, rng):
    ch = charts.s3_chart()
    M = chart.pullback_metric(ch.plot(), ch.kind, ch.scale)
    worst, iters, failure = 0.0, 0, ""
    for _ in range(10):
        p = np.array([rng.uniform(0.4, 1.1), rng.uniform(-1, 1), rng.uniform(-1, 1)])
        q = np.array([rng.uniform(0.4, 1.1), rng.uniform(-1, 1), rng.uniform(-1, 1)])
        try:
            r = geodesic.geodesic(M, p, q, 32)
        except geodesic.GeodesicConvergenceError as exc:
            failure = str(exc)
            break
        P, Q = charts.s3_embedding(p), charts.s3_embedding(q)
        worst = max(worst, abs(r.length - np.arccos(np.clip(P @ Q, -1, 1))))
        iters = max(iters, r.iterations)
    ok = record(6, "geodesic lengths", not failure and worst <= 1e-3 and iters <= 10_000,
                failure or f"max |L - arccos| {worst:.1e} (<= 1e-3), max iterations {iters} (<= 1e4)")
    assert ok


def test_07_clifford_dirac_algebra(record, rng):
    rel = max(clifford.gamma_generators(r).relation_residual() for r in range(1, 11))
    A = rng.standard_normal((5, 5))
    G = A @ A.T + np.eye(5)
    F = clifford.orthonormal_frame(G)
    rep = clifford.gamma_generators(5)
    ind = max(clifford.frame_independence_residual(rep, F, clifford.rotated_frame(F, clifford.random_orthogonal(rng, 5)),
                                                   rng.standard_normal(5)) for _ in range(100))
    gram = 0.0
    for spec in (charts.SU2, LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3)):
        p = milnor.MilnorPoint(spec, (0, 2), np.array([0.6, 0.8]),
                               (liegroup.random_group(spec, rng), liegroup.random_group(spec, rng)))
        gram = max(gram, clifford.warped_frame(p, ambient=(0, 1, 2, 3)).gram_residual())
    ok = record(7, "Clifford relations and frames", rel <= 1e-12 and ind <= 1e-10 and gram <= 1e-8,
                f"relation {rel:.1e} (<= 1e-12), frame independence {ind:.1e} (<= 1e-10), warped Gram {gram:.1e} (<= 1e-8)")
    assert ok


def test_08_twisted_spectra(record):
    t0 = time.perf_counter()
    _, ev = circle.circle_dirac(512)
    _, evt = circle.circle_dirac(512, twisted=True)
    elapsed = time.perf_counter() - t0
    lo = ev[np.abs(ev) <= 3.2]
    lot = evt[np.abs(evt) <= 3.2]
    int_err = float(np.abs(lo - np.round(lo)).max())
    half_err = float(np.abs(lot - (np.floor(lot) + 0.5)).max())
    gap = float(np.abs(evt).min())
    ok = record(8, "circle Dirac spectra", int_err <= 1e-3 and half_err <= 1e-3 and gap >= 0.49 and elapsed < 5,
                f"integer error {int_err:.1e}, half-integer error {half_err:.1e}, gap {gap:.3f} (>= 0.49), {elapsed:.2f} s")
    assert ok


def test_09_chern_weil(record, rng):
    su2 = charts.SU2
    A = rng.standard_normal((3, 3)) * 0.7
    plot = charts.single_node_plot(su2, lambda u: charts.su2_exp_coords(np.einsum("ij,...j->...i", A, u) + 0.3 * u ** 2), 3)
    theta = connection.connection_form(plot)
    flat = max(float(np.abs(connection.curvature(theta, u)).max()) for u in rng.uniform(-0.5, 0.5, (5, 3)))
    poly = connection.polynomial_connection(su2, 3, rng)
    u0 = rng.uniform(-0.5, 0.5, 3)
    res = [connection.bianchi_residual(poly, u0, h) for h in (1e-2, 5e-3, 2.5e-3)]
    ratios = [res[0] / res[1], res[1] / res[2]]
    two = connection.connection_form(charts.su2_two_node_plot(3))
    tr = max(float(np.abs(connection.chern_form(two, 1, u)[0]).max()) for u in rng.uniform(-0.5, 0.5, (5, 3)))
    ok = record(9, "Chern-Weil", flat <= 1e-3 and all(1.5 <= r <= 4.5 for r in ratios) and tr <= 1e-8,
                f"flatness {flat:.1e} (<= 1e-3), Bianchi ratios {ratios[0]:.2f}, {ratios[1]:.2f} (in [1.5, 4.5]), "
                f"|tr F| {tr:.1e} (<= 1e-8)")
    assert ok


def test_10_defect_operators(record):
    L = circle.circle_laplacian(64)
    rot = circle.defect_operator(L, lambda x: x + 0.7)[1]
    ident = circle.defect_operator(L, lambda x: x)[1]
    non = circle.defect_operator(L, lambda x: x + 0.3 * np.sin(x))[1]
    kill = circle.infinitesimal_defect(L, np.ones_like)[1]
    C, n = circle.infinitesimal_defect(L, np.sin)
    # flow of sin(phi) d/dphi: tan(phi_t / 2) = e^t tan(phi / 2); derivative of the finite defect at t = 0
    dt = 1e-4
    Dp = circle.defect_operator(L, circle.sine_flow(dt), check=False)[0]
    Dm = circle.defect_operator(L, circle.sine_flow(-dt), check=False)[0]
    mismatch = float(np.linalg.norm((Dp - Dm) / (2 * dt) - C, 2) / n)
    ok = record(10, "defect operators",
                rot <= 1e-6 and ident == 0 and non > 0.1 and kill <= 1e-5 and mismatch <= 0.05,
                f"rotation {rot:.1e}, identity {ident:g}, non-isometry {non:.1e}, Killing {kill:.1e}, "
                f"flow mismatch {100 * mismatch:.4f}%")
    assert ok


def test_11_contraction(record, rng):
    spec = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3)
    exact = True
    for s in FAMILIES:
        for _ in range(5):
            p = milnor.random_point(s, rng)
            exact &= milnor.shift_contraction(p, 0.0, 1).equals(p)
            exact &= milnor.shift_contraction(p, 1.0, 2).equals(milnor.base_point(s))
    dmin = np.inf
    for _ in range(10_000):
        p = milnor.random_point(spec, rng, max_support=4, max_index=8)
        dmin = min(dmin, milnor.contraction_denominator(p, float(rng.uniform()), int(rng.integers(1, 3))))
    ok = record(11, "contraction homotopy", exact and dmin > 0,
                f"endpoints exact: {exact}, min denominator {dmin:.3f} (> 0)")
    assert ok


def test_12_determinism(record, tmp_path):
    cmd = [sys.executable, "-m", "milnorsph", "verify", "all", "--seed", "42"]
    t0 = time.perf_counter()
    a = subprocess.run(cmd + ["--out", str(tmp_path / "a.json")], capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    b = subprocess.run(cmd + ["--out", str(tmp_path / "b.json")], capture_output=True, text=True)
    same = (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    verdict = json.loads((tmp_path / "a.json").read_text())["pass"]
    ok = record(12, "determinism", same and a.returncode == 0 and b.returncode == 0 and verdict and elapsed < 60,
                f"byte-identical: {same}, exit codes {a.returncode}/{b.returncode}, all pass: {verdict}, {elapsed:.1f} s (< 60 s)")
    assert ok
