"""Named demos: each writes CSV data plus a JSON summary into an output directory."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from . import chart, charts, circle, connection, geodesic, milnor, sphere
from .config import RunConfig
from .suites import FAMILY_SPECS, laplace_points, s3_test_function


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


def demo_fisher_rao(cfg: RunConfig, out: Path) -> dict:
    theta = np.linspace(0.0, 2 * np.pi, 361)[:-1]
    theta = theta[np.min(np.abs(np.stack([np.cos(theta), np.sin(theta)])), axis=0) > 0.05]
    rows, dev = [], 0.0
    for th in theta:
        x = np.array([np.cos(th), np.sin(th)])
        v = np.array([-np.sin(th), np.cos(th)])
        dt = 2 * x * v
        fr = sphere.fisher_rao_eval(sphere.square_map(x), dt, dt)
        eu = 4 * float(v @ v)
        dev = max(dev, abs(fr - eu))
        rows.append((th, fr, eu))
    write_csv(out / "fisher_rao.csv", ["theta", "fisher_rao", "four_euclidean"], rows)
    return {"max_deviation": dev, "tolerance": 1e-10 * cfg.tol, "pass": dev <= 1e-10 * cfg.tol}


def demo_s3_laplacian(cfg: RunConfig, out: Path) -> dict:
    ch = charts.s3_chart()
    M = chart.pullback_metric(ch.plot(), ch.kind, ch.scale)
    pts = laplace_points(np.random.default_rng(cfg.seed))
    f = s3_test_function(pts)
    lap = chart.laplace_beltrami(M, s3_test_function, pts, cfg.laplace_h)
    assembled = np.array([chart.warped_laplacian_terms(ch, s3_test_function, u)["assembled"] for u in pts])
    write_csv(out / "s3_laplacian.csv", ["theta", "phi1", "phi2", "f", "laplacian", "minus_3f", "assembled"],
              [(*u, a, b, -3 * a, c) for u, a, b, c in zip(pts, f, lap, assembled)])
    rel = float(np.max(np.abs(lap + 3 * f) / np.abs(f)))
    dec = float(np.max(np.abs(lap - assembled)))
    return {"max_relative_eigen_error": rel, "max_decomposition_gap": dec, "eigenvalue": -3.0}


def demo_geodesic(cfg: RunConfig, out: Path) -> dict:
    ch = charts.s3_chart()
    M = chart.pullback_metric(ch.plot(), ch.kind, ch.scale)
    p, q = np.array([0.2, 0.0, 0.0]), np.array([0.2, 1.0, 0.0])
    r = geodesic.geodesic(M, p, q, cfg.segments)
    write_csv(out / "geodesic.csv", ["theta", "phi1", "phi2"], [tuple(n) for n in r.nodes])
    ref = charts.s3_distance(p, q)
    return {"length": r.length, "reference_arccos": ref, "error": abs(r.length - ref),
            "iterations": r.iterations, "gradient_norm": r.grad_norm}


def demo_chern_weil(cfg: RunConfig, out: Path) -> dict:
    theta = connection.connection_form(charts.su2_two_node_plot(cfg.seed))
    rng = np.random.default_rng(cfg.seed)
    rows = []
    for u in rng.uniform(-0.5, 0.5, (8, 3)):
        F = connection.curvature(theta, u, cfg.h_curvature)
        tr, closed = connection.chern_form(theta, 1, u, cfg.h_curvature)
        rows.append((*u, float(np.linalg.norm(F)), float(np.abs(tr).max()), connection.bianchi_residual(theta, u)))
    write_csv(out / "chern_weil.csv", ["u1", "u2", "u3", "curvature_norm", "trace_F", "bianchi"], rows)
    return {"max_trace_F": max(r[4] for r in rows), "max_bianchi": max(r[5] for r in rows),
            "max_curvature_norm": max(r[3] for r in rows)}


def demo_dirac_circle(cfg: RunConfig, out: Path) -> dict:
    _, ev = circle.circle_dirac(cfg.N)
    _, evt = circle.circle_dirac(cfg.N, twisted=True)
    (out / "spectrum_untwisted.csv").write_text(circle.spectrum_csv(ev))
    (out / "spectrum_twisted.csv").write_text(circle.spectrum_csv(evt))
    return {"N": cfg.N, "untwisted_gap": circle.spectral_gap(ev), "twisted_gap": circle.spectral_gap(evt),
            "untwisted_kernel_dim": circle.kernel_dimension(ev), "twisted_kernel_dim": circle.kernel_dimension(evt)}


def demo_defect(cfg: RunConfig, out: Path) -> dict:
    L = circle.circle_laplacian(64)
    maps = [("identity", lambda x: x), ("rotation by 0.7", circle.rotation_map(0.7)),
            ("theta + 0.3 sin theta", lambda x: x + 0.3 * np.sin(x))]
    reports = []
    for name, phi in maps:
        _, n = circle.defect_operator(L, phi)
        reports.append(json.loads(circle.defect_report(name, n)))
    for name, X in [("X = d/dphi", np.ones_like), ("X = sin(phi) d/dphi", np.sin)]:
        _, n = circle.infinitesimal_defect(L, X)
        reports.append(json.loads(circle.defect_report(name, n, iso_tol=1e-5)))
    write_csv(out / "defect.csv", ["phi_description", "norm", "iso_flag"],
              [(r["phi_description"], r["norm"], r["iso_flag"]) for r in reports])
    return {"reports": reports}


def demo_contraction(cfg: RunConfig, out: Path) -> dict:
    spec = FAMILY_SPECS[1]
    p = milnor.random_point(spec, np.random.default_rng(cfg.seed), max_support=3, max_index=5)
    rows = []
    ts = np.linspace(0.0, 1.0, 11)
    for stage in (1, 2):
        for t in ts:
            q = milnor.shift_contraction(p, float(t), stage)
            for i, x, _ in q.entries():
                rows.append((stage, float(t), i, x))
    write_csv(out / "contraction.csv", ["stage", "t", "index", "weight"], rows)
    start = milnor.shift_contraction(p, 0.0, 1).equals(p)
    end = milnor.shift_contraction(p, 1.0, 2).equals(milnor.base_point(spec))
    dmin = min(milnor.contraction_denominator(p, float(t), s) for s in (1, 2) for t in ts)
    return {"start_is_identity": bool(start), "end_is_base_point": bool(end), "min_denominator": dmin,
            "point": milnor.dumps(p)}


DEMOS = {
    "fisher-rao": demo_fisher_rao,
    "s3-laplacian": demo_s3_laplacian,
    "geodesic": demo_geodesic,
    "chern-weil": demo_chern_weil,
    "dirac-circle": demo_dirac_circle,
    "defect": demo_defect,
    "contraction": demo_contraction,
}


def run_demo(cfg: RunConfig, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    summary = {"demo": cfg.target, "seed": cfg.seed, **DEMOS[cfg.target](cfg, out)}
    write_json(out / f"{cfg.target}.json", summary)
    return summary
