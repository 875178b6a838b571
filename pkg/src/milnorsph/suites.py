"""Verification suites run by ``milnorsph verify``.

Each suite draws from its own generator seeded with ``(seed, suite index)``,
so running one suite alone reproduces the same numbers as inside ``all``.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from . import chart, charts, circle, clifford, connection, forms, geodesic, liegroup, milnor, sphere
from .config import SUITES, RunConfig
from .liegroup import Family, InnerProductKind as IPK, LieGroupSpec
from .report import GE, GT, LE, RANGE, EQ, Report

H0_LAPLACE = 1e-3

FAMILY_SPECS = (
    LieGroupSpec(Family.ORTHOGONAL, 3),
    LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3),
    LieGroupSpec(Family.SPECIAL_UNITARY, 2),
    LieGroupSpec(Family.LORENTZ, 2),
)


def _rng(cfg: RunConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([cfg.seed, SUITES.index(suite)])


# -- liegroup ---------------------------------------------------------------

def suite_liegroup(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "liegroup")
    t = cfg.tol

    def dims():
        bad = 0
        for n in range(1, 5):
            bad += len(liegroup.algebra_basis(LieGroupSpec(Family.SPECIAL_ORTHOGONAL, n))) != n * (n - 1) // 2
            bad += len(liegroup.algebra_basis(LieGroupSpec(Family.SPECIAL_UNITARY, n))) != n * n - 1
            bad += len(liegroup.algebra_basis(LieGroupSpec(Family.LORENTZ, n))) != n * (n + 1) // 2
        return bad
    rep.timed("liegroup.basis_dimensions", "dim so(n), su(n), so(1,n)", dims, 0, EQ)

    def examples():
        so3 = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 3)
        su2 = LieGroupSpec(Family.SPECIAL_UNITARY, 2)
        X = np.zeros((3, 3))
        X[0, 1], X[1, 0] = 1.0, -1.0
        Z = np.diag([1j, -1j])
        return max(abs(liegroup.inner_product(so3, IPK.TRACE, X, X) - 2),
                   abs(liegroup.inner_product(su2, IPK.RE_TRACE, Z, Z) - 2),
                   abs(liegroup.inner_product(su2, IPK.KILLING, Z, Z) + 8))
    rep.timed("liegroup.inner_product_examples", "-tr XY, -Re tr XY, tr(ad ad)", examples, 1e-12 * t)

    def ad_invariance():
        worst = 0.0
        for spec, kind in [(FAMILY_SPECS[1], IPK.TRACE), (LieGroupSpec(Family.SPECIAL_UNITARY, 3), IPK.RE_TRACE),
                           (FAMILY_SPECS[3], IPK.KILLING), (FAMILY_SPECS[1], IPK.KILLING)]:
            for _ in range(10):
                X, Y = liegroup.random_algebra(spec, rng), liegroup.random_algebra(spec, rng)
                g = liegroup.random_group(spec, rng)
                a = liegroup.inner_product(spec, kind, liegroup.adjoint(g, X), liegroup.adjoint(g, Y))
                worst = max(worst, abs(a - liegroup.inner_product(spec, kind, X, Y)))
        return worst
    rep.timed("liegroup.ad_invariance", "<Ad_g X, Ad_g Y> = <X, Y>", ad_invariance, 1e-8 * t)

    def killing_trace():
        worst = 0.0
        for spec, c in [(LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 4), 2.0), (LieGroupSpec(Family.SPECIAL_UNITARY, 3), 6.0),
                        (LieGroupSpec(Family.LORENTZ, 3), 2.0)]:
            for X in liegroup.algebra_basis(spec):
                for Y in liegroup.algebra_basis(spec):
                    k = liegroup.inner_product(spec, IPK.KILLING, X, Y)
                    worst = max(worst, abs(k - c * np.real(np.trace(X @ Y))))
        return worst
    rep.timed("liegroup.killing_trace_identity", "kappa = (n-2) tr, 2n tr, (n-1) tr", killing_trace, 1e-10 * t)

    def cartan_positive():
        return min(float(np.linalg.eigvalsh(liegroup.gram_matrix(LieGroupSpec(Family.LORENTZ, n), IPK.CARTAN)).min())
                   for n in (2, 3))
    rep.timed("liegroup.cartan_positive", "-kappa(X, theta X) > 0", cartan_positive, 0.0, GT)

    def exp_checks():
        worst = 0.0
        for spec in FAMILY_SPECS:
            X = liegroup.random_algebra(spec, rng)
            worst = max(worst, liegroup.group_residual(spec, liegroup.group_exp(X)))
            E = liegroup.group_exp(0.7 * X) @ liegroup.group_exp(0.3 * X)
            worst = max(worst, float(np.abs(E - liegroup.group_exp(X)).max()))
        return worst
    rep.timed("liegroup.exp_membership_homomorphism", "exp(X + Y) = exp X exp Y, [X, Y] = 0", exp_checks, 1e-10 * t)

    def mc():
        worst = 0.0
        for spec in FAMILY_SPECS:
            X, Y = liegroup.random_algebra(spec, rng), liegroup.random_algebra(spec, rng)
            curve = lambda s: liegroup.group_exp(s * X) @ liegroup.group_exp(s * s * Y)  # noqa: E731
            worst = max(worst, float(np.abs(liegroup.maurer_cartan(curve, 0.0) - X).max()))
        return worst
    rep.timed("liegroup.maurer_cartan", "theta = g^{-1} dg", mc, 1e-6 * t)


# -- sphere ------------------------------------------------------------------

def suite_sphere(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "sphere")
    t = cfg.tol

    def fr():
        worst = 0.0
        for _ in range(1000):
            n = int(rng.integers(2, 9))
            x = sphere.random_sphere_point(rng, n)
            x = np.where(np.abs(x) < 1e-3, 1e-3, x)
            x = x / np.linalg.norm(x)
            v = sphere.tangent_project(x, rng.standard_normal(n))
            worst = max(worst, sphere.fr_pullback_residual(x, v))
        return worst
    rep.timed("sphere.fisher_rao_pullback", "g_FR = 4 sum dx_i^2", fr, 1e-10 * t)

    vs = rng.uniform(-5, 5, 100)
    first = [sphere.quadratic_invisibility(v) for v in vs]
    rep.timed("sphere.quadratic_invisibility_first", "t_i(s) = s^2 v_i^2: t'(0) = 0",
              lambda: max(abs(a) for a, _ in first), 1e-8 * t)
    rep.timed("sphere.quadratic_invisibility_second", "t''(0) = 2 v_i^2",
              lambda: max(abs(b - 2 * v * v) for (_, b), v in zip(first, vs)), 1e-4 * t)

    def retract():
        worst = 0.0
        for _ in range(100):
            x = sphere.random_sphere_point(rng, 5)
            v = sphere.tangent_project(x, rng.standard_normal(5))
            worst = max(worst, abs(float(np.sum(sphere.sphere_retract(x, v, 0.3) ** 2)) - 1), abs(float(x @ v)))
        return worst
    rep.timed("sphere.retraction_and_projection", "sum x_i^2 = 1, x . v = 0", retract, 1e-12 * t)


# -- milnor ------------------------------------------------------------------

def _ambient(rng, point, extra=3, max_index=10):
    free = [i for i in range(max_index) if i not in point.support]
    add = rng.choice(free, size=int(rng.integers(0, extra + 1)), replace=False).tolist()
    return sorted(set(point.support) | set(add))


def suite_milnor(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "milnor")
    t = cfg.tol
    dim_errors, kernel_vals, min_eigs = 0, 0.0, np.inf
    for spec in FAMILY_SPECS:
        for _ in range(10):
            p = milnor.random_point(spec, rng)
            I = _ambient(rng, p)
            K = milnor.kernel_basis(p, I)
            T = milnor.tangent_basis(p, I)
            d = spec.dim
            dim_errors += len(K) != (len(I) - len(p.support)) * d
            dim_errors += len(T) != (len(I) - 1) + len(p.support) * d
            for k in K:
                for w in T[:4] + K[:2]:
                    kernel_vals = max(kernel_vals, abs(milnor.metric_eval(p, k, w)), abs(milnor.metric_eval(p, w, k)))
            Gm = np.array([[milnor.metric_eval(p, a, b) for b in T] for a in T])
            min_eigs = min(min_eigs, float(np.linalg.eigvalsh(Gm).min()))
    rep.timed("milnor.kernel_dimension", "dim K = (|I| - |J|) dim g", lambda: dim_errors, 0, EQ)
    rep.timed("milnor.kernel_vanishing", "g(K, .) = 0", lambda: kernel_vals, 1e-12 * t)
    rep.timed("milnor.horizontal_definite", "g > 0 on the stratum tangent", lambda: min_eigs, 0.0, GT)

    def example():
        so3 = FAMILY_SPECS[1]
        p = milnor.MilnorPoint(so3, (0,), (1.0,), (np.eye(3),))
        X = np.zeros((3, 3))
        X[0, 1], X[1, 0] = 1.0, -1.0
        u = milnor.MilnorTangent(p, (0, 1), np.array([0.0, 1.0]), {0: X})
        return abs(milnor.metric_eval(p, u, u) - 3.0)
    rep.timed("milnor.energy_example", "E = sum v_i^2 + sum x_j^2 |xi_j|^2", example, 1e-14 * t)

    def contraction():
        bad = 0.0
        dmin = np.inf
        for spec in FAMILY_SPECS:
            for _ in range(5):
                p = milnor.random_point(spec, rng)
                bad += not milnor.shift_contraction(p, 0.0, 1).equals(p)
                bad += not milnor.shift_contraction(p, 1.0, 2).equals(milnor.base_point(spec))
        for _ in range(10_000):
            p = milnor.random_point(FAMILY_SPECS[_ % 4], rng)
            dmin = min(dmin, milnor.contraction_denominator(p, float(rng.uniform()), int(rng.integers(1, 3))))
        return bad, dmin
    bad, dmin = contraction()
    rep.timed("milnor.contraction_endpoints", "H_0 = id, stage-2 endpoint = base point", lambda: bad, 0, EQ)
    rep.timed("milnor.contraction_denominator", "|(1-t) x + t S x| > 0", lambda: dmin, 0.0, GT)

    def roundtrip():
        bad = 0
        for spec in FAMILY_SPECS:
            p = milnor.random_point(spec, rng)
            bad += not milnor.loads(milnor.dumps(p)).equals(p)
        return bad
    rep.timed("milnor.text_roundtrip", "loads(dumps(p)) = p", roundtrip, 0, EQ)


# -- metric ------------------------------------------------------------------

def _s3_metric():
    ch = charts.s3_chart()
    return ch, chart.pullback_metric(ch.plot(), ch.kind, ch.scale)


def suite_metric(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "metric")
    t = cfg.tol
    ch, M = _s3_metric()
    plot = ch.plot()

    def round_metric():
        u = plot.samples()
        G = M(u)
        ref = np.zeros_like(G)
        ref[:, 0, 0] = 1.0
        ref[:, 1, 1] = np.cos(u[:, 0]) ** 2
        ref[:, 2, 2] = np.sin(u[:, 0]) ** 2
        return float(np.abs(G - ref).max())
    rep.timed("metric.s3_round_metric", "G = diag(1, cos^2, sin^2)", round_metric, 1e-8 * t)

    def one_parameter():
        su2 = charts.SU2
        X = liegroup.random_algebra(su2, rng)
        P = charts.single_node_plot(su2, lambda u: np.asarray([liegroup.group_exp(s * X) for s in u[..., 0].ravel()]
                                                           ).reshape(u.shape[:-1] + (2, 2)), 1)
        G = chart.pullback_metric(P)(P.samples())
        return float(np.abs(G[:, 0, 0] - liegroup.inner_product(su2, IPK.RE_TRACE, X, X)).max())
    rep.timed("metric.one_parameter_subgroup", "G = <X, X> along exp(tX)", one_parameter, 1e-8 * t)

    def symmetry():
        P = charts.su2_two_node_plot(cfg.seed)
        G = chart.pullback_metric(P)(P.samples())
        return float(np.abs(G - np.swapaxes(G, -1, -2)).max())
    rep.timed("metric.symmetry", "G = G^T", symmetry, 1e-12 * t)

    def g_invariance():
        worst = 0.0
        P2 = charts.su2_two_node_plot(cfg.seed)
        for _ in range(20):
            worst = max(worst, chart.invariance_residual(plot, ch.kind, liegroup.random_group(charts.SO2, rng), ch.scale))
            worst = max(worst, chart.invariance_residual(P2, IPK.RE_TRACE, liegroup.random_group(charts.SU2, rng)))
        return worst
    rep.timed("metric.g_invariance", "(h p)^* g = p^* g", g_invariance, 1e-8 * t)

    def z2():
        return max(chart.invariance_residual(plot, ch.kind, -1, ch.scale),
                   chart.invariance_residual(charts.su2_two_node_plot(cfg.seed), IPK.RE_TRACE, -1))
    rep.timed("metric.z2_invariance", "x -> -x preserves x_i^2, dx_i^2", z2, 1e-10 * t)

    def geodesics():
        worst, iters = 0.0, 0
        for _ in range(10):
            p = np.array([rng.uniform(0.4, 1.1), rng.uniform(-1, 1), rng.uniform(-1, 1)])
            q = np.array([rng.uniform(0.4, 1.1), rng.uniform(-1, 1), rng.uniform(-1, 1)])
            try:
                r = geodesic.geodesic(M, p, q, cfg.segments)
            except geodesic.GeodesicConvergenceError as exc:
                return np.inf, exc.iterations
            worst = max(worst, abs(r.length - charts.s3_distance(p, q)))
            iters = max(iters, r.iterations)
        return worst, iters
    g_err, g_it = geodesics()
    rep.timed("metric.geodesic_length", "length = arccos <P, Q>", lambda: g_err, 1e-3 * t)
    rep.timed("metric.geodesic_iterations", "energy minimization converges", lambda: g_it, geodesic.MAX_ITER, LE)

    def flat():
        F = chart.pullback_metric(charts.flat_torus_plot())
        r = geodesic.geodesic(F, [1.0, 1.0], [2.0, 3.0], 8)
        return abs(r.length - np.hypot(1.0, 2.0))
    rep.timed("metric.flat_geodesic", "straight segment on a flat chart", flat, 1e-6 * t)


# -- laplace -------------------------------------------------------------------

def laplace_points(rng, n=50):
    return np.column_stack([rng.uniform(0.3, 1.2, n), rng.uniform(-1, 1, n), rng.uniform(-np.pi, np.pi, n)])


def s3_test_function(u):
    return np.cos(u[..., 0]) * np.cos(u[..., 1])


def suite_laplace(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "laplace")
    t = cfg.tol
    ch, M = _s3_metric()
    h = cfg.laplace_h
    widen = max(1.0, (h / H0_LAPLACE) ** 2)
    pts = laplace_points(rng)

    def eigen():
        f = s3_test_function(pts)
        lap = chart.laplace_beltrami(M, s3_test_function, pts, h)
        return float(np.max(np.abs(lap + 3 * f) / np.abs(f)))
    rep.timed("laplace.s3_eigenfunction", "Delta f = -3 f for the first spherical harmonic", eigen, 1e-3 * t * widen)

    def decomposition():
        g = lambda u: np.sin(u[..., 0]) * np.cos(u[..., 2]) + np.sin(u[..., 1])  # noqa: E731
        return max(max(chart.warped_decomposition_residual(ch, s3_test_function, u) for u in pts[:10]),
                   max(chart.warped_decomposition_residual(ch, g, u) for u in pts[10:20]))
    rep.timed("laplace.warped_decomposition", "Delta = Delta_S + sum x_i^-2 Delta_G + L", decomposition, 1e-5 * t)

    def lower_term():
        f = lambda u: np.sin(2 * u[..., 0])  # noqa: E731
        th = pts[:10, 0]
        lower = np.array([chart.warped_laplacian_terms(ch, f, u)["lower"] for u in pts[:10]])
        return float(np.abs(lower - (1 / np.tan(th) - np.tan(th)) * 2 * np.cos(2 * th)).max())
    rep.timed("laplace.lower_order_term", "L = (cot - tan) d_theta", lower_term, 1e-5 * t)

    grid = forms.PeriodicGrid((32, 32), (2 * np.pi, 2 * np.pi))
    flat = chart.pullback_metric(charts.flat_torus_plot())
    fv = grid.sample(lambda u: np.sin(u[:, 0]) * np.cos(2 * u[:, 1]) + 0.3 * np.cos(u[:, 1]))

    def hodge():
        dd = forms.codifferential_1form(flat, grid, forms.grid_d0(grid) @ fv)
        return float(np.abs(dd + forms.grid_laplacian(fv, grid)).max())
    rep.timed("laplace.codifferential_hodge", "delta d f = -Delta f", hodge, 1e-6 * t)

    def adjoint():
        warped = chart.PulledMetric.from_function(
            lambda u: np.einsum("...,ab->...ab", 1.5 + np.sin(u[..., 0]) * np.cos(u[..., 1]), np.eye(2))
            + 0.3 * np.sin(u[..., 0] + u[..., 1])[..., None, None] * np.array([[0.0, 1.0], [1.0, 0.0]]), 2)
        return forms.adjointness_residual(warped, grid, rng.standard_normal(grid.size), rng.standard_normal(2 * grid.size))
    rep.timed("laplace.codifferential_adjoint", "<d f, a> = <f, delta a>", adjoint, 1e-12 * t)


# -- clifford ------------------------------------------------------------------

def suite_clifford(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "clifford")
    t = cfg.tol

    def relations():
        worst = 0.0
        for r in range(1, clifford.MAX_RANK + 1):
            worst = max(worst, clifford.gamma_generators(r).relation_residual())
            sig = rng.choice([-1, 1], size=r).tolist()
            worst = max(worst, clifford.gamma_generators(r, sig).relation_residual())
        return worst
    rep.timed("clifford.relation", "v w + w v = -2 g(v, w)", relations, 1e-12 * t)

    A = rng.standard_normal((4, 4))
    G = A @ A.T + 4 * np.eye(4)
    frame = clifford.orthonormal_frame(G)
    rep4 = clifford.gamma_generators(4)

    def independence():
        worst = 0.0
        for _ in range(100):
            other = clifford.rotated_frame(frame, clifford.random_orthogonal(rng, 4))
            worst = max(worst, clifford.frame_independence_residual(rep4, frame, other, rng.standard_normal(4)))
        return worst
    rep.timed("clifford.frame_independence", "sum_a A_ab A_ac = delta_bc", independence, 1e-10 * t)

    def symbol():
        worst = 0.0
        for _ in range(20):
            worst = max(worst, clifford.dirac_square_symbol_check(rep4, frame, rng.standard_normal(4)))
            v = rng.standard_normal(4)
            c = clifford.clifford_of_vector(rep4, frame, v)
            worst = max(worst, float(np.linalg.norm(c @ c + (v @ G @ v) * np.eye(rep4.size))))
        return worst
    rep.timed("clifford.symbol_square", "c(xi)^2 = -|xi|^2", symbol, 1e-10 * t)

    def warped():
        worst = 0.0
        for spec in (charts.SU2, FAMILY_SPECS[1]):
            for _ in range(5):
                p = milnor.random_point(spec, rng, max_support=3)
                if min(abs(x) for x in p.weights) < clifford.WEIGHT_GUARD:
                    continue
                worst = max(worst, clifford.warped_frame(p, ambient=_ambient(rng, p)).gram_residual())
        return worst
    rep.timed("clifford.warped_frame_gram", "f_a / x_i orthonormal", warped, 1e-8 * t)


# -- dirac ---------------------------------------------------------------------

def suite_dirac(cfg: RunConfig, rep: Report) -> None:
    t = cfg.tol
    op, ev = circle.circle_dirac(cfg.N)
    opt, evt = circle.circle_dirac(cfg.N, twisted=True)
    low = ev[np.abs(ev) <= 3.25]
    lowt = evt[np.abs(evt) <= 3.25]
    rep.timed("dirac.untwisted_integers", "spec(i d/dphi) = Z", lambda: float(np.abs(low - np.round(low)).max()), 1e-3 * t)
    rep.timed("dirac.twisted_half_integers", "spec on antiperiodic sections = Z + 1/2",
              lambda: float(np.abs(lowt - np.floor(lowt) - 0.5).max()), 1e-3 * t)
    rep.timed("dirac.twisted_gap", "twisted H^0 = 0", lambda: circle.spectral_gap(evt), 0.49, GE)
    rep.timed("dirac.untwisted_kernel", "constant mode", lambda: circle.kernel_dimension(ev), 1, EQ)
    rep.timed("dirac.twisted_kernel", "no antiperiodic constants", lambda: circle.kernel_dimension(evt), 0, EQ)
    rep.timed("dirac.hermitian", "D = D^*", lambda: max(op.hermitian_residual(), opt.hermitian_residual()), 1e-12 * t)


# -- chern ---------------------------------------------------------------------

def suite_chern(cfg: RunConfig, rep: Report) -> None:
    rng = _rng(cfg, "chern")
    t = cfg.tol
    hc = cfg.h_curvature

    def flatness():
        worst = 0.0
        for spec in (charts.SU2, FAMILY_SPECS[1]):
            A = rng.standard_normal((3, spec.dim, 3)) * 0.5

            def gmap(u, spec=spec, A=A):
                c = np.einsum("jdk,...k->...jd", A, u) + 0.2 * np.sin(u)[..., :, None]
                flat_c = c.reshape(-1, 3, spec.dim)
                out = np.empty((len(flat_c), spec.size, spec.size), dtype=spec.dtype)
                for n, cc in enumerate(flat_c):
                    g = np.eye(spec.size, dtype=spec.dtype)
                    for j in range(3):
                        g = g @ liegroup.group_exp(liegroup.from_coords(spec, cc[j]))
                    out[n] = g
                return out.reshape(c.shape[:-2] + (spec.size, spec.size))
            theta = connection.connection_form(charts.single_node_plot(spec, gmap, 3))
            for _ in range(3):
                u = rng.uniform(-0.5, 0.5, 3)
                worst = max(worst, float(np.abs(connection.curvature(theta, u, hc)).max()))
        return worst
    rep.timed("chern.maurer_cartan_flatness", "d theta + 1/2 [theta, theta] = 0", flatness, 1e-3 * t)

    poly = connection.polynomial_connection(charts.SU2, 3, rng)
    u0 = rng.uniform(-0.5, 0.5, 3)
    hs = (1e-2, 5e-3, 2.5e-3)
    res = [connection.bianchi_residual(poly, u0, h) for h in hs]
    rep.timed("chern.bianchi_ratio_1", "dF + [Theta ^ F] = 0", lambda: res[0] / res[1], (1.5, 4.5), RANGE)
    rep.timed("chern.bianchi_ratio_2", "dF + [Theta ^ F] = 0", lambda: res[1] / res[2], (1.5, 4.5), RANGE)
    rep.timed("chern.bianchi_scale", "dF + [Theta ^ F] = O(h)", lambda: max(r / h for r, h in zip(res, hs)), 10.0 * t)

    def trace():
        theta = connection.connection_form(charts.su2_two_node_plot(cfg.seed))
        return max(float(np.abs(connection.chern_form(theta, 1, rng.uniform(-0.5, 0.5, 3), hc)[0]).max())
                   for _ in range(3))
    rep.timed("chern.su2_trace", "tr F = 0 on su(n)", trace, 1e-8 * t)

    def closed():
        theta = connection.polynomial_connection(charts.SU2, 5, rng, scale=0.3)
        return connection.chern_form(theta, 2, rng.uniform(-0.3, 0.3, 5), hc)[1]
    rep.timed("chern.second_form_closed", "d tr(F ^ F) = 0", closed, 1e-3 * t)

    def abelian():
        theta = connection.polynomial_connection(charts.SO2, 3, rng)
        return connection.bianchi_residual(theta, rng.uniform(-0.5, 0.5, 3), hc)
    rep.timed("chern.abelian_bianchi", "dF = dd Theta = 0", abelian, 1e-3 * t)


# -- defect --------------------------------------------------------------------

DEFECT_N = 64


def suite_defect(cfg: RunConfig, rep: Report) -> None:
    t = cfg.tol
    L = circle.circle_laplacian(DEFECT_N)
    rep.timed("defect.rotation", "D(phi) = 0 for isometries", lambda: circle.defect_operator(L, circle.rotation_map(0.7))[1],
              1e-6 * t)
    rep.timed("defect.identity", "D(id) = 0", lambda: circle.defect_operator(L, lambda x: x)[1], 0.0, EQ)
    rep.timed("defect.grid_rotation", "D = 0 on grid rotations",
              lambda: circle.defect_operator(L, circle.rotation_map(2 * np.pi * 5 / DEFECT_N))[1], 0.0, EQ)
    rep.timed("defect.non_isometry", "phi^* D phi_* - D != 0",
              lambda: circle.defect_operator(L, lambda x: x + 0.3 * np.sin(x))[1], 0.1, GT)
    rep.timed("defect.infinitesimal_killing", "[L_X, D] = 0 for Killing X",
              lambda: circle.infinitesimal_defect(L, np.ones_like)[1], 1e-5 * t)
    C, n = circle.infinitesimal_defect(L, np.sin)
    rep.timed("defect.infinitesimal_sine", "[L_X, D] != 0", lambda: n, 0.1, GT)

    def flow():
        FD = circle.flow_derivative_defect(L, circle.sine_flow)
        return float(np.linalg.norm(FD - C, 2) / n)
    rep.timed("defect.flow_derivative", "d/dt D(phi_t) = [L_X, D]", flow, 0.05 * t)


RUNNERS: dict[str, Callable[[RunConfig, Report], None]] = {
    "liegroup": suite_liegroup,
    "sphere": suite_sphere,
    "milnor": suite_milnor,
    "metric": suite_metric,
    "laplace": suite_laplace,
    "clifford": suite_clifford,
    "dirac": suite_dirac,
    "chern": suite_chern,
    "defect": suite_defect,
}


def run_verify(cfg: RunConfig) -> Report:
    rep = Report(cfg.target, cfg.seed)
    names = list(RUNNERS) if cfg.target == "all" else [cfg.target]
    for name in names:
        RUNNERS[name](cfg, rep)
    return rep
