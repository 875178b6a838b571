"""Discrete geodesics by minimizing the polygonal energy of a chart curve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chart import IndefiniteMetricError, PulledMetric

MAX_ITER = 10_000
GRAD_TOL = 1e-8
METRIC_DERIV_H = 1e-3
ENERGY_NOISE = 1e-9


class GeodesicConvergenceError(RuntimeError):
    def __init__(self, iterations: int, grad_norm: float):
        super().__init__(f"geodesic solver did not converge after {iterations} iterations "
                         f"(gradient norm {grad_norm:.3e})")
        self.iterations = iterations
        self.grad_norm = grad_norm


@dataclass
class GeodesicResult:
    nodes: np.ndarray        # (segments + 1, k)
    length: float
    energy: float
    iterations: int
    grad_norm: float


def _metric_and_derivative(metric: PulledMetric, m: np.ndarray, h: float):
    k = m.shape[-1]
    E = h * np.eye(k)
    pts = np.concatenate([m[None], m[None] + E[:, None, :], m[None] - E[:, None, :]], axis=0)
    Gall = metric(pts.reshape(-1, k)).reshape(2 * k + 1, len(m), k, k)
    G = Gall[0]
    dG = (Gall[1:k + 1] - Gall[k + 1:]) / (2 * h)          # (c, seg, k, k)
    return G, np.moveaxis(dG, 0, 1)                          # (seg, c, k, k)


def discrete_energy(metric: PulledMetric, nodes: np.ndarray) -> float:
    n = len(nodes) - 1
    d = np.diff(nodes, axis=0)
    G = metric(0.5 * (nodes[1:] + nodes[:-1]))
    return float(n * np.einsum("sa,sab,sb->", d, G, d))


def curve_length(metric: PulledMetric, nodes: np.ndarray) -> float:
    d = np.diff(nodes, axis=0)
    G = metric(0.5 * (nodes[1:] + nodes[:-1]))
    return float(np.sqrt(np.maximum(np.einsum("sa,sab,sb->s", d, G, d), 0.0)).sum())


def _energy_and_gradient(metric, nodes, h):
    n = len(nodes) - 1
    d = np.diff(nodes, axis=0)
    mid = 0.5 * (nodes[1:] + nodes[:-1])
    G, dG = _metric_and_derivative(metric, mid, h)
    if np.any(np.linalg.eigvalsh(G) <= 0):
        raise IndefiniteMetricError("metric is not positive definite along the curve")
    energy = n * np.einsum("sa,sab,sb->", d, G, d)
    Gd = np.einsum("sab,sb->sa", G, d)
    quad = 0.5 * np.einsum("sa,scab,sb->sc", d, dG, d)   # half the midpoint derivative
    grad = n * (2 * Gd[:-1] + quad[:-1] - 2 * Gd[1:] + quad[1:])
    return float(energy), grad, G


def _frozen_hessian(G: np.ndarray, n: int) -> np.ndarray:
    """Hessian of the energy with the segment metrics held fixed (block tridiagonal)."""
    k = G.shape[-1]
    m = n - 1
    H = np.zeros((m * k, m * k))
    for j in range(m):
        H[j * k:(j + 1) * k, j * k:(j + 1) * k] = 2 * n * (G[j] + G[j + 1])
        if j + 1 < m:
            H[j * k:(j + 1) * k, (j + 1) * k:(j + 2) * k] = -2 * n * G[j + 1]
            H[(j + 1) * k:(j + 2) * k, j * k:(j + 1) * k] = -2 * n * G[j + 1]
    return H


def geodesic(metric: PulledMetric, p, q, segments: int = 32, max_iter: int = MAX_ITER,
             tol: float = GRAD_TOL, h: float = METRIC_DERIV_H) -> GeodesicResult:
    """Minimize ``n * sum_s d_s^T G(mid_s) d_s`` over polygons from ``p`` to ``q``.

    Descent directions are gradients preconditioned by the frozen-metric
    Hessian (a variable-metric gradient descent); each step uses
    backtracking line search on the energy. Endpoints are never moved.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if segments < 1:
        raise ValueError("need at least one segment")
    t = np.linspace(0.0, 1.0, segments + 1)[:, None]
    nodes = (1 - t) * p + t * q
    if np.array_equal(p, q) or segments == 1:
        return GeodesicResult(nodes, curve_length(metric, nodes), discrete_energy(metric, nodes), 0, 0.0)

    k = len(p)
    energy, grad, G = _energy_and_gradient(metric, nodes, h)
    gnorm = float(np.linalg.norm(grad))
    it = 0
    while gnorm > tol:
        if it >= max_iter:
            raise GeodesicConvergenceError(it, gnorm)
        H = _frozen_hessian(G, segments)
        step = -np.linalg.solve(H, grad.ravel()).reshape(-1, k)
        slope = float(np.sum(grad * step))
        if slope >= 0:          # preconditioner lost descent; fall back to the raw gradient
            step, slope = -grad, -gnorm ** 2
        alpha = 1.0
        while True:
            trial = nodes.copy()
            trial[1:-1] += alpha * step
            e_trial = discrete_energy(metric, trial)
            if e_trial <= energy + 1e-4 * alpha * slope:
                res = _energy_and_gradient(metric, trial, h)
                break
            if abs(e_trial - energy) <= ENERGY_NOISE * max(1.0, abs(energy)):
                # energy differences are at the noise floor of the pulled-back metric;
                # judge the step by the gradient instead
                res = _energy_and_gradient(metric, trial, h)
                if np.linalg.norm(res[1]) < gnorm:
                    break
            alpha *= 0.5
            if alpha < 1e-10:
                raise GeodesicConvergenceError(it, gnorm)
        nodes = trial
        energy, grad, G = res
        gnorm = float(np.linalg.norm(grad))
        it += 1
    return GeodesicResult(nodes, curve_length(metric, nodes), energy, it, gnorm)
