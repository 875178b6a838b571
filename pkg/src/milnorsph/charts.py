"""Ready-made charts used by the verification suites and demos."""

from __future__ import annotations

import numpy as np

from .chart import Plot, WarpedChart
from .liegroup import Family, InnerProductKind, LieGroupSpec, from_coords

SO2 = LieGroupSpec(Family.SPECIAL_ORTHOGONAL, 2)
SU2 = LieGroupSpec(Family.SPECIAL_UNITARY, 2)


def rotation(phi) -> np.ndarray:
    """``exp(phi (E_21 - E_12))`` broadcast over ``phi``."""
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def circle_point(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def s3_chart(lower=(0.1, -np.pi, -np.pi), upper=(np.pi / 2 - 0.1, np.pi, np.pi),
             resolution=(4, 4, 4)) -> WarpedChart:
    """``(theta, phi1, phi2) -> x = (cos theta, sin theta), g_i = R(phi_i)`` in SO(2)^2.

    With the trace form scaled by 1/2 this is the round unit 3-sphere,
    ``G = diag(1, cos^2 theta, sin^2 theta)``.
    """
    return WarpedChart(
        SO2, 1, lambda s: circle_point(s[..., 0]), (1, 1),
        (lambda p: rotation(p[..., 0]), lambda p: rotation(p[..., 0])),
        np.asarray(lower, float), np.asarray(upper, float),
        InnerProductKind.TRACE, 0.5, resolution=resolution,
    )


def s3_plot() -> Plot:
    return s3_chart().plot()


def s3_embedding(u) -> np.ndarray:
    """Ambient R^4 point of the S^3 chart."""
    u = np.asarray(u, dtype=float)
    th, p1, p2 = u[..., 0], u[..., 1], u[..., 2]
    return np.stack([np.cos(th) * np.cos(p1), np.cos(th) * np.sin(p1),
                     np.sin(th) * np.cos(p2), np.sin(th) * np.sin(p2)], axis=-1)


def s3_distance(p, q) -> float:
    return float(np.arccos(np.clip(s3_embedding(p) @ s3_embedding(q), -1.0, 1.0)))


def flat_torus_plot(lower=(0.0, 0.0), upper=(2 * np.pi, 2 * np.pi)) -> Plot:
    """Two nodes of weight ``1/sqrt 2`` with rotating SO(2) coordinates: the flat metric ``I``."""
    w = np.full(2, 1 / np.sqrt(2))

    def func(u):
        return np.broadcast_to(w, u.shape[:-1] + (2,)), np.stack([rotation(u[..., 0]), rotation(u[..., 1])], -3)

    return Plot(SO2, func, np.asarray(lower, float), np.asarray(upper, float), (6, 6), name="flat-torus")


def su2_exp_coords(c) -> np.ndarray:
    """``exp(c_1 B_1 + c_2 B_2 + c_3 B_3)`` in closed form for the su(2) basis."""
    c = np.asarray(c, dtype=float)
    X = from_coords(SU2, c)
    r = np.linalg.norm(c, axis=-1)[..., None, None]
    # basis elements square to -I, so X^2 = -r^2 I
    safe = np.where(r > 0, r, 1.0)
    coef = np.where(r > 0, np.sin(safe) / safe, 1.0)
    return np.cos(r) * np.eye(2) + coef * X


def su2_two_node_plot(seed: int = 0) -> Plot:
    """A 3-parameter plot into ``S_{0,1} x SU(2)^2`` with both nodes active."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((2, 3, 3)) * 0.6
    b = rng.standard_normal((2, 3)) * 0.3

    def func(u):
        th = 0.6 + 0.4 * np.sin(u[..., 0] + 0.3 * u[..., 1])
        x = circle_point(th)
        g = np.stack([su2_exp_coords(np.einsum("ij,...j->...i", A[i], u) + b[i]) for i in range(2)], -3)
        return x, g

    return Plot(SU2, func, np.full(3, -1.0), np.full(3, 1.0), (3, 3, 3), name="su2-two-node")


def single_node_plot(spec: LieGroupSpec, gmap, dim: int, lower=None, upper=None) -> Plot:
    """One active node (``x = 1``) whose group coordinate follows ``gmap``."""
    def func(u):
        return np.ones(u.shape[:-1] + (1,)), np.asarray(gmap(u))[..., None, :, :]

    lo = np.full(dim, -1.0) if lower is None else np.asarray(lower, float)
    hi = np.full(dim, 1.0) if upper is None else np.asarray(upper, float)
    return Plot(spec, func, lo, hi, (3,) * dim, name="single-node")
