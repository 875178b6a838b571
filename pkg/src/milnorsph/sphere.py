"""Coordinate spheres, simplices, the square map and the Fisher-Rao metric."""

from __future__ import annotations

import numpy as np

SPHERE_TOL = 1e-10
INTERIOR_THRESHOLD = 1e-8
H_FIRST = 1e-4
H_SECOND = 1e-3


class BoundaryError(ValueError):
    """A simplex point is too close to the boundary for the Fisher-Rao metric."""


def _vec(a) -> np.ndarray:
    return np.asarray(a, dtype=float)


def is_spherical(x, tol: float = SPHERE_TOL) -> bool:
    x = _vec(x)
    return abs(float(x @ x) - 1.0) <= tol


def is_simplex(t, tol: float = SPHERE_TOL) -> bool:
    t = _vec(t)
    return bool(np.all(t >= -1e-12)) and abs(float(t.sum()) - 1.0) <= tol


def tangent_project(x, w) -> np.ndarray:
    """Orthogonal projection of ``w`` onto ``T_x S = {v : x.v = 0}``."""
    x, w = _vec(x), _vec(w)
    if x.shape != w.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {w.shape}")
    v = w - (x @ w) * x
    # one extra sweep removes the rounding left by the first projection
    return v - (x @ v) * x


def sphere_retract(x, v, s: float) -> np.ndarray:
    """The normalized curve ``(x + s v) / |x + s v|``."""
    x, v = _vec(x), _vec(v)
    y = x + s * v
    nrm = np.linalg.norm(y)
    if nrm < 1e-12:
        raise ZeroDivisionError("x + s v vanishes; v is not tangent to the sphere at x")
    return y / nrm


def square_map(x) -> np.ndarray:
    return _vec(x) ** 2


def sqrt_lift(t) -> np.ndarray:
    """Nonnegative branch of the inverse of :func:`square_map`."""
    t = _vec(t)
    if np.any(t < -1e-12):
        raise ValueError("simplex coordinates must be nonnegative")
    return np.sqrt(np.clip(t, 0.0, None))


def fisher_rao_eval(t, a, b) -> float:
    """``sum_i a_i b_i / t_i`` at an interior simplex point."""
    t, a, b = _vec(t), _vec(a), _vec(b)
    if np.any(t < INTERIOR_THRESHOLD):
        raise BoundaryError("Fisher-Rao metric is singular at the boundary t_i = 0")
    return float(np.sum(a * b / t))


def fr_pullback_residual(x, v) -> float:
    """``|g_FR(dt, dt) - 4 |v|^2|`` with ``dt_i = 2 x_i v_i`` at ``t = x^2``."""
    x, v = _vec(x), _vec(v)
    if np.any(np.abs(x) < INTERIOR_THRESHOLD):
        raise BoundaryError("x must have no vanishing coordinate")
    dt = 2.0 * x * v
    return abs(fisher_rao_eval(square_map(x), dt, dt) - 4.0 * float(v @ v))


def quadratic_invisibility(v_i: float, h: float = H_SECOND) -> tuple[float, float]:
    """First and second central differences of ``s -> (s v_i)^2`` at ``s = 0``."""
    t = lambda s: (s * v_i) ** 2  # noqa: E731
    first = (t(h) - t(-h)) / (2.0 * h)
    second = (t(h) - 2.0 * t(0.0) + t(-h)) / (h * h)
    return first, second


def random_sphere_point(rng: np.random.Generator, dim: int, positive: bool = False) -> np.ndarray:
    x = rng.standard_normal(dim)
    if positive:
        x = np.abs(x) + 0.05
    return x / np.linalg.norm(x)
