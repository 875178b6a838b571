"""Plots into finite local models ``S_I x G^I`` and their pulled-back calculus.

Plot maps are vectorized: ``plot(u)`` with ``u`` of shape ``(..., k)``
returns ``x`` of shape ``(..., |I|)`` and group elements of shape
``(..., |I|, m, m)``. Every derivative is a central difference; samples
used for differentiation keep a margin of ``2h`` from the domain boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .liegroup import (
    InnerProductKind,
    LieGroupSpec,
    _check_kind,
    algebra_coords,
    gram_matrix,
)

PLOT_H = 1e-5
LAPLACE_H = 1e-3
DECOMPOSITION_H = 2e-4
PLOT_TOL = 1e-8
MAX_CONDITION = 1e12
WEIGHT_GUARD = 0.05


class ChartError(ValueError):
    pass


class IndefiniteMetricError(ChartError):
    """The pulled-back metric is not positive definite where it must be."""


@lru_cache(maxsize=None)
def _gram(spec: LieGroupSpec, kind: InnerProductKind) -> np.ndarray:
    return gram_matrix(spec, kind)


@dataclass(frozen=True, eq=False)
class Plot:
    """Smooth map from the box ``[lower, upper]`` into ``S_I x G^I``."""

    spec: LieGroupSpec
    func: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    lower: np.ndarray
    upper: np.ndarray
    resolution: tuple[int, ...] = ()
    h: float = PLOT_H
    name: str = "plot"

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lower, dtype=float))
        hi = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lo.shape != hi.shape or np.any(hi < lo):
            raise ChartError("plot domain must be a nonempty axis-aligned box")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        res = tuple(self.resolution) or (5,) * len(lo)
        if len(res) != len(lo):
            raise ChartError("one resolution per axis is required")
        object.__setattr__(self, "resolution", res)

    @property
    def dim(self) -> int:
        return len(self.lower)

    def __call__(self, u):
        x, g = self.func(np.asarray(u, dtype=float))
        return np.asarray(x, dtype=float), np.asarray(g)

    def samples(self, margin: float | None = None) -> np.ndarray:
        """Grid sample points (shape ``(N, k)``) kept ``margin`` inside the box."""
        margin = 2 * self.h if margin is None else margin
        axes = []
        for lo, hi, r in zip(self.lower, self.upper, self.resolution):
            a, b = lo + margin, hi - margin
            axes.append(np.array([(a + b) / 2]) if r == 1 or b <= a else np.linspace(a, b, r))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def validate(self, pts: np.ndarray | None = None) -> None:
        pts = self.samples() if pts is None else pts
        x, g = self(pts)
        nrm = np.abs(np.sum(x * x, axis=-1) - 1.0)
        if np.any(nrm > PLOT_TOL):
            raise ChartError(f"plot leaves the sphere (max |x|^2 - 1 = {nrm.max():.2e})")
        res = group_residuals(self.spec, g)
        if np.any(res > PLOT_TOL):
            raise ChartError(f"plot leaves {self.spec} (max group residual {res.max():.2e})")

    def transformed(self, transform) -> "Plot":
        """Image plot under ``h in G`` (left action on group coordinates) or ``eps = +-1``."""
        f = self.func
        if isinstance(transform, (int, np.integer)):
            if transform not in (1, -1):
                raise ChartError("Z2 transform must be +1 or -1")
            eps = float(transform)
            new = lambda u: (lambda xg: (eps * np.asarray(xg[0]), xg[1]))(f(u))  # noqa: E731
        else:
            hmat = np.asarray(transform)
            new = lambda u: (lambda xg: (xg[0], hmat @ np.asarray(xg[1])))(f(u))  # noqa: E731
        return Plot(self.spec, new, self.lower, self.upper, self.resolution, self.h, self.name + "'")


def group_residuals(spec: LieGroupSpec, g: np.ndarray) -> np.ndarray:
    """Vectorized group residual over leading axes."""
    eye = np.eye(spec.size)
    if spec.is_complex:
        gh = np.conj(np.swapaxes(g, -1, -2))
        r = np.linalg.norm(gh @ g - eye, axis=(-2, -1))
        return r + np.abs(np.linalg.det(g) - 1)
    g = np.real(g)
    eta = spec.eta
    r = np.linalg.norm(np.swapaxes(g, -1, -2) @ eta @ g - eta, axis=(-2, -1))
    if spec.family.value != "O":
        r = r + np.abs(np.linalg.det(g) - 1)
    return r


def _offsets(u: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    k = u.shape[-1]
    E = h * np.eye(k)
    up = u[..., None, :] + E
    dn = u[..., None, :] - E
    return up, dn


def plot_derivatives(plot: Plot, u: np.ndarray):
    """``x``, ``dx`` (``(..., k, n)``) and Maurer-Cartan pullbacks (``(..., k, n, m, m)``)."""
    u = np.asarray(u, dtype=float)
    h = plot.h
    x0, g0 = plot(u)
    up, dn = _offsets(u, h)
    xp, gp = plot(up)
    xm, gm = plot(dn)
    dx = (xp - xm) / (2 * h)
    dg = (gp - gm) / (2 * h)
    g0b = np.broadcast_to(g0[..., None, :, :, :], dg.shape)
    theta = np.linalg.solve(g0b, dg)
    return x0, dx, theta


@dataclass(frozen=True, eq=False)
class PulledMetric:
    """Evaluator ``u -> G(u)`` of a (pseudo-)metric on a chart, with provenance."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    dim: int
    plot: Plot | None = None
    kind: InnerProductKind | None = None
    scale: float = 1.0
    definite: bool = True

    def __call__(self, u) -> np.ndarray:
        G = self.evaluator(np.asarray(u, dtype=float))
        return 0.5 * (G + np.swapaxes(G, -1, -2))

    @classmethod
    def constant(cls, G) -> "PulledMetric":
        G = np.asarray(G, dtype=float)
        return cls(lambda u: np.broadcast_to(G, u.shape[:-1] + G.shape).copy(), G.shape[0])

    @classmethod
    def from_function(cls, fn, dim: int) -> "PulledMetric":
        return cls(fn, dim)


def pullback_metric(plot: Plot, kind: InnerProductKind | None = None, scale: float = 1.0) -> PulledMetric:
    """Pull back ``sum dx_i^2 + scale * sum x_i^2 <theta_i, theta_i>`` along ``plot``.

    ``scale`` rescales the group inner product (e.g. ``0.5`` with the trace
    form on so(2) gives unit-speed rotation angles).
    """
    spec = plot.spec
    kind = kind or spec.default_kind()
    _check_kind(spec, kind)
    plot.validate()
    M = _gram(spec, kind)

    def G(u):
        x, dx, theta = plot_derivatives(plot, u)
        sph = np.einsum("...ai,...bi->...ab", dx, dx)
        c = algebra_coords(spec, theta)                    # (..., k, n, d)
        grp = np.einsum("...i,...aip,pq,...biq->...ab", x * x, c, M, c)
        return sph + scale * grp

    # Killing is negative definite on compact algebras and indefinite on so(1, n)
    definite = kind is InnerProductKind.CARTAN or (spec.is_compact and kind is not InnerProductKind.KILLING)
    return PulledMetric(G, plot.dim, plot, kind, scale, definite)


def is_psd(G: np.ndarray, tol: float = 1e-10) -> bool:
    return bool(np.all(np.linalg.eigvalsh(G) >= -tol * max(1.0, np.abs(G).max())))


def invariance_residual(plot: Plot, kind: InnerProductKind | None, transform, scale: float = 1.0) -> float:
    """Sup over the plot samples of ``|G_transformed - G|_F``."""
    pts = plot.samples()
    G0 = pullback_metric(plot, kind, scale)(pts)
    G1 = pullback_metric(plot.transformed(transform), kind, scale)(pts)
    return float(np.linalg.norm(G1 - G0, axis=(-2, -1)).max())


def _require_definite(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w = np.linalg.eigvalsh(G)
    if np.any(w <= 0):
        raise IndefiniteMetricError("metric is not positive definite at an evaluation point")
    if np.any(w.max(axis=-1) / w.min(axis=-1) > MAX_CONDITION):
        raise IndefiniteMetricError("metric is numerically singular (condition number > 1e12)")
    return np.linalg.det(G), np.linalg.inv(G)


def _grad(f, u: np.ndarray, h: float) -> np.ndarray:
    up, dn = _offsets(u, h)
    return (np.asarray(f(up)) - np.asarray(f(dn))) / (2 * h)


def laplace_beltrami(metric: PulledMetric, f: Callable, u, h: float = LAPLACE_H):
    """Divergence-form Laplacian ``|G|^{-1/2} d_a(|G|^{1/2} G^{ab} d_b f)``.

    Sign convention: eigenfunctions satisfy ``Lap f = -lambda f`` with
    ``lambda >= 0``. ``f`` must accept arrays of points ``(..., k)``.
    """
    u = np.asarray(u, dtype=float)

    def flux(v):
        G = metric(v)
        det, inv = _require_definite(G)
        return np.sqrt(det)[..., None] * np.einsum("...ab,...b->...a", inv, _grad(f, v, h))

    up, dn = _offsets(u, h)
    Fp, Fm = flux(up), flux(dn)                # (..., k, k): axis a offset, component b
    div = np.einsum("...aa->...", Fp - Fm) / (2 * h)
    det0, _ = _require_definite(metric(u))
    return div / np.sqrt(det0)


@dataclass(frozen=True, eq=False)
class WarpedChart:
    """Product chart ``u = (s, phi_1, .., phi_n)`` on ``S_I x G^I``.

    ``sphere_map`` sends spherical coordinates ``s`` to ``x in S_I``;
    ``group_maps[i]`` sends the ``i``-th block of group coordinates to ``g_i``.
    """

    spec: LieGroupSpec
    sphere_dim: int
    sphere_map: Callable[[np.ndarray], np.ndarray]
    group_dims: tuple[int, ...]
    group_maps: tuple[Callable[[np.ndarray], np.ndarray], ...]
    lower: np.ndarray
    upper: np.ndarray
    kind: InnerProductKind | None = None
    scale: float = 1.0
    h: float = PLOT_H
    resolution: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return self.sphere_dim + sum(self.group_dims)

    def _blocks(self):
        out, start = [], self.sphere_dim
        for q in self.group_dims:
            out.append(slice(start, start + q))
            start += q
        return out

    def plot(self) -> Plot:
        p, blocks = self.sphere_dim, self._blocks()

        def func(u):
            x = self.sphere_map(u[..., :p])
            g = np.stack([gm(u[..., b]) for gm, b in zip(self.group_maps, blocks)], axis=-3)
            return x, g

        return Plot(self.spec, func, self.lower, self.upper, self.resolution, self.h, "warped")

    def sphere_metric(self) -> PulledMetric:
        p, spec = self.sphere_dim, self.spec
        n = len(self.group_maps)

        def func(s):
            eye = np.broadcast_to(spec.identity(), s.shape[:-1] + (n, spec.size, spec.size))
            return self.sphere_map(s), eye

        plot = Plot(spec, func, self.lower[:p], self.upper[:p], h=self.h)
        return pullback_metric(plot, self.kind, self.scale)

    def group_metric(self, i: int) -> PulledMetric:
        b = self._blocks()[i]
        gm = self.group_maps[i]

        def func(phi):
            return np.ones(phi.shape[:-1] + (1,)), gm(phi)[..., None, :, :]

        plot = Plot(self.spec, func, self.lower[b], self.upper[b], h=self.h)
        return pullback_metric(plot, self.kind, self.scale)


def warped_laplacian_terms(chart: WarpedChart, f: Callable, u, h: float = DECOMPOSITION_H) -> dict:
    """Direct Laplacian and the pieces ``Lap_S f``, ``x_i^-2 Lap_{G,i} f`` and ``L f`` at one point.

    ``L f = g_S^{ab} d_a log(sqrt|G| / sqrt|g_S|) d_b f`` with ``a, b``
    running over spherical axes only.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] != chart.dim:
        raise ChartError(f"expected a single point with {chart.dim} coordinates")
    p = chart.sphere_dim
    x = chart.sphere_map(u[:p])
    if np.any(np.abs(x) < WEIGHT_GUARD):
        raise ChartError("a spherical weight is below 0.05; the 1/x^2 terms are ill-conditioned")

    full = pullback_metric(chart.plot(), chart.kind, chart.scale)
    direct = float(laplace_beltrami(full, f, u, h))

    def restrict(sl):
        def g(v):
            w = np.array(np.broadcast_to(u, v.shape[:-1] + u.shape))
            w[..., sl] = v
            return f(w)
        return g

    sph = chart.sphere_metric()
    lap_s = float(laplace_beltrami(sph, restrict(slice(0, p)), u[:p], h))

    fiber = []
    for i, b in enumerate(chart._blocks()):
        lg = float(laplace_beltrami(chart.group_metric(i), restrict(b), u[b], h))
        fiber.append(lg / x[i] ** 2)

    def log_ratio(v):
        return 0.5 * np.log(np.linalg.det(full(v))) - 0.5 * np.log(np.linalg.det(sph(v[..., :p])))

    E = np.zeros((p, chart.dim))
    E[:, :p] = h * np.eye(p)
    dl = (log_ratio(u + E) - log_ratio(u - E)) / (2 * h)
    df = (f(u + E) - f(u - E)) / (2 * h)
    gS_inv = np.linalg.inv(sph(u[:p]))
    lower = float(dl @ gS_inv @ df)
    return {"direct": direct, "sphere": lap_s, "fiber": fiber, "lower": lower,
            "assembled": lap_s + sum(fiber) + lower}


def warped_decomposition_residual(chart: WarpedChart, f: Callable, u, h: float = DECOMPOSITION_H) -> float:
    """``|Lap f - (Lap_S f + sum_i x_i^-2 Lap_{G,i} f + L f)|`` at ``u``."""
    t = warped_laplacian_terms(chart, f, u, h)
    return abs(t["direct"] - t["assembled"])
