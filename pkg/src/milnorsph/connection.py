"""The barycentric connection form, its curvature and Chern-Weil forms."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb
from typing import Callable

import numpy as np

from .chart import ChartError, Plot, plot_derivatives
from .forms import FORM_H, DegreeError, FormField, _permutation_sign, exterior_derivative, multi_indices
from .liegroup import LieGroupSpec, algebra_basis, algebra_project

CURVATURE_H = 1e-3
ALGEBRA_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ConnectionField:
    """Algebra-valued 1-form: ``u -> Theta`` of shape ``(..., k, m, m)``."""

    spec: LieGroupSpec
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]

    def __call__(self, u) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(u, dtype=float)))

    def membership_residual(self, u) -> float:
        T = self(u)
        if self.spec.is_complex:
            herm = np.linalg.norm(T + np.conj(np.swapaxes(T, -1, -2)), axis=(-2, -1))
            tr = np.abs(np.trace(T, axis1=-2, axis2=-1))
            return float(np.max(herm + tr))
        eta = self.spec.eta
        skew = np.swapaxes(T, -1, -2) @ eta + eta @ T
        return float(np.max(np.linalg.norm(skew, axis=(-2, -1))))


def connection_form(plot: Plot) -> ConnectionField:
    """``Theta = sum_i x_i^2 g_i^{-1} dg_i`` along ``plot``.

    The finite-difference Maurer-Cartan values are projected onto the
    algebra, which removes rounding that would otherwise leak into traces.
    """
    plot.validate()

    def raw(u):
        x, _, theta = plot_derivatives(plot, u)           # theta: (..., k, n, m, m)
        return np.einsum("...i,...aipq->...apq", x * x, theta)

    res = ConnectionField(plot.spec, plot.dim, raw).membership_residual(plot.samples())
    if res > ALGEBRA_TOL:
        raise ChartError(f"connection form leaves the Lie algebra (residual {res:.2e})")
    return ConnectionField(plot.spec, plot.dim, lambda u: algebra_project(plot.spec, raw(u)))


def _commutator(A, B):
    return A @ B - B @ A


def curvature(theta: ConnectionField, u, h: float = CURVATURE_H) -> np.ndarray:
    """``F_ab = d_a Theta_b - d_b Theta_a + [Theta_a, Theta_b]``, shape ``(..., k, k, m, m)``."""
    k = theta.dim
    if k < 2:
        raise DegreeError("curvature needs a chart of dimension at least 2")
    u = np.asarray(u, dtype=float)
    E = h * np.eye(k)
    T = theta(u)
    dT = (theta(u[..., None, :] + E) - theta(u[..., None, :] - E)) / (2 * h)   # (..., a, b, m, m)
    F = dT - np.swapaxes(dT, -3, -4)
    return F + T[..., :, None, :, :] @ T[..., None, :, :, :] - T[..., None, :, :, :] @ T[..., :, None, :, :]


def bianchi_residual(theta: ConnectionField, u, h: float = CURVATURE_H) -> float:
    """Frobenius norm of ``dF + [Theta ^ F]`` over all index triples ``a < b < c``."""
    k = theta.dim
    if k < 3:
        raise DegreeError("the Bianchi check needs a chart of dimension at least 3")
    u = np.asarray(u, dtype=float)
    E = h * np.eye(k)
    T = theta(u)
    F = curvature(theta, u, h)
    dF = (curvature(theta, u + E, h) - curvature(theta, u - E, h)) / (2 * h)   # (c, a, b, m, m)
    total = 0.0
    for a, b, c in multi_indices(k, 3):
        r = dF[a, b, c] + dF[b, c, a] + dF[c, a, b]
        r = r + _commutator(T[a], F[b, c]) + _commutator(T[b], F[c, a]) + _commutator(T[c], F[a, b])
        total += float(np.linalg.norm(r) ** 2)
    return float(np.sqrt(total))


def _power_coefficients(F: np.ndarray, order: int) -> np.ndarray:
    """Coefficients of ``tr(F ^ ... ^ F)`` (``order`` factors) over increasing multi-indices."""
    k = F.shape[-3]
    out = np.zeros(F.shape[:-4] + (comb(k, 2 * order),), dtype=complex)
    scale = 1.0 / 2 ** order
    perms = [(p, _permutation_sign(p)) for p in permutations(range(2 * order))]
    for n, I in enumerate(multi_indices(k, 2 * order)):
        acc = 0.0
        for p, s in perms:
            J = [I[j] for j in p]
            M = F[..., J[0], J[1], :, :]
            for r in range(1, order):
                M = M @ F[..., J[2 * r], J[2 * r + 1], :, :]
            acc = acc + s * np.trace(M, axis1=-2, axis2=-1)
        out[..., n] = scale * acc
    return out


def chern_form(theta: ConnectionField, k: int, u, h: float = CURVATURE_H,
               closedness_h: float = FORM_H) -> tuple[np.ndarray, float | None]:
    """``tr(F^k)`` at ``u`` and the residual ``|d tr(F^k)|`` (``None`` if the chart is too small).

    Chern normalizations such as ``(i / 2 pi)^k / k!`` are left to callers.
    """
    if k < 1:
        raise DegreeError("k must be positive")
    if theta.dim < 2 * k:
        raise DegreeError(f"tr(F^{k}) needs a chart of dimension at least {2 * k}")
    form = FormField(2 * k, theta.dim, lambda v: _power_coefficients(curvature(theta, v, h), k))
    value = form(u)
    closed = None
    if theta.dim >= 2 * k + 1:
        closed = float(np.linalg.norm(exterior_derivative(form, u, closedness_h)))
    return value, closed


def polynomial_connection(spec: LieGroupSpec, dim: int, rng: np.random.Generator,
                          degree: int = 3, scale: float = 0.5) -> ConnectionField:
    """Random algebra-valued 1-form with polynomial coefficients of total degree ``degree``."""
    basis = np.asarray(algebra_basis(spec))
    monomials = [e for e in np.ndindex(*([degree + 1] * dim)) if sum(e) <= degree]
    C = rng.standard_normal((dim, len(monomials), len(basis))) * scale
    E = np.asarray(monomials, dtype=float)

    def ev(u):
        mono = np.prod(u[..., None, :] ** E, axis=-1)            # (..., M)
        coef = np.einsum("...m,amd->...ad", mono, C)
        return np.einsum("...ad,dpq->...apq", coef, basis)

    return ConnectionField(spec, dim, ev)
