"""Differential forms on charts and the grid codifferential.

A p-form on a k-dimensional chart stores one coefficient per increasing
multi-index ``i_1 < ... < i_p`` (the order of ``itertools.combinations``),
so antisymmetry holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Callable

import numpy as np
import scipy.sparse as sp

from .chart import IndefiniteMetricError, PulledMetric

FORM_H = 1e-3


class DegreeError(ValueError):
    pass


@lru_cache(maxsize=None)
def multi_indices(k: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(k), p))


@lru_cache(maxsize=None)
def _position(k: int, p: int) -> dict:
    return {I: n for n, I in enumerate(multi_indices(k, p))}


@dataclass(frozen=True, eq=False)
class FormField:
    """A p-form ``u -> coefficients`` with coefficients of shape ``(..., C(k, p))``.

    Coefficients may be scalar (trailing shape ``()``) or carry extra value
    axes, e.g. matrix-valued forms with shape ``(..., C(k, p), m, m)``;
    ``value_shape`` records those trailing axes.
    """

    degree: int
    dim: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    value_shape: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= self.degree <= self.dim:
            raise DegreeError(f"degree {self.degree} impossible on a {self.dim}-dimensional chart")

    @property
    def size(self) -> int:
        return comb(self.dim, self.degree)

    def __call__(self, u) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(u, dtype=float)))

    @classmethod
    def function(cls, f: Callable, dim: int) -> "FormField":
        """Wrap a scalar field ``f(u)`` (vectorized over leading axes) as a 0-form."""
        return cls(0, dim, lambda u: np.asarray(f(u))[..., None])

    def component(self, *idx: int):
        """Coefficient of ``du^{i_1} ^ ... ^ du^{i_p}`` for any (not necessarily sorted) indices."""
        if len(idx) != self.degree:
            raise DegreeError("wrong number of indices")
        nv = len(self.value_shape)
        if len(set(idx)) < len(idx):
            return lambda u: 0.0 * self(u)[(Ellipsis, 0) + (slice(None),) * nv]
        sign = _permutation_sign(np.argsort(idx))
        key = (Ellipsis, _position(self.dim, self.degree)[tuple(sorted(idx))]) + (slice(None),) * nv
        return lambda u: sign * self(u)[key]


def _permutation_sign(perm) -> int:
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def exterior_derivative(form: FormField, u, h: float = FORM_H) -> np.ndarray:
    """Coefficients of ``d form`` at ``u``: ``(d w)_J = sum_j (-1)^j d_{J_j} w_{J \\ J_j}``."""
    p, k = form.degree, form.dim
    if p + 1 > k:
        raise DegreeError(f"d of a {p}-form vanishes identically on a {k}-dimensional chart")
    u = np.asarray(u, dtype=float)
    E = h * np.eye(k)
    wp = form(u[..., None, :] + E)          # (..., k, C(k,p), *value)
    wm = form(u[..., None, :] - E)
    dw = (wp - wm) / (2 * h)
    nv = len(form.value_shape)
    pos = _position(k, p)
    out = []
    for J in multi_indices(k, p + 1):
        acc = 0.0
        for j, a in enumerate(J):
            rest = J[:j] + J[j + 1:]
            term = dw[(Ellipsis, a, pos[rest]) + (slice(None),) * nv]
            acc = acc + term if j % 2 == 0 else acc - term
        out.append(acc)
    return np.stack(out, axis=-1 - nv)


def d(form: FormField, h: float = FORM_H) -> FormField:
    """The exterior derivative as a new (lazily evaluated) form field."""
    return FormField(form.degree + 1, form.dim, lambda u: exterior_derivative(form, u, h), form.value_shape)


def wedge(a: FormField, b: FormField) -> FormField:
    """Wedge product of scalar forms."""
    if a.dim != b.dim:
        raise DegreeError("forms live on different charts")
    k, p, q = a.dim, a.degree, b.degree
    if p + q > k:
        raise DegreeError("wedge degree exceeds chart dimension")
    pos = _position(k, p + q)
    terms = []
    for n, I in enumerate(multi_indices(k, p)):
        for m, J in enumerate(multi_indices(k, q)):
            if set(I) & set(J):
                continue
            K = I + J
            terms.append((n, m, pos[tuple(sorted(K))], _permutation_sign(np.argsort(K))))

    def ev(u):
        A, B = a(u), b(u)
        out = np.zeros(A.shape[:-1] + (comb(k, p + q),), dtype=np.result_type(A, B))
        for n, m, r, s in terms:
            out[..., r] += s * A[..., n] * B[..., m]
        return out

    return FormField(p + q, k, ev)


# -- periodic grids -------------------------------------------------------

@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid with ``shape[a]`` nodes along axis ``a`` of period ``lengths[a]``."""

    shape: tuple[int, ...]
    lengths: tuple[float, ...]

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def steps(self) -> np.ndarray:
        return np.asarray(self.lengths, float) / np.asarray(self.shape, float)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def points(self) -> np.ndarray:
        axes = [np.arange(n) * s for n, s in zip(self.shape, self.steps)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def sample(self, f: Callable) -> np.ndarray:
        return np.asarray(f(self.points()), dtype=float)


def _forward_difference(n: int, step: float) -> sp.csr_matrix:
    main = -np.ones(n)
    D = sp.diags([main, np.ones(n - 1)], [0, 1], shape=(n, n), format="lil")
    D[n - 1, 0] = 1.0
    return (D / step).tocsr()


def grid_d0(grid: PeriodicGrid) -> sp.csr_matrix:
    """Discrete d on functions: forward differences, stacked axis by axis (``k N x N``)."""
    blocks = []
    for a in range(grid.dim):
        mats = [sp.identity(n, format="csr") for n in grid.shape]
        mats[a] = _forward_difference(grid.shape[a], grid.steps[a])
        M = mats[0]
        for m in mats[1:]:
            M = sp.kron(M, m, format="csr")
        blocks.append(M)
    return sp.vstack(blocks, format="csr")


def _grid_masses(metric: PulledMetric, grid: PeriodicGrid):
    G = metric(grid.points())
    w = np.linalg.eigvalsh(G)
    if np.any(w <= 0):
        raise IndefiniteMetricError("codifferential needs a positive definite metric on the grid")
    vol = np.sqrt(np.linalg.det(G)) * float(np.prod(grid.steps))
    Ginv = np.linalg.inv(G)
    N, k = grid.size, grid.dim
    M0 = sp.diags(vol)
    # 1-form components are stored axis-major, so entry (a, node) sits at a * N + node
    rows, cols, vals = [], [], []
    nodes = np.arange(N)
    for a in range(k):
        for b in range(k):
            rows.append(a * N + nodes)
            cols.append(b * N + nodes)
            vals.append(vol * Ginv[:, a, b])
    M1 = sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(k * N, k * N))
    return M0, M1


def codifferential_1form(metric: PulledMetric, grid: PeriodicGrid, alpha: np.ndarray) -> np.ndarray:
    """``delta alpha = M0^{-1} D^T M1 alpha``, the adjoint of :func:`grid_d0`.

    ``alpha`` has shape ``(k, N)`` (or flat ``k N``). The inner products use the
    Riemannian density: ``<f, g> = sum sqrt|G| f g``, ``<a, b> = sum sqrt|G| G^{ab} a_a b_b``.
    """
    D = grid_d0(grid)
    M0, M1 = _grid_masses(metric, grid)
    a = np.asarray(alpha, dtype=float).ravel()
    return (D.T @ (M1 @ a)) / M0.diagonal()


def adjointness_residual(metric: PulledMetric, grid: PeriodicGrid, f: np.ndarray, alpha: np.ndarray) -> float:
    """``|<df, alpha> - <f, delta alpha>|`` relative to the size of the pairings."""
    D = grid_d0(grid)
    M0, M1 = _grid_masses(metric, grid)
    f = np.asarray(f, float).ravel()
    a = np.asarray(alpha, float).ravel()
    lhs = float((D @ f) @ (M1 @ a))
    rhs = float(f @ (M0 @ codifferential_1form(metric, grid, a)))
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def grid_laplacian(f: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """Flat (2k+1)-point Laplacian with periodic wrap, applied via array shifts."""
    F = np.asarray(f, float).reshape(grid.shape)
    out = np.zeros_like(F)
    for a, s in enumerate(grid.steps):
        out += (np.roll(F, -1, axis=a) - 2 * F + np.roll(F, 1, axis=a)) / (s * s)
    return out.ravel()
