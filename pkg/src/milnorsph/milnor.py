"""Sparse points of the spherical Milnor space and their tangent model.

A point is a finite list of ``(index, weight, group element)`` triples with
``sum weight^2 = 1``. Entries whose weight vanishes carry no information and
are removed by :func:`canonicalize`; a :class:`MilnorPoint` is always kept in
that canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .liegroup import (
    InnerProductKind,
    LieGroupSpec,
    algebra_basis,
    algebra_residual,
    group_residual,
    inner_product,
)

WEIGHT_TOL = 1e-9
NORM_TOL = 1e-10
RAW_NORM_TOL = 1e-6
CONSTRAINT_TOL = 1e-10
DENOMINATOR_GUARD = 1e-6


class MilnorError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MilnorPoint:
    spec: LieGroupSpec
    indices: tuple[int, ...]
    weights: np.ndarray
    groups: tuple[np.ndarray, ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        w.setflags(write=False)
        if len(self.indices) != len(w) or len(self.groups) != len(w):
            raise MilnorError("indices, weights and groups must have equal length")
        if len(w) == 0:
            raise MilnorError("a Milnor point needs at least one active entry")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise MilnorError("indices must be strictly increasing")
        if min(self.indices) < 0:
            raise MilnorError("indices must be natural numbers")
        if np.any(np.abs(w) <= WEIGHT_TOL):
            raise MilnorError("point is not canonical: it has a vanishing weight")
        if abs(float(w @ w) - 1.0) > NORM_TOL:
            raise MilnorError(f"weights are not unit norm (|x|^2 = {float(w @ w)!r})")
        for g in self.groups:
            if group_residual(self.spec, g) > 1e-8:
                raise MilnorError(f"group coordinate is not in {self.spec}")

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.indices)

    def weight(self, i: int) -> float:
        """Weight at index ``i`` (zero outside the support)."""
        try:
            return float(self.weights[self.indices.index(i)])
        except ValueError:
            return 0.0

    def group(self, i: int) -> np.ndarray:
        return self.groups[self.indices.index(i)]

    def entries(self) -> list[tuple[int, float, np.ndarray]]:
        return list(zip(self.indices, self.weights.tolist(), self.groups))

    def allclose(self, other: "MilnorPoint", atol: float = 1e-12) -> bool:
        return (
            self.spec == other.spec
            and self.indices == other.indices
            and np.allclose(self.weights, other.weights, rtol=0, atol=atol)
            and all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.groups, other.groups))
        )

    def equals(self, other: "MilnorPoint") -> bool:
        """Bitwise equality of all data."""
        return (
            self.spec == other.spec
            and self.indices == other.indices
            and np.array_equal(self.weights, other.weights)
            and all(np.array_equal(a, b) for a, b in zip(self.groups, other.groups))
        )


def canonicalize(entries: Iterable[tuple[int, float, np.ndarray]], spec: LieGroupSpec,
                 tol: float = WEIGHT_TOL) -> MilnorPoint:
    """Apply the vanishing-weight equivalence and renormalize."""
    raw = sorted(((int(i), float(x), np.asarray(g)) for i, x, g in entries), key=lambda e: e[0])
    idx = [e[0] for e in raw]
    if len(set(idx)) != len(idx):
        raise MilnorError("duplicate indices in raw point")
    norm2 = sum(x * x for _, x, _ in raw)
    if abs(norm2 - 1.0) > RAW_NORM_TOL:
        raise MilnorError(f"raw weights are not normalized (|x|^2 = {norm2!r})")
    kept = [e for e in raw if abs(e[1]) > tol]
    if not kept:
        raise MilnorError("all weights vanish; no valid point")
    w = np.array([e[1] for e in kept])
    if len(kept) < len(raw) or abs(float(w @ w) - 1.0) > NORM_TOL:
        w = w / np.linalg.norm(w)
    return MilnorPoint(spec, tuple(e[0] for e in kept), w, tuple(e[2] for e in kept))


def support(point: MilnorPoint) -> frozenset[int]:
    return point.support


@dataclass(frozen=True, eq=False)
class MilnorTangent:
    """Tangent vector at ``base`` inside the finite ambient chart ``ambient``.

    ``sphericals`` is aligned with ``ambient`` (sorted). ``groups`` maps active
    indices to algebra elements (left-trivialized group directions).
    """

    base: MilnorPoint
    ambient: tuple[int, ...]
    sphericals: np.ndarray
    groups: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.asarray(self.sphericals, dtype=float)
        object.__setattr__(self, "sphericals", s)
        if s.shape != (len(self.ambient),):
            raise MilnorError("spherical components must match the ambient index set")
        if not self.base.support <= set(self.ambient):
            raise MilnorError("ambient index set must contain the support")
        x = np.array([self.base.weight(i) for i in self.ambient])
        if abs(float(x @ s)) > CONSTRAINT_TOL * max(1.0, float(np.abs(s).max(initial=0.0))):
            raise MilnorError("spherical part violates sum_J x_j v_j = 0")
        for j, X in self.groups.items():
            if j not in self.base.support:
                raise MilnorError(f"group component at inactive index {j}")
            if algebra_residual(self.base.spec, X) > 1e-8:
                raise MilnorError("group component is not in the Lie algebra")

    def spherical(self, i: int) -> float:
        try:
            return float(self.sphericals[self.ambient.index(i)])
        except ValueError:
            return 0.0


def _check_ambient(point: MilnorPoint, ambient: Iterable[int]) -> tuple[int, ...]:
    I = tuple(sorted(set(int(i) for i in ambient)))
    if not point.support <= set(I):
        raise MilnorError(f"ambient set {I} does not contain the support {sorted(point.support)}")
    return I


def tangent_basis(point: MilnorPoint, ambient: Iterable[int]) -> list[MilnorTangent]:
    """Basis of the tangent space of the chart ``S_I x G^I`` modulo inactive group directions.

    Spherical vectors form an orthonormal basis of ``{v in R^I : sum_J x_j v_j = 0}``;
    group vectors are the algebra basis placed at each active index.
    """
    I = _check_ambient(point, ambient)
    x = np.array([point.weight(i) for i in I])
    null = scipy.linalg.null_space(x[None, :])
    out = []
    for k in range(null.shape[1]):
        v = null[:, k]
        v = v - (x @ v) * x
        out.append(MilnorTangent(point, I, v))
    zero = np.zeros(len(I))
    for j in point.indices:
        for X in algebra_basis(point.spec):
            out.append(MilnorTangent(point, I, zero, {j: X}))
    return out


def kernel_basis(point: MilnorPoint, ambient: Iterable[int]) -> list[tuple[int, np.ndarray]]:
    """Pure group directions at inactive indices; they span the kernel of the metric."""
    I = _check_ambient(point, ambient)
    B = algebra_basis(point.spec)
    return [(i, X) for i in I if i not in point.support for X in B]


def metric_eval(point: MilnorPoint, u, w, kind: InnerProductKind | None = None) -> float:
    """Polarized barycentric energy ``sum u_i w_i + sum_j x_j^2 <xi_j, eta_j>``.

    ``u`` and ``w`` are :class:`MilnorTangent` values or kernel generators
    ``(index, X)`` as returned by :func:`kernel_basis`.
    """
    kind = kind or point.spec.default_kind()
    su, gu = _split(point, u)
    sw, gw = _split(point, w)
    val = sum(a * sw.get(i, 0.0) for i, a in su.items())
    for j, X in gu.items():
        if j in gw:
            val += point.weight(j) ** 2 * inner_product(point.spec, kind, X, gw[j])
    return float(val)


def _split(point: MilnorPoint, t):
    if isinstance(t, MilnorTangent):
        if t.base is not point and not t.base.allclose(point):
            raise MilnorError("tangent vector is based at a different point")
        return dict(zip(t.ambient, t.sphericals.tolist())), t.groups
    i, X = t
    if i in point.support:
        raise MilnorError("kernel generators live at inactive indices only")
    return {}, {int(i): X}


def group_act(h: np.ndarray, point: MilnorPoint) -> MilnorPoint:
    if group_residual(point.spec, h) > 1e-8:
        raise MilnorError(f"acting element is not in {point.spec}")
    return MilnorPoint(point.spec, point.indices, point.weights, tuple(h @ g for g in point.groups))


def z2_act(eps: int, point: MilnorPoint) -> MilnorPoint:
    if eps not in (1, -1):
        raise MilnorError("Z2 acts through eps in {+1, -1}")
    return MilnorPoint(point.spec, point.indices, eps * point.weights, point.groups)


def embed_simplicial(t: Sequence[float], groups: Sequence[np.ndarray], spec: LieGroupSpec) -> MilnorPoint:
    """``(t_i, g_i) -> (sqrt(t_i), g_i)`` on indices ``0 .. len(t)-1``."""
    t = np.asarray(t, dtype=float)
    if len(t) != len(groups):
        raise MilnorError("t and groups must have the same length")
    if np.any(t < -1e-12):
        raise MilnorError("simplex coordinates must be nonnegative")
    x = np.sqrt(np.clip(t, 0.0, None))
    return canonicalize(zip(range(len(t)), x, groups), spec)


def base_point(spec: LieGroupSpec) -> MilnorPoint:
    return MilnorPoint(spec, (0,), np.array([1.0]), (spec.identity(),))


def shift(point: MilnorPoint) -> MilnorPoint:
    """Index shift ``i -> i + 1``; the freed slot 0 has weight zero."""
    return MilnorPoint(point.spec, tuple(i + 1 for i in point.indices), point.weights, point.groups)


def _combine(a: MilnorPoint, ca: float, b: MilnorPoint, cb: float) -> MilnorPoint:
    # weights ca*a + cb*b; where both are active the group of `a` is kept
    idx = sorted(a.support | b.support)
    w = np.array([ca * a.weight(i) + cb * b.weight(i) for i in idx])
    nrm = float(np.linalg.norm(w))
    if nrm < DENOMINATOR_GUARD:
        raise MilnorError(f"contraction denominator {nrm:.3e} below guard")
    groups = [a.group(i) if (i in a.support and ca != 0.0) else
              (b.group(i) if i in b.support else a.group(i)) for i in idx]
    return canonicalize(zip(idx, w / nrm, groups), a.spec)


def contraction_denominator(point: MilnorPoint, t: float, stage: int) -> float:
    if stage == 1:
        a, b = point, shift(point)
    else:
        a, b = shift(point), base_point(point.spec)
    idx = sorted(a.support | b.support)
    return float(np.linalg.norm([(1 - t) * a.weight(i) + t * b.weight(i) for i in idx]))


def shift_contraction(point: MilnorPoint, t: float, stage: int) -> MilnorPoint:
    """Two-stage contraction: stage 1 moves ``x`` to its shift, stage 2 moves the shift to ``e_0``.

    ``H1_t = ((1-t) x + t Sx) / |.|`` and ``H2_t = ((1-t) Sx + t e_0) / |.|``.
    Endpoints are returned exactly (``H1_0 = x``, ``H1_1 = H2_0 = Sx``,
    ``H2_1 = e_0``). Where both terms are active the group coordinate of the
    first term is kept.
    """
    if not 0.0 <= t <= 1.0:
        raise MilnorError("homotopy parameter must lie in [0, 1]")
    if stage not in (1, 2):
        raise MilnorError("stage must be 1 or 2")
    if stage == 1:
        if t == 0.0:
            return point
        if t == 1.0:
            return shift(point)
        return _combine(point, 1.0 - t, shift(point), t)
    if t == 0.0:
        return shift(point)
    if t == 1.0:
        return base_point(point.spec)
    return _combine(shift(point), 1.0 - t, base_point(point.spec), t)


def random_point(spec: LieGroupSpec, rng: np.random.Generator, max_support: int = 4,
                 max_index: int = 8) -> MilnorPoint:
    from .liegroup import random_group
    k = int(rng.integers(1, max_support + 1))
    idx = sorted(rng.choice(max_index, size=k, replace=False).tolist())
    x = rng.standard_normal(k)
    x = np.where(np.abs(x) < 0.05, 0.05, x)
    x = x / np.linalg.norm(x)
    return MilnorPoint(spec, tuple(idx), x, tuple(random_group(spec, rng) for _ in idx))


def dumps(point: MilnorPoint) -> str:
    """Text record: a ``# spec`` header then ``i x_i <row-major matrix entries>`` lines."""
    lines = [f"# spec {point.spec}"]
    for i, x, g in point.entries():
        vals = g.ravel()
        if point.spec.is_complex:
            cells = [repr(complex(z)) for z in vals]
        else:
            cells = [repr(float(z)) for z in np.real(vals)]
        lines.append(" ".join([str(i), repr(float(x))] + cells))
    return "\n".join(lines) + "\n"


def loads(text: str, spec: LieGroupSpec | None = None) -> MilnorPoint:
    entries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            head = line[1:].split()
            if head[:1] == ["spec"] and spec is None:
                spec = LieGroupSpec.parse("".join(head[1:]))
            continue
        if spec is None:
            raise MilnorError("group spec missing: no '# spec' header and none given")
        parts = line.split()
        m = spec.size
        if len(parts) != 2 + m * m:
            raise MilnorError(f"expected {2 + m * m} fields, got {len(parts)}: {line!r}")
        conv = complex if spec.is_complex else float
        g = np.array([conv(p) for p in parts[2:]]).reshape(m, m)
        entries.append((int(parts[0]), float(parts[1]), g))
    if spec is None:
        raise MilnorError("empty record")
    return canonicalize(entries, spec)
