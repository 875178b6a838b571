"""Matrix Lie groups O(n), SO(n), SU(n) and SO(1, n).

Group and algebra elements are plain numpy arrays; a :class:`LieGroupSpec`
carries everything needed to interpret them (family, size, defining form).
All metrics on a group are obtained by *left* translation of an inner
product on the algebra, and the Maurer-Cartan form is ``g^{-1} dg``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
import scipy.linalg

MEMBERSHIP_TOL = 1e-9


class Family(enum.Enum):
    ORTHOGONAL = "O"
    SPECIAL_ORTHOGONAL = "SO"
    SPECIAL_UNITARY = "SU"
    LORENTZ = "SO1n"


class InnerProductKind(enum.Enum):
    TRACE = "trace"            # -tr(XY)
    RE_TRACE = "re_trace"      # -Re tr(XY)
    KILLING = "killing"        # tr(ad_X ad_Y)
    CARTAN = "cartan"          # -kappa(X, theta Y), Lorentz only


class AlgebraError(ValueError):
    """Raised for inadmissible (group, inner product) combinations."""


@dataclass(frozen=True)
class LieGroupSpec:
    family: Family
    n: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"group size parameter must be a positive integer, got {self.n!r}")

    @classmethod
    def parse(cls, text: str) -> "LieGroupSpec":
        """Parse names such as ``"SO(3)"``, ``"SU(2)"``, ``"O(2)"`` or ``"SO(1,3)"``."""
        s = text.replace(" ", "").upper()
        if not s.endswith(")") or "(" not in s:
            raise ValueError(f"cannot parse group name {text!r}")
        head, args = s[:-1].split("(", 1)
        if head == "SO" and args.startswith("1,"):
            return cls(Family.LORENTZ, int(args[2:]))
        names = {"O": Family.ORTHOGONAL, "SO": Family.SPECIAL_ORTHOGONAL, "SU": Family.SPECIAL_UNITARY}
        if head not in names:
            raise ValueError(f"unknown group family {head!r}")
        return cls(names[head], int(args))

    def __str__(self) -> str:
        if self.family is Family.LORENTZ:
            return f"SO(1,{self.n})"
        return f"{self.family.value}({self.n})"

    @property
    def size(self) -> int:
        """Matrix size of group elements."""
        return self.n + 1 if self.family is Family.LORENTZ else self.n

    @property
    def is_complex(self) -> bool:
        return self.family is Family.SPECIAL_UNITARY

    @property
    def dtype(self):
        return np.complex128 if self.is_complex else np.float64

    @property
    def is_compact(self) -> bool:
        return self.family is not Family.LORENTZ

    @property
    def dim(self) -> int:
        n = self.n
        if self.family is Family.SPECIAL_UNITARY:
            return n * n - 1
        if self.family is Family.LORENTZ:
            return n * (n + 1) // 2
        return n * (n - 1) // 2

    @cached_property
    def eta(self) -> np.ndarray:
        """Defining quadratic form; the identity except for Lorentz."""
        d = np.ones(self.size)
        if self.family is Family.LORENTZ:
            d[0] = -1.0
        return np.diag(d)

    def identity(self) -> np.ndarray:
        return np.eye(self.size, dtype=self.dtype)

    def default_kind(self) -> InnerProductKind:
        if self.family is Family.LORENTZ:
            return InnerProductKind.CARTAN
        if self.family is Family.SPECIAL_UNITARY:
            return InnerProductKind.RE_TRACE
        return InnerProductKind.TRACE

    @cached_property
    def _basis(self) -> tuple:
        return tuple(_build_basis(self))

    @cached_property
    def _coord_map(self) -> np.ndarray:
        # pseudo-inverse of the real-flattened basis; maps flattened X to basis coordinates
        B = np.stack([_realify(b) for b in self._basis], axis=1) if self._basis else np.zeros((0, 0))
        return np.linalg.pinv(B) if B.size else B

    @cached_property
    def _killing_gram(self) -> np.ndarray:
        return _killing_gram(self)


def _unit(n: int, i: int, j: int, dtype=np.float64) -> np.ndarray:
    E = np.zeros((n, n), dtype=dtype)
    E[i, j] = 1
    return E


def _build_basis(spec: LieGroupSpec) -> list:
    n, m = spec.n, spec.size
    out = []
    if spec.family in (Family.ORTHOGONAL, Family.SPECIAL_ORTHOGONAL):
        for i in range(n):
            for j in range(i + 1, n):
                out.append(_unit(m, j, i) - _unit(m, i, j))
    elif spec.family is Family.SPECIAL_UNITARY:
        c = np.complex128
        for i in range(n):
            for j in range(i + 1, n):
                out.append(_unit(m, j, i, c) - _unit(m, i, j, c))
                out.append(1j * (_unit(m, i, j, c) + _unit(m, j, i, c)))
        for k in range(n - 1):
            out.append(1j * (_unit(m, k, k, c) - _unit(m, k + 1, k + 1, c)))
    else:
        for i in range(1, m):
            for j in range(i + 1, m):
                out.append(_unit(m, j, i) - _unit(m, i, j))
        for j in range(1, m):
            out.append(_unit(m, 0, j) + _unit(m, j, 0))
    return out


def _realify(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    if np.iscomplexobj(X):
        return np.concatenate([X.real.ravel(), X.imag.ravel()])
    return np.concatenate([X.ravel(), np.zeros(X.size)])


def algebra_basis(spec: LieGroupSpec) -> list:
    """Ordered basis of the Lie algebra of ``spec``.

    so(n): ``E_ji - E_ij`` for ``i < j``; su(n): the antisymmetric,
    imaginary-symmetric and imaginary-diagonal generators; so(1, n): spatial
    rotations followed by the boosts ``E_0j + E_j0``.
    """
    return [b.copy() for b in spec._basis]


def algebra_coords(spec: LieGroupSpec, X: np.ndarray) -> np.ndarray:
    """Real coordinates of ``X`` (shape ``(..., m, m)``) in :func:`algebra_basis`."""
    X = np.asarray(X)
    m = spec.size
    flat = X.reshape(X.shape[:-2] + (m * m,))
    if np.iscomplexobj(flat):
        z = np.concatenate([flat.real, flat.imag], axis=-1)
    else:
        z = np.concatenate([flat, np.zeros_like(flat)], axis=-1)
    return z @ spec._coord_map.T


def from_coords(spec: LieGroupSpec, c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    B = np.stack(spec._basis) if spec._basis else np.zeros((0, spec.size, spec.size), dtype=spec.dtype)
    return np.tensordot(c, B, axes=(-1, 0))


def bracket(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    return X @ Y - Y @ X


def algebra_residual(spec: LieGroupSpec, X: np.ndarray) -> float:
    """Frobenius residual of the algebra's defining relation."""
    X = np.asarray(X)
    if X.shape != (spec.size, spec.size):
        raise ValueError(f"expected a {spec.size}x{spec.size} matrix, got shape {X.shape}")
    if spec.family is Family.SPECIAL_UNITARY:
        return float(np.linalg.norm(X.conj().T + X) + abs(np.trace(X)))
    if np.iscomplexobj(X) and np.abs(X.imag).max(initial=0.0) > 0:
        return float(np.linalg.norm(X.imag) + algebra_residual(spec, X.real))
    X = np.real(X)
    eta = spec.eta
    return float(np.linalg.norm(X.T @ eta + eta @ X))


def group_residual(spec: LieGroupSpec, M: np.ndarray) -> float:
    """Frobenius residual of the group's defining relation (0 iff ``M`` is in the group)."""
    M = np.asarray(M)
    if M.shape != (spec.size, spec.size):
        raise ValueError(f"expected a {spec.size}x{spec.size} matrix, got shape {M.shape}")
    if spec.family is Family.SPECIAL_UNITARY:
        return float(np.linalg.norm(M.conj().T @ M - np.eye(spec.size)) + abs(np.linalg.det(M) - 1))
    res = 0.0
    if np.iscomplexobj(M):
        res += float(np.linalg.norm(M.imag))
        M = M.real
    eta = spec.eta
    res += float(np.linalg.norm(M.T @ eta @ M - eta))
    if spec.family is not Family.ORTHOGONAL:
        res += abs(float(np.linalg.det(M)) - 1.0)
    return res


def algebra_project(spec: LieGroupSpec, X: np.ndarray) -> np.ndarray:
    """Orthogonal (Frobenius) projection onto the algebra, batched over leading axes."""
    X = np.asarray(X)
    if spec.family is Family.SPECIAL_UNITARY:
        A = 0.5 * (X - np.conj(np.swapaxes(X, -1, -2)))
        tr = np.trace(A, axis1=-2, axis2=-1)[..., None, None] / spec.size
        return A - tr * np.eye(spec.size)
    eta = spec.eta
    # X^T eta + eta X = 0  <=>  eta X is antisymmetric
    Y = eta @ np.real(X)
    return eta @ (0.5 * (Y - np.swapaxes(Y, -1, -2)))


def in_algebra(spec: LieGroupSpec, X, tol: float = MEMBERSHIP_TOL) -> bool:
    return algebra_residual(spec, X) <= tol


def in_group(spec: LieGroupSpec, M, tol: float = MEMBERSHIP_TOL) -> bool:
    return group_residual(spec, M) <= tol


def group_exp(X: np.ndarray) -> np.ndarray:
    """Matrix exponential; ``exp(0)`` is exactly the identity."""
    X = np.asarray(X)
    if not np.any(X):
        return np.eye(X.shape[-1], dtype=X.dtype)
    return scipy.linalg.expm(X)


def random_algebra(spec: LieGroupSpec, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return from_coords(spec, scale * rng.standard_normal(spec.dim))


def random_group(spec: LieGroupSpec, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """A group element ``exp(X)`` for a random algebra element; O(n) also samples the reflection coset."""
    g = group_exp(random_algebra(spec, rng, scale))
    if spec.family is Family.ORTHOGONAL and rng.random() < 0.5:
        R = np.eye(spec.size)
        R[0, 0] = -1.0
        g = R @ g
    return g


def adjoint(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    return g @ X @ np.linalg.inv(g)


def ad_matrix(spec: LieGroupSpec, X: np.ndarray) -> np.ndarray:
    """Matrix of ``ad_X`` in the algebra basis (columns are coordinates of ``[X, B_k]``)."""
    cols = [algebra_coords(spec, bracket(X, B)) for B in spec._basis]
    return np.stack(cols, axis=1) if cols else np.zeros((0, 0))


def is_abelian(spec: LieGroupSpec) -> bool:
    B = spec._basis
    return all(np.allclose(bracket(B[i], B[j]), 0.0) for i in range(len(B)) for j in range(i + 1, len(B)))


def _killing_gram(spec: LieGroupSpec) -> np.ndarray:
    ads = [ad_matrix(spec, B) for B in spec._basis]
    d = len(ads)
    K = np.empty((d, d))
    for a in range(d):
        for b in range(d):
            K[a, b] = np.trace(ads[a] @ ads[b])
    return K


def cartan_involution(spec: LieGroupSpec, X: np.ndarray) -> np.ndarray:
    """``theta(X) = -X^T`` (equal to ``eta X eta`` on so(1, n)).

    Fixes the rotation subalgebra so(n) and negates the boosts. Note that
    ``-eta X^T eta`` would be the identity on so(1, n).
    """
    return -np.swapaxes(X, -1, -2)


def _check_kind(spec: LieGroupSpec, kind: InnerProductKind) -> None:
    if kind is InnerProductKind.CARTAN and spec.family is not Family.LORENTZ:
        raise AlgebraError("the Cartan inner product is only defined for SO(1,n)")
    if kind in (InnerProductKind.KILLING, InnerProductKind.CARTAN) and is_abelian(spec):
        raise AlgebraError(f"Killing form of the abelian algebra of {spec} vanishes identically")


def inner_product(spec: LieGroupSpec, kind: InnerProductKind, X, Y) -> np.ndarray | float:
    """Bilinear form ``kind`` on the algebra of ``spec``.

    Broadcasts over leading axes of ``X`` and ``Y`` (shape ``(..., m, m)``).
    The Killing form is evaluated through the ad-matrix Gram in the algebra
    basis, so it works for every family without closed-form shortcuts.
    """
    _check_kind(spec, kind)
    X = np.asarray(X)
    Y = np.asarray(Y)
    if kind is InnerProductKind.TRACE:
        val = -np.einsum("...ij,...ji->...", X, Y)
        val = val.real
    elif kind is InnerProductKind.RE_TRACE:
        val = -np.einsum("...ij,...ji->...", X, Y).real
    elif kind is InnerProductKind.KILLING:
        val = np.einsum("...a,ab,...b->...", algebra_coords(spec, X), spec._killing_gram, algebra_coords(spec, Y))
    else:
        thY = cartan_involution(spec, Y)
        val = -np.einsum("...a,ab,...b->...", algebra_coords(spec, X), spec._killing_gram, algebra_coords(spec, thY))
    return float(val) if np.ndim(val) == 0 else val


def gram_matrix(spec: LieGroupSpec, kind: InnerProductKind) -> np.ndarray:
    B = spec._basis
    return np.array([[inner_product(spec, kind, a, b) for b in B] for a in B])


def maurer_cartan(curve: Callable[[float], np.ndarray], t0: float, h: float = 1e-4) -> np.ndarray:
    """Left logarithmic derivative ``g(t0)^{-1} g'(t0)`` by a central difference."""
    g0 = np.asarray(curve(t0))
    dg = (np.asarray(curve(t0 + h)) - np.asarray(curve(t0 - h))) / (2.0 * h)
    if abs(np.linalg.det(g0)) < 1e-12:
        raise np.linalg.LinAlgError("curve value is singular; not a group element")
    return np.linalg.solve(g0, dg)
