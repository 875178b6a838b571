"""Clifford generators, orthonormal frames and the Clifford contraction.

Sign convention: ``c(v) c(w) + c(w) c(v) = -2 g(v, w)``, so every generator
along a positive axis squares to ``-Id``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .liegroup import InnerProductKind, LieGroupSpec, algebra_basis, gram_matrix
from .milnor import MilnorError, MilnorPoint, MilnorTangent, metric_eval

MAX_RANK = 10
RELATION_TOL = 1e-12
FRAME_TOL = 1e-8
WEIGHT_GUARD = 0.05

_PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
_PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
_ID2 = np.eye(2, dtype=complex)


class RankError(ValueError):
    pass


class FrameError(ValueError):
    """A frame is not orthonormal for the metric it is paired with."""


class FrameMismatchError(FrameError):
    """Two frames are not related by a (pseudo-)orthogonal change of basis."""


class WeightGuardError(MilnorError):
    """An active weight is below the guard; the 1/x rescaling is ill-conditioned."""


@dataclass(frozen=True, eq=False)
class CliffordRep:
    rank: int
    signature: tuple[int, ...]
    generators: np.ndarray          # (rank, s, s) complex

    @property
    def size(self) -> int:
        return self.generators.shape[-1]

    def relation_residual(self) -> float:
        """``max_{a,b} |g_a g_b + g_b g_a + 2 s_a delta_ab Id|``."""
        g = self.generators
        anti = np.einsum("aij,bjk->abik", g, g)
        anti = anti + np.swapaxes(anti, 0, 1)
        target = -2 * np.einsum("ab,ij->abij", np.diag(self.signature), np.eye(self.size))
        return float(np.abs(anti - target).max())

    def combine(self, coeffs) -> np.ndarray:
        return np.einsum("a,aij->ij", np.asarray(coeffs), self.generators)


def _kron(mats) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def _hermitian_generators(r: int) -> list[np.ndarray]:
    """Pairwise anticommuting Hermitian matrices squaring to ``Id`` (Jordan-Wigner strings)."""
    q = (r + 1) // 2
    out = []
    for a in range(r):
        j, pauli = divmod(a, 2)
        out.append(_kron([_PAULI_Z] * j + [_PAULI_X if pauli == 0 else _PAULI_Y] + [_ID2] * (q - j - 1)))
    return out


def gamma_generators(r: int, signature: Sequence[int] | None = None) -> CliffordRep:
    """Generators of size ``2^ceil(r/2)``: ``i sigma`` on positive axes, ``sigma`` on negative ones."""
    if not 1 <= r <= MAX_RANK:
        raise RankError(f"rank must lie in 1..{MAX_RANK}, got {r}")
    sig = tuple(int(s) for s in (signature if signature is not None else [1] * r))
    if len(sig) != r or any(s not in (1, -1) for s in sig):
        raise RankError("signature must be a list of r entries +-1")
    gens = [1j * e if s == 1 else e for e, s in zip(_hermitian_generators(r), sig)]
    return CliffordRep(r, sig, np.stack(gens))


# -- frames ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Frame:
    """Vectors ``e_a`` with an inner product ``pair``; orthonormal up to ``signature``."""

    vectors: list
    pair: Callable
    signature: tuple[int, ...]

    def gram(self) -> np.ndarray:
        e = self.vectors
        return np.array([[self.pair(a, b) for b in e] for a in e], dtype=float)

    def gram_residual(self) -> float:
        return float(np.abs(self.gram() - np.diag(self.signature)).max(initial=0.0))

    def coefficients(self, v) -> np.ndarray:
        """``v = sum_a c_a e_a`` with ``c_a = s_a <v, e_a>``."""
        return np.array([s * self.pair(v, e) for s, e in zip(self.signature, self.vectors)])


def matrix_pair(G) -> Callable:
    G = np.asarray(G, dtype=float)
    return lambda a, b: float(np.asarray(a) @ G @ np.asarray(b))


def orthonormal_frame(G, signature: Sequence[int] | None = None) -> Frame:
    """Orthonormal frame of a chart metric ``G``: columns of the inverse Cholesky factor."""
    G = np.asarray(G, dtype=float)
    k = G.shape[0]
    sig = tuple(signature) if signature is not None else (1,) * k
    if any(s != 1 for s in sig):
        w, V = np.linalg.eigh(G)
        order = np.argsort(-np.sign(w), kind="stable")
        w, V = w[order], V[:, order]
        vecs = [V[:, a] / np.sqrt(abs(w[a])) for a in range(k)]
        sig = tuple(int(np.sign(x)) for x in w)
    else:
        L = np.linalg.cholesky(G)
        E = np.linalg.inv(L).T
        vecs = [E[:, a] for a in range(k)]
    return Frame(vecs, matrix_pair(G), sig)


def rotated_frame(frame: Frame, A) -> Frame:
    """``e'_b = sum_a A_ba e_a`` for array-valued frames."""
    A = np.asarray(A, dtype=float)
    E = np.stack(frame.vectors)
    return Frame(list(A @ E), frame.pair, frame.signature)


def _require_orthonormal(frame: Frame) -> None:
    r = frame.gram_residual()
    if r > FRAME_TOL:
        raise FrameError(f"frame is not orthonormal (Gram residual {r:.2e})")


def clifford_of_vector(rep: CliffordRep, frame: Frame, v) -> np.ndarray:
    """``c(v) = sum_a c_a gamma_a`` where ``v = sum_a c_a e_a``."""
    if len(frame.vectors) != rep.rank:
        raise FrameError("frame length differs from the Clifford rank")
    if tuple(frame.signature) != rep.signature:
        raise FrameError("frame signature differs from the representation")
    _require_orthonormal(frame)
    return rep.combine(frame.coefficients(v))


def frame_contraction(rep: CliffordRep, reference: Frame, frame: Frame, xi) -> np.ndarray:
    """``sum_b s_b c(e'_b) xi(e'_b)`` with ``c`` read off in the ``reference`` frame.

    The signature weight ``s_b`` makes the sum invariant under every change of
    frame preserving ``diag(s)``; for a Riemannian frame it is identically 1.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.zeros((rep.size, rep.size), dtype=complex)
    for s, e in zip(frame.signature, frame.vectors):
        out += s * float(xi @ np.asarray(e)) * rep.combine(reference.coefficients(e))
    return out


def frame_independence_residual(rep: CliffordRep, frame_a: Frame, frame_b: Frame, xi) -> float:
    """``|sum_a s_a c(e_a) xi(e_a) - sum_a s_a c(e'_a) xi(e'_a)|_F`` for two orthonormal frames."""
    _require_orthonormal(frame_a)
    _require_orthonormal(frame_b)
    if len(frame_a.vectors) != len(frame_b.vectors) or frame_a.signature != frame_b.signature:
        raise FrameMismatchError("frames have different lengths or signatures")
    A = np.array([frame_a.coefficients(e) for e in frame_b.vectors])
    eta = np.diag(frame_a.signature)
    mismatch = float(np.abs(A @ eta @ A.T - eta).max())
    if mismatch > FRAME_TOL:
        raise FrameMismatchError(f"frames are not related by an orthogonal map (residual {mismatch:.2e})")
    Da = frame_contraction(rep, frame_a, frame_a, xi)
    Db = frame_contraction(rep, frame_a, frame_b, xi)
    return float(np.linalg.norm(Da - Db))


def dirac_square_symbol_check(rep: CliffordRep, frame: Frame, xi) -> float:
    """``|c(xi)^2 + |xi|^2 Id|_F`` with ``c(xi) = sum_a xi(e_a) gamma_a``."""
    _require_orthonormal(frame)
    xi = np.asarray(xi, dtype=float)
    comps = np.array([float(xi @ np.asarray(e)) for e in frame.vectors])
    c = rep.combine(comps)
    norm2 = float(np.sum(np.asarray(rep.signature) * comps ** 2))
    return float(np.linalg.norm(c @ c + norm2 * np.eye(rep.size)))


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


# -- warped frames ----------------------------------------------------------

def orthonormal_algebra_frame(spec: LieGroupSpec, kind: InnerProductKind | None = None) -> list[np.ndarray]:
    """Gram-Schmidt of the algebra basis for a positive definite inner product."""
    kind = kind or spec.default_kind()
    M = gram_matrix(spec, kind)
    if np.linalg.eigvalsh(M).min() <= 0:
        raise FrameError(f"{kind.name} is not positive definite on the algebra of {spec}")
    L = np.linalg.cholesky(M)
    C = np.linalg.inv(L).T                         # columns are orthonormal coordinate vectors
    B = np.asarray(algebra_basis(spec))
    return [np.einsum("d,dij->ij", C[:, a], B) for a in range(C.shape[1])]


def _sphere_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis of ``x^perp`` (rows)."""
    n = len(x)
    Q, _ = np.linalg.qr(np.column_stack([x, np.eye(n)]))
    return Q[:, 1:n].T


def warped_frame(point: MilnorPoint, ambient=None, algebra_frames: dict | None = None,
                 kind: InnerProductKind | None = None) -> Frame:
    """Orthonormal frame of the horizontal space: sphere directions plus ``f_a / x_i`` per active node."""
    spec = point.spec
    J = sorted(point.support)
    I = tuple(sorted(set(J) | set(ambient or ())))
    x_all = np.array([point.weight(i) for i in I])
    small = [j for j in J if abs(point.weight(j)) < WEIGHT_GUARD]
    if small:
        raise WeightGuardError(f"active weights below {WEIGHT_GUARD} at indices {small}")
    default = orthonormal_algebra_frame(spec, kind) if algebra_frames is None or len(algebra_frames) < len(J) else None
    vecs = []
    for row in _sphere_frame(x_all):
        vecs.append(MilnorTangent(point, I, row, {}))
    for j in J:
        frame_j = (algebra_frames or {}).get(j, default)
        for f in frame_j:
            vecs.append(MilnorTangent(point, I, np.zeros(len(I)), {j: f / point.weight(j)}))
    return Frame(vecs, lambda a, b: metric_eval(point, a, b, kind), (1,) * len(vecs))
