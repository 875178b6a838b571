"""Spectral operators on the circle, the Z2 twist and defects of invariance.

Every operator lives on ``N`` equispaced nodes ``phi_j = 2 pi j / N``. An
operator is a translation-invariant stencil ``K(m)`` over offsets
``m = -N/2 .. N/2 - 1``. The twisted (antiperiodic) version takes the
antiperiodic spectral stencil and flips the sign of each entry whose
stencil reaches across the seam ``phi = 0 ~ 2 pi``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

MIN_N = 16
HERMITIAN_TOL = 1e-10
MAX_CONDITION = 1e8
PERIOD_TOL = 1e-9

PERIODIC = "periodic"
ANTIPERIODIC = "antiperiodic"


class CircleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    entries: np.ndarray
    boundary: str = PERIODIC
    name: str = "operator"

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @property
    def grid(self) -> np.ndarray:
        return circle_grid(self.size)

    @property
    def shift(self) -> float:
        return 0.5 if self.boundary == ANTIPERIODIC else 0.0

    def hermitian_residual(self) -> float:
        A = self.entries
        return float(np.abs(A - A.conj().T).max())

    def eigenvalues(self) -> np.ndarray:
        if self.hermitian_residual() <= HERMITIAN_TOL * max(1.0, np.abs(self.entries).max()):
            return np.sort(np.linalg.eigvalsh(self.entries))
        return np.sort_complex(np.linalg.eigvals(self.entries))


def circle_grid(N: int) -> np.ndarray:
    return 2 * np.pi * np.arange(N) / N


def _check_size(N: int) -> None:
    if N < MIN_N or N % 2:
        raise CircleError(f"N must be even and at least {MIN_N}, got {N}")


def _modes(N: int, shift: float) -> np.ndarray:
    # numpy's FFT ordering; the Nyquist mode sits at -N/2
    return np.fft.fftfreq(N, 1.0 / N) + shift


def _stencil(multiplier: np.ndarray, N: int, shift: float) -> np.ndarray:
    """``K(m) = (1/N) sum_k mult(k) exp(-i (k + shift) m h)`` for ``m = -N/2 .. N/2 - 1``."""
    m = np.arange(-N // 2, N // 2)
    k = _modes(N, shift)
    phase = np.exp(-1j * np.outer(m, k) * (2 * np.pi / N))
    return phase @ multiplier / N


def stencil_operator(multiplier: Callable[[np.ndarray], np.ndarray], N: int, twisted: bool = False,
                     name: str = "operator") -> OperatorMatrix:
    """Assemble ``A[i, j] = s_ij K(m_ij)`` with ``s_ij = -1`` on seam-crossing entries when twisted."""
    _check_size(N)
    shift = 0.5 if twisted else 0.0
    mult = multiplier(_modes(N, shift))
    K = _stencil(mult, N, shift)
    i = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    m = (j - i + N // 2) % N - N // 2
    A = K[m + N // 2]
    if twisted:
        crosses = (i + m < 0) | (i + m >= N)
        A = np.where(crosses, -A, A)
    if np.isrealobj(mult):
        A = 0.5 * (A + A.conj().T)      # real multiplier: Hermitian up to rounding, made exact
    return OperatorMatrix(A, ANTIPERIODIC if twisted else PERIODIC, name)


def circle_dirac(N: int, twisted: bool = False) -> tuple[OperatorMatrix, np.ndarray]:
    """``i d/dphi`` on periodic (``twisted=False``) or antiperiodic functions, with its sorted spectrum."""
    # i d/dphi e^{i k phi} = -k e^{i k phi}
    op = stencil_operator(lambda k: -k, N, twisted, "dirac-twisted" if twisted else "dirac")
    return op, op.eigenvalues()


def circle_laplacian(N: int, twisted: bool = False) -> OperatorMatrix:
    """``d^2/dphi^2`` (eigenvalues ``-k^2``)."""
    return stencil_operator(lambda k: -k * k, N, twisted, "laplacian-twisted" if twisted else "laplacian")


def derivative_matrix(N: int, boundary: str = PERIODIC) -> np.ndarray:
    """Exact derivative of the trigonometric interpolant on the same mode band as the operators."""
    return stencil_operator(lambda k: 1j * k, N, boundary == ANTIPERIODIC).entries


def spectral_gap(eigenvalues: np.ndarray) -> float:
    """Distance from 0 to the nearest eigenvalue."""
    return float(np.abs(np.real(eigenvalues)).min())


def kernel_dimension(eigenvalues: np.ndarray, threshold: float = 0.25) -> int:
    return int(np.sum(np.abs(np.real(eigenvalues)) < threshold))


def spectrum_csv(eigenvalues: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["eigenvalue"])
    for lam in np.sort(np.real(eigenvalues)):
        w.writerow([repr(float(lam))])
    return buf.getvalue()


# -- defects -------------------------------------------------------------------

def pullback_matrix(N: int, phi: Callable, boundary: str = PERIODIC) -> np.ndarray:
    """``(P f)_j = interp(f)(phi(phi_j))`` with the trigonometric interpolant.

    Grid rotations by multiples of ``2 pi / N`` give an exact permutation
    (with the twist sign when antiperiodic).
    """
    x = circle_grid(N)
    y = np.asarray(phi(x), dtype=float)
    period = float(phi(np.array([2 * np.pi]))[0] - phi(np.array([0.0]))[0])
    if abs(period - 2 * np.pi) > PERIOD_TOL:
        raise CircleError("phi must satisfy phi(theta + 2 pi) = phi(theta) + 2 pi")
    steps = np.diff(np.append(y, y[0] + 2 * np.pi))
    if np.any(steps <= 0):
        raise CircleError("phi is not strictly increasing on the grid")
    twisted = boundary == ANTIPERIODIC
    s = (y - x) * N / (2 * np.pi)
    r = np.round(s[0])
    if np.all(np.abs(s - r) < 1e-12):
        # grid rotation: y_j = phi_{j + r}
        P = np.zeros((N, N))
        tgt = np.arange(N) + int(r)
        cols = tgt % N
        sign = np.where(twisted, (-1.0) ** (tgt // N), 1.0)
        P[np.arange(N), cols] = sign
        return P
    k = _modes(N, 0.5 if twisted else 0.0)
    V = np.exp(1j * np.outer(y, k))                    # modes evaluated at phi(x)
    # (V(x))^{-1} is F/N up to the shifted phase
    Vx_inv = np.exp(-1j * np.outer(k, x)) / N
    return V @ Vx_inv


def _conjugate(P: np.ndarray, A: np.ndarray) -> np.ndarray:
    # P A P^{-1} via a solve against P^T
    return np.linalg.solve(P.T, (P @ A).T).T


def defect_operator(op: OperatorMatrix, phi: Callable, check: bool = True) -> tuple[np.ndarray, float]:
    """``P op P^{-1} - op`` and its spectral norm."""
    P = pullback_matrix(op.size, phi, op.boundary)
    if check:
        cond = np.linalg.cond(P)
        if not np.isfinite(cond) or cond > MAX_CONDITION:
            raise CircleError(f"pullback matrix is ill-conditioned (condition {cond:.2e})")
    if np.isrealobj(P) and np.allclose(np.abs(P).sum(axis=1), 1.0, atol=0, rtol=0):
        # signed permutation: the inverse is the transpose, no rounding
        D = P @ op.entries @ P.T - op.entries
    else:
        D = _conjugate(P, op.entries) - op.entries
    return D, float(np.linalg.norm(D, 2))


def lie_derivative_matrix(N: int, X, boundary: str = PERIODIC) -> np.ndarray:
    """``L_X = diag(X) d/dphi`` on functions."""
    Xv = np.asarray(X(circle_grid(N)) if callable(X) else X, dtype=float)
    return Xv[:, None] * derivative_matrix(N, boundary)


def infinitesimal_defect(op: OperatorMatrix, X) -> tuple[np.ndarray, float]:
    """``[L_X, op]`` and its spectral norm; ``X`` is a callable or its grid samples."""
    L = lie_derivative_matrix(op.size, X, op.boundary)
    C = L @ op.entries - op.entries @ L
    return C, float(np.linalg.norm(C, 2))


def sine_flow(t: float) -> Callable:
    """Time-``t`` flow of ``sin(phi) d/dphi``: ``tan(phi_t / 2) = e^t tan(phi / 2)``."""
    def phi(x):
        x = np.asarray(x, dtype=float)
        turns = np.floor((x + np.pi) / (2 * np.pi))
        y = x - 2 * np.pi * turns                          # in [-pi, pi)
        return 2 * np.arctan(np.exp(t) * np.tan(y / 2)) + 2 * np.pi * turns
    return phi


def rotation_map(a: float) -> Callable:
    return lambda x: np.asarray(x, dtype=float) + a


def flow_derivative_defect(op: OperatorMatrix, flow: Callable[[float], Callable], t: float = 1e-4) -> np.ndarray:
    """Central difference in ``t`` of the finite defect along a flow."""
    Dp, _ = defect_operator(op, flow(t), check=False)
    Dm, _ = defect_operator(op, flow(-t), check=False)
    return (Dp - Dm) / (2 * t)


def defect_report(description: str, norm: float, iso_tol: float = 1e-6) -> str:
    return json.dumps({"phi_description": description, "norm": norm, "iso_flag": bool(norm <= iso_tol)},
                      sort_keys=True)
