"""Weight matrices for the figure of merit Tr(W F^-1).

The built-in family is W = a*I + b*(J - I) with a = 16[(N-1)alpha^2 + 1] and
b = 16[(N-2)alpha^2 + 2alpha]. Its principal square root has the same
"diagonal u, off-diagonal v" shape with u = 4 and v = 4*alpha, since squaring
such a matrix gives u1 = u^2 + (N-1)v^2 and v1 = 2uv + (N-2)v^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, InvalidAlpha, InvalidParams, NonHermitian, NotPSD
from .linalg import TOL_HERM, TOL_PSD, as_matrix, eigh, hermitian_check, mat_sqrt_psd


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    matrix: np.ndarray
    sqrt_matrix: np.ndarray
    provenance: Literal["closed_form", "spectral"]
    alpha: float | None = None  # set for the built-in family only

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def trace_sqrt(self) -> float:
        return float(np.real(np.trace(self.sqrt_matrix)))


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise InvalidAlpha(f"alpha must lie in the open interval (0, 1), got {alpha}")
    return alpha


def _check_n(n: int) -> int:
    if int(n) != n or n < 2:
        raise DimensionMismatch(f"weight family needs integer N >= 2, got {n}")
    return int(n)


def uniform_offdiag(n: int, diag: float, off: float) -> np.ndarray:
    """n x n matrix with ``diag`` on the diagonal and ``off`` everywhere else."""
    return off * np.ones((n, n)) + (diag - off) * np.eye(n)


def w_bar_coefficients(n: int, alpha: float) -> tuple[float, float]:
    n = _check_n(n)
    alpha = check_alpha(alpha)
    a = 16 * ((n - 1) * alpha**2 + 1)
    b = 16 * ((n - 2) * alpha**2 + 2 * alpha)
    return a, b


def square_coefficients(n: int, u: float, v: float) -> tuple[float, float]:
    """(u1, v1) of the square of the matrix with diagonal u and off-diagonal v."""
    return u * u + (n - 1) * v * v, 2 * u * v + (n - 2) * v * v


def weight_sqrt_closed_form(n: int, alpha: float) -> np.ndarray:
    n = _check_n(n)
    alpha = check_alpha(alpha)
    return uniform_offdiag(n, 4.0, 4.0 * alpha)


def build_w_bar(n: int, alpha: float) -> WeightMatrix:
    a, b = w_bar_coefficients(n, alpha)
    return WeightMatrix(
        matrix=uniform_offdiag(int(n), a, b),
        sqrt_matrix=weight_sqrt_closed_form(n, alpha),
        provenance="closed_form",
        alpha=float(alpha),
    )


def validate_psd_weight(m) -> WeightMatrix:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"weight matrix must be square, got {a.shape}")
    if not hermitian_check(a, TOL_HERM):
        raise NonHermitian("weight matrix is not symmetric")
    if np.max(np.abs(a.imag), initial=0.0) > TOL_HERM:
        raise InvalidParams("complex-valued weight matrices are not supported")
    lam = eigh(a).eigenvalues
    if lam[0] < -TOL_PSD:
        raise NotPSD(f"weight matrix has negative eigenvalue {lam[0]:.6g}")
    real = np.real((a + a.conj().T) / 2)
    return WeightMatrix(real, np.real(mat_sqrt_psd(real)), "spectral")


def identity_weight(n: int) -> WeightMatrix:
    eye = np.eye(n)
    return WeightMatrix(eye, eye.copy(), "closed_form")
