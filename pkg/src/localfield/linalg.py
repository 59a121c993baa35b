"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128`` (or anything
``np.asarray`` accepts). All functions are pure; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, NonHermitian, NotPSD

TOL_HERM = 1e-10
TOL_ORTH = 1e-10
TOL_EIG = 1e-9
TOL_PSD = 1e-10
RANK_TOL = 1e-10

SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_matrix(m) -> np.ndarray:
    a = np.asarray(getattr(m, "matrix", m), dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def _check_square(a: np.ndarray) -> None:
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")


def hermitian_check(m, tol: float = TOL_HERM) -> bool:
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def max_abs(m) -> float:
    return float(np.max(np.abs(np.asarray(m)), initial=0.0))


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(*factors) -> np.ndarray:
    return reduce(np.kron, (np.asarray(f, dtype=complex) for f in factors))


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvectors stored as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real-positive
    idx = np.argmax(np.abs(vecs), axis=0)
    pivots = vecs[idx, np.arange(vecs.shape[1])]
    phases = np.where(np.abs(pivots) > 0, pivots / np.where(pivots == 0, 1, np.abs(pivots)), 1)
    return vecs / phases


def eigh(m, tol: float = TOL_HERM) -> Spectrum:
    a = as_matrix(m)
    _check_square(a)
    if not hermitian_check(a, tol):
        raise NonHermitian(f"matrix deviates from Hermitian by {max_abs(a - a.conj().T):.3e}")
    a = (a + a.conj().T) / 2
    vals, vecs = np.linalg.eigh(a)
    return Spectrum(vals, _fix_phases(vecs))


def partial_trace(rho, site_dims, keep: int) -> np.ndarray:
    """Reduced matrix on site ``keep`` (0-based), tracing out every other site."""
    a = as_matrix(rho)
    dims = [int(d) for d in site_dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"site dimensions must be positive, got {dims}")
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise DimensionMismatch(f"matrix shape {a.shape} does not match site dims {dims}")
    if not 0 <= keep < len(dims):
        raise IndexOutOfRange(f"site {keep} out of range for {len(dims)} sites")
    n = len(dims)
    t = a.reshape(dims + dims)
    row = list(range(n))
    col = [n + k for k in range(n)]
    for k in range(n):
        if k != keep:
            col[k] = row[k]
    return np.einsum(t, row + col, [keep, n + keep])


def mat_sqrt_psd(m, tol_psd: float = TOL_PSD) -> np.ndarray:
    spec = eigh(m)
    lam = spec.eigenvalues
    if lam.size and lam[0] < -tol_psd:
        raise NotPSD(f"minimum eigenvalue {lam[0]:.3e} below -{tol_psd:g}")
    root = np.sqrt(np.clip(lam, 0.0, None))
    v = spec.eigenvectors
    s = (v * root) @ v.conj().T
    return (s + s.conj().T) / 2


def pinv_psd(m, rank_tol: float = RANK_TOL, tol_psd: float = TOL_PSD) -> tuple[np.ndarray, int]:
    """Moore-Penrose pseudo-inverse of a PSD matrix and its numerical rank.

    Eigenvalues at or below ``rank_tol * lambda_max`` count as zero.
    """
    spec = eigh(m)
    lam = spec.eigenvalues
    if lam.size == 0:
        return np.zeros((0, 0), dtype=complex), 0
    lam_max = lam[-1]
    if lam[0] < -tol_psd * max(1.0, abs(lam_max)):
        raise NotPSD(f"minimum eigenvalue {lam[0]:.3e} is negative")
    keep = lam > rank_tol * lam_max if lam_max > 0 else np.zeros(lam.shape, dtype=bool)
    inv = np.zeros_like(lam)
    inv[keep] = 1.0 / lam[keep]
    v = spec.eigenvectors
    p = (v * inv) @ v.conj().T
    return (p + p.conj().T) / 2, int(np.count_nonzero(keep))


def null_projector(m, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Projector onto the numerical kernel of a PSD matrix."""
    spec = eigh(m)
    lam = spec.eigenvalues
    lam_max = lam[-1] if lam.size else 0.0
    if lam_max > 0:
        null = lam <= rank_tol * lam_max
    else:
        null = np.ones(lam.shape, dtype=bool)
    v = spec.eigenvectors[:, null]
    return v @ v.conj().T
