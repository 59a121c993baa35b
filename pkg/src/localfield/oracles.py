"""Fidelity-based finite-difference QFIM, used as an independent cross-check.

For a small field displacement delta*e the Bures expansion gives
F_Q(e, e) ~= 8 (1 - sqrt(fidelity)) / delta^2. Off-diagonal entries follow
from the diagonal ones by polarization along e_i + e_j.
"""

from __future__ import annotations

import numpy as np

from .hamiltonian import LocalHamiltonian, encode
from .states import DensityMatrix, PureState


def root_fidelity(a, b) -> float:
    """sqrt of the Uhlmann fidelity between two states of the same kind."""
    if isinstance(a, PureState):
        return float(abs(np.vdot(a.amplitudes, b.amplitudes)))
    return float(np.sum(np.linalg.svd(_psd_sqrt(a.matrix) @ _psd_sqrt(b.matrix), compute_uv=False)))


def _psd_sqrt(m: np.ndarray) -> np.ndarray:
    lam, v = np.linalg.eigh((m + m.conj().T) / 2)
    return (v * np.sqrt(np.clip(lam, 0, None))) @ v.conj().T


def _directional(probe, h: LocalHamiltonian, direction: np.ndarray, delta: float) -> float:
    lo = encode(h, -0.5 * delta * direction, probe)
    hi = encode(h, 0.5 * delta * direction, probe)
    return 8.0 * (1.0 - root_fidelity(lo, hi)) / delta**2


def fd_qfim(probe: PureState | DensityMatrix, h: LocalHamiltonian, delta: float = 1e-4) -> np.ndarray:
    n = h.n_sites
    eye = np.eye(n)
    diag = np.array([_directional(probe, h, eye[i], delta) for i in range(n)])
    f = np.diag(diag)
    for i in range(n):
        for j in range(i + 1, n):
            both = _directional(probe, h, eye[i] + eye[j], delta)
            f[i, j] = f[j, i] = (both - diag[i] - diag[j]) / 2
    return f
