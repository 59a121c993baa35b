"""Pure and mixed state carriers over a multipartite qudit register."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidState
from .linalg import TOL_HERM, TOL_PSD, hermitian_check, max_abs, partial_trace

NORM_TOL = 1e-12


def _dims(site_dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in site_dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatch(f"site dimensions must be a non-empty list of positive ints, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class PureState:
    site_dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _dims(self.site_dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise DimensionMismatch(f"{amps.size} amplitudes for site dims {dims}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidState(f"state norm {norm!r} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "site_dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, site_dims, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidState("cannot normalize the zero vector")
        return cls(tuple(site_dims), amps / norm)

    @property
    def n_sites(self) -> int:
        return len(self.site_dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        psi = self.amplitudes
        return DensityMatrix(self.site_dims, np.outer(psi, psi.conj()))

    def expectation(self, op) -> complex:
        psi = self.amplitudes
        return complex(psi.conj() @ (np.asarray(op) @ psi))

    def reduced(self, keep: int) -> np.ndarray:
        psi = self.amplitudes
        return partial_trace(np.outer(psi, psi.conj()), self.site_dims, keep)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    site_dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _dims(self.site_dims)
        m = np.asarray(self.matrix, dtype=complex)
        d = int(np.prod(dims))
        if m.shape != (d, d):
            raise DimensionMismatch(f"matrix shape {m.shape} does not match site dims {dims}")
        if not hermitian_check(m, TOL_HERM):
            raise InvalidState(f"density matrix not Hermitian (deviation {max_abs(m - m.conj().T):.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > NORM_TOL:
            raise InvalidState(f"trace {tr!r} differs from 1")
        lam_min = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
        if lam_min < -TOL_PSD:
            raise InvalidState(f"negative eigenvalue {lam_min:.3e}")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "site_dims", dims)
        object.__setattr__(self, "matrix", m)

    @property
    def n_sites(self) -> int:
        return len(self.site_dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        m = self.matrix
        return float(np.real(np.trace(m @ m)))

    def expectation(self, op) -> complex:
        return complex(np.trace(self.matrix @ np.asarray(op)))

    def reduced(self, keep: int) -> "DensityMatrix":
        sub = partial_trace(self.matrix, self.site_dims, keep)
        return DensityMatrix((self.site_dims[keep],), sub)
