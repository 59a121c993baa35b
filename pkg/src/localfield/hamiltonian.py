"""Local encoding Hamiltonians sum_i h_i H_i and the unitary they generate.

Units: hbar = kappa = t = 1, so the encoding unitary is exp(-i sum_i h_i H_i)
and each field value h_i is the full parameter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, InvalidParams, NonHermitian
from .linalg import SIGMA_Z, TOL_HERM, as_matrix, eigh, hermitian_check
from .states import DensityMatrix, PureState


@dataclass(frozen=True, eq=False)
class LocalHamiltonian:
    site_dims: tuple[int, ...]
    generators: tuple[np.ndarray, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.site_dims)
        gens = tuple(as_matrix(g).copy() for g in self.generators)
        if len(dims) < 1:
            raise InvalidParams("a local Hamiltonian needs at least one site")
        if len(gens) != len(dims):
            raise DimensionMismatch(f"{len(gens)} generators for {len(dims)} sites")
        for i, (d, g) in enumerate(zip(dims, gens)):
            if g.shape != (d, d):
                raise DimensionMismatch(f"generator {i} has shape {g.shape}, site dim is {d}")
            if not hermitian_check(g, TOL_HERM):
                raise NonHermitian(f"generator {i} is not Hermitian")
            g.setflags(write=False)
        object.__setattr__(self, "site_dims", dims)
        object.__setattr__(self, "generators", gens)

    @property
    def n_sites(self) -> int:
        return len(self.site_dims)

    @property
    def dim(self) -> int:
        return int(np.prod(self.site_dims))

    def is_qubit_register(self) -> bool:
        return all(d == 2 for d in self.site_dims)

    @cached_property
    def embedded(self) -> np.ndarray:
        """Stack of full-space generators, shape (N, dim, dim)."""
        return np.stack([embed_generator(self, i) for i in range(self.n_sites)])

    @cached_property
    def embedded_diagonals(self) -> np.ndarray | None:
        """Diagonals of the embedded generators when every H_i is diagonal, else None."""
        if any(np.count_nonzero(g - np.diag(np.diag(g))) for g in self.generators):
            return None
        return np.stack([np.real(np.diagonal(e)) for e in self.embedded])


def pauli_z_hamiltonian(n: int) -> LocalHamiltonian:
    if n < 1:
        raise InvalidParams(f"need N >= 1 sites, got {n}")
    return LocalHamiltonian((2,) * n, (SIGMA_Z,) * n)


def apply_local(op: np.ndarray, vec: np.ndarray, site: int, site_dims) -> np.ndarray:
    """Apply a single-site operator to a state vector without building the full operator."""
    dims = tuple(site_dims)
    t = np.asarray(vec).reshape(dims)
    out = np.tensordot(op, t, axes=([1], [site]))
    return np.moveaxis(out, 0, site).reshape(-1)


def apply_generators(h: LocalHamiltonian, vec: np.ndarray) -> np.ndarray:
    """Rows are H_i |vec> for each site i."""
    diag = h.embedded_diagonals
    if diag is not None:
        return diag * vec
    if h.dim <= 256:
        return h.embedded @ vec
    return np.stack([apply_local(g, vec, i, h.site_dims) for i, g in enumerate(h.generators)])


def embed_generator(h: LocalHamiltonian, i: int) -> np.ndarray:
    if not 0 <= i < h.n_sites:
        raise IndexOutOfRange(f"site {i} out of range for {h.n_sites} sites")
    left = int(np.prod(h.site_dims[:i]))
    right = int(np.prod(h.site_dims[i + 1:]))
    return np.kron(np.kron(np.eye(left), h.generators[i]), np.eye(right))


def eigen_extremes(h: LocalHamiltonian) -> list[tuple[float, float]]:
    out = []
    for g in h.generators:
        lam = eigh(g).eigenvalues
        out.append((float(lam[-1]), float(lam[0])))
    return out


def site_unitaries(h: LocalHamiltonian, fields) -> list[np.ndarray]:
    values = np.asarray(fields, dtype=float).reshape(-1)
    if values.size != h.n_sites:
        raise DimensionMismatch(f"{values.size} field values for {h.n_sites} sites")
    out = []
    for hi, g in zip(values, h.generators):
        spec = eigh(g)
        v = spec.eigenvectors
        out.append((v * np.exp(-1j * hi * spec.eigenvalues)) @ v.conj().T)
    return out


def encode(h: LocalHamiltonian, fields, probe):
    """Apply exp(-i sum_i h_i H_i) to a pure or mixed probe."""
    if tuple(probe.site_dims) != h.site_dims:
        raise DimensionMismatch(f"probe dims {probe.site_dims} do not match Hamiltonian dims {h.site_dims}")
    us = site_unitaries(h, fields)
    if isinstance(probe, PureState):
        psi = probe.amplitudes
        for i, u in enumerate(us):
            psi = apply_local(u, psi, i, h.site_dims)
        return PureState.normalized(h.site_dims, psi)
    if isinstance(probe, DensityMatrix):
        n = h.n_sites
        t = probe.matrix.reshape(h.site_dims * 2)
        for i, u in enumerate(us):
            t = np.moveaxis(np.tensordot(u, t, axes=([1], [i])), 0, i)
            t = np.moveaxis(np.tensordot(u.conj(), t, axes=([1], [n + i])), 0, n + i)
        m = t.reshape(h.dim, h.dim)
        m = (m + m.conj().T) / 2
        return DensityMatrix(h.site_dims, m / np.trace(m).real)
    raise TypeError(f"unsupported probe type {type(probe).__name__}")
