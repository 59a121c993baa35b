"""Quantum Fisher information matrices for local-field encoding.

For commuting embedded generators the pure-state QFIM is four times the
covariance matrix of the generators on the probe; the mixed-state QFIM uses
the SLD eigenbasis formula with d_i rho = -i [H_i, rho].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DimensionMismatch, InvalidState, SingularQfim
from .hamiltonian import LocalHamiltonian, apply_generators, embed_generator
from .linalg import RANK_TOL, as_matrix, eigh
from .states import DensityMatrix, PureState

MIXED_CUTOFF = 1e-12
IMAG_DUST = 1e-10
SUPPORT_TOL = 1e-8

Policy = Literal["strict", "pseudo"]


@dataclass(frozen=True, eq=False)
class Qfim:
    matrix: np.ndarray  # real symmetric N x N
    probe_kind: Literal["pure", "mixed"]
    rank: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix))


def _numerical_rank(f: np.ndarray, rank_tol: float = RANK_TOL) -> int:
    lam = np.linalg.eigvalsh(f)
    if lam.size == 0 or lam[-1] <= 0:
        return 0
    return int(np.count_nonzero(lam > rank_tol * lam[-1]))


def _clean(f: np.ndarray, kind) -> Qfim:
    imag = np.max(np.abs(np.imag(f)), initial=0.0)
    if imag > IMAG_DUST:
        raise InvalidState(f"QFIM has imaginary part {imag:.3e}")
    f = np.real(f)
    f = (f + f.T) / 2
    return Qfim(f, kind, _numerical_rank(f))


def _check_dims(probe, h: LocalHamiltonian) -> None:
    if tuple(probe.site_dims) != h.site_dims:
        raise DimensionMismatch(f"probe dims {probe.site_dims} do not match Hamiltonian dims {h.site_dims}")


def pure_qfim_matrix(psi: np.ndarray, h: LocalHamiltonian) -> np.ndarray:
    """4 x covariance of the embedded generators on a normalized vector (unchecked)."""
    hv = apply_generators(h, psi)
    gram = hv.conj() @ hv.T  # <H_i H_j>
    mean = hv @ psi.conj()  # <H_i>
    return 4 * (gram - np.outer(mean, mean))


def qfim_pure(probe: PureState, h: LocalHamiltonian) -> Qfim:
    _check_dims(probe, h)
    return _clean(pure_qfim_matrix(probe.amplitudes, h), "pure")


def qfim_mixed(rho: DensityMatrix, h: LocalHamiltonian, cutoff: float = MIXED_CUTOFF) -> Qfim:
    if not isinstance(rho, DensityMatrix):
        raise InvalidState(f"expected a DensityMatrix, got {type(rho).__name__}")
    _check_dims(rho, h)
    spec = eigh(rho.matrix)
    eta = np.clip(spec.eigenvalues, 0.0, None)
    v = spec.eigenvectors
    m = rho.matrix
    derivs = []
    for g in h.embedded:
        d = -1j * (g @ m - m @ g)
        derivs.append(v.conj().T @ d @ v)
    denom = eta[:, None] + eta[None, :]
    mask = denom > cutoff
    weight = np.zeros_like(denom)
    weight[mask] = 2.0 / denom[mask]
    n = h.n_sites
    f = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            val = np.sum(weight * np.real(derivs[i] * derivs[j].T))
            f[i, j] = f[j, i] = val
    return _clean(f, "mixed")


def sld_pure(probe: PureState, h: LocalHamiltonian, i: int) -> np.ndarray:
    _check_dims(probe, h)
    psi = probe.amplitudes
    dpsi = -1j * (embed_generator(h, i) @ psi)
    return 2 * (np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj()))


def saturability_check(probe: PureState, h: LocalHamiltonian) -> float:
    """Largest |<psi|[L_i, L_j]|psi>| over site pairs; 0 for a single site."""
    _check_dims(probe, h)
    psi = probe.amplitudes
    slds = [sld_pure(probe, h, i) for i in range(h.n_sites)]
    worst = 0.0
    for i in range(h.n_sites):
        for j in range(i + 1, h.n_sites):
            comm = slds[i] @ slds[j] - slds[j] @ slds[i]
            worst = max(worst, abs(psi.conj() @ comm @ psi))
    return float(worst)


def figure_of_merit(w, f, policy: Policy = "pseudo", rank_tol: float = RANK_TOL,
                    support_tol: float = SUPPORT_TOL) -> float:
    """Tr(W F^-1).

    ``strict`` raises :class:`SingularQfim` when F is rank deficient. ``pseudo``
    uses the pseudo-inverse and returns +inf when W puts weight on a direction
    outside the support of F.
    """
    wm = as_matrix(w)
    fm = np.real(as_matrix(f))
    if wm.shape != fm.shape:
        raise DimensionMismatch(f"weight shape {wm.shape} vs QFIM shape {fm.shape}")
    lam, vec = np.linalg.eigh((fm + fm.T) / 2)
    lam_max = lam[-1] if lam.size else 0.0
    keep = lam > rank_tol * lam_max if lam_max > 0 else np.zeros(lam.shape, dtype=bool)
    if policy == "strict":
        if not keep.all():
            raise SingularQfim(f"QFIM rank {int(keep.sum())} < {fm.shape[0]}")
    elif policy != "pseudo":
        raise ValueError(f"unknown policy {policy!r}")
    if not keep.all():
        null = vec[:, ~keep]
        leak = np.max(np.abs(wm @ null), initial=0.0)
        if leak > support_tol * max(np.max(np.abs(wm)), np.finfo(float).tiny):
            return float("inf")
    kept = vec[:, keep]
    # Tr(W V diag(1/lam) V^T) = sum_k (v_k^T W v_k) / lam_k
    quad = np.einsum("ik,ij,jk->k", kept.conj(), wm, kept)
    return float(np.real(np.sum(quad / lam[keep])))
