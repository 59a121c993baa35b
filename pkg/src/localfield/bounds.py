"""Analytic bounds on Tr(W F^-1) and the residuals of their equality conditions."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DegenerateHamiltonian, DimensionMismatch, InvalidState
from .hamiltonian import LocalHamiltonian, eigen_extremes, embed_generator
from .linalg import as_matrix, eigh
from .qfim import Qfim, figure_of_merit, qfim_mixed, qfim_pure
from .states import DensityMatrix, PureState
from .weights import WeightMatrix, check_alpha

RECORD_KEYS = ("N", "alpha", "family", "bound", "achieved", "residual", "equality_residual", "gme")


@dataclass
class BoundReport:
    bound_value: float
    achieved_value: float
    residual: float
    equality_residual_norm: float
    metadata: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        """Flat record with the keys of :data:`RECORD_KEYS`."""
        meta = self.metadata
        return {
            "N": meta.get("N"),
            "alpha": meta.get("alpha"),
            "family": meta.get("family"),
            "bound": self.bound_value,
            "achieved": self.achieved_value,
            "residual": self.residual,
            "equality_residual": self.equality_residual_norm,
            "gme": meta.get("gme"),
        }

    def as_dict(self) -> dict:
        return asdict(self)


def gap_sum(h: LocalHamiltonian) -> float:
    """xi = sum_i (lambda_max^i - lambda_min^i)^2, the largest pure-state Tr(F)."""
    return float(sum((hi - lo) ** 2 for hi, lo in eigen_extremes(h)))


def theorem1_bound(w: WeightMatrix, h: LocalHamiltonian) -> float:
    """Probe-optimized lower bound Tr(W^(1/2))^2 / xi."""
    if w.n != h.n_sites:
        raise DimensionMismatch(f"weight is {w.n}x{w.n} but Hamiltonian has {h.n_sites} sites")
    xi = gap_sum(h)
    if xi <= 0:
        raise DegenerateHamiltonian("every local generator has zero spectral gap")
    return w.trace_sqrt() ** 2 / xi


def max_variance(generator) -> tuple[float, PureState]:
    """Largest variance of one generator and the state attaining it."""
    spec = eigh(generator)
    lam = spec.eigenvalues
    v = spec.eigenvectors
    value = float((lam[-1] - lam[0]) ** 2 / 4)
    chi = (v[:, -1] + v[:, 0]) / np.sqrt(2)
    if lam.size == 1:
        chi = v[:, 0]
    return value, PureState.normalized((lam.size,), chi)


def corollary1_residual(f, w: WeightMatrix) -> float:
    fm = np.real(as_matrix(f))
    root = np.real(w.sqrt_matrix)
    if fm.shape != root.shape:
        raise DimensionMismatch(f"QFIM shape {fm.shape} vs weight shape {root.shape}")
    scale = np.trace(fm) / np.trace(root)
    return float(np.max(np.abs(fm - scale * root)))


def product_bound(n: int, alpha: float) -> float:
    """Best figure of merit reachable with pure product probes, 4N[(N-1)alpha^2 + 1]."""
    if n < 2:
        raise DimensionMismatch(f"need N >= 2, got {n}")
    alpha = check_alpha(alpha)
    return 4 * n * ((n - 1) * alpha**2 + 1)


def r_factor(rho: DensityMatrix) -> float:
    eta = np.clip(np.linalg.eigvalsh(rho.matrix), 0.0, None)
    hi, lo = eta[-1], eta[0]
    return float((hi - lo) ** 2 / (hi + lo) ** 2)


def mixed_trace_bound(rho: DensityMatrix, h: LocalHamiltonian) -> tuple[float, float, float]:
    """(r, Tr F(rho), 4 r sum_i Var_rho(H_i)); the second never exceeds the third."""
    if not isinstance(rho, DensityMatrix):
        raise InvalidState(f"expected a DensityMatrix, got {type(rho).__name__}")
    r = r_factor(rho)
    lhs = qfim_mixed(rho, h).trace()
    m = rho.matrix
    total_var = 0.0
    for i in range(h.n_sites):
        g = embed_generator(h, i)
        mean = np.trace(m @ g).real
        total_var += np.trace(m @ g @ g).real - mean**2
    return r, float(lhs), float(4 * r * total_var)


def evaluate_probe(w: WeightMatrix, h: LocalHamiltonian, probe, family: str = "custom",
                   gme: bool | None = None) -> BoundReport:
    """Compare a probe's figure of merit against the probe-optimized bound."""
    if isinstance(probe, PureState):
        f: Qfim = qfim_pure(probe, h)
    else:
        f = qfim_mixed(probe, h)
    bound = theorem1_bound(w, h)
    achieved = figure_of_merit(w, f)
    return BoundReport(
        bound_value=bound,
        achieved_value=achieved,
        residual=achieved - bound,
        equality_residual_norm=corollary1_residual(f, w),
        metadata={"N": h.n_sites, "alpha": w.alpha, "family": family, "gme": gme},
    )
