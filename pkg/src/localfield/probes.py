"""Probe families and the pure-state genuine-multipartite-entanglement test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, InvalidParams, InvalidRank
from .linalg import kron_all
from .states import DensityMatrix, PureState

__all__ = [
    "PureState",
    "DensityMatrix",
    "GhzParams",
    "N3Params",
    "GmeResult",
    "ghz_probe",
    "product_probe",
    "parametric_n3_probe",
    "n3_interval",
    "haar_random_pure",
    "random_mixed",
    "bipartitions",
    "schmidt_coefficients",
    "gme_certify",
    "z_expectations",
    "zz_correlations",
]

GME_TOL = 1e-8


@dataclass(frozen=True)
class GhzParams:
    theta: float
    phi: float
    n: int


@dataclass(frozen=True)
class N3Params:
    """Three-qubit optimal family.

    ``phases`` are the relative phases of the basis states |001>, |010>, ...,
    |111> (computational index order 1..7); the |000> amplitude is real.
    An 8-entry sequence is also accepted, in which case entry 0 is the |000>
    phase and is removed as a global phase.
    """

    alpha: float
    chi: float
    phases: Sequence[float] = field(default=(0.0,) * 7)


def _qubit(theta: float, phi: float = 0.0) -> np.ndarray:
    return np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def ghz_probe(p: GhzParams) -> PureState:
    """(|psi>^N + e^{i phi} |psi_perp>^N)/sqrt(2) in the basis rotated by theta."""
    if p.n < 2:
        raise InvalidParams(f"GHZ probe needs N >= 2, got {p.n}")
    c, s = np.cos(p.theta / 2), np.sin(p.theta / 2)
    psi = np.array([c, s], dtype=complex)
    perp = np.array([-s, c], dtype=complex)
    amps = kron_all(*([psi] * p.n)) + np.exp(1j * p.phi) * kron_all(*([perp] * p.n))
    return PureState.normalized((2,) * p.n, amps)


def product_probe(angles: Sequence[tuple[float, float]]) -> PureState:
    if len(angles) < 1:
        raise InvalidParams("product probe needs at least one site")
    amps = kron_all(*(_qubit(t, f) for t, f in angles))
    return PureState.normalized((2,) * len(angles), amps)


def n3_interval(alpha: float) -> tuple[float, float]:
    """Allowed range of sin^2(chi) keeping every squared modulus nonnegative."""
    return alpha / 2, min((1 + 3 * alpha) / 4, (1 + alpha) / 4)


def parametric_n3_probe(p: N3Params) -> PureState:
    a = float(p.alpha)
    if not 0 < a < 1:
        raise InvalidParams(f"alpha must lie in (0, 1), got {a}")
    s2 = float(np.sin(p.chi) ** 2)
    weights = {
        "000": s2,
        "111": (1 + 3 * a) / 4 - s2,
        "one_up": (1 + a) / 4 - s2,  # |100>, |010>, |001>
        "two_up": s2 - a / 2,  # |011>, |101>, |110>
    }
    for name, w in weights.items():
        if w < -1e-12:
            raise InvalidParams(f"sin^2(chi)={s2:.6g} gives negative weight {w:.3e} on {name} for alpha={a}")
    phases = np.asarray(p.phases, dtype=float).reshape(-1)
    if phases.size == 8:
        phases = phases[1:] - phases[0]
    if phases.size != 7:
        raise InvalidParams(f"expected 7 (or 8) relative phases, got {phases.size}")
    mod2 = np.empty(8)
    for idx in range(8):
        ones = bin(idx).count("1")
        mod2[idx] = {0: weights["000"], 1: weights["one_up"], 2: weights["two_up"], 3: weights["111"]}[ones]
    mod2 = np.clip(mod2, 0.0, None)
    amps = np.sqrt(mod2) * np.exp(1j * np.concatenate([[0.0], phases]))
    return PureState.normalized((2, 2, 2), amps)


def haar_random_pure(site_dims, seed) -> PureState:
    dims = tuple(int(d) for d in site_dims)
    rng = np.random.default_rng(seed)
    d = int(np.prod(dims))
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState.normalized(dims, v)


def random_mixed(site_dims, rank: int, seed) -> DensityMatrix:
    dims = tuple(int(d) for d in site_dims)
    d = int(np.prod(dims))
    if not 1 <= rank <= d:
        raise InvalidRank(f"rank must be in [1, {d}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(dims, rho / np.trace(rho).real)


def bipartitions(n: int) -> list[tuple[int, ...]]:
    """Sides A (always containing site 0) of the 2^(n-1) - 1 nontrivial cuts, lexicographic."""
    rest = range(1, n)
    out = [(0,) + extra for k in range(n - 1) for extra in itertools.combinations(rest, k)]
    return sorted(out)


def schmidt_coefficients(state: PureState, side: Sequence[int]) -> np.ndarray:
    dims = state.site_dims
    side = list(side)
    other = [k for k in range(len(dims)) if k not in side]
    if not side or not other:
        raise DimensionMismatch(f"bipartition side {side} is not a proper subset of {len(dims)} sites")
    t = state.amplitudes.reshape(dims).transpose(side + other)
    da = int(np.prod([dims[k] for k in side]))
    return np.linalg.svd(t.reshape(da, -1), compute_uv=False)


class GmeResult(NamedTuple):
    is_gme: bool
    min_schmidt: list[float]  # second-largest Schmidt coefficient per bipartition


def gme_certify(s: PureState, tol: float = GME_TOL) -> GmeResult:
    if s.n_sites < 2:
        raise InvalidParams("GME needs at least two parties")
    seconds = []
    for side in bipartitions(s.n_sites):
        sv = schmidt_coefficients(s, side)
        seconds.append(float(sv[1]) if sv.size > 1 else 0.0)
    return GmeResult(all(x > tol for x in seconds), seconds)


def z_expectations(s: PureState) -> np.ndarray:
    """<sigma_z^i> for each qubit."""
    probs = np.abs(s.amplitudes) ** 2
    bits = _bit_table(s.n_sites)
    return (1 - 2 * bits).T @ probs


def zz_correlations(s: PureState) -> np.ndarray:
    """Matrix of <sigma_z^i sigma_z^j>; diagonal is 1."""
    probs = np.abs(s.amplitudes) ** 2
    z = 1 - 2 * _bit_table(s.n_sites)
    return (z * probs[:, None]).T @ z


def _bit_table(n: int) -> np.ndarray:
    idx = np.arange(2 ** n)
    return ((idx[:, None] >> (n - 1 - np.arange(n))) & 1).astype(float)
