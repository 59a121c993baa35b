"""Self-verification suite run by ``localfield verify``.

Each check evaluates one analytic claim at the requested (N, alpha, seed)
and reports a residual against a pinned tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import corollary1_residual, mixed_trace_bound, product_bound, theorem1_bound
from .hamiltonian import pauli_z_hamiltonian
from .linalg import mat_sqrt_psd
from .optimizer import OptimizationTask, minimize_fom
from .oracles import fd_qfim
from .probes import (
    GhzParams,
    N3Params,
    gme_certify,
    ghz_probe,
    haar_random_pure,
    n3_interval,
    parametric_n3_probe,
    product_probe,
    random_mixed,
)
from .qfim import figure_of_merit, qfim_mixed, qfim_pure, saturability_check
from .states import DensityMatrix
from .weights import build_w_bar, uniform_offdiag, weight_sqrt_closed_form

MAX_N = 6


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    expected: str
    residual: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name} {self.value:.6f} expected {self.expected} residual {self.residual:.3e} tol {self.tol:g} {status}"


def _close(name, value, target, tol, expected) -> CheckResult:
    res = abs(value - target)
    return CheckResult(name, bool(res <= tol), float(value), expected, float(res), tol)


def _at_most(name, value, limit, tol, expected) -> CheckResult:
    excess = value - limit
    return CheckResult(name, bool(excess <= tol), float(value), expected, float(max(excess, 0.0)), tol)


def _gme(name, state) -> CheckResult:
    res = gme_certify(state)
    weakest = min(res.min_schmidt)
    return CheckResult(name, res.is_gme, weakest, "> 1e-08 (second Schmidt coefficient, every cut)",
                       max(1e-8 - weakest, 0.0), 1e-8)


def _g(x: float) -> str:
    return format(x, "g")


def run_checks(n: int, alpha: float, seed: int = 0, samples: int = 50) -> list[CheckResult]:
    h = pauli_z_hamiltonian(n)
    w = build_w_bar(n, alpha)
    target = 4.0 * n
    out: list[CheckResult] = []
    add = out.append

    add(_close("theorem1_bound", theorem1_bound(w, h), target, 1e-10, f"{_g(target)} (4N)"))

    ghz = ghz_probe(GhzParams(np.arccos(np.sqrt(alpha)), np.pi / 2, n))
    f_ghz = qfim_pure(ghz, h)
    ideal = 4 * uniform_offdiag(n, 1.0, alpha)
    err = float(np.max(np.abs(f_ghz.matrix - ideal)))
    add(CheckResult("ghz_qfim", err <= 1e-9, err, "0 (4(I + alpha offdiag))", err, 1e-9))
    add(_close("ghz_fom", figure_of_merit(w, f_ghz), target, 1e-8, f"{_g(target)} (4N)"))
    add(_at_most("equality_residual_ghz", corollary1_residual(f_ghz, w), 0.0, 1e-9, "0"))
    plus = product_probe([(np.pi / 2, 0.0)] * n)
    f_plus = qfim_pure(plus, h)
    add(_close("equality_residual_plus", corollary1_residual(f_plus, w), 4 * alpha, 1e-9, f"{_g(4 * alpha)} (4 alpha)"))
    add(_gme("ghz_gme", ghz))

    pb = product_bound(n, alpha)
    prod = minimize_fom(OptimizationTask("product", w, h, restarts=4, seed=seed))
    add(_close("product_optimum", prod.best_value / pb, 1.0, 1e-5, f"{_g(pb)} (4N[(N-1)a^2+1]) relative"))
    theta_err = float(np.max(np.abs(prod.best_params[0::2] - np.pi / 2)))
    add(_at_most("product_theta", theta_err, 0.0, 1e-3, "0 rad from pi/2"))
    add(_close("plus_trace", f_plus.trace(), target, 1e-9, f"{_g(target)} (4N)"))
    add(_close("plus_fom", figure_of_merit(w, f_plus), pb, 1e-8, f"{_g(pb)} (product bound)"))

    if n == 3:
        lo, hi = n3_interval(alpha)
        worst, weakest = 0.0, None
        for s2 in np.linspace(lo, hi, 7)[1:-1]:
            st = parametric_n3_probe(N3Params(alpha, float(np.arcsin(np.sqrt(s2)))))
            worst = max(worst, abs(figure_of_merit(w, qfim_pure(st, h)) - target))
            check = _gme("parametric_n3_gme", st)
            if weakest is None or check.value < weakest.value:
                weakest = check
        add(_at_most("parametric_n3_fom", worst, 0.0, 1e-8, "0 from 4N"))
        add(weakest)
    if n <= 3:
        gen = minimize_fom(OptimizationTask("general_pure", w, h, restarts=16 if n == 3 else 8, seed=seed))
        add(_at_most("general_pure_optimum", gen.best_value, target, 1e-4, f"<= {_g(target)} (4N)"))
        add(_gme("general_pure_gme", gen.best_state))

    rng = np.random.default_rng(seed)
    worst_bound, worst_chain, worst_sat = 0.0, 0.0, 0.0
    root_tr2 = w.trace_sqrt() ** 2
    for k in range(samples):
        psi = haar_random_pure((2,) * n, rng.integers(2**63))
        f = qfim_pure(psi, h)
        fom = figure_of_merit(w, f)
        if np.isfinite(fom):
            worst_bound = max(worst_bound, target - fom)
            if f.rank == n:
                worst_chain = max(worst_chain, root_tr2 / f.trace() - fom)
        worst_sat = max(worst_sat, saturability_check(psi, h))
    add(_at_most("bound_validity", worst_bound, 0.0, 1e-8, "fom >= 4N"))
    add(_at_most("chain_inequality", worst_chain, 0.0, 1e-8, "fom >= Tr(W^1/2)^2/Tr F"))
    add(_at_most("saturability", worst_sat, 0.0, 1e-10, "0"))

    if n <= 4:
        worst_fd = 0.0
        for k in range(3):
            psi = haar_random_pure((2,) * n, rng.integers(2**63))
            worst_fd = max(worst_fd, float(np.max(np.abs(fd_qfim(psi, h) - qfim_pure(psi, h).matrix))))
        add(_at_most("fd_oracle", worst_fd, 0.0, 1e-5, "0"))

    worst_r, worst_gap = 0.0, np.inf
    d = 2**n
    for rank in sorted({2, d}):
        for k in range(5):
            rho = random_mixed((2,) * n, rank, rng.integers(2**63))
            _, lhs, rhs = mixed_trace_bound(rho, h)
            worst_r = max(worst_r, lhs - rhs)
            worst_gap = min(worst_gap, figure_of_merit(w, qfim_mixed(rho, h)) - target)
    add(_at_most("mixed_trace_inequality", worst_r, 0.0, 1e-8, "Tr F <= 4r sum Var"))
    add(CheckResult("mixed_suboptimal", bool(worst_gap > 1e-6), float(worst_gap), "> 1e-06 above 4N",
                    float(max(1e-6 - worst_gap, 0.0)), 1e-6))
    zero = qfim_mixed(DensityMatrix((2,) * n, np.eye(d) / d), h)
    add(_at_most("maximally_mixed_qfim", float(np.max(np.abs(zero.matrix))), 0.0, 1e-12, "0"))

    closed = weight_sqrt_closed_form(n, alpha)
    spectral = np.real(mat_sqrt_psd(w.matrix))
    add(_at_most("wbar_sqrt", float(np.max(np.abs(closed - spectral))), 0.0, 1e-9, "0"))
    add(_close("wbar_root_trace", float(np.trace(closed)), target, 1e-10, f"{_g(target)} (4N)"))
    return out


def report(results: list[CheckResult], echo: Callable[[str], None] = print) -> bool:
    for r in results:
        echo(r.line())
    ok = all(r.passed for r in results)
    echo(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return ok
