"""Acceptance suite: ten headline claims checked at full scale.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line per
criterion.
"""

import numpy as np

from localfield.bounds import corollary1_residual, mixed_trace_bound, product_bound, theorem1_bound
from localfield.hamiltonian import pauli_z_hamiltonian
from localfield.linalg import mat_sqrt_psd
from localfield.optimizer import OptimizationTask, minimize_fom
from localfield.oracles import fd_qfim
from localfield.probes import (
    DensityMatrix,
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
from localfield.qfim import figure_of_merit, qfim_mixed, qfim_pure, saturability_check
from localfield.weights import build_w_bar, uniform_offdiag, weight_sqrt_closed_form

ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)
NS = range(2, 7)


def verdict(number, title, ok, detail):
    print(f"criterion {number:>2} {title}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number} failed: {detail}"


def ghz_optimum(n, alpha):
    return ghz_probe(GhzParams(np.arccos(np.sqrt(alpha)), np.pi / 2, n))


def plus_state(n):
    return product_probe([(np.pi / 2, 0.0)] * n)


def test_01_bound_is_4n():
    worst = max(abs(theorem1_bound(build_w_bar(n, a), pauli_z_hamiltonian(n)) - 4 * n) for n in NS for a in ALPHAS)
    verdict(1, "probe-optimized bound equals 4N", worst <= 1e-10, f"max error {worst:.2e}")


def test_02_ghz_attains_bound():
    worst_f, worst_fom = 0.0, 0.0
    for n in NS:
        h = pauli_z_hamiltonian(n)
        for a in ALPHAS:
            f = qfim_pure(ghz_optimum(n, a), h)
            worst_f = max(worst_f, np.max(np.abs(f.matrix - 4 * uniform_offdiag(n, 1.0, a))))
            worst_fom = max(worst_fom, abs(figure_of_merit(build_w_bar(n, a), f) - 4 * n))
    ok = worst_f <= 1e-9 and worst_fom <= 1e-8
    verdict(2, "rotated GHZ attains 4N", ok, f"QFIM error {worst_f:.2e}, fom error {worst_fom:.2e}")


def test_03_equality_condition():
    worst_opt, worst_plus = 0.0, 0.0
    for n in NS:
        h = pauli_z_hamiltonian(n)
        for a in ALPHAS:
            w = build_w_bar(n, a)
            worst_opt = max(worst_opt, corollary1_residual(qfim_pure(ghz_optimum(n, a), h), w))
            res_plus = corollary1_residual(qfim_pure(plus_state(n), h), w)
            worst_plus = max(worst_plus, abs(res_plus - 4 * a))
    ok = worst_opt <= 1e-9 and worst_plus <= 1e-9
    verdict(3, "equality residual", ok, f"optimum {worst_opt:.2e}, |+>^N off 4 alpha by {worst_plus:.2e}")


def test_04_product_gap():
    alpha = 0.5
    details, ok = [], True
    for n in (2, 3, 4):
        w, h = build_w_bar(n, alpha), pauli_z_hamiltonian(n)
        res = minimize_fom(OptimizationTask("product", w, h, seed=n))
        target = product_bound(n, alpha)
        rel = abs(res.best_value - target) / target
        theta = float(np.max(np.abs(res.best_params[0::2] - np.pi / 2)))
        gap = res.best_value - 4 * n
        good = rel <= 1e-5 and theta <= 1e-3 and gap >= 4 * n * (n - 1) * alpha**2 - 1e-6
        ok &= good
        details.append(f"N={n} rel {rel:.1e} theta {theta:.1e} gap {gap:.6f}")
    verdict(4, "product probes stop at 4N[(N-1)a^2+1]", ok, "; ".join(details))


def test_05_general_search_needs_gme():
    alpha, n = 0.5, 3
    w, h = build_w_bar(n, alpha), pauli_z_hamiltonian(n)
    res = minimize_fom(OptimizationTask("general_pure", w, h, restarts=32, seed=0))
    near = [s for v, s in zip(res.restart_values, res.restart_states) if v <= res.best_value + 1e-4]
    all_gme = all(gme_certify(s).is_gme for s in near)

    lo, hi = n3_interval(alpha)
    grid = lo + (hi - lo) * np.arange(11) / 10
    worst, interior_gme = 0.0, True
    for k, s2 in enumerate(grid):
        state = parametric_n3_probe(N3Params(alpha, float(np.arcsin(np.sqrt(s2)))))
        worst = max(worst, abs(figure_of_merit(w, qfim_pure(state, h)) - 12))
        if 0 < k < len(grid) - 1:
            interior_gme &= gme_certify(state).is_gme
    ok = res.best_value <= 12 + 1e-4 and all_gme and worst <= 1e-8 and interior_gme
    verdict(5, "optimal three-qubit probes are GME", ok,
            f"search {res.best_value:.10f}, {len(near)} near-optimal restarts GME={all_gme}, "
            f"parametric error {worst:.2e}, interior GME={interior_gme}")


def test_06_mixed_states_are_suboptimal():
    worst_ineq, worst_margin = -np.inf, np.inf
    for n, ranks in ((2, (2, 4)), (3, (2, 8))):
        h, w = pauli_z_hamiltonian(n), build_w_bar(n, 0.5)
        for rank in ranks:
            for seed in range(20):
                rho = random_mixed((2,) * n, rank, seed)
                _, lhs, rhs = mixed_trace_bound(rho, h)
                worst_ineq = max(worst_ineq, lhs - rhs)
                worst_margin = min(worst_margin, figure_of_merit(w, qfim_mixed(rho, h)) - 4 * n)
    zero = max(float(np.max(np.abs(qfim_mixed(DensityMatrix((2,) * n, np.eye(2**n) / 2**n),
                                              pauli_z_hamiltonian(n)).matrix))) for n in (2, 3))
    ok = worst_ineq <= 1e-8 and worst_margin > 1e-6 and zero == 0.0
    verdict(6, "mixed probes stay above 4N", ok,
            f"trace inequality slack {worst_ineq:.2e}, min margin {worst_margin:.4f}, max-mixed QFIM {zero}")


def test_07_closed_form_root():
    worst_sqrt, worst_tr = 0.0, 0.0
    for n in range(2, 9):
        for a in ALPHAS:
            closed = weight_sqrt_closed_form(n, a)
            worst_sqrt = max(worst_sqrt, np.max(np.abs(closed - mat_sqrt_psd(build_w_bar(n, a).matrix))))
            worst_tr = max(worst_tr, abs(np.trace(closed) - 4 * n))
    ok = worst_sqrt <= 1e-9 and worst_tr <= 1e-10
    verdict(7, "closed-form square root", ok, f"vs spectral {worst_sqrt:.2e}, trace error {worst_tr:.2e}")


def test_08_saturability():
    worst = 0.0
    for n in (2, 3):
        h = pauli_z_hamiltonian(n)
        for seed in range(100):
            worst = max(worst, saturability_check(haar_random_pure((2,) * n, seed), h))
    verdict(8, "SLD commutator expectations vanish", worst <= 1e-10, f"max {worst:.2e}")


def test_09_bound_validity():
    worst_bound, worst_chain, infinite = -np.inf, -np.inf, 0
    for n in (2, 3, 4):
        h = pauli_z_hamiltonian(n)
        for a in (0.2, 0.5, 0.8):
            w = build_w_bar(n, a)
            root2 = w.trace_sqrt() ** 2
            for seed in range(200):
                f = qfim_pure(haar_random_pure((2,) * n, 7919 * n + seed), h)
                fom = figure_of_merit(w, f)
                if not np.isfinite(fom):
                    infinite += 1
                    continue
                worst_bound = max(worst_bound, 4 * n - fom)
                if f.rank == n:
                    worst_chain = max(worst_chain, root2 / f.trace() - fom)
    worst_fd = 0.0
    for n in (2, 3):
        h = pauli_z_hamiltonian(n)
        for seed in range(20):
            psi = haar_random_pure((2,) * n, 50_000 + seed)
            worst_fd = max(worst_fd, np.max(np.abs(fd_qfim(psi, h) - qfim_pure(psi, h).matrix)))
    ok = worst_bound <= 1e-8 and worst_chain <= 1e-8 and worst_fd <= 1e-5
    verdict(9, "random probes respect the bounds", ok,
            f"bound slack {worst_bound:.3f}, chain slack {worst_chain:.3f}, "
            f"{infinite} infinite, finite-difference error {worst_fd:.2e}")


def test_10_trace_maximizer_is_not_optimal():
    worst_tr, worst_fom, gaps = 0.0, 0.0, []
    for n in NS:
        h = pauli_z_hamiltonian(n)
        f = qfim_pure(plus_state(n), h)
        worst_tr = max(worst_tr, abs(f.trace() - 4 * n))
        for a in ALPHAS:
            fom = figure_of_merit(build_w_bar(n, a), f)
            worst_fom = max(worst_fom, abs(fom - product_bound(n, a)))
            gaps.append(fom - 4 * n)
    ok = worst_tr <= 1e-9 and worst_fom <= 1e-8 and min(gaps) > 0
    verdict(10, "|+>^N maximizes Tr F but not the figure of merit", ok,
            f"trace error {worst_tr:.2e}, fom vs product bound {worst_fom:.2e}, min gap over 4N {min(gaps):.3f}")
