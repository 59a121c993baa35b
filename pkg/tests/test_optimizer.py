import numpy as np
import pytest

from localfield.bounds import product_bound, theorem1_bound
from localfield.errors import InvalidParams, UnsupportedFamily
from localfield.hamiltonian import LocalHamiltonian, pauli_z_hamiltonian
from localfield.optimizer import (
    OptimizationResult,
    OptimizationTask,
    TaskFailure,
    hypersphere_amplitudes,
    make_chart,
    maximize_trace_fq,
    minimize_fom,
    nelder_mead,
    sweep,
)
from localfield.probes import GhzParams, gme_certify, ghz_probe
from localfield.qfim import figure_of_merit, qfim_pure
from localfield.weights import build_w_bar, identity_weight


def task(family, n, alpha=0.5, **kw):
    return OptimizationTask(family, build_w_bar(n, alpha), pauli_z_hamiltonian(n), **kw)


def assert_reevaluates(res: OptimizationResult, t: OptimizationTask):
    fom = figure_of_merit(t.W, qfim_pure(res.best_state, t.h))
    assert abs(fom - res.best_value) <= 1e-9


def assert_monotone(res: OptimizationResult):
    for trace in res.restart_traces:
        values = [v for _, v in trace]
        assert all(b <= a for a, b in zip(values, values[1:]))
        iters = [i for i, _ in trace]
        assert iters == sorted(iters)


class TestNelderMead:
    def test_quadratic(self):
        run = nelder_mead(lambda x: float(np.sum((x - [1.0, -2.0, 0.5]) ** 2)), np.zeros(3))
        assert run.converged
        assert np.allclose(run.x, [1.0, -2.0, 0.5], atol=1e-6)

    def test_rosenbrock(self):
        def rosen(x):
            return float(100 * (x[1] - x[0] ** 2) ** 2 + (1 - x[0]) ** 2)

        run = nelder_mead(rosen, np.array([-1.2, 1.0]), max_iters=5000)
        assert np.allclose(run.x, [1, 1], atol=1e-4)

    def test_trace_nonincreasing(self):
        trace = []
        nelder_mead(lambda x: float(np.sum(np.cos(3 * x) + x**2)), np.array([2.0, -1.5]), trace=trace)
        values = [v for _, v in trace]
        assert values and all(b <= a for a, b in zip(values, values[1:]))

    def test_iteration_cap(self):
        run = nelder_mead(lambda x: float(np.sum(x**2)), np.full(4, 5.0), max_iters=3)
        assert run.iterations <= 3
        assert not run.converged


class TestCharts:
    def test_unknown_family(self):
        with pytest.raises(UnsupportedFamily):
            make_chart("bogus", pauli_z_hamiltonian(2))

    def test_parametric_needs_three_sites_and_alpha(self):
        with pytest.raises(UnsupportedFamily):
            make_chart("parametric_n3", pauli_z_hamiltonian(2), 0.5)
        with pytest.raises(UnsupportedFamily):
            make_chart("parametric_n3", pauli_z_hamiltonian(3), None)

    def test_qubit_families_reject_qutrits(self):
        h = LocalHamiltonian((3, 3), (np.diag([1.0, 0, -1]),) * 2)
        with pytest.raises(UnsupportedFamily):
            make_chart("ghz", h)
        assert make_chart("general_pure", h).n_params == 16

    def test_hypersphere_is_normalized(self):
        rng = np.random.default_rng(0)
        for dim in (2, 5, 8):
            v = hypersphere_amplitudes(rng.uniform(0, 7, 2 * (dim - 1)), dim)
            assert abs(np.linalg.norm(v) - 1) <= 1e-12
            assert v[0].imag == 0

    def test_task_validation(self):
        with pytest.raises(InvalidParams):
            task("ghz", 2, restarts=0)
        with pytest.raises(InvalidParams):
            task("ghz", 2, tol_val=0.0)


class TestMinimize:
    def test_ghz_three_sites(self):
        t = task("ghz", 3)
        res = minimize_fom(t)
        assert abs(res.best_value - 12) <= 1e-6
        theta, phi = res.best_params
        assert abs(np.cos(theta) ** 2 - 0.5) <= 1e-4
        assert_reevaluates(res, t)
        assert_monotone(res)
        # at N = 3 the objective does not depend on phi
        h, w = t.h, t.W
        vals = [figure_of_merit(w, qfim_pure(ghz_probe(GhzParams(theta, p, 3)), h)) for p in np.linspace(0, 6, 13)]
        assert np.ptp(vals) <= 1e-9

    def test_ghz_two_sites_correlator(self):
        # at N = 2 the optimum is the curve cos^2 theta + sin^2 theta cos phi = alpha
        res = minimize_fom(task("ghz", 2, alpha=0.3))
        assert abs(res.best_value - 8) <= 1e-6
        theta, phi = res.best_params
        assert abs(np.cos(theta) ** 2 + np.sin(theta) ** 2 * np.cos(phi) - 0.3) <= 1e-4

    def test_product_two_sites(self):
        t = task("product", 2)
        res = minimize_fom(t)
        assert abs(res.best_value - 10) <= 1e-6
        assert np.max(np.abs(res.best_params[0::2] - np.pi / 2)) <= 1e-4
        assert not gme_certify(res.best_state).is_gme
        assert_reevaluates(res, t)
        assert_monotone(res)

    def test_general_pure_two_sites(self):
        t = task("general_pure", 2)
        res = minimize_fom(t)
        assert abs(res.best_value - 8) <= 1e-5
        assert gme_certify(res.best_state).is_gme
        assert_reevaluates(res, t)
        assert_monotone(res)

    def test_parametric_family(self):
        t = task("parametric_n3", 3, alpha=0.4, restarts=3)
        res = minimize_fom(t)
        assert abs(res.best_value - 12) <= 1e-8
        assert gme_certify(res.best_state).is_gme

    def test_deterministic(self):
        a = minimize_fom(task("product", 2, restarts=3, seed=11))
        b = minimize_fom(task("product", 2, restarts=3, seed=11))
        assert a.best_value == b.best_value
        assert a.best_params.tobytes() == b.best_params.tobytes()
        assert a.best_state.amplitudes.tobytes() == b.best_state.amplitudes.tobytes()
        assert a.trace == b.trace and a.restart_values == b.restart_values

    def test_weight_size_mismatch(self):
        with pytest.raises(InvalidParams):
            minimize_fom(OptimizationTask("ghz", build_w_bar(3, 0.5), pauli_z_hamiltonian(2)))

    @pytest.mark.parametrize("alpha", [0.2, 0.8])
    def test_family_dominance_and_bound(self, alpha):
        n = 2
        bound = theorem1_bound(build_w_bar(n, alpha), pauli_z_hamiltonian(n))
        best = {f: minimize_fom(task(f, n, alpha, restarts=6)).best_value for f in ("general_pure", "ghz", "product")}
        assert best["general_pure"] <= best["ghz"] + 1e-6
        assert best["ghz"] <= best["product"] + 1e-6
        assert best["product"] == pytest.approx(product_bound(n, alpha), rel=1e-6)
        for v in best.values():
            assert v >= bound - 1e-6

    def test_identity_weight_general_pure(self):
        # bound N/4 = 0.5 at N = 2, attained by |+>|+>
        t = OptimizationTask("general_pure", identity_weight(2), pauli_z_hamiltonian(2), restarts=4)
        assert minimize_fom(t).best_value == pytest.approx(0.5, abs=1e-6)


class TestMaximizeTrace:
    def test_product_three_sites(self):
        res = maximize_trace_fq(pauli_z_hamiltonian(3), "product", restarts=4)
        assert abs(res.best_value - 12) <= 1e-6
        assert np.max(np.abs(res.best_params[0::2] - np.pi / 2)) <= 1e-3

    def test_general_pure_two_sites(self):
        res = maximize_trace_fq(pauli_z_hamiltonian(2), "general_pure", restarts=4)
        assert abs(res.best_value - 8) <= 1e-6

    def test_ghz_two_sites(self):
        res = maximize_trace_fq(pauli_z_hamiltonian(2), "ghz", restarts=4)
        assert 8 - 1e-4 <= res.best_value <= 8 + 1e-8

    def test_trace_nondecreasing(self):
        res = maximize_trace_fq(pauli_z_hamiltonian(2), "product", restarts=2)
        for trace in res.restart_traces:
            values = [v for _, v in trace]
            assert all(b >= a for a, b in zip(values, values[1:]))


class TestSweep:
    def test_grid(self):
        alphas = np.round(np.arange(1, 10) / 10, 10)
        tasks = [task(f, 3, a, restarts=4) for a in alphas for f in ("ghz", "product")]
        out = sweep(tasks)
        assert len(out) == 18
        for t, res in zip(tasks, out):
            assert isinstance(res, OptimizationResult)
            if t.family == "ghz":
                assert abs(res.best_value - 12) <= 1e-5
            else:
                assert abs(res.best_value - 12 * (2 * t.W.alpha**2 + 1)) <= 1e-5

    def test_empty(self):
        assert sweep([]) == []

    def test_failure_in_place(self):
        tasks = [task("ghz", 2, restarts=2), task("nonsense", 2), task("ghz", 2, restarts=2)]
        out = sweep(tasks)
        assert isinstance(out[0], OptimizationResult) and isinstance(out[2], OptimizationResult)
        assert isinstance(out[1], TaskFailure)
        assert out[1].index == 1 and "UnsupportedFamily" in out[1].error

    def test_parallel_matches_serial(self):
        tasks = [task("ghz", 2, a, restarts=2) for a in (0.2, 0.4, 0.6)]
        serial = sweep(tasks, jobs=1)
        threaded = sweep(tasks, jobs=3)
        for a, b in zip(serial, threaded):
            assert a.best_value == b.best_value
            assert a.best_params.tobytes() == b.best_params.tobytes()

    def test_seed_offsets_by_index(self):
        t = task("product", 2, restarts=2, seed=5)
        out = sweep([t, t])
        direct = minimize_fom(OptimizationTask(t.family, t.W, t.h, restarts=2, seed=6))
        assert out[1].best_params.tobytes() == direct.best_params.tobytes()
