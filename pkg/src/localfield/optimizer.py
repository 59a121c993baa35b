"""Derivative-free probe search over the probe families.

Each family is a chart from an unconstrained real parameter vector to a pure
state. The objective (figure of merit, or minus the QFIM trace) is minimized
with a Nelder-Mead simplex from several seeded starting points.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidParams, LocalFieldError, UnsupportedFamily
from .hamiltonian import LocalHamiltonian
from .probes import GhzParams, N3Params, ghz_probe, n3_interval, parametric_n3_probe, product_probe
from .qfim import figure_of_merit, pure_qfim_matrix
from .states import PureState
from .weights import WeightMatrix

log = logging.getLogger(__name__)

FAMILIES = ("ghz", "product", "parametric_n3", "general_pure")
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class OptimizationTask:
    family: str
    W: WeightMatrix
    h: LocalHamiltonian
    restarts: int = 16
    max_iters: int = 5000
    seed: int = 0
    tol_step: float = 1e-8
    tol_val: float = 1e-10

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidParams(f"restarts must be >= 1, got {self.restarts}")
        if self.tol_step <= 0 or self.tol_val <= 0:
            raise InvalidParams("tolerances must be positive")
        if self.max_iters < 1:
            raise InvalidParams(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class OptimizationResult:
    best_value: float
    best_params: np.ndarray
    best_state: PureState
    trace: list[tuple[int, float]]
    converged: bool
    family: str = ""
    best_restart: int = 0
    restart_values: list[float] = field(default_factory=list)
    restart_traces: list[list[tuple[int, float]]] = field(default_factory=list)
    restart_states: list[PureState] = field(default_factory=list)


@dataclass
class TaskFailure:
    index: int
    task: OptimizationTask
    error: str


# --- simplex ---------------------------------------------------------------

@dataclass
class SimplexRun:
    x: np.ndarray
    value: float
    iterations: int
    converged: bool
    trace: list[tuple[int, float]]


def nelder_mead(fun: Callable[[np.ndarray], float], x0, step=0.3, max_iters: int = 5000,
                tol_step: float = 1e-8, tol_val: float = 1e-10, start_iter: int = 0,
                trace: list | None = None) -> SimplexRun:
    """Minimize ``fun`` with reflection, expansion, contraction and shrink steps.

    Uses dimension-adaptive coefficients so that larger charts do not stall.
    Stops when the simplex diameter falls below ``tol_step`` or the spread of
    vertex values below ``tol_val``.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    rho, chi = 1.0, 1.0 + 2.0 / n
    gamma, sigma = 0.75 - 1.0 / (2 * n), 1.0 - 1.0 / n

    sim = np.vstack([x0, x0 + step * np.eye(n)])
    vals = np.array([fun(p) for p in sim])
    trace = [] if trace is None else trace
    it = start_iter
    converged = False
    while it < max_iters:
        order = np.argsort(vals, kind="stable")
        sim, vals = sim[order], vals[order]
        best = vals[0]
        if not trace or best < trace[-1][1] or (it == start_iter):
            trace.append((it, float(best)))
        diameter = np.max(np.linalg.norm(sim[1:] - sim[0], axis=1))
        spread = vals[-1] - vals[0] if np.isfinite(vals[-1]) else np.inf
        if diameter < tol_step or spread < tol_val:
            converged = True
            break
        it += 1
        centroid = sim[:-1].mean(axis=0)
        xr = centroid + rho * (centroid - sim[-1])
        fr = fun(xr)
        if fr < vals[0]:
            xe = centroid + chi * (xr - centroid)
            fe = fun(xe)
            if fe < fr:
                sim[-1], vals[-1] = xe, fe
            else:
                sim[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-2]:
            sim[-1], vals[-1] = xr, fr
            continue
        if fr < vals[-1]:
            xc = centroid + gamma * (xr - centroid)
            fc = fun(xc)
            if fc <= fr:
                sim[-1], vals[-1] = xc, fc
                continue
        else:
            xc = centroid - gamma * (centroid - sim[-1])
            fc = fun(xc)
            if fc < vals[-1]:
                sim[-1], vals[-1] = xc, fc
                continue
        sim[1:] = sim[0] + sigma * (sim[1:] - sim[0])
        vals[1:] = [fun(p) for p in sim[1:]]
    order = np.argsort(vals, kind="stable")
    return SimplexRun(sim[order[0]].copy(), float(vals[order[0]]), it, converged, trace)


# --- charts ----------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    n_params: int
    to_state: Callable[[np.ndarray], PureState]
    sample: Callable[[np.random.Generator], np.ndarray]
    canonical: Callable[[np.ndarray], np.ndarray]


def _wrap(x):
    return np.mod(x, TWO_PI)


def _canonical_product(p: np.ndarray) -> np.ndarray:
    p = np.array(p, dtype=float)
    for k in range(0, p.size, 2):
        t, f = p[k] % TWO_PI, p[k + 1]
        if t > np.pi:
            t, f = TWO_PI - t, f + np.pi
        p[k], p[k + 1] = t, f % TWO_PI
    return p


def hypersphere_amplitudes(params: np.ndarray, dim: int) -> np.ndarray:
    """Unit vector from dim-1 polar angles and dim-1 relative phases (first amplitude real)."""
    angles = params[: dim - 1]
    phases = params[dim - 1:]
    sin_prod = np.concatenate([[1.0], np.cumprod(np.sin(angles))])
    mags = sin_prod * np.concatenate([np.cos(angles), [1.0]])
    return mags * np.exp(1j * np.concatenate([[0.0], phases]))


def make_chart(family: str, h: LocalHamiltonian, alpha: float | None = None) -> Chart:
    n = h.n_sites
    if family not in FAMILIES:
        raise UnsupportedFamily(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if family != "general_pure" and not h.is_qubit_register():
        raise UnsupportedFamily(f"family {family!r} needs qubit sites, got dims {h.site_dims}")
    if family == "ghz":
        if n < 2:
            raise UnsupportedFamily("ghz family needs N >= 2")
        return Chart(
            2,
            lambda p: ghz_probe(GhzParams(p[0], p[1], n)),
            lambda rng: rng.uniform(0, np.pi, 2) * np.array([1.0, 2.0]),
            _wrap,
        )
    if family == "product":
        return Chart(
            2 * n,
            lambda p: product_probe(list(zip(p[0::2], p[1::2]))),
            lambda rng: rng.uniform(0, 1, 2 * n) * np.tile([np.pi, TWO_PI], n),
            _canonical_product,
        )
    if family == "parametric_n3":
        if n != 3:
            raise UnsupportedFamily(f"parametric_n3 needs exactly 3 sites, got {n}")
        if alpha is None:
            raise UnsupportedFamily("parametric_n3 needs the alpha of the built-in weight family")
        lo, hi = n3_interval(alpha)

        def to_state(p):
            s2 = lo + (hi - lo) * np.sin(p[0]) ** 2
            return parametric_n3_probe(N3Params(alpha, float(np.arcsin(np.sqrt(s2))), p[1:]))

        return Chart(8, to_state, lambda rng: rng.uniform(0, TWO_PI, 8), _wrap)
    dim = h.dim
    if dim < 2:
        raise UnsupportedFamily("general_pure needs a Hilbert space of dimension >= 2")
    return Chart(
        2 * (dim - 1),
        lambda p: PureState.normalized(h.site_dims, hypersphere_amplitudes(p, dim)),
        lambda rng: np.concatenate([rng.uniform(0, np.pi / 2, dim - 1), rng.uniform(0, TWO_PI, dim - 1)]),
        lambda p: p.copy(),
    )


# --- drivers ---------------------------------------------------------------

def _search(objective: Callable[[np.ndarray], float], chart: Chart, family: str, restarts: int,
            max_iters: int, seed: int, tol_step: float, tol_val: float) -> OptimizationResult:
    rng = np.random.default_rng(seed)

    def fun(p):
        v = objective(chart.to_state(p).amplitudes)
        return v if np.isfinite(v) else np.inf

    runs = []
    for k in range(restarts):
        x0 = chart.sample(rng)
        trace: list[tuple[int, float]] = []
        run = nelder_mead(fun, x0, max_iters=max_iters, tol_step=tol_step, tol_val=tol_val, trace=trace)
        # re-seed the simplex at the converged point while that keeps paying off
        while run.iterations < max_iters:
            again = nelder_mead(fun, run.x, step=0.05, max_iters=max_iters, tol_step=tol_step,
                                tol_val=tol_val, start_iter=run.iterations, trace=trace)
            improved = again.value < run.value - tol_val
            if again.value <= run.value:
                run = SimplexRun(again.x, again.value, again.iterations, again.converged, trace)
            else:
                run.iterations = again.iterations
            if not improved:
                break
        runs.append(run)
        log.debug("%s restart %d: %.12g after %d iterations", family, k, run.value, run.iterations)

    best_k = 0
    for k, run in enumerate(runs):
        if run.value < runs[best_k].value - tol_val:
            best_k = k
    best = runs[best_k]
    params = chart.canonical(best.x)
    state = chart.to_state(params)
    return OptimizationResult(
        best_value=float(objective(state.amplitudes)),
        best_params=params,
        best_state=state,
        trace=list(best.trace),
        converged=best.converged,
        family=family,
        best_restart=best_k,
        restart_values=[r.value for r in runs],
        restart_traces=[list(r.trace) for r in runs],
        restart_states=[chart.to_state(chart.canonical(r.x)) for r in runs],
    )


def minimize_fom(task: OptimizationTask) -> OptimizationResult:
    """Search the task's probe family for the smallest Tr(W F^-1)."""
    chart = make_chart(task.family, task.h, task.W.alpha)
    if task.W.n != task.h.n_sites:
        raise InvalidParams(f"weight is {task.W.n}x{task.W.n}, Hamiltonian has {task.h.n_sites} sites")
    w, h = task.W.matrix, task.h
    return _search(lambda psi: figure_of_merit(w, pure_qfim_matrix(psi, h)), chart, task.family, task.restarts,
                   task.max_iters, task.seed, task.tol_step, task.tol_val)


def maximize_trace_fq(h: LocalHamiltonian, family: str, restarts: int = 16, max_iters: int = 5000,
                      seed: int = 0, tol_step: float = 1e-8, tol_val: float = 1e-10,
                      alpha: float | None = None) -> OptimizationResult:
    """Search for the largest Tr(F_Q); ``best_value`` holds the maximum (positive)."""
    chart = make_chart(family, h, alpha)
    res = _search(lambda psi: -float(np.trace(pure_qfim_matrix(psi, h)).real), chart, family, restarts, max_iters, seed,
                  tol_step, tol_val)
    res.best_value = -res.best_value
    res.restart_values = [-v for v in res.restart_values]
    res.trace = [(i, -v) for i, v in res.trace]
    res.restart_traces = [[(i, -v) for i, v in t] for t in res.restart_traces]
    return res


def sweep(tasks: Sequence[OptimizationTask], jobs: int | None = 1) -> list[OptimizationResult | TaskFailure]:
    """Run tasks independently; task ``i`` uses seed ``task.seed + i``.

    Failures are reported as :class:`TaskFailure` entries in place; results
    are returned in task order.
    """

    def run(i_task):
        i, task = i_task
        try:
            return minimize_fom(replace(task, seed=task.seed + i))
        except LocalFieldError as exc:
            return TaskFailure(i, task, f"{type(exc).__name__}: {exc}")

    items = list(enumerate(tasks))
    if not items:
        return []
    if jobs is None or jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, items))
    return [run(it) for it in items]
