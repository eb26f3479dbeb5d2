"""Experiment drivers: success-rate sweeps, convergence traces, iteration tables.

Every driver is a deterministic function of its spec: trial seeds derive
from the base seed via the splittable scheme in saflow.measurement, fresh
ground truth and sensing matrices are drawn per trial, and results are
aggregated by trial index, so outputs do not depend on scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field, replace

import numpy as np

from .distances import SUCCESS_THRESHOLD, dist, success
from .measurement import REAL, add_noise, check_field, gen_sensing, gen_signal, observe, trial_seed
from .solvers import DivergedError, GdConfig, InitStrategy, SolveTrace, solve

ALGORITHMS = ("saf", "wf", "twf", "taf")


def parse_algorithm(name: str) -> tuple[str, str]:
    """Split an algorithm label into (solver, init).

    'saf-random', 'saf-spectral', 'wf', 'twf-spectral', ... Baselines
    default to spectral initialization, the smoothed solver to random.
    """
    base, _, init = name.partition("-")
    if base not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}")
    if not init:
        init = "random" if base == "saf" else "spectral"
    if init not in ("random", "spectral"):
        raise ValueError(f"unknown init {init!r} in {name!r}")
    return base, init


@dataclass(frozen=True)
class ExperimentSpec:
    n: int = 128
    field: str = REAL
    m_over_n: tuple = (1, 2, 3, 4, 5, 6, 7, 8)
    trials: int = 50
    config: GdConfig = dc_field(
        default_factory=lambda: GdConfig(mu=0.6, err_tol=SUCCESS_THRESHOLD))
    algorithms: tuple = ("saf-random",)
    noise_level: float = 0.0
    base_seed: int = 0
    power_iters: int = 50
    beta_grid: tuple = tuple(np.round(np.arange(0.1, 1.01, 0.1), 2))
    m_over_n_random: float = 4.0
    m_over_n_spectral: float = 2.5

    def __post_init__(self):
        check_field(self.field)
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if any(g <= 0 for g in self.m_over_n):
            raise ValueError("m/n grid values must be positive")


@dataclass(frozen=True)
class SuccessRow:
    m_over_n: float
    algorithm: str
    success_rate: float
    trials: int


@dataclass(frozen=True)
class IterationRow:
    algorithm: str
    init: str
    threshold: float
    median_iters: float
    mean_seconds: float


def _run_trial(payload) -> dict:
    """One seeded solve on a fresh instance; used directly and by the pool."""
    (n, m, field_tag, algorithm, config, noise_level, power_iters, seed) = payload
    x = gen_signal(n, field_tag, seed)
    A = gen_sensing(m, n, field_tag, seed)
    obs = observe(A, x)
    if noise_level > 0:
        obs = add_noise(obs, noise_level, seed)
    base, init_kind = parse_algorithm(algorithm)
    init = InitStrategy(kind=init_kind, power_iters=power_iters)
    t0 = time.perf_counter()
    try:
        trace = solve(base, A, obs, config, init, seed, truth=x)
        diverged = False
    except DivergedError as exc:
        trace = exc.trace
        diverged = True
    seconds = time.perf_counter() - t0
    final_err = dist(trace.final, x) / np.linalg.norm(x) if trace.final is not None else np.inf
    return {
        "success": (not diverged) and bool(success(trace.final, x, SUCCESS_THRESHOLD)),
        "final_rel_err": float(final_err),
        "iters_to": {thr: trace.iters_to(thr) for thr in (1e-5, 1e-10)},
        "seconds": seconds,
        "diverged": diverged,
    }


def _map_trials(payloads, threads: int):
    if threads <= 1:
        return [_run_trial(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_trial, payloads, chunksize=4))


def run_success_sweep(spec: ExperimentSpec, threads: int = 1) -> list[SuccessRow]:
    """Empirical success rate per (m/n, algorithm) over seeded fresh trials.

    Trial seeds are hash(base_seed, grid_index, trial_index), so every
    algorithm sees the same instances at a given grid point.
    """
    rows = []
    for gi, mn in enumerate(spec.m_over_n):
        m = int(round(mn * spec.n))
        for algorithm in spec.algorithms:
            payloads = [
                (spec.n, m, spec.field, algorithm, spec.config, spec.noise_level,
                 spec.power_iters, trial_seed(spec.base_seed, gi, ti))
                for ti in range(spec.trials)
            ]
            results = _map_trials(payloads, threads)
            rate = sum(r["success"] for r in results) / spec.trials
            rows.append(SuccessRow(float(mn), algorithm, rate, spec.trials))
    return rows


def run_convergence(spec: ExperimentSpec, noisy_level: float = 0.01) -> dict:
    """Representative traces per algorithm, noiseless and noisy, one instance.

    All algorithms solve the same seeded instance (the canonical comparison
    setup is n=128, m=5n, mu=0.8).  Returns
    {"noiseless": {algorithm: SolveTrace}, "noisy": {...}}.
    """
    out: dict = {"noiseless": {}, "noisy": {}}
    mn = spec.m_over_n[0]
    m = int(round(mn * spec.n))
    seed = trial_seed(spec.base_seed, 0)
    for label, level in (("noiseless", 0.0), ("noisy", noisy_level)):
        x = gen_signal(spec.n, spec.field, seed)
        A = gen_sensing(m, spec.n, spec.field, seed)
        obs = observe(A, x)
        if level > 0:
            obs = add_noise(obs, level, seed)
        for algorithm in spec.algorithms:
            base, init_kind = parse_algorithm(algorithm)
            init = InitStrategy(kind=init_kind, power_iters=spec.power_iters)
            try:
                out[label][algorithm] = solve(base, A, obs, spec.config, init, seed, truth=x)
            except DivergedError as exc:
                out[label][algorithm] = exc.trace
    return out


def run_iteration_table(
    spec: ExperimentSpec, thresholds=(1e-5, 1e-10), threads: int = 1
) -> list[IterationRow]:
    """Median iterations to each relative-error threshold, per algorithm.

    All algorithms solve the same per-trial instances.  Wall time is
    reported for context only; it is hardware-dependent.
    """
    mn = spec.m_over_n[0]
    m = int(round(mn * spec.n))
    stop = replace(spec.config, err_tol=min(thresholds))
    rows = []
    for algorithm in spec.algorithms:
        payloads = [
            (spec.n, m, spec.field, algorithm, stop, spec.noise_level,
             spec.power_iters, trial_seed(spec.base_seed, 0, ti))
            for ti in range(spec.trials)
        ]
        results = _map_trials(payloads, threads)
        base, init_kind = parse_algorithm(algorithm)
        for thr in thresholds:
            iters = [r["iters_to"][thr] for r in results]
            rows.append(IterationRow(
                algorithm=base,
                init=init_kind,
                threshold=thr,
                median_iters=float(np.median(iters)),
                mean_seconds=float(np.mean([r["seconds"] for r in results])),
            ))
    return rows


@dataclass(frozen=True)
class BetaRow:
    beta: float
    init: str
    success_rate: float


def run_beta_sweep(spec: ExperimentSpec, threads: int = 1) -> list[BetaRow]:
    """Success rate versus smoothing parameter, for random and spectral starts.

    Random initialization runs at m = m_over_n_random * n, spectral at
    m = m_over_n_spectral * n.
    """
    rows = []
    for bi, beta in enumerate(spec.beta_grid):
        for init_kind, mn in (("random", spec.m_over_n_random),
                              ("spectral", spec.m_over_n_spectral)):
            m = int(round(mn * spec.n))
            config = replace(spec.config, beta=float(beta))
            payloads = [
                (spec.n, m, spec.field, f"saf-{init_kind}", config, spec.noise_level,
                 spec.power_iters, trial_seed(spec.base_seed, bi, ti))
                for ti in range(spec.trials)
            ]
            results = _map_trials(payloads, threads)
            rate = sum(r["success"] for r in results) / spec.trials
            rows.append(BetaRow(float(beta), init_kind, rate))
    return rows


def _fmt(x) -> str:
    return repr(float(x))


def write_success_csv(rows: list[SuccessRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("m_over_n,algorithm,success_rate,trials\n")
        for r in rows:
            fh.write(f"{_fmt(r.m_over_n)},{r.algorithm},{_fmt(r.success_rate)},{r.trials}\n")


def write_beta_csv(rows: list[BetaRow], path) -> None:
    with open(path, "w") as fh:
        fh.write("beta,init,success_rate\n")
        for r in rows:
            fh.write(f"{_fmt(r.beta)},{r.init},{_fmt(r.success_rate)}\n")


def write_iteration_csv(rows: list[IterationRow], path, timing: bool = True) -> None:
    """Iteration table CSV; timing=False zeroes the wall-clock column so the
    file is byte-reproducible across runs."""
    with open(path, "w") as fh:
        fh.write("algorithm,init,threshold,median_iters,mean_seconds\n")
        for r in rows:
            secs = r.mean_seconds if timing else 0.0
            fh.write(
                f"{r.algorithm},{r.init},{_fmt(r.threshold)},"
                f"{_fmt(r.median_iters)},{_fmt(secs)}\n"
            )
