"""Fixed-step gradient descent solvers: smoothed amplitude flow and baselines.

All solvers share the trace contract: a SolveTrace records one entry per
visited iterate (including the initial guess), the final iterate, and the
termination reason.  Stopping tests are evaluated at each iterate before
updating, so a start at the global minimizer terminates at iteration 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import constants as C
from .calculus import DEFAULT_BETA, loss_and_gradient
from .distances import dist
from .measurement import COMPLEX, REAL, check_field, magnitudes, rng_for


@dataclass(frozen=True)
class GdConfig:
    """Hyperparameters for a gradient-descent solve.

    err_tol stops on relative error and is only meaningful when the ground
    truth is supplied (experiment runs); grad_tol defaults to a value small
    enough to be inert, so experiment stops are error-driven.
    """

    mu: float = 0.6
    beta: float = DEFAULT_BETA
    max_iter: int = 2000
    grad_tol: float = 1e-14
    err_tol: float | None = None

    def __post_init__(self):
        if self.mu <= 0:
            raise ValueError("step size mu must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.grad_tol < 0:
            raise ValueError("grad_tol must be nonnegative")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta}")


@dataclass(frozen=True)
class InitStrategy:
    kind: str = "random"  # "random" | "spectral"
    power_iters: int = 50

    def __post_init__(self):
        if self.kind not in ("random", "spectral"):
            raise ValueError(f"unknown init strategy {self.kind!r}")
        if self.power_iters < 1:
            raise ValueError("power_iters must be >= 1")


@dataclass(frozen=True)
class IterRecord:
    iter: int
    loss: float
    grad_norm: float
    rel_err: float | None = None


@dataclass
class SolveTrace:
    algorithm: str
    records: list[IterRecord] = field(default_factory=list)
    final: np.ndarray | None = None
    reason: str = ""  # "grad_tol" | "err_tol" | "max_iter" | "diverged"

    @property
    def iterations(self) -> int:
        return self.records[-1].iter if self.records else 0

    def iters_to(self, threshold: float) -> float:
        """First iteration whose relative error is <= threshold (inf if never)."""
        for rec in self.records:
            if rec.rel_err is not None and rec.rel_err <= threshold:
                return rec.iter
        return float("inf")

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("iter,grad_norm,rel_err\n")
            for rec in self.records:
                rel = "" if rec.rel_err is None else repr(float(rec.rel_err))
                fh.write(f"{rec.iter},{float(rec.grad_norm)!r},{rel}\n")


class DivergedError(RuntimeError):
    """Raised when an iterate leaves the finite floats; carries the trace."""

    def __init__(self, trace: SolveTrace):
        super().__init__(f"{trace.algorithm} diverged at iteration {trace.iterations}")
        self.trace = trace


def random_init(n: int, field_tag: str = REAL, seed: int = 0) -> np.ndarray:
    """Standard Gaussian initial guess, independent of the data."""
    check_field(field_tag)
    rng = rng_for(seed, 3)
    if field_tag == REAL:
        return rng.standard_normal(n)
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def spectral_init(A: np.ndarray, y, power_iters: int = 50, seed: int = 0) -> np.ndarray:
    """Leading-eigenvector initial guess of Y = mean_i y_i^2 a_i a_i^H.

    Estimated with power iterations from a seeded Gaussian start, then
    scaled to norm sqrt(mean y^2), which matches ||x|| in expectation under
    both field conventions.
    """
    y = magnitudes(y)
    if power_iters < 1:
        raise ValueError("power_iters must be >= 1")
    if not np.any(y > 0):
        raise ValueError("degenerate input: all magnitudes are zero")
    m, n = A.shape
    y2 = y * y
    v = random_init(n, field_of_matrix(A), seed)
    v /= np.linalg.norm(v)
    for _ in range(power_iters):
        v = A.T @ (y2 * (A.conj() @ v)) / m
        v /= np.linalg.norm(v)
    return float(np.sqrt(np.mean(y2))) * v


def field_of_matrix(A: np.ndarray) -> str:
    return COMPLEX if np.iscomplexobj(A) else REAL


def _make_init(A, y, init: InitStrategy, seed: int) -> np.ndarray:
    if init.kind == "random":
        return random_init(A.shape[1], field_of_matrix(A), seed)
    return spectral_init(A, y, init.power_iters, seed)


def _descend(algorithm, A, y, z, config, truth, value_grad, step_of):
    """Shared fixed-step descent loop with trace recording.

    value_grad(z) -> (loss, grad); step_of(k) -> step size for update k.
    """
    trace = SolveTrace(algorithm=algorithm)
    norm_truth = np.linalg.norm(truth) if truth is not None else None
    for k in range(config.max_iter + 1):
        if not np.all(np.isfinite(z)):
            trace.reason = "diverged"
            trace.final = z
            raise DivergedError(trace)
        f, g = value_grad(z)
        gnorm = float(np.linalg.norm(g))
        rel = float(dist(z, truth) / norm_truth) if truth is not None else None
        trace.records.append(IterRecord(iter=k, loss=f, grad_norm=gnorm, rel_err=rel))
        if not np.isfinite(f) or not np.isfinite(gnorm):
            trace.reason = "diverged"
            trace.final = z
            raise DivergedError(trace)
        if gnorm < config.grad_tol:
            trace.reason = "grad_tol"
            break
        if rel is not None and config.err_tol is not None and rel <= config.err_tol:
            trace.reason = "err_tol"
            break
        if k == config.max_iter:
            trace.reason = "max_iter"
            break
        z = z - step_of(k) * g
    trace.final = z
    return trace


def gd_saf(
    A: np.ndarray,
    y,
    config: GdConfig,
    init: InitStrategy = InitStrategy(),
    seed: int = 0,
    truth: np.ndarray | None = None,
    z0: np.ndarray | None = None,
) -> SolveTrace:
    """Fixed-step gradient descent z <- z - mu * grad F(z) on the smoothed loss.

    An explicit z0 overrides the init strategy (useful for warm starts and
    for probing specific basins).
    """
    y = magnitudes(y)
    if z0 is None:
        z0 = _make_init(A, y, init, seed)
    return _descend(
        "saf", A, y, z0, config, truth,
        lambda z: loss_and_gradient(z, A, y, config.beta),
        lambda k: config.mu,
    )


def _wf_value_grad(A, y, m):
    y2 = y * y

    def value_grad(z):
        w = A.conj() @ z
        r = np.abs(w) ** 2 - y2
        f = float(np.mean(r * r) / 2.0)
        g = (A.T @ (r * w)) / m
        return f, g

    return value_grad


def _taf_value_grad(A, y, m):
    thresh = y / (1.0 + C.TAF_GAMMA)

    def value_grad(z):
        w = A.conj() @ z
        aw = np.abs(w)
        keep = aw >= thresh
        f = float(np.mean((aw - y) ** 2) / 2.0)
        ph = np.where(aw > 0, w / np.where(aw > 0, aw, 1.0), 0.0)
        g = (A.T @ np.where(keep, w - y * ph, 0.0)) / m
        return f, g

    return value_grad


def _twf_value_grad(A, y, m):
    y2 = y * y

    def value_grad(z):
        w = A.conj() @ z
        aw = np.abs(w)
        r = aw * aw - y2
        f = float(np.mean(r * r) / 2.0)
        nz = np.linalg.norm(z)
        K = np.mean(np.abs(r))
        keep = (aw >= C.TWF_ALPHA_LB * nz) & (aw <= C.TWF_ALPHA_UB * nz)
        keep &= np.abs(r) <= C.TWF_ALPHA_H * K * aw / nz
        with np.errstate(divide="ignore", invalid="ignore"):
            coeff = np.where(keep & (aw > 0), r * w / np.where(aw > 0, aw * aw, 1.0), 0.0)
        g = (2.0 / m) * (A.T @ coeff)
        return f, g

    return value_grad


def baseline_solve(
    kind: str,
    A: np.ndarray,
    y,
    config: GdConfig,
    init: InitStrategy = InitStrategy(kind="spectral"),
    seed: int = 0,
    truth: np.ndarray | None = None,
    z0: np.ndarray | None = None,
) -> SolveTrace:
    """Run one of the comparison solvers: 'wf', 'twf', or 'taf'.

    Step sizes and truncation thresholds come from the versioned defaults in
    saflow.constants; config supplies max_iter and the stopping tolerances.
    """
    y = magnitudes(y)
    m = y.shape[0]
    if z0 is None:
        z0 = _make_init(A, y, init, seed)
    if kind == "wf":
        nz0sq = float(np.linalg.norm(z0) ** 2)
        step = lambda k: min(1.0 - np.exp(-(k + 1) / C.WF_K0), C.WF_MU_MAX) / nz0sq
        return _descend("wf", A, y, z0, config, truth, _wf_value_grad(A, y, m), step)
    if kind == "taf":
        return _descend("taf", A, y, z0, config, truth, _taf_value_grad(A, y, m),
                        lambda k: C.TAF_MU)
    if kind == "twf":
        return _descend("twf", A, y, z0, config, truth, _twf_value_grad(A, y, m),
                        lambda k: C.TWF_MU)
    raise ValueError(f"unknown baseline {kind!r}; expected 'wf', 'twf', or 'taf'")


def solve(
    algorithm: str,
    A: np.ndarray,
    y,
    config: GdConfig,
    init: InitStrategy,
    seed: int = 0,
    truth: np.ndarray | None = None,
) -> SolveTrace:
    """Dispatch: 'saf' runs gd_saf, anything else is a named baseline."""
    if algorithm == "saf":
        return gd_saf(A, y, config, init, seed, truth)
    return baseline_solve(algorithm, A, y, config, init, seed, truth)
