"""Optimal and approximate cutoff vectors."""

import logging
import warnings
from dataclasses import dataclass
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import optimize, stats

from ..config import StopkitConfig, default_config
from ..exceptions import ConvergenceWarning
from ..probability import outcome_table, single_k_win_probability, win_value_and_gradient
from ..types import CutoffVector, as_cutoffs

logger = logging.getLogger("stopkit.strategy.optimize")

MonotoneMode = Literal["enforce", "emergent"]

DEFAULT_TOL = 1e-7
TIE_TOL = 1e-9
MAX_RESTARTS = 3
K_MAX = 1.0 - 1e-12


@dataclass(frozen=True)
class OptimizationResult:
    cutoffs: CutoffVector
    pw_total: float
    iterations: int
    converged: bool
    gradient_norm: float
    monotone: MonotoneMode = "enforce"
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "n": self.cutoffs.n,
            "pw_total": self.pw_total,
            "iterations": self.iterations,
            "converged": self.converged,
            "gradient_norm": self.gradient_norm,
            "monotone": self.monotone,
            "cutoffs": list(self.cutoffs.values),
            "notes": list(self.notes),
        }


@dataclass(frozen=True)
class LogLinearFit:
    slope: float
    intercept: float
    correlation: float
    points: int


def approx_cutoffs(n: int) -> CutoffVector:
    """``k_r = (1 - 1/n) + log((n - r)/n)/n`` with ``k_n = 0``, floored at 0."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    r = np.arange(1, n)
    k = (1.0 - 1.0 / n) + np.log((n - r) / n) / n
    return CutoffVector.of(np.append(np.maximum(k, 0.0), 0.0))


def optimal_single_k(n: int) -> tuple[float, float]:
    """Best identical cutoff ``k`` for rounds ``1..n-1`` and its win probability."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    result = optimize.minimize_scalar(
        lambda k: -single_k_win_probability(n, k),
        bounds=(max(0.0, 1.0 - 5.0 / n), K_MAX),
        method="bounded",
        options={"xatol": 1e-10},
    )
    k = float(result.x)
    return k, single_k_win_probability(n, k)


def _project(x: np.ndarray, monotone: MonotoneMode) -> np.ndarray:
    if monotone == "enforce":
        x = optimize.isotonic_regression(x, increasing=False).x
    return np.clip(x, 0.0, K_MAX)


def _stationarity(x: np.ndarray, grad: np.ndarray, monotone: MonotoneMode) -> float:
    # projected ascent step; equals |grad| at interior points
    return float(np.max(np.abs(_project(x + grad, monotone) - x), initial=0.0))


def _is_monotone(x: np.ndarray) -> bool:
    return bool(np.all(np.diff(x) <= 0.0))


def _projected_ascent(
    x: np.ndarray, n: int, tol: float, budget: int
) -> tuple[np.ndarray, int]:
    value, grad = win_value_and_gradient(np.append(x, 0.0), n)
    step = 1.0
    evals = 1
    while evals < budget and _stationarity(x, grad, "enforce") > tol:
        y = _project(x + step * grad, "enforce")
        y_value, y_grad = win_value_and_gradient(np.append(y, 0.0), n)
        evals += 1
        if y_value >= value + 1e-4 * float(grad @ (y - x)):
            x, value, grad = y, y_value, y_grad
            step = min(step * 2.0, 1.0)
        else:
            step /= 2.0
            if step < 1e-16:
                break
    return x, evals


def _optimize(
    n: int,
    x0: np.ndarray,
    tol: float,
    monotone: MonotoneMode,
    config: StopkitConfig,
) -> OptimizationResult:
    def loss(x: np.ndarray) -> tuple[float, np.ndarray]:
        value, grad = win_value_and_gradient(np.append(x, 0.0), n)
        return -value, -grad

    x = np.clip(x0, 0.0, K_MAX)
    budget = config.max_iterations
    evals = 0
    for attempt in range(MAX_RESTARTS + 1):
        result = optimize.minimize(
            loss,
            x,
            jac=True,
            method="L-BFGS-B",
            bounds=[(0.0, K_MAX)] * (n - 1),
            options={
                "maxfun": max(budget - evals, 1),
                "maxiter": max(budget - evals, 1),
                "gtol": tol,
                "ftol": 1e-15,
            },
        )
        x = result.x
        evals += int(result.nfev)
        _, grad = win_value_and_gradient(np.append(x, 0.0), n)
        if _stationarity(x, grad, "emergent") <= tol or evals >= budget:
            break
        logger.debug(
            f"n={n}: restarting quasi-Newton after {evals} evaluations "
            f"({result.message})"
        )

    notes: list[str] = []
    if not _is_monotone(x):
        if monotone == "enforce":
            logger.debug(f"n={n}: iterate left the monotone cone, projecting")
            x, more = _projected_ascent(
                _project(x, "enforce"), n, tol, max(budget - evals, 1)
            )
            evals += more
        else:
            rising = np.flatnonzero(np.diff(x) > 0.0) + 1
            message = "optimum not nonincreasing at rounds " + ", ".join(
                f"{j}->{j + 1}" for j in rising
            )
            logger.warning(f"n={n}: {message}")
            notes.append(message)

    _, grad = win_value_and_gradient(np.append(x, 0.0), n)
    gradient_norm = _stationarity(x, grad, monotone)
    converged = gradient_norm <= tol
    if not converged:
        warnings.warn(
            f"optimizer for n={n} stopped after {evals} evaluations with "
            f"gradient norm {gradient_norm:.3e} > {tol:.3e}",
            ConvergenceWarning,
            stacklevel=3,
        )

    ties = np.flatnonzero(np.abs(np.diff(x)) < TIE_TOL) + 1
    if ties.size:
        logger.info(f"n={n}: near-equal optimal cutoffs at rounds {ties.tolist()}")

    cutoffs = CutoffVector.of(np.append(x, 0.0), permissive=monotone == "emergent")
    return OptimizationResult(
        cutoffs=cutoffs,
        pw_total=outcome_table(n, cutoffs).pw_total,
        iterations=evals,
        converged=converged,
        gradient_norm=gradient_norm,
        monotone=monotone,
        notes=tuple(notes) + cutoffs.notes,
    )


def optimize_cutoffs(
    n: int,
    init: Optional[CutoffVector | Sequence[float]] = None,
    tol: float = DEFAULT_TOL,
    monotone: MonotoneMode = "enforce",
    config: Optional[StopkitConfig] = None,
) -> OptimizationResult:
    """
    Maximizes the exact total win probability over ``k_1..k_{n-1}``.

    ``init`` may hold ``n-1`` free cutoffs or a full vector ending in 0; it
    defaults to :func:`approx_cutoffs`. Results for the default start are
    cached under the ``optimal:`` namespace.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if monotone not in ("enforce", "emergent"):
        raise ValueError(f"unknown monotone mode {monotone!r}")
    config = config or default_config()

    if init is None:
        x0 = approx_cutoffs(n).array[:-1]
        key = (
            f"optimal:n={n}:tol={tol!r}:{monotone}:budget={config.max_iterations}"
        )
        cached = config.cache.get(key)
        if cached is not None:
            logger.debug(f"cache hit for {key}")
            return cached
        result = _optimize(n, x0, tol, monotone, config)
        config.cache.set(key, result)
        return result

    values = np.asarray(
        init.values if isinstance(init, CutoffVector) else list(init), dtype=np.float64
    )
    if values.size == n:
        values = values[:-1]
    if values.size != n - 1:
        raise ValueError(f"init needs {n - 1} or {n} cutoffs, got {values.size}")
    return _optimize(n, values, tol, monotone, config)


def log_linear_fit(cutoffs: CutoffVector | Sequence[float]) -> LogLinearFit:
    """Least-squares line of ``k_r`` against ``log(n - r)`` for ``r <= n - 5``."""
    cutoffs = as_cutoffs(cutoffs)
    n = cutoffs.n
    if n < 7:
        raise ValueError(f"a log-linear fit needs n >= 7, got {n}")
    r = np.arange(1, n - 4)
    fit = stats.linregress(np.log(n - r), cutoffs.array[: n - 5])
    return LogLinearFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        correlation=float(fit.rvalue),
        points=int(r.size),
    )

