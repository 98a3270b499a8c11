"""Maximization of Bell functionals over measurement settings.

Multi-start Nelder-Mead from uniform random starting points. The objective is
smooth except for one absolute-value kink (chsh), cheap, and low-dimensional
(<= 16), so derivative-free local search with enough restarts is reliable;
the qubit case is cross-checked against the closed-form chsh maximum.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .states import BipartiteState, QubitCorrelationData
from .functionals import (
    BellFunctional,
    DirectionSettings,
    PhaseSettings,
    SettingsPoint,
    batch_evaluator,
)
from .sampling import SettingsSpace, sample_range, space_for

_AGREE_RTOL = 1e-6  # restarts within this of the best count as agreeing


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 64
    max_iterations: int = 2000
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class MaxResult:
    value: float
    argmax: SettingsPoint
    restarts_agreeing: int


def horodecki_chsh_max(data: QubitCorrelationData) -> float:
    """Closed-form chsh maximum 2*sqrt(s1^2 + s2^2) from the correlation matrix."""
    s = np.linalg.svd(data.T, compute_uv=False)
    return float(2.0 * np.sqrt(s[0] ** 2 + s[1] ** 2))


def _directions_from_angles(x: np.ndarray) -> np.ndarray:
    ang = x.reshape(-1, 2)
    st = np.sin(ang[:, 0])
    return np.column_stack([st * np.cos(ang[:, 1]), st * np.sin(ang[:, 1]), np.cos(ang[:, 0])])


def _start_params(space: SettingsSpace, seed: int, index: int) -> np.ndarray:
    point = sample_range(space, seed, index, 1)[0]
    if space.kind == "torus":
        return point
    theta = np.arccos(np.clip(point[:, 2], -1.0, 1.0))
    phi = np.mod(np.arctan2(point[:, 1], point[:, 0]), 2 * np.pi)
    return np.column_stack([theta, phi]).ravel()


def _run_restart(args) -> tuple[float, np.ndarray]:
    state, functional, space, seed, index, max_iter, tol = args
    values = batch_evaluator(state, functional)
    if space.kind == "torus":
        neg = lambda x: -float(values(x[None, :])[0])
    else:
        neg = lambda x: -float(values(_directions_from_angles(x)[None, :, :])[0])
    x = _start_params(space, seed, index)
    options = {"maxiter": max_iter, "maxfev": 4 * max_iter, "xatol": tol, "fatol": tol,
               "adaptive": True}
    # second pass rebuilds the simplex around the found optimum, which
    # recovers runs that stalled on a shrunken simplex
    for _ in range(2):
        res = minimize(neg, x, method="Nelder-Mead", options=options)
        x = res.x
    return -neg(x), x


def maximize_bell(
    state: BipartiteState,
    functional: BellFunctional,
    space: SettingsSpace | None = None,
    config: OptimizerConfig = OptimizerConfig(),
    *,
    workers: int = 1,
) -> MaxResult:
    """Best functional value over ``config.restarts`` local searches.

    Deterministic for a fixed config seed; the restart list for a larger
    ``restarts`` extends the smaller one, so the best value is monotone in the
    number of restarts. Ties go to the lowest restart index.
    """
    if space is None:
        space = space_for(functional)
    tasks = [
        (state, functional, space, config.seed, r, config.max_iterations, config.tolerance)
        for r in range(config.restarts)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_restart, tasks))
    else:
        results = [_run_restart(t) for t in tasks]

    best_idx = max(range(len(results)), key=lambda i: (results[i][0], -i))
    best_value, best_x = results[best_idx]
    agree_tol = _AGREE_RTOL * max(1.0, abs(best_value))
    agreeing = sum(1 for v, _ in results if best_value - v <= agree_tol)

    if space.kind == "torus":
        argmax = PhaseSettings.from_flat(functional.outcomes, best_x)
        value_fn = batch_evaluator(state, functional)
        value = float(value_fn(argmax.flat()[None, :])[0])
    else:
        argmax = DirectionSettings.from_vectors(_directions_from_angles(best_x))
        value_fn = batch_evaluator(state, functional)
        value = float(value_fn(argmax.unit_vectors()[None, :, :])[0])
    return MaxResult(value=value, argmax=argmax, restarts_agreeing=agreeing)
