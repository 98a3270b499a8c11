"""Drivers assembling the headline experiments: parameter sweeps, noise curves,
2-D sections of the violating set, and the two-parameter ququart survey."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AxisError, InvalidParameterError, MixedStateError
from .functionals import (
    BellFunctional,
    CHSH,
    PhaseSettings,
    batch_evaluator,
)
from .optimize import MaxResult, OptimizerConfig, maximize_bell
from .sampling import space_for
from .states import (
    BipartiteState,
    alpha_qubit,
    concurrence_two_qubit,
    entropy_of_entanglement,
    gamma_qutrit,
    lambda_ququart,
)
from .volume import VolumeEstimate, estimate_volume


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a family sweep: parameters, entanglement, I_max, V."""

    params: tuple[float, ...]
    entanglement: float
    i_max: float
    volume: VolumeEstimate


@dataclass(frozen=True)
class SectionGrid:
    """Violation mask of a 2-D section through the phase torus."""

    axis_pair: tuple[str, str]
    resolution: int
    fixed_point: PhaseSettings
    violation_mask: np.ndarray
    area: float


def _entanglement(state: BipartiteState) -> float:
    if state.is_pure:
        return entropy_of_entanglement(state)
    if state.local_dim == 2:
        return concurrence_two_qubit(state)
    raise MixedStateError("no entanglement measure for noisy states with d > 2")


def _state_for(family: str, value, noise: float) -> BipartiteState:
    if family == "alpha":
        return alpha_qubit(float(value), noise)
    if family == "gamma":
        return gamma_qutrit(float(value), noise)
    if family == "lambda":
        v = np.atleast_1d(value).astype(float)
        if v.size == 1:
            v = np.array([v[0], v[0]])
        return lambda_ququart(v[0], v[1], noise)
    raise InvalidParameterError(f"unknown family {family!r}")


def sweep_family(
    family: str,
    grid,
    functional: BellFunctional,
    samples: int,
    seed: int,
    noise: float = 0.0,
    *,
    restarts: int = 32,
    workers: int = 1,
) -> list[SweepRow]:
    """Entanglement, I_max and V for every family parameter on the grid.

    Grid point i consumes samples [i*samples, (i+1)*samples) of the seed's
    stream, so neighboring points share no randomness.
    """
    grid = list(grid)
    if not grid:
        raise InvalidParameterError("parameter grid must be nonempty")
    config = OptimizerConfig(restarts=restarts, seed=seed)
    rows = []
    for i, value in enumerate(grid):
        state = _state_for(family, value, noise)
        best: MaxResult = maximize_bell(state, functional, config=config, workers=workers)
        est = estimate_volume(
            state, functional, samples=samples, seed=seed,
            sample_offset=i * samples, workers=workers,
        )
        params = tuple(float(v) for v in np.atleast_1d(value))
        rows.append(SweepRow(params, _entanglement(state), best.value, est))
    return rows


def noise_sweep(
    alpha: float,
    f_grid,
    functional: BellFunctional = CHSH,
    samples: int = 1_000_000,
    seed: int = 0,
    *,
    restarts: int = 32,
    workers: int = 1,
) -> list[SweepRow]:
    """Concurrence and V of the noisy alpha state across a noise-fraction grid."""
    f_grid = list(f_grid)
    if not f_grid:
        raise InvalidParameterError("noise grid must be nonempty")
    config = OptimizerConfig(restarts=restarts, seed=seed)
    rows = []
    for i, f in enumerate(f_grid):
        state = alpha_qubit(alpha, float(f))
        best = maximize_bell(state, functional, config=config, workers=workers)
        est = estimate_volume(
            state, functional, samples=samples, seed=seed,
            sample_offset=i * samples, workers=workers,
        )
        rows.append(SweepRow((float(f),), concurrence_two_qubit(state), best.value, est))
    return rows


# ---------------------------------------------------------------------------
# 2-D sections
# ---------------------------------------------------------------------------

def phase_axis_index(d: int, axis: str) -> int:
    """Flat index of a phase coordinate named like 'a1_j0' or 'b2_j2'."""
    try:
        party, rest = axis[0], axis[1:]
        setting_str, level_str = rest.split("_j")
        setting, level = int(setting_str), int(level_str)
    except (ValueError, IndexError):
        raise AxisError(f"cannot parse axis name {axis!r} (expected e.g. 'a1_j0')") from None
    if party not in ("a", "b") or setting not in (1, 2) or not 0 <= level < d:
        raise AxisError(f"axis {axis!r} is not a coordinate of the 4x{d} phase torus")
    base = 0 if party == "a" else 2 * d
    return base + (setting - 1) * d + level


def optimal_cglmp_phases(d: int) -> PhaseSettings:
    """The Fourier-type phases that maximize the inequality for gamma = 1:
    phi_1(j) = 0, phi_2(j) = pi j / d, chi_1(j) = pi j / (2d) = -chi_2(j)."""
    j = np.arange(d)
    alice = np.stack([np.zeros(d), np.pi * j / d])
    bob = np.stack([np.pi * j / (2 * d), -np.pi * j / (2 * d)])
    return PhaseSettings(d, alice, bob)


def section_fixed_point(phi2_reading: str = "ramp") -> PhaseSettings:
    """Fixed phases for the published section plots through the qutrit torus.

    Swept axes are a1_j0 and b2_j2. The displacement away from the optimum
    applies to Alice's second setting and zeroes Bob's first setting; the
    'ramp' reading (phi_2(j) = pi j / 6 for every j, half the optimal slope)
    reproduces the published 14% area ratio between the maximally entangled
    and maximally violating states. 'constant' and 'linear' displace only the
    j = 0, 1 entries and are kept for comparison (both give ratios near 1).
    """
    opt = optimal_cglmp_phases(3)
    alice = np.array(opt.alice)
    bob = np.array(opt.bob)
    j = np.arange(3)
    if phi2_reading == "ramp":
        alice[1] = np.pi * j / 6
    elif phi2_reading == "constant":
        alice[1, 0] = np.pi / 6
        alice[1, 1] = np.pi / 6
    elif phi2_reading == "linear":
        alice[1, 0] = 0.0
        alice[1, 1] = np.pi / 6
    else:
        raise InvalidParameterError(f"unknown phi2 reading {phi2_reading!r}")
    bob[0, :] = 0.0
    return PhaseSettings(3, alice, bob)


def section_2d(
    state: BipartiteState,
    functional: BellFunctional,
    fixed_point: PhaseSettings,
    axis_pair: tuple[str, str] = ("a1_j0", "b2_j2"),
    resolution: int = 512,
) -> SectionGrid:
    """Violation mask over a 2-D section, evaluated at cell centers.

    mask[i, j] refers to axis_pair[0] at center i and axis_pair[1] at center j;
    area is the violating cell count times the cell measure (2 pi / res)^2.
    """
    if functional.is_qubit:
        raise AxisError("sections are defined on phase functionals")
    d = functional.outcomes
    if resolution < 2:
        raise InvalidParameterError("resolution must be >= 2")
    ia, ib = (phase_axis_index(d, ax) for ax in axis_pair)
    if ia == ib:
        raise AxisError(f"section axes must differ, got {axis_pair}")
    centers = (np.arange(resolution) + 0.5) * (2 * np.pi / resolution)
    flat = np.tile(fixed_point.flat(), (resolution * resolution, 1))
    aa, bb = np.meshgrid(centers, centers, indexing="ij")
    flat[:, ia] = aa.ravel()
    flat[:, ib] = bb.ravel()
    values = batch_evaluator(state, functional)(flat)
    mask = (values > functional.local_bound).reshape(resolution, resolution)
    cell = (2 * np.pi / resolution) ** 2
    return SectionGrid(
        axis_pair=tuple(axis_pair),
        resolution=resolution,
        fixed_point=fixed_point,
        violation_mask=mask,
        area=float(mask.sum() * cell),
    )


# ---------------------------------------------------------------------------
# two-parameter survey
# ---------------------------------------------------------------------------

def survey_region(
    l1_grid,
    l2_grid,
    functional: BellFunctional,
    samples: int,
    seed: int,
    *,
    restarts: int = 24,
    workers: int = 1,
) -> list[SweepRow]:
    """V (and I_max) over a rectangular (lambda1, lambda2) grid, row-major."""
    l1_grid, l2_grid = list(l1_grid), list(l2_grid)
    if not l1_grid or not l2_grid:
        raise InvalidParameterError("survey grids must be nonempty")
    config = OptimizerConfig(restarts=restarts, seed=seed)
    rows = []
    for i, l1 in enumerate(l1_grid):
        for j, l2 in enumerate(l2_grid):
            state = lambda_ququart(float(l1), float(l2))
            best = maximize_bell(state, functional, config=config, workers=workers)
            est = estimate_volume(
                state, functional, samples=samples, seed=seed,
                sample_offset=(i * len(l2_grid) + j) * samples, workers=workers,
            )
            rows.append(
                SweepRow((float(l1), float(l2)), _entanglement(state), best.value, est)
            )
    return rows


def argmax_row(rows: list[SweepRow]) -> SweepRow:
    """Row with the largest estimated violation fraction (first on ties)."""
    best = max(range(len(rows)), key=lambda i: (rows[i].volume.fraction, -i))
    return rows[best]
