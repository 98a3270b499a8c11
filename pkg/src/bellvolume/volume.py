"""Monte Carlo estimation of the violation volume V = vol({x : I(x) > xi}) / N.

Hit counting is exact integer arithmetic over fixed-size sample blocks; the
block-addressable sampler makes the hit count a pure function of
(seed, sample_offset, samples), independent of worker count and scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Mapping

import numpy as np

from .errors import ArityError, NormalizationError
from .functionals import BellFunctional, batch_evaluator
from .sampling import SettingsSpace, sample_range, space_for
from .states import BipartiteState

Z95 = 1.959963984540054  # two-sided 95% normal quantile

DEFAULT_BLOCK_SIZE = 1 << 17


def wilson_interval(hits: int, samples: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval; informative even at zero hit counts."""
    if samples <= 0:
        raise ArityError("samples must be positive")
    p = hits / samples
    denom = 1.0 + z * z / samples
    center = p + z * z / (2 * samples)
    half = z * math.sqrt(p * (1.0 - p) / samples + z * z / (4.0 * samples * samples))
    return ((center - half) / denom, (center + half) / denom)


@dataclass(frozen=True)
class VolumeEstimate:
    hits: int
    samples: int
    fraction: float
    stderr: float
    ci95: tuple[float, float]
    normalization: str = "absolute"
    value: float = 0.0

    @staticmethod
    def from_counts(hits: int, samples: int) -> "VolumeEstimate":
        p = hits / samples
        se = math.sqrt(p * (1.0 - p) / samples)
        return VolumeEstimate(
            hits=int(hits),
            samples=int(samples),
            fraction=p,
            stderr=se,
            ci95=wilson_interval(hits, samples),
            normalization="absolute",
            value=p,
        )


def _check_arity(functional: BellFunctional, space: SettingsSpace) -> None:
    expected = space_for(functional)
    if (space.kind, space.size) != (expected.kind, expected.size):
        raise ArityError(
            f"{functional.kind} integrates over {expected.kind}({expected.size}), "
            f"got {space.kind}({space.size})"
        )


def _count_hits(
    values: Callable[[np.ndarray], np.ndarray],
    space: SettingsSpace,
    seed: int,
    sample_offset: int,
    samples: int,
    threshold: float,
    block_size: int,
) -> int:
    # Blocks are addressed in global sample units so that the count is the
    # same however the [offset, offset+samples) range is split across calls.
    hits = 0
    done = 0
    while done < samples:
        n = min(block_size, samples - done)
        batch = sample_range(space, seed, sample_offset + done, n)
        hits += int(np.count_nonzero(values(batch) > threshold))
        done += n
    return hits


def _hits_task(args) -> int:
    state, functional, space, seed, offset, samples, threshold, block_size = args
    values = batch_evaluator(state, functional)
    return _count_hits(values, space, seed, offset, samples, threshold, block_size)


def estimate_volume(
    state: BipartiteState,
    functional: BellFunctional,
    space: SettingsSpace | None = None,
    samples: int = 1_000_000,
    seed: int = 0,
    *,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
    sample_offset: int = 0,
    margin: float = 0.0,
) -> VolumeEstimate:
    """Fraction of uniformly sampled settings with I(x) > local bound (+ margin).

    Deterministic for fixed (seed, sample_offset, samples), bit-identical for
    any ``workers`` value. ``sample_offset`` shifts the consumed range of the
    seed's global sample sequence so that related runs share no samples.
    """
    if samples < 1:
        raise ArityError("samples must be >= 1")
    if space is None:
        space = space_for(functional)
    _check_arity(functional, space)
    threshold = functional.local_bound + margin
    if workers <= 1:
        values = batch_evaluator(state, functional)
        hits = _count_hits(values, space, seed, sample_offset, samples, threshold, block_size)
        return VolumeEstimate.from_counts(hits, samples)

    n_chunks = min(workers * 4, max(1, math.ceil(samples / block_size)))
    bounds = np.linspace(0, samples, n_chunks + 1, dtype=int)
    tasks = [
        (state, functional, space, seed, sample_offset + int(lo), int(hi - lo), threshold, block_size)
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if hi > lo
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        hits = sum(pool.map(_hits_task, tasks))
    return VolumeEstimate.from_counts(hits, samples)


def estimate_volume_target_stderr(
    state: BipartiteState,
    functional: BellFunctional,
    target_stderr: float,
    seed: int = 0,
    *,
    initial_samples: int = 100_000,
    max_samples: int = 100_000_000,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> VolumeEstimate:
    """Grow the sample count in blocks until the standard error meets the target.

    Extends the same global sequence, so the result equals a fixed-N run with
    the final sample count.
    """
    if target_stderr <= 0:
        raise ArityError("target_stderr must be positive")
    space = space_for(functional)
    total = 0
    hits = 0
    step = min(initial_samples, max_samples)
    while True:
        part = estimate_volume(
            state, functional, space, step, seed,
            workers=workers, block_size=block_size, sample_offset=total,
        )
        hits += part.hits
        total += step
        est = VolumeEstimate.from_counts(hits, total)
        # zero-hit runs have stderr 0; use the Wilson upper bound as the scale
        scale = est.stderr if est.hits else est.ci95[1] / Z95
        if scale <= target_stderr or total >= max_samples:
            return est
        step = min(total, max_samples - total)  # double, capped


def calibrate_estimator(
    space: SettingsSpace,
    predicate: Callable[[np.ndarray], np.ndarray],
    samples: int,
    seed: int = 0,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> VolumeEstimate:
    """Estimate the measure fraction of an arbitrary predicate (estimator self-test).

    ``predicate`` maps a sample batch to a boolean array.
    """
    hits = 0
    done = 0
    while done < samples:
        n = min(block_size, samples - done)
        hits += int(np.count_nonzero(predicate(sample_range(space, seed, done, n))))
        done += n
    return VolumeEstimate.from_counts(hits, samples)


def relative_normalize(
    estimates: Mapping[str, VolumeEstimate], reference: str
) -> dict[str, VolumeEstimate]:
    """Rescale values so the reference estimate reads 1 (ratio-of-proportions errors)."""
    if reference not in estimates:
        raise NormalizationError(f"reference label {reference!r} not among estimates")
    ref = estimates[reference]
    if ref.fraction <= 0:
        raise NormalizationError(f"reference {reference!r} has zero violation fraction")
    out = {}
    for label, est in estimates.items():
        ratio = est.fraction / ref.fraction
        if label == reference:
            stderr = 0.0  # the reference is normalized against itself
        else:
            rel_sq = 0.0
            if est.fraction > 0:
                rel_sq += (est.stderr / est.fraction) ** 2
            rel_sq += (ref.stderr / ref.fraction) ** 2
            stderr = ratio * math.sqrt(rel_sq)
        out[label] = replace(
            est,
            normalization=f"relative:{reference}",
            value=ratio,
            stderr=stderr,
            ci95=(est.ci95[0] / ref.fraction, est.ci95[1] / ref.fraction),
        )
    return out


def default_workers() -> int:
    """Worker count from the environment override, else 1."""
    raw = os.environ.get("BELLVOLUME_WORKERS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
