"""Uniform settings sampling with partition-independent random streams.

Every sample consumes a fixed number of uniforms from one global Philox
(counter-based) stream per seed, so the points produced for block ``b`` of
size ``s`` are the global samples ``[b*s, (b+1)*s)`` no matter how many other
blocks are drawn, in what order, or by which worker.

Measures: directions are uniform on the unit sphere (cos(theta) uniform on
[-1, 1], phi uniform on [0, 2pi)); phases are uniform on [0, 2pi) per
coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArityError, InvalidParameterError
from .functionals import BellFunctional, DirectionSettings, PhaseSettings, SettingsPoint


@dataclass(frozen=True)
class SettingsSpace:
    """Product of unit spheres ('spheres', size = direction count) or a phase
    torus ('torus', size = number of phases)."""

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in ("spheres", "torus"):
            raise InvalidParameterError(f"kind must be 'spheres' or 'torus', got {self.kind!r}")
        if self.size <= 0:
            raise InvalidParameterError(f"size must be positive, got {self.size}")

    @property
    def total_volume(self) -> float:
        if self.kind == "spheres":
            return float((4.0 * np.pi) ** self.size)
        return float((2.0 * np.pi) ** self.size)

    @property
    def draws_per_sample(self) -> int:
        return 2 * self.size if self.kind == "spheres" else self.size


def spheres(count: int) -> SettingsSpace:
    return SettingsSpace("spheres", count)


def torus(dim: int) -> SettingsSpace:
    return SettingsSpace("torus", dim)


def space_for(functional: BellFunctional) -> SettingsSpace:
    """The settings space a functional is integrated over."""
    if functional.is_qubit:
        return spheres(functional.direction_count)
    return torus(functional.phase_count)


def space_volume(space: SettingsSpace) -> float:
    return space.total_volume


@dataclass(frozen=True)
class SampleStream:
    """Address of one block of samples within the seed's global sequence."""

    seed: int
    block_index: int = 0
    block_size: int = 1

    def __post_init__(self):
        if self.block_index < 0 or self.block_size < 1:
            raise InvalidParameterError("block_index must be >= 0 and block_size >= 1")


def _uniform_block(seed: int, draw_offset: int, n_draws: int) -> np.ndarray:
    # Philox.advance counts 128-bit counter blocks (4 native draws each), so
    # align to the block and discard the within-block remainder.
    bitgen = np.random.Philox(key=np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    blocks, rem = divmod(draw_offset, 4)
    if blocks:
        bitgen.advance(blocks)
    gen = np.random.Generator(bitgen)
    if rem:
        gen.random(rem)
    return gen.random(n_draws)


def sample_range(space: SettingsSpace, seed: int, start: int, count: int) -> np.ndarray:
    """Global samples [start, start + count) of the seed's sequence.

    Returns unit vectors of shape (count, k, 3) for sphere spaces and phases
    of shape (count, dim) for torus spaces.
    """
    dps = space.draws_per_sample
    u = _uniform_block(seed, start * dps, count * dps).reshape(count, dps)
    if space.kind == "torus":
        return 2.0 * np.pi * u
    cos_t = 2.0 * u[:, 0::2] - 1.0
    phi = 2.0 * np.pi * u[:, 1::2]
    sin_t = np.sqrt(1.0 - cos_t**2)
    return np.stack(
        [sin_t * np.cos(phi), sin_t * np.sin(phi), cos_t], axis=-1
    )  # (count, k, 3)


def sample_batch(space: SettingsSpace, stream: SampleStream) -> np.ndarray:
    """All samples of the stream's block (see ``sample_range`` for shapes)."""
    return sample_range(
        space, stream.seed, stream.block_index * stream.block_size, stream.block_size
    )


def sample_settings(space: SettingsSpace, stream: SampleStream) -> SettingsPoint:
    """The first settings point of the stream's block."""
    batch = sample_range(space, stream.seed, stream.block_index * stream.block_size, 1)
    if space.kind == "spheres":
        return DirectionSettings.from_vectors(batch[0])
    d, rem = divmod(space.size, 4)
    if rem != 0:
        raise ArityError(f"torus dimension {space.size} is not a 2x2xd phase layout")
    return PhaseSettings.from_flat(d, batch[0])
