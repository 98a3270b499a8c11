"""Bell functionals evaluated at single settings points or at sample batches.

Supported functionals and their local bounds:

  chsh           |E(a,b) - E(a,d)| + E(c,d) + E(c,b)            <= 2   (4 directions)
  bell-original  chsh with c = d                                <= 2   (3 directions)
  i3322          Collins-Gisin zero-bound form                  <= 0   (6 directions)
  cglmp3         two-setting three-outcome phase inequality     <= 2   (12 phases)
  cglmp4         two-setting four-outcome phase inequality      <= 2   (16 phases)

Qubit functionals consume precomputed ``QubitCorrelationData``; the CGLMP
family works on the phase parametrization of multiport-interferometer
measurements (see ``_residue_probs`` for the conventions).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import ArityError, DimensionError
from .states import BipartiteState, QubitCorrelationData, qubit_correlation_data

_QUBIT_KINDS = {"chsh": 4, "bell-original": 3, "i3322": 6}
_CGLMP_KINDS = {"cglmp3": 3, "cglmp4": 4}
_BOUNDS = {"chsh": 2.0, "bell-original": 2.0, "i3322": 0.0, "cglmp3": 2.0, "cglmp4": 2.0}


@dataclass(frozen=True)
class BellFunctional:
    """A named inequality together with its local-causality bound."""

    kind: str

    def __post_init__(self):
        if self.kind not in _BOUNDS:
            raise ArityError(f"unknown functional {self.kind!r}; expected one of {sorted(_BOUNDS)}")

    @property
    def local_bound(self) -> float:
        return _BOUNDS[self.kind]

    @property
    def is_qubit(self) -> bool:
        return self.kind in _QUBIT_KINDS

    @property
    def direction_count(self) -> int:
        if not self.is_qubit:
            raise ArityError(f"{self.kind} is a phase functional, not a direction functional")
        return _QUBIT_KINDS[self.kind]

    @property
    def outcomes(self) -> int:
        """Local dimension d of the states this functional tests."""
        return 2 if self.is_qubit else _CGLMP_KINDS[self.kind]

    @property
    def phase_count(self) -> int:
        if self.is_qubit:
            raise ArityError(f"{self.kind} is a direction functional, not a phase functional")
        return 4 * _CGLMP_KINDS[self.kind]


CHSH = BellFunctional("chsh")
BELL_ORIGINAL = BellFunctional("bell-original")
I3322 = BellFunctional("i3322")
CGLMP3 = BellFunctional("cglmp3")
CGLMP4 = BellFunctional("cglmp4")


def functional_from_name(name: str) -> BellFunctional:
    return BellFunctional(name.strip().lower())


def local_bound(functional: BellFunctional) -> float:
    return functional.local_bound


@dataclass(frozen=True)
class DirectionSettings:
    """Tuple of measurement directions, stored as (theta, phi) rows."""

    angles: np.ndarray  # shape (k, 2)

    def __post_init__(self):
        angles = np.asarray(self.angles, dtype=float)
        if angles.ndim != 2 or angles.shape[1] != 2:
            raise ArityError(f"angles must have shape (k, 2), got {angles.shape}")
        angles.setflags(write=False)
        object.__setattr__(self, "angles", angles)

    @property
    def count(self) -> int:
        return self.angles.shape[0]

    def unit_vectors(self) -> np.ndarray:
        theta, phi = self.angles[:, 0], self.angles[:, 1]
        st = np.sin(theta)
        return np.column_stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)])

    @staticmethod
    def from_vectors(vectors: np.ndarray) -> "DirectionSettings":
        v = np.asarray(vectors, dtype=float)
        norm = np.linalg.norm(v, axis=-1, keepdims=True)
        v = v / norm
        theta = np.arccos(np.clip(v[:, 2], -1.0, 1.0))
        phi = np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * np.pi)
        return DirectionSettings(np.column_stack([theta, phi]))


@dataclass(frozen=True)
class PhaseSettings:
    """Per-level phases for two settings per party: alice[a, j], bob[b, j]."""

    outcomes: int
    alice: np.ndarray  # shape (2, d)
    bob: np.ndarray  # shape (2, d)

    def __post_init__(self):
        d = self.outcomes
        for name in ("alice", "bob"):
            arr = np.mod(np.asarray(getattr(self, name), dtype=float), 2 * np.pi)
            if arr.shape != (2, d):
                raise ArityError(f"{name} phases must have shape (2, {d}), got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def flat(self) -> np.ndarray:
        """Coordinates in the canonical order [A1(0..d-1), A2, B1, B2]."""
        return np.concatenate([self.alice.ravel(), self.bob.ravel()])

    @staticmethod
    def from_flat(d: int, x: np.ndarray) -> "PhaseSettings":
        x = np.asarray(x, dtype=float).ravel()
        if x.size != 4 * d:
            raise ArityError(f"expected {4 * d} phases, got {x.size}")
        return PhaseSettings(d, x[: 2 * d].reshape(2, d), x[2 * d :].reshape(2, d))


SettingsPoint = DirectionSettings | PhaseSettings


@dataclass(frozen=True)
class BellEvaluation:
    value: float
    bound: float

    @property
    def violated(self) -> bool:
        return self.value > self.bound


# ---------------------------------------------------------------------------
# qubit functionals
# ---------------------------------------------------------------------------

def correlation(data: QubitCorrelationData, a: np.ndarray, b: np.ndarray) -> float:
    """E(a, b) = a^T T b for unit direction vectors a, b."""
    return float(np.asarray(a) @ data.T @ np.asarray(b))


def _pair_correlations(data: QubitCorrelationData, dirs: np.ndarray, pairs) -> list[np.ndarray]:
    # dirs: (n, k, 3); each pair (i, j) gives E(dir_i, dir_j) per sample
    return [np.einsum("ni,ni->n", dirs[:, i] @ data.T, dirs[:, j]) for i, j in pairs]


def chsh_batch(data: QubitCorrelationData, dirs: np.ndarray) -> np.ndarray:
    """Vectorized chsh over direction batches of shape (n, 4, 3), order (a, b, c, d)."""
    e_ab, e_ad, e_cd, e_cb = _pair_correlations(data, dirs, [(0, 1), (0, 3), (2, 3), (2, 1)])
    return np.abs(e_ab - e_ad) + e_cd + e_cb


def bell_original_batch(data: QubitCorrelationData, dirs: np.ndarray) -> np.ndarray:
    """Vectorized three-direction original inequality, order (a, b, d)."""
    e_ab, e_ad, e_dd, e_db = _pair_correlations(data, dirs, [(0, 1), (0, 2), (2, 2), (2, 1)])
    return np.abs(e_ab - e_ad) + e_dd + e_db


_I3322_JOINT = np.array([[1.0, 1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, 0.0]])


def i3322_batch(data: QubitCorrelationData, dirs: np.ndarray) -> np.ndarray:
    """Vectorized 3322 functional over (n, 6, 3) batches: three directions per party.

    Joint click probabilities come from P(+,+) = (1 + a.rA + b.rB + a^T T b) / 4.
    """
    a, b = dirs[:, :3], dirs[:, 3:]
    corr = np.einsum("nik,kl,njl->nij", a, data.T, b)  # (n, 3, 3)
    ma = a @ data.r_a  # (n, 3)
    mb = b @ data.r_b
    joint = 0.25 * (1.0 + ma[:, :, None] + mb[:, None, :] + corr)
    pa = 0.5 * (1.0 + ma)
    pb = 0.5 * (1.0 + mb)
    return (
        np.einsum("nij,ij->n", joint, _I3322_JOINT)
        - pa[:, 0]
        - 2.0 * pb[:, 0]
        - pb[:, 1]
    )


# ---------------------------------------------------------------------------
# CGLMP functionals on the phase torus
# ---------------------------------------------------------------------------
#
# The outcome amplitude for settings (a, b) is
#
#     A(k, l) ~ sum_j c_j exp(i [phi_a(j) + chi_b(j)]) exp(i 2 pi j (k + l) / d),
#
# so P(k, l) depends on (k, l) only through the residue s = (k + l) mod d; each
# residue class contains d outcome pairs of equal probability. With this
# convention the "A_a equals B_b shifted by c" events of the inequality are the
# residue events s = c (Bob's outcome enters through d - l, which is the
# relabeling that makes the same-sign phase convention match the standard
# conjugate one). ``_cglmp_coefficients`` folds the whole functional into one
# (2, 2, d) tensor over residue probabilities.

@lru_cache(maxsize=None)
def _fourier_matrix(d: int) -> np.ndarray:
    m, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * m * j / d)


@lru_cache(maxsize=None)
def _cglmp_coefficients(d: int) -> np.ndarray:
    c = np.zeros((2, 2, d))
    for k in range(d // 2):
        w = 1.0 - 2.0 * k / (d - 1.0)
        c[0, 0, k % d] += w  # P(A1 = B1 + k)
        c[1, 0, (-(k + 1)) % d] += w  # P(B1 = A2 + k + 1)
        c[1, 1, k % d] += w  # P(A2 = B2 + k)
        c[0, 1, (-k) % d] += w  # P(B2 = A1 + k)
        c[0, 0, (-(k + 1)) % d] -= w  # P(A1 = B1 - k - 1)
        c[1, 0, k % d] -= w  # P(B1 = A2 - k)
        c[1, 1, (-(k + 1)) % d] -= w  # P(A2 = B2 - k - 1)
        c[0, 1, (k + 1) % d] -= w  # P(B2 = A1 - k - 1)
    c.setflags(write=False)
    return c


def _residue_probs(amplitudes: np.ndarray, noise: float, phases: np.ndarray) -> np.ndarray:
    """Probabilities Q[n, a, b, s] that (k + l) mod d = s, for phase batches.

    ``phases`` has shape (n, 4d) in the canonical order [A1, A2, B1, B2].
    """
    d = amplitudes.size
    n = phases.shape[0]
    ph = phases.reshape(n, 4, d)
    ea = np.exp(1j * ph[:, :2])  # (n, 2, d)
    eb = np.exp(1j * ph[:, 2:])
    weighted = ea * amplitudes  # (n, 2, d)
    mats = np.einsum("naj,mj->namj", weighted, _fourier_matrix(d))
    g = np.einsum("namj,nbj->nabm", mats, eb)  # (n, 2, 2, d)
    q = g.real**2 + g.imag**2
    q /= q.sum(axis=-1, keepdims=True)
    if noise > 0:
        q = (1.0 - noise) * q + noise / d
    return q


def cglmp_batch(state: BipartiteState, d: int, phases: np.ndarray) -> np.ndarray:
    """Vectorized CGLMP value over phase batches of shape (n, 4d)."""
    if state.local_dim != d:
        raise DimensionError(f"state has d={state.local_dim}, functional needs d={d}")
    q = _residue_probs(state.amplitudes, state.noise_fraction, phases)
    return np.einsum("nabs,abs->n", q, _cglmp_coefficients(d))


def cglmp_joint_prob(
    state: BipartiteState, point: PhaseSettings, a: int, b: int, k: int, l: int
) -> float:
    """Joint outcome probability P(k, l | A_a, B_b), settings indexed from 1."""
    d = state.local_dim
    if point.outcomes != d:
        raise DimensionError(f"settings are for d={point.outcomes}, state has d={d}")
    if a not in (1, 2) or b not in (1, 2):
        raise ArityError(f"setting indices must be 1 or 2, got a={a}, b={b}")
    if not (0 <= k < d and 0 <= l < d):
        raise ArityError(f"outcomes must lie in [0, {d}), got k={k}, l={l}")
    q = _residue_probs(state.amplitudes, state.noise_fraction, point.flat()[None, :])
    return float(q[0, a - 1, b - 1, (k + l) % d] / d)


def cglmp_value(state: BipartiteState, point: PhaseSettings) -> BellEvaluation:
    d = state.local_dim
    if d not in (3, 4):
        raise DimensionError(f"CGLMP implemented for d in (3, 4), got d={d}")
    if point.outcomes != d:
        raise ArityError(f"settings are for d={point.outcomes}, state has d={d}")
    value = float(cglmp_batch(state, d, point.flat()[None, :])[0])
    return BellEvaluation(value, 2.0)


# ---------------------------------------------------------------------------
# single-point wrappers
# ---------------------------------------------------------------------------

def _direction_batch(point: DirectionSettings, count: int) -> np.ndarray:
    if point.count != count:
        raise ArityError(f"expected {count} directions, got {point.count}")
    return point.unit_vectors()[None, :, :]


def chsh_value(data: QubitCorrelationData, point: DirectionSettings) -> BellEvaluation:
    return BellEvaluation(float(chsh_batch(data, _direction_batch(point, 4))[0]), 2.0)


def bell_original_value(data: QubitCorrelationData, point: DirectionSettings) -> BellEvaluation:
    return BellEvaluation(float(bell_original_batch(data, _direction_batch(point, 3))[0]), 2.0)


def i3322_value(data: QubitCorrelationData, point: DirectionSettings) -> BellEvaluation:
    return BellEvaluation(float(i3322_batch(data, _direction_batch(point, 6))[0]), 0.0)


def evaluate(state: BipartiteState, functional: BellFunctional, point: SettingsPoint) -> BellEvaluation:
    """Evaluate any supported functional at a single settings point."""
    values = batch_evaluator(state, functional)
    if functional.is_qubit:
        if not isinstance(point, DirectionSettings):
            raise ArityError(f"{functional.kind} expects direction settings")
        batch = _direction_batch(point, functional.direction_count)
    else:
        if not isinstance(point, PhaseSettings) or point.outcomes != functional.outcomes:
            raise ArityError(f"{functional.kind} expects phase settings for d={functional.outcomes}")
        batch = point.flat()[None, :]
    return BellEvaluation(float(values(batch)[0]), functional.local_bound)


def batch_evaluator(
    state: BipartiteState, functional: BellFunctional
) -> Callable[[np.ndarray], np.ndarray]:
    """Precompute state-dependent constants and return a batch value function.

    The returned callable maps a sample batch (direction batches of shape
    (n, k, 3), phase batches of shape (n, 4d)) to the n functional values.
    """
    if functional.is_qubit:
        if state.local_dim != 2:
            raise DimensionError(
                f"{functional.kind} needs a qubit state, got d={state.local_dim}"
            )
        data = qubit_correlation_data(state)
        fn = {
            "chsh": chsh_batch,
            "bell-original": bell_original_batch,
            "i3322": i3322_batch,
        }[functional.kind]
        return lambda batch: fn(data, batch)
    d = functional.outcomes
    if state.local_dim != d:
        raise DimensionError(f"{functional.kind} needs d={d}, state has d={state.local_dim}")
    amplitudes = state.amplitudes
    noise = state.noise_fraction
    coeff = _cglmp_coefficients(d)

    def values(batch: np.ndarray) -> np.ndarray:
        q = _residue_probs(amplitudes, noise, batch)
        return np.einsum("nabs,abs->n", q, coeff)

    return values
