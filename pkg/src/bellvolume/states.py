"""Bipartite state families and the reduced quantities the Bell evaluators need.

All states handled here are of the Schmidt-diagonal form

    |psi> = sum_j c_j |jj>,   c_j >= 0,

optionally mixed with white noise,

    rho = (1 - F) |psi><psi| + F * I / d^2.

Three parametrized families are supported: the two-qubit alpha family
(c = (alpha, sqrt(1 - alpha^2))), the qutrit gamma family (c ~ (1, gamma, 1))
and the ququart lambda family (c ~ (1, l1, l2, 1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidParameterError, MixedStateError

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class BipartiteState:
    """Pure or white-noise-mixed state of two d-level systems, d in {2, 3, 4}.

    ``amplitudes`` may be passed unnormalized; they are normalized (and frozen)
    on construction.
    """

    local_dim: int
    amplitudes: np.ndarray
    noise_fraction: float = 0.0

    def __post_init__(self):
        if self.local_dim not in (2, 3, 4):
            raise InvalidParameterError(f"local_dim must be 2, 3 or 4, got {self.local_dim}")
        amps = np.asarray(self.amplitudes, dtype=float)
        if amps.shape != (self.local_dim,):
            raise InvalidParameterError(
                f"amplitude vector has shape {amps.shape}, expected ({self.local_dim},)"
            )
        if np.any(amps < 0) or not np.all(np.isfinite(amps)):
            raise InvalidParameterError("amplitudes must be finite and nonnegative")
        norm = math.sqrt(float(np.dot(amps, amps)))
        if norm <= 0:
            raise InvalidParameterError("amplitude vector must be nonzero")
        if not 0.0 <= self.noise_fraction <= 1.0:
            raise InvalidParameterError(f"noise_fraction must lie in [0, 1], got {self.noise_fraction}")
        amps = amps / norm
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "noise_fraction", float(self.noise_fraction))

    @property
    def is_pure(self) -> bool:
        return self.noise_fraction == 0.0


@dataclass(frozen=True)
class QubitCorrelationData:
    """Two-qubit correlation matrix T_ij = <sigma_i sigma_j> plus local Bloch vectors."""

    T: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray

    def __post_init__(self):
        for name in ("T", "r_a", "r_b"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def alpha_qubit(alpha: float, noise: float = 0.0) -> BipartiteState:
    """alpha|00> + sqrt(1-alpha^2)|11>, optionally with white noise."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameterError(f"alpha must lie in [0, 1], got {alpha}")
    beta = math.sqrt(max(0.0, 1.0 - alpha * alpha))
    return BipartiteState(2, np.array([alpha, beta]), noise)


def gamma_qutrit(gamma: float, noise: float = 0.0) -> BipartiteState:
    """(|00> + gamma|11> + |22>) / sqrt(2 + gamma^2), optionally with white noise."""
    if gamma < 0:
        raise InvalidParameterError(f"gamma must be nonnegative, got {gamma}")
    return BipartiteState(3, np.array([1.0, gamma, 1.0]), noise)


def lambda_ququart(l1: float, l2: float, noise: float = 0.0) -> BipartiteState:
    """(|00> + l1|11> + l2|22> + |33>) / Lambda with Lambda = sqrt(2 + l1^2 + l2^2)."""
    if l1 < 0 or l2 < 0:
        raise InvalidParameterError(f"lambda parameters must be nonnegative, got ({l1}, {l2})")
    return BipartiteState(4, np.array([1.0, l1, l2, 1.0]), noise)


_FAMILIES = {
    "alpha": (alpha_qubit, 1),
    "gamma": (gamma_qutrit, 1),
    "lambda": (lambda_ququart, 2),
}


def make_state(family: str, params, noise: float = 0.0) -> BipartiteState:
    """Build a family member by name: 'alpha', 'gamma' or 'lambda'."""
    try:
        ctor, nparams = _FAMILIES[family]
    except KeyError:
        raise InvalidParameterError(
            f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}"
        ) from None
    params = tuple(np.atleast_1d(params).astype(float))
    if len(params) != nparams:
        raise InvalidParameterError(
            f"family {family!r} takes {nparams} parameter(s), got {len(params)}"
        )
    return ctor(*params, noise)


def density_matrix(state: BipartiteState) -> np.ndarray:
    """Dense d^2 x d^2 density operator (used for checks; evaluators never need it)."""
    d = state.local_dim
    psi = np.zeros(d * d)
    psi[np.arange(d) * d + np.arange(d)] = state.amplitudes
    rho = np.outer(psi, psi).astype(complex)
    f = state.noise_fraction
    if f > 0:
        rho = (1.0 - f) * rho + f * np.eye(d * d) / (d * d)
    return rho


def schmidt_spectrum(state: BipartiteState) -> np.ndarray:
    """Squared Schmidt coefficients, sorted descending. Pure states only."""
    if not state.is_pure:
        raise MixedStateError("Schmidt spectrum is defined here only for noise_fraction = 0")
    p = np.sort(state.amplitudes**2)[::-1]
    return p / p.sum()


def entropy_of_entanglement(state: BipartiteState) -> float:
    """Von Neumann entropy of the reduced state, in bits. Pure states only."""
    p = schmidt_spectrum(state)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def concurrence_two_qubit(state: BipartiteState) -> float:
    """Wootters concurrence; supports any noise fraction, but only d = 2.

    The descending square roots of the eigenvalues of rho (yy) rho* (yy) are
    computed as the singular values of S^T (yy) S with rho = S S^dagger, which
    avoids the sqrt blow-up of eigenvalue roundoff at rank-deficient rho.
    """
    if state.local_dim != 2:
        raise DimensionError(f"concurrence implemented for qubits only, got d={state.local_dim}")
    rho = density_matrix(state)
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy).real  # real symmetric
    mu, vecs = np.linalg.eigh(rho)
    mu[mu < 4 * np.finfo(float).eps * mu.max()] = 0.0
    s = vecs * np.sqrt(mu)
    lam = np.linalg.svd(s.T @ yy @ s, compute_uv=False)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def qubit_correlation_data(state: BipartiteState) -> QubitCorrelationData:
    """Correlation matrix and Bloch vectors of an alpha-family (d=2) state.

    For |psi> = a|00> + b|11>:  T = diag(2ab, -2ab, 1), r = (0, 0, a^2 - b^2);
    white noise scales both by (1 - F).
    """
    if state.local_dim != 2:
        raise DimensionError(f"correlation data requires d=2, got d={state.local_dim}")
    a, b = state.amplitudes
    scale = 1.0 - state.noise_fraction
    t = scale * np.diag([2 * a * b, -2 * a * b, 1.0])
    r = scale * np.array([0.0, 0.0, a * a - b * b])
    return QubitCorrelationData(T=t, r_a=r, r_b=r.copy())
