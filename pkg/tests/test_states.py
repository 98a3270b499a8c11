"""State families, entanglement measures, and their dense-matrix oracles."""

import numpy as np
import pytest

from bellvolume import (
    BipartiteState,
    DimensionError,
    InvalidParameterError,
    MixedStateError,
    alpha_qubit,
    concurrence_two_qubit,
    density_matrix,
    entropy_of_entanglement,
    gamma_qutrit,
    lambda_ququart,
    make_state,
    qubit_correlation_data,
    schmidt_spectrum,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = [SX, SY, SZ]


def dense_rho(amplitudes, noise=0.0):
    """Independent density-matrix construction (oracle path)."""
    c = np.asarray(amplitudes, dtype=float)
    c = c / np.linalg.norm(c)
    d = c.size
    psi = np.zeros(d * d, dtype=complex)
    for j in range(d):
        psi[j * d + j] = c[j]
    rho = np.outer(psi, psi.conj())
    return (1 - noise) * rho + noise * np.eye(d * d) / (d * d)


# ---------------------------------------------------------------------------
# construction and normalization
# ---------------------------------------------------------------------------

def test_alpha_family_amplitudes():
    st = alpha_qubit(1 / np.sqrt(2))
    assert np.allclose(st.amplitudes, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)


def test_gamma_family_amplitudes_maximally_entangled():
    st = gamma_qutrit(1.0)
    assert np.allclose(st.amplitudes, np.full(3, 1 / np.sqrt(3)), atol=1e-15)


def test_gamma_family_amplitudes_tilted():
    # independent normalization: 1/sqrt(2 + gamma^2)
    g = 0.792
    norm = 1 / np.sqrt(2 + g * g)
    st = gamma_qutrit(g)
    assert np.allclose(st.amplitudes, [norm, g * norm, norm], atol=1e-12)
    assert abs(st.amplitudes[0] - 0.6169) < 5e-5
    assert abs(st.amplitudes[1] - 0.4886) < 5e-5


def test_lambda_family_amplitudes():
    l1, l2 = 0.739, 0.739
    st = lambda_ququart(l1, l2)
    lam = np.sqrt(2 + l1 * l1 + l2 * l2)
    assert np.allclose(st.amplitudes, np.array([1, l1, l2, 1]) / lam, atol=1e-12)


def test_normalization_sums_to_one():
    rng = np.random.default_rng(7)
    for _ in range(50):
        st = gamma_qutrit(rng.uniform(0, 3))
        assert abs(np.sum(st.amplitudes**2) - 1.0) < 1e-12


def test_gamma_amplitudes_palindromic():
    for g in (0.3, 0.792, 1.0, 2.5):
        st = gamma_qutrit(g)
        assert st.amplitudes[0] == st.amplitudes[2]


def test_make_state_dispatch():
    assert make_state("alpha", [0.6]).local_dim == 2
    assert make_state("gamma", [1.0]).local_dim == 3
    assert make_state("lambda", [1.0, 0.5]).local_dim == 4
    with pytest.raises(InvalidParameterError):
        make_state("qubit", [0.5])
    with pytest.raises(InvalidParameterError):
        make_state("lambda", [1.0])


@pytest.mark.parametrize(
    "builder",
    [
        lambda: alpha_qubit(1.2),
        lambda: alpha_qubit(-0.1),
        lambda: gamma_qutrit(-0.5),
        lambda: lambda_ququart(-1.0, 0.5),
        lambda: alpha_qubit(0.5, noise=1.5),
        lambda: BipartiteState(5, np.ones(5)),
        lambda: BipartiteState(3, np.array([1.0, -0.2, 1.0])),
    ],
)
def test_invalid_parameters_rejected(builder):
    with pytest.raises(InvalidParameterError):
        builder()


def test_density_operator_invariants():
    rng = np.random.default_rng(11)
    states = [
        alpha_qubit(rng.uniform(0, 1), rng.uniform(0, 1)),
        gamma_qutrit(rng.uniform(0, 2), rng.uniform(0, 1)),
        lambda_ququart(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 1)),
    ]
    for st in states:
        rho = density_matrix(st)
        assert abs(np.trace(rho).real - 1.0) < 1e-12
        assert np.linalg.eigvalsh(rho).min() >= -1e-10
        assert np.allclose(rho, rho.conj().T, atol=1e-14)


# ---------------------------------------------------------------------------
# Schmidt spectrum and entropy
# ---------------------------------------------------------------------------

def test_schmidt_spectrum_examples():
    assert np.allclose(schmidt_spectrum(gamma_qutrit(1.0)), [1 / 3] * 3, atol=1e-14)
    assert np.allclose(schmidt_spectrum(alpha_qubit(1.0)), [1.0, 0.0], atol=1e-14)
    p = schmidt_spectrum(gamma_qutrit(0.792))
    assert np.allclose(p, [0.380624, 0.380624, 0.238752], atol=5e-6)
    assert np.all(np.diff(p) <= 0)
    assert abs(p.sum() - 1.0) < 1e-12


def test_schmidt_spectrum_rejects_mixed():
    with pytest.raises(MixedStateError):
        schmidt_spectrum(alpha_qubit(0.5, noise=0.1))


def test_entropy_examples():
    assert abs(entropy_of_entanglement(alpha_qubit(1 / np.sqrt(2))) - 1.0) < 1e-12
    assert abs(entropy_of_entanglement(gamma_qutrit(1.0)) - np.log2(3)) < 1e-12
    # oracle: direct formula on independently normalized amplitudes
    g = 0.792
    p = np.array([1.0, g * g, 1.0]) / (2 + g * g)
    expected = float(-np.sum(p * np.log2(p)))
    assert abs(entropy_of_entanglement(gamma_qutrit(g)) - expected) < 1e-12
    assert abs(expected - 1.554) < 1e-3


def test_entropy_range_and_product_state():
    assert entropy_of_entanglement(alpha_qubit(1.0)) == 0.0
    for g in np.linspace(0.1, 3.0, 7):
        e = entropy_of_entanglement(gamma_qutrit(g))
        assert 0.0 <= e <= np.log2(3) + 1e-12


def test_entropy_depends_only_on_spectrum():
    # alpha and sqrt(1 - alpha^2) produce the same Schmidt spectrum
    for a in (0.3, 0.6, 0.8):
        mirrored = np.sqrt(1 - a * a)
        assert abs(
            entropy_of_entanglement(alpha_qubit(a))
            - entropy_of_entanglement(alpha_qubit(mirrored))
        ) < 1e-12
    # and the entropy is the plain spectrum functional
    st = gamma_qutrit(0.77)
    p = schmidt_spectrum(st)
    assert abs(entropy_of_entanglement(st) + np.sum(p * np.log2(p))) < 1e-12


def test_entropy_rejects_mixed():
    with pytest.raises(MixedStateError):
        entropy_of_entanglement(gamma_qutrit(1.0, noise=0.2))


# ---------------------------------------------------------------------------
# concurrence
# ---------------------------------------------------------------------------

def test_concurrence_examples():
    assert abs(concurrence_two_qubit(alpha_qubit(1 / np.sqrt(2))) - 1.0) < 1e-12
    assert concurrence_two_qubit(alpha_qubit(1.0)) == 0.0
    # closed-form oracle for the noisy family: max(0, (1-F) 2 a b - F/2)
    c = concurrence_two_qubit(alpha_qubit(1 / np.sqrt(2), noise=0.2))
    assert abs(c - 0.7) < 1e-12


def test_concurrence_pure_closed_form():
    rng = np.random.default_rng(3)
    for a in rng.uniform(0, 1, size=100):
        expected = 2 * a * np.sqrt(1 - a * a)
        assert abs(concurrence_two_qubit(alpha_qubit(a)) - expected) < 1e-10


def test_concurrence_noisy_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(40):
        a, f = rng.uniform(0, 1), rng.uniform(0, 1)
        b = np.sqrt(1 - a * a)
        expected = max(0.0, (1 - f) * 2 * a * b - f / 2)
        assert abs(concurrence_two_qubit(alpha_qubit(a, noise=f)) - expected) < 1e-10


def test_concurrence_rejects_other_dimensions():
    with pytest.raises(DimensionError):
        concurrence_two_qubit(gamma_qutrit(1.0))


# ---------------------------------------------------------------------------
# correlation data vs dense traces
# ---------------------------------------------------------------------------

def trace_T(rho):
    t = np.zeros((3, 3))
    for i in range(3):
        for j in range(3):
            t[i, j] = np.trace(rho @ np.kron(PAULI[i], PAULI[j])).real
    return t


def trace_bloch(rho, party):
    eye = np.eye(2)
    out = np.zeros(3)
    for i in range(3):
        op = np.kron(PAULI[i], eye) if party == 0 else np.kron(eye, PAULI[i])
        out[i] = np.trace(rho @ op).real
    return out


def test_correlation_data_examples():
    data = qubit_correlation_data(alpha_qubit(1 / np.sqrt(2)))
    assert np.allclose(data.T, np.diag([1.0, -1.0, 1.0]), atol=1e-12)
    assert np.allclose(data.r_a, 0.0, atol=1e-12)
    data = qubit_correlation_data(alpha_qubit(1.0))
    assert np.allclose(data.T, np.diag([0.0, 0.0, 1.0]), atol=1e-12)
    assert np.allclose(data.r_a, [0, 0, 1], atol=1e-12)
    data = qubit_correlation_data(alpha_qubit(0.42, noise=1.0))
    assert np.allclose(data.T, 0.0, atol=1e-15)
    assert np.allclose(data.r_a, 0.0, atol=1e-15)


def test_correlation_data_vs_dense_traces():
    rng = np.random.default_rng(13)
    for _ in range(100):
        a, f = rng.uniform(0, 1), rng.uniform(0, 1)
        st = alpha_qubit(a, noise=f)
        data = qubit_correlation_data(st)
        rho = dense_rho(st.amplitudes, f)
        assert np.allclose(data.T, trace_T(rho), atol=1e-10)
        assert np.allclose(data.r_a, trace_bloch(rho, 0), atol=1e-10)
        assert np.allclose(data.r_b, trace_bloch(rho, 1), atol=1e-10)
        assert np.all(np.abs(data.T) <= 1 + 1e-12)


def test_correlation_data_rejects_other_dimensions():
    with pytest.raises(DimensionError):
        qubit_correlation_data(gamma_qutrit(1.0))


def test_white_noise_scales_correlations():
    base = qubit_correlation_data(alpha_qubit(0.8))
    noisy = qubit_correlation_data(alpha_qubit(0.8, noise=0.35))
    assert np.allclose(noisy.T, 0.65 * base.T, atol=1e-12)
    assert np.allclose(noisy.r_a, 0.65 * base.r_a, atol=1e-12)
