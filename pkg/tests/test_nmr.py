import itertools
import warnings

import numpy as np
import pytest

from qlg_burgers.core import PHI_DEFAULT, CollisionOperator, build_collision
from qlg_burgers.errors import ContractError
from qlg_burgers.nmr import (
    ErrorModel,
    Pulse,
    PulseSequence,
    decompose_collision,
    distance_up_to_phase,
    encode_profile,
    errorful_collision_set,
    naive_decomposition,
    phase_modulated_operators,
    pulse_propagator,
    sequence_propagator,
    spin_generator,
)

# Independent Pauli algebra, written out by hand.
I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]])
Z = np.diag([1.0 + 0j, -1.0])


def kron(a, b):
    return np.kron(a, b)


def rot(G, angle):
    """exp(-i angle/2 G) for G with G^2 = 1."""
    return np.cos(angle / 2) * np.eye(G.shape[0]) - 1j * np.sin(angle / 2) * G


def expm_h(H, t):
    w, v = np.linalg.eigh(H)
    return v @ np.diag(np.exp(-1j * w * t)) @ v.conj().T


def block_rotation(phi):
    c, s = np.cos(phi), np.sin(phi)
    return np.array([[1, 0, 0, 0], [0, c, s, 0], [0, -s, c, 0], [0, 0, 0, 1]], dtype=complex)


# --- generators -------------------------------------------------------------


def test_spin_generators():
    np.testing.assert_array_equal(spin_generator("H", "x"), kron(X, I2))
    np.testing.assert_array_equal(spin_generator("C", "y"), kron(I2, Y))
    np.testing.assert_array_equal(spin_generator("both", "z"), kron(Z, I2) + kron(I2, Z))
    np.testing.assert_array_equal(spin_generator("opposed", "x"), kron(X, I2) - kron(I2, X))
    with pytest.raises(ValueError):
        spin_generator("N", "x")


def test_pulse_validation():
    with pytest.raises(ValueError):
        Pulse.delay(0.0)
    with pytest.raises(ValueError):
        Pulse.rf("both", "w", 1.0)
    with pytest.raises(ValueError):
        PulseSequence([])


# --- decomposition ----------------------------------------------------------


@pytest.mark.parametrize("phi", [PHI_DEFAULT, 0.0, 0.37, -1.1, 2.9])
def test_decomposition_matches_block_rotation(phi):
    actual, desired, error = sequence_propagator(decompose_collision(phi))
    assert distance_up_to_phase(desired, block_rotation(phi)) <= 1e-10
    np.testing.assert_allclose(error.matrix, np.eye(4), atol=1e-14)


def test_decomposition_global_phase_is_i():
    _, desired, _ = sequence_propagator(decompose_collision(PHI_DEFAULT))
    np.testing.assert_allclose(desired.matrix, 1j * block_rotation(PHI_DEFAULT), atol=1e-12)


def test_decomposition_hand_product():
    # Same product assembled from the hand-written Paulis.
    phi = PHI_DEFAULT
    ry = rot(kron(Y, I2), np.pi / 2) @ rot(kron(I2, Y), np.pi / 2)
    rx = rot(kron(X, I2), np.pi) @ rot(kron(I2, X), np.pi)
    opp = rot(kron(X, I2), -phi) @ rot(kron(I2, X), phi)
    zz = rot(kron(Z, Z), np.pi / 2)
    U = ry @ zz @ opp @ rx @ zz @ ry
    assert distance_up_to_phase(U, block_rotation(phi)) <= 1e-12


def test_decomposition_has_two_coupling_delays():
    seq = decompose_collision(PHI_DEFAULT, J=214.0)
    assert len(seq.delays()) == 2
    assert all(p.duration == pytest.approx(1 / 428) for p in seq.delays())


def test_naive_ordering_is_not_the_collision():
    _, desired, _ = sequence_propagator(naive_decomposition(PHI_DEFAULT))
    assert distance_up_to_phase(desired, block_rotation(PHI_DEFAULT)) > 0.5


def test_naive_ordering_has_no_sign_only_fix():
    # Flip the sign of every rotation angle independently: nothing lands on the target.
    target = block_rotation(PHI_DEFAULT)
    zz = rot(kron(Z, Z), np.pi / 2)

    def coll(G, a):
        return rot(kron(G, I2), a) @ rot(kron(I2, G), a)

    best = np.inf
    for s in itertools.product((1, -1), repeat=5):
        opp = rot(kron(X, I2), s[0] * PHI_DEFAULT) @ rot(kron(I2, X), -s[0] * PHI_DEFAULT)
        U = (
            coll(Y, s[1] * np.pi / 2)
            @ zz
            @ opp
            @ coll(Y, s[2] * np.pi / 2)
            @ coll(X, s[3] * np.pi / 2)
            @ zz
            @ coll(X, s[4] * np.pi / 2)
        )
        best = min(best, distance_up_to_phase(U, target), distance_up_to_phase(U, target.T))
    assert best > 0.1


# --- coupling during pulses ----------------------------------------------------


def test_coupled_pulse_matches_eigh_oracle():
    J, t, theta = 214.0, 20e-6, np.pi / 2
    H = (np.pi * J / 2) * kron(Z, Z) + theta / (2 * t) * (kron(Y, I2) + kron(I2, Y))
    got = pulse_propagator(Pulse.rf("both", "y", theta), J, ErrorModel.coupled(t)).matrix
    np.testing.assert_allclose(got, expm_h(H, t), atol=1e-12)


def test_delay_propagator():
    got = pulse_propagator(Pulse.delay(1 / 428), 214.0).matrix
    np.testing.assert_allclose(got, rot(kron(Z, Z), np.pi / 2), atol=1e-12)


def test_zero_duration_coupled_pulse_is_contract_error():
    with pytest.raises(ContractError):
        pulse_propagator(Pulse.rf("both", "x", np.pi), 214.0, ErrorModel.coupled(0.0))


def test_explicit_pulse_duration_overrides_model():
    p = Pulse.rf("both", "x", np.pi, duration=40e-6)
    a = pulse_propagator(p, 214.0, ErrorModel.coupled(20e-6)).matrix
    b = pulse_propagator(Pulse.rf("both", "x", np.pi), 214.0, ErrorModel.coupled(40e-6)).matrix
    np.testing.assert_allclose(a, b, atol=1e-15)


def test_error_model_identity_and_product():
    seq = decompose_collision(PHI_DEFAULT)
    actual, desired, error = sequence_propagator(seq, ErrorModel.coupled())
    np.testing.assert_allclose(actual.matrix, desired.matrix @ error.matrix, atol=1e-13)
    assert error.unitarity_error() <= 1e-12
    assert actual.unitarity_error() <= 1e-12


def test_error_grows_with_pulse_duration():
    seq = decompose_collision(PHI_DEFAULT)
    durations = [5e-6, 10e-6, 20e-6, 40e-6, 60e-6, 80e-6, 100e-6]
    norms = [
        np.linalg.norm(sequence_propagator(seq, ErrorModel.coupled(t))[2].matrix - np.eye(4))
        for t in durations
    ]
    assert np.all(np.diff(norms) > 0)
    # Frozen value at the default 20 us pulse.
    assert norms[2] == pytest.approx(0.0342, abs=5e-4)


def test_errorful_operator_leaks_out_of_number_block():
    actual = errorful_collision_set(PHI_DEFAULT, model=ErrorModel.coupled())[0]
    m = actual.matrix
    leak = np.abs(m[0, 1:3]).sum() + np.abs(m[3, 1:3]).sum() + abs(m[0, 3])
    assert leak > 1e-4


# --- z4 modulation --------------------------------------------------------------


def test_modulation_leaves_ideal_operator_unchanged():
    ops = phase_modulated_operators(build_collision(PHI_DEFAULT), 4)
    for op in ops:
        np.testing.assert_allclose(op.matrix, build_collision(PHI_DEFAULT).matrix, atol=1e-14)


def test_modulated_errorful_operators_distinct():
    ops = errorful_collision_set(PHI_DEFAULT, model=ErrorModel.coupled(), modulation="z4")
    assert [op.label for op in ops] == [f"modulated-{k}" for k in range(4)]
    mask = np.zeros((4, 4), bool)
    mask[0, 0] = mask[3, 3] = True
    mask[1:3, 1:3] = True
    for a, b in itertools.combinations(ops, 2):
        np.testing.assert_allclose(a.matrix[mask], b.matrix[mask], atol=1e-14)
        assert np.linalg.norm(a.matrix - b.matrix) > 1e-3


def test_modulation_phase_oracle():
    # Entry (i, j) picks up exp(-i k pi/2 (m_i - m_j)) with m the total z magnetization.
    U = errorful_collision_set(PHI_DEFAULT, model=ErrorModel.coupled())[0].matrix
    m = np.array([1, 0, 0, -1])
    for k, op in enumerate(phase_modulated_operators(CollisionOperator(U), 4)):
        phase = np.exp(-1j * k * np.pi / 2 * (m[:, None] - m[None, :]))
        np.testing.assert_allclose(op.matrix, U * phase, atol=1e-13)


def test_unknown_modulation():
    with pytest.raises(ValueError):
        errorful_collision_set(PHI_DEFAULT, modulation="z8")


# --- encoding -------------------------------------------------------------------


def bloch_oracle(samples, n):
    """Classical 3-D Bloch-vector rotation of every isochromat."""
    out = np.zeros(n, dtype=complex)
    for site in range(n):
        M = np.array([0.0, 0.0, 1.0])
        grad = 2 * np.pi * site / n
        for b in samples:
            theta = abs(b)
            if theta > 0:
                ax = np.array([b.real, b.imag, 0.0]) / theta
                M = (
                    M * np.cos(theta)
                    + np.cross(ax, M) * np.sin(theta)
                    + ax * np.dot(ax, M) * (1 - np.cos(theta))
                )
            c, s = np.cos(grad), np.sin(grad)
            M = np.array([c * M[0] - s * M[1], s * M[0] + c * M[1], M[2]])
        out[site] = M[0] + 1j * M[1]
    return out


@pytest.mark.parametrize("scale", [1.0, 0.25, 0.05])
def test_encoding_matches_bloch_oracle(scale):
    n = 16
    desired = np.sin(2 * np.pi * np.arange(n) / n)
    enc = encode_profile(desired, scale)
    ref = bloch_oracle(scale * np.fft.ifft(desired), n)
    np.testing.assert_allclose(enc.actual, -ref.imag, atol=1e-12)


def test_encoding_small_angle_limit():
    n = 16
    desired = 0.5 + 0.5 * np.cos(2 * np.pi * np.arange(n) / n)
    enc = encode_profile(desired, 1e-3)
    np.testing.assert_allclose(enc.actual / 1e-3, desired, atol=1e-5)


def test_encoding_error_quadratic_in_scale():
    n = 16
    desired = np.sin(2 * np.pi * np.arange(n) / n)
    e1 = encode_profile(desired, 0.2).normalized_error()
    e2 = encode_profile(desired, 0.1).normalized_error()
    assert e1 / e2 == pytest.approx(4.0, rel=0.05)


def test_encoding_zero_profile():
    enc = encode_profile(np.zeros(8), 1.0)
    assert np.all(enc.actual == 0)
    assert enc.normalized_error() == 0.0


def test_encoding_constant_profile_single_sample():
    enc = encode_profile(np.full(8, 0.5), 0.5)
    assert np.count_nonzero(np.abs(enc.waveform) > 1e-15) == 1
    np.testing.assert_allclose(enc.actual, np.sin(0.25), atol=1e-14)


def test_encoding_large_flip_flags_nonlinear():
    desired = np.full(4, 1.0)
    with pytest.warns(RuntimeWarning):
        enc = encode_profile(desired, 4.0)
    assert enc.nonlinear
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert not encode_profile(desired, 1.0).nonlinear


def test_encoding_rejects_bad_input():
    with pytest.raises(ValueError):
        encode_profile(np.full(4, 1.5), 1.0)
    with pytest.raises(ValueError):
        encode_profile(np.zeros(4), 0.0)
    with pytest.raises(ValueError):
        encode_profile(np.zeros(4), 1.0, N=5)
