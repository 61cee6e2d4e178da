import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qsteer import core
from qsteer.errors import InvalidStateError

from .oracles import SX, SY, SZ, I2, kron_by_index, random_ball, random_density

bloch_vectors = st.tuples(*[st.floats(-1, 1)] * 3).filter(lambda v: np.linalg.norm(v) <= 1)


def test_pauli_convention():
    np.testing.assert_array_equal(core.SIGMA_Y, [[0, -1j], [1j, 0]])
    # sigma_x sigma_y = i sigma_z fixes the handedness
    np.testing.assert_allclose(core.SIGMA_X @ core.SIGMA_Y, 1j * core.SIGMA_Z)


@pytest.mark.parametrize("s, expected", [
    ((0, 0, 1), [[1, 0], [0, 0]]),
    ((0, 0, 0), 0.5 * np.eye(2)),
])
def test_bloch_to_density_examples(s, expected):
    np.testing.assert_allclose(core.bloch_to_density(s), expected, atol=1e-15)


def test_bloch_to_density_by_direct_summation():
    s = (1 / np.sqrt(2), 0.0, 0.5)
    expected = 0.5 * (I2 + s[0] * SX + s[1] * SY + s[2] * SZ)
    np.testing.assert_allclose(core.bloch_to_density(s), expected, atol=1e-15)
    assert core.density_to_bloch(expected) == pytest.approx(s, abs=1e-15)


def test_bloch_to_density_rejects_unphysical():
    with pytest.raises(InvalidStateError):
        core.bloch_to_density((0, 0, 1 + 1e-8))
    core.bloch_to_density((0, 0, 1 + 1e-10))  # within slack


@pytest.mark.parametrize("rho, s", [
    (0.5 * np.eye(2), (0, 0, 0)),
    (np.array([[1, 0], [0, 0]]), (0, 0, 1)),
])
def test_density_to_bloch_examples(rho, s):
    assert core.density_to_bloch(rho) == pytest.approx(s, abs=1e-15)


def test_round_trip_random(rng):
    for _ in range(100):
        s = random_ball(rng)
        rho = core.bloch_to_density(s)
        core.check_density(rho)
        np.testing.assert_allclose(core.density_to_bloch(rho), s, atol=1e-14)


@pytest.mark.parametrize("s, p", [((0, 0, 0), 0.5), ((0, 0, 1), 1.0), ((0.6, 0, 0), 0.68)])
def test_purity_examples(s, p):
    assert core.purity(s) == pytest.approx(p, abs=1e-15)


@given(bloch_vectors)
def test_purity_range_and_pure_states(s):
    p = core.purity(s)
    assert 0.5 <= p <= 1.0
    # 1 - P = (1 - |s|^2) / 2, so P = 1 exactly when |s| = 1
    r = np.linalg.norm(s)
    assert 1 - p == pytest.approx((1 - r) * (1 + r) / 2, abs=1e-15)


@given(bloch_vectors)
def test_constructed_states_are_valid(s):
    core.check_density(core.bloch_to_density(s))


def test_tensor_examples():
    np.testing.assert_array_equal(core.tensor(I2, I2), np.eye(4))
    np.testing.assert_array_equal(core.tensor(SZ, I2), np.diag([1, 1, -1, -1]))
    np.testing.assert_array_equal(core.tensor(SX, SY), kron_by_index(SX, SY))


def test_tensor_index_convention(rng):
    # system index slow, detector index fast
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    T = core.tensor(a, b)
    for i, j, k, l in np.ndindex(2, 2, 2, 2):
        assert T[2 * i + k, 2 * j + l] == pytest.approx(a[i, j] * b[k, l], abs=1e-15)


def test_partial_trace_recovers_factor(rng):
    for _ in range(50):
        rs, rd = random_density(rng), random_density(rng)
        out = core.partial_trace_detector(core.tensor(rs, rd))
        np.testing.assert_allclose(out, rs, atol=1e-14)


def test_partial_trace_bell_state():
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    rho = np.outer(psi, psi.conj())
    core.check_joint_state(rho)
    np.testing.assert_allclose(core.partial_trace_detector(rho), 0.5 * np.eye(2), atol=1e-15)


def test_partial_trace_index_formula(rng):
    rho = random_density(rng, 4)
    out = core.partial_trace_detector(rho)
    for i, j in np.ndindex(2, 2):
        assert out[i, j] == pytest.approx(rho[2 * i, 2 * j] + rho[2 * i + 1, 2 * j + 1], abs=1e-15)
    assert np.trace(out) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("bad", [
    np.array([[1, 1], [0, 0]]),          # not Hermitian
    np.array([[0.6, 0], [0, 0.6]]),      # trace
    np.array([[1.2, 0], [0, -0.2]]),     # not PSD
])
def test_check_density_rejects(bad):
    with pytest.raises(InvalidStateError):
        core.check_density(bad)


def test_evolved_tolerance_is_looser():
    rho = np.array([[1 + 5e-11, 0], [0, 0]])
    with pytest.raises(InvalidStateError):
        core.check_density(rho)
    core.check_density(rho, tol=core.EVOLVED_STATE_TOL)


def test_trace_distance_matches_bloch_formula(rng):
    for _ in range(50):
        s, t = random_ball(rng), random_ball(rng)
        d = core.trace_distance(core.bloch_to_density(s), core.bloch_to_density(t))
        assert d == pytest.approx(0.5 * np.linalg.norm(s - t), abs=1e-14)


@pytest.mark.parametrize("m", [(0, 0, 1), (0, 0, -1), (1, 0, 0), (0.3, -0.4, np.sqrt(0.75))])
def test_rotation_to(m):
    m = np.asarray(m, float)
    R, U = core.rotation_to(m)
    np.testing.assert_allclose(R @ [0, 0, 1], m, atol=1e-15)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-14)
    assert np.linalg.det(R) == pytest.approx(1.0)
    v = np.array([0.2, -0.7, 0.4])
    np.testing.assert_allclose(U @ core.pauli_dot(v) @ U.conj().T, core.pauli_dot(R @ v), atol=1e-14)


def test_unit_vector_validation():
    with pytest.raises(ValueError):
        core.unit_vector((1, 1, 0))
    with pytest.raises(ValueError):
        core.normalize((0, 0, 0))
