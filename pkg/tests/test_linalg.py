import math

import numpy as np
import pytest

from coherence_forge.errors import (
    NonHermitianError,
    SchemaError,
    ValidationError,
)
from coherence_forge.linalg import (
    array_from_json,
    array_to_json,
    dephase,
    density_matrix,
    eig_hermitian,
    fidelity,
    noninteracting_hamiltonian,
    partial_trace,
    psd_sqrt,
    pure_state,
    random_density,
    random_observable,
    tensor,
    trace_distance,
)


def test_fidelity_pure_vs_maximally_mixed():
    rho = np.diag([1.0, 0.0])
    sigma = np.eye(2) / 2
    assert abs(fidelity(rho, sigma) - 1 / math.sqrt(2)) < 1e-12


def test_fidelity_bounds_and_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(20):
        d = int(rng.integers(2, 6))
        rho = random_density(d, rng)
        sigma = random_density(d, rng)
        f = fidelity(rho, sigma)
        assert 0.0 <= f <= 1.0 + 1e-12
        assert abs(f - fidelity(sigma, rho)) < 1e-10
        assert abs(fidelity(rho, rho) - 1.0) < 1e-10


def test_trace_distance_range():
    assert abs(trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) - 2.0) < 1e-12
    assert trace_distance(np.eye(3) / 3, np.eye(3) / 3) < 1e-14


def test_fuchs_van_de_graaf():
    rng = np.random.default_rng(1)
    for _ in range(50):
        d = int(rng.integers(2, 6))
        rho = random_density(d, rng)
        sigma = random_density(d, rng)
        f = fidelity(rho, sigma)
        td = trace_distance(rho, sigma)
        assert 2 * (1 - f) <= td + 1e-9
        assert td <= 2 * math.sqrt(max(0.0, 1 - f * f)) + 1e-9


def test_bures_stability_under_common_unitary():
    # rotating both states by the same small unitary moves each
    # self-overlap by at most 4*sqrt(1 - fidelity(rho, sigma))
    rng = np.random.default_rng(2)
    for _ in range(25):
        d = int(rng.integers(2, 5))
        rho = random_density(d, rng)
        sigma = random_density(d, rng)
        G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        U = np.linalg.qr(G)[0]
        lhs = abs(fidelity(U @ rho @ U.conj().T, rho)
                  - fidelity(U @ sigma @ U.conj().T, sigma))
        assert lhs <= 4 * math.sqrt(max(0.0, 1 - fidelity(rho, sigma))) + 1e-9


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(NonHermitianError):
        eig_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_hermitian_reconstructs():
    rng = np.random.default_rng(3)
    H = random_observable(5, rng)
    w, V = eig_hermitian(H)
    assert np.max(np.abs((V * w) @ V.conj().T - H)) < 1e-10


def test_psd_sqrt_squares_back():
    rng = np.random.default_rng(4)
    rho = random_density(4, rng)
    s = psd_sqrt(rho)
    assert np.max(np.abs(s @ s - rho)) < 1e-10


def test_partial_trace_of_product():
    rng = np.random.default_rng(5)
    a = random_density(2, rng)
    b = random_density(3, rng)
    ab = tensor(a, b)
    assert np.max(np.abs(partial_trace(ab, (2, 3), "A") - a)) < 1e-12
    assert np.max(np.abs(partial_trace(ab, (2, 3), "B") - b)) < 1e-12


def test_noninteracting_hamiltonian_two_qubits():
    h = np.diag([0.0, 1.0])
    H = noninteracting_hamiltonian([h, h])
    assert np.allclose(np.diag(H).real, [0.0, 1.0, 1.0, 2.0])


def test_dephase_projects_and_is_idempotent():
    rng = np.random.default_rng(6)
    rho = random_density(4, rng)
    H = np.diag([0.0, 0.0, 1.0, 2.0])
    deph = dephase(rho, H)
    assert np.max(np.abs(dephase(deph, H) - deph)) < 1e-12
    assert np.max(np.abs(deph @ H - H @ deph)) < 1e-12
    # the degenerate 2x2 block survives
    assert np.max(np.abs(deph[:2, :2] - rho[:2, :2])) < 1e-12
    assert abs(deph[0, 2]) < 1e-14


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        density_matrix(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(NonHermitianError):
        density_matrix(np.array([[0.5, 0.5], [0.0, 0.5]]))


def test_pure_state_requires_unit_norm():
    st = pure_state(np.array([0.6, 0.8]))
    assert abs(np.linalg.norm(st.vector) - 1.0) < 1e-12
    with pytest.raises(ValidationError):
        pure_state(np.array([3.0, 4.0]))
    with pytest.raises(ValidationError):
        pure_state(np.zeros(3))


def test_json_round_trip():
    rng = np.random.default_rng(7)
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    again = array_from_json(array_to_json(M))
    assert np.max(np.abs(again - M)) < 1e-15
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    assert np.max(np.abs(array_from_json(array_to_json(v)) - v)) < 1e-15


def test_json_schema_errors():
    with pytest.raises(SchemaError):
        array_from_json({"re": [[1.0]]})
    with pytest.raises(SchemaError):
        array_from_json({"dim": 2, "re": [[1.0, 0.0]], "im": [[0.0, 0.0]]})
