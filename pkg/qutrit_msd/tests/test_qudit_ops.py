"""
Test module for qudit_ops.py
"""

import math
import os
import sys

import numpy as np
import pytest

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.errors import DimensionError, DomainError, InvalidState
from qutrit_msd.src.gf_arith import SymplecticMat2, enumerate_sl2, symplectic_mul
from qutrit_msd.src.qudit_ops import (
    PauliLabel,
    approx_equal,
    clifford_unitary,
    dagger,
    depolarize,
    displacement,
    dominant_eigenpair,
    equal_up_to_phase,
    fidelity,
    ket_to_dm,
    maximally_mixed,
    mul,
    norrell_target_gate,
    omega,
    pauli_x,
    pauli_z,
    project_to_density_matrix,
    purity,
    tensor,
    trace_distance,
    validate_density_matrix,
)


@pytest.fixture
def labels():
    """All nine single-qutrit labels."""
    return [PauliLabel((x,), (z,)) for x in range(3) for z in range(3)]


def test_shift_and_clock():
    X, Z = pauli_x(), pauli_z()
    basis = np.eye(3)
    assert approx_equal(X @ basis[0], basis[1])
    assert approx_equal(X @ basis[2], basis[0])
    assert approx_equal(Z @ basis[1], omega() * basis[1])
    assert approx_equal(Z @ X, omega() * X @ Z), "ZX = w XZ"


def test_displacement_examples():
    assert approx_equal(displacement(PauliLabel((0,), (0,))), np.eye(3))
    assert approx_equal(displacement(PauliLabel((1,), (0,))), pauli_x())
    # 2^-1 = 2 in Z_3, so D_(1|1) = w^2 X Z
    assert approx_equal(displacement(PauliLabel((1,), (1,))), omega() ** 2 * pauli_x() @ pauli_z())


def test_displacement_is_unitary_with_order_three(labels):
    for label in labels:
        D = displacement(label)
        assert approx_equal(D @ dagger(D), np.eye(3)), f"{label} is not unitary"
        assert approx_equal(np.linalg.matrix_power(D, 3), np.eye(3)), f"{label}^3 != 1"


def test_weyl_relations_exhaustive(labels):
    w = omega()
    for u in labels:
        for v in labels:
            phase = w ** ((2 * (u.z[0] * v.x[0] - u.x[0] * v.z[0])) % 3)
            total = PauliLabel((u.x[0] + v.x[0],), (u.z[0] + v.z[0],))
            assert approx_equal(displacement(u) @ displacement(v), phase * displacement(total)), \
                f"Weyl relation fails for {u} {v}"


def test_symplectic_product_decides_commutation(labels):
    for u in labels:
        for v in labels:
            A, B = displacement(u), displacement(v)
            commute = approx_equal(A @ B, B @ A)
            assert commute == (u.symplectic_product(v) == 0)


def test_multi_qudit_label():
    label = PauliLabel.from_row([1, 0, 2, 1])
    assert label.n == 2 and label.x == (1, 0) and label.z == (2, 1)
    assert label.to_row() == [1, 0, 2, 1]
    expected = np.kron(displacement(PauliLabel((1,), (2,))), displacement(PauliLabel((0,), (1,))))
    assert approx_equal(displacement(label), expected)
    assert str(label) == "(10|21)"
    with pytest.raises(DimensionError):
        PauliLabel.from_row([1, 2, 0])


def test_clifford_covariance_exhaustive(labels):
    for F in enumerate_sl2(3):
        U = clifford_unitary(F)
        assert approx_equal(U @ dagger(U), np.eye(3)), f"U_F not unitary for {F}"
        for u in labels:
            x, z = F.apply(u.x[0], u.z[0])
            image = displacement(PauliLabel((x,), (z,)))
            assert equal_up_to_phase(U @ displacement(u) @ dagger(U), image), f"covariance fails for {F}, {u}"


def test_clifford_unitaries_multiply_projectively():
    sl2 = enumerate_sl2(3)
    for F in sl2:
        for G in sl2:
            product = clifford_unitary(F) @ clifford_unitary(G)
            assert equal_up_to_phase(product, clifford_unitary(symplectic_mul(F, G))), f"U_F U_G for {F}, {G}"


def test_clifford_examples():
    F = SymplecticMat2(0, 2, 1, 0)
    j, k = np.meshgrid(range(3), range(3), indexing="ij")
    dft = omega() ** (j * k) / math.sqrt(3)
    assert approx_equal(clifford_unitary(F), dft)
    assert approx_equal(clifford_unitary(SymplecticMat2(1, 0, 0, 1)), np.eye(3))
    parity = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    assert equal_up_to_phase(clifford_unitary(SymplecticMat2(2, 0, 0, 2)), parity)


def test_norrell_target_gate():
    gate = norrell_target_gate()
    assert approx_equal(gate, np.diag([1, 1, -1]))
    with pytest.raises(DomainError):
        norrell_target_gate(5)


def test_tensor_and_shape_checks():
    op = tensor(pauli_x(), np.eye(3), pauli_z())
    assert op.shape == (27, 27)
    with pytest.raises(DimensionError):
        mul(np.eye(3), np.eye(9))
    with pytest.raises(DimensionError):
        tensor()


def test_state_helpers():
    psi = np.array([1, 1, 0], dtype=complex)
    rho = ket_to_dm(psi)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert abs(fidelity(rho, psi) - 1) < 1e-12
    assert abs(fidelity(rho, rho) - 1) < 1e-12
    assert abs(purity(maximally_mixed()) - 1 / 3) < 1e-12
    assert abs(trace_distance(rho, rho)) < 1e-12
    assert abs(trace_distance(ket_to_dm([1, 0, 0]), ket_to_dm([0, 1, 0])) - 1) < 1e-12


def test_depolarize():
    target = np.array([1, 0, 0], dtype=complex)
    assert approx_equal(depolarize(target, 1.0), maximally_mixed())
    assert approx_equal(depolarize(target, 0.0), ket_to_dm(target))
    with pytest.raises(DomainError):
        depolarize(target, 1.5)


def test_validate_density_matrix():
    validate_density_matrix(maximally_mixed())
    with pytest.raises(InvalidState):
        validate_density_matrix(np.eye(3))
    with pytest.raises(InvalidState):
        validate_density_matrix(np.diag([1.5, -0.5, 0.0]))
    with pytest.raises(InvalidState):
        validate_density_matrix(np.array([[0.5, 1j], [0, 0.5]]))


def test_project_to_density_matrix():
    rho = ket_to_dm([1, 0, 0]) + np.diag([2e-10, -1e-10, -1e-10])
    projected = project_to_density_matrix(rho)
    validate_density_matrix(projected, tol=1e-12)
    assert approx_equal(projected, ket_to_dm([1, 0, 0]), 1e-9)
    mixed = maximally_mixed()
    assert approx_equal(project_to_density_matrix(mixed), mixed, 1e-12)


def test_dominant_eigenpair():
    rho = 0.7 * ket_to_dm([0, 1, 0]) + 0.3 * maximally_mixed()
    value, vector = dominant_eigenpair(rho)
    assert abs(value - 0.8) < 1e-12
    assert abs(abs(vector[1]) - 1) < 1e-12
