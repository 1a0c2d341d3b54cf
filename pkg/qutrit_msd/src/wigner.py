"""
Wigner Function Module for the Qutrit Distillation Toolkit

Phase-point operators A_(x,z), Gross' discrete Wigner function, sum-negativity
and the two membership tests used to classify states: the Wigner polytope
(nonnegative Wigner function) and the stabilizer polytope (convex hull of the
pure stabilizer states, tested as a linear program over its vertices).
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from qutrit_msd.src.errors import InvalidState
from qutrit_msd.src.gf_arith import DEFAULT_D, check_modulus
from qutrit_msd.src.qudit_ops import (
    PauliLabel,
    dagger,
    displacement,
    ket_to_dm,
    pauli_x,
    pauli_z,
)

# Boundary classification for the Wigner polytope
WIGNER_TOL = 1e-12
# Allowed L1 residual for the stabilizer-polytope LP
LP_TOL = 1e-9
# Imaginary parts of Tr(A rho) above this indicate a non-Hermitian input
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class WignerTable:
    """The d x d grid W(x, z); rows are indexed by x, columns by z."""

    d: int
    values: np.ndarray

    def __getitem__(self, key):
        return self.values[key]

    @property
    def minimum(self):
        return float(np.min(self.values))

    @property
    def total(self):
        return float(np.sum(self.values))

    def negativity(self):
        return float(-np.sum(self.values[self.values < 0]))


@dataclass(frozen=True)
class PolytopeVerdict:
    """Membership verdict; ``inside`` iff ``margin`` >= -tolerance."""

    inside: bool
    margin: float


@lru_cache(maxsize=None)
def _phase_point_stack(d):
    labels = [(x, z) for x in range(d) for z in range(d)]
    a00 = sum(displacement(PauliLabel((x,), (z,), 0, d)) for x, z in labels) / d
    stack = np.zeros((d, d, d, d), dtype=complex)
    for x, z in labels:
        D = displacement(PauliLabel((x,), (z,), 0, d))
        stack[x, z] = D @ a00 @ dagger(D)
    stack.flags.writeable = False
    return stack


def phase_point_operator(x, z, d=DEFAULT_D):
    """
    A_(x,z) = D_(x|z) A_00 D_(x|z)^dag with A_00 = (1/d) sum_u D_u.

    For qutrits A_00 is the parity matrix [[1,0,0],[0,0,1],[0,1,0]].
    """
    check_modulus(d)
    return _phase_point_stack(d)[x % d, z % d].copy()


def _wigner_values(rho):
    d = rho.shape[0]
    stack = _phase_point_stack(d)
    raw = np.einsum("xzij,ji->xz", stack, rho) / d
    if np.max(np.abs(raw.imag)) > IMAG_TOL:
        raise InvalidState("Wigner function has imaginary parts; input is not Hermitian")
    return raw.real


def wigner_function(rho):
    """
    Discrete Wigner function W(x, z) = (1/d) Tr(A_(x,z) rho).

    Args:
        rho: Hermitian, unit-trace d x d matrix

    Returns:
        WignerTable: d^2 real values summing to 1
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidState(f"expected a square matrix, got shape {rho.shape}")
    check_modulus(rho.shape[0])
    if np.max(np.abs(rho - dagger(rho))) > IMAG_TOL:
        raise InvalidState("state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > IMAG_TOL:
        raise InvalidState(f"state has trace {np.trace(rho).real:.12g}, expected 1")
    return WignerTable(rho.shape[0], _wigner_values(rho))


def sum_negativity(rho):
    """Sum of |W| over the negative entries; equals (sum |W| - 1) / 2."""
    return wigner_function(rho).negativity()


def in_wigner_polytope(rho, tol=WIGNER_TOL):
    """Inside iff every Wigner entry is >= -tol; margin is the smallest entry."""
    margin = wigner_function(rho).minimum
    return PolytopeVerdict(margin >= -tol, margin)


def _phase_fixed(vector):
    idx = int(np.argmax(np.abs(vector) > 1e-9))
    vector = vector / np.linalg.norm(vector)
    return vector * np.exp(-1j * np.angle(vector[idx]))


@lru_cache(maxsize=None)
def _stabilizer_states_cached(d):
    states = [np.eye(d, dtype=complex)[j] for j in range(d)]
    X, Z = pauli_x(d), pauli_z(d)
    for m in range(d):
        values, vectors = np.linalg.eig(X @ np.linalg.matrix_power(Z, m))
        angles = np.round(np.mod(np.angle(values), 2 * np.pi), 9)
        for idx in np.argsort(angles, kind="stable"):
            states.append(_phase_fixed(vectors[:, idx]))
    return tuple(states)


def stabilizer_states(d=DEFAULT_D):
    """
    The d(d+1) pure stabilizer states as unit vectors.

    Order: Z eigenbasis |0>..|d-1>, then the eigenbases of X Z^m for
    m = 0..d-1, each sorted by eigenvalue phase. Global phases are fixed so the
    first nonzero amplitude is real and positive.
    """
    check_modulus(d)
    return [s.copy() for s in _stabilizer_states_cached(d)]


def _real_parameters(rho):
    d = rho.shape[0]
    iu = np.triu_indices(d, k=1)
    return np.concatenate([np.real(np.diag(rho)), np.real(rho[iu]), np.imag(rho[iu])])


@lru_cache(maxsize=None)
def _vertex_matrix(d):
    columns = [_real_parameters(ket_to_dm(s)) for s in _stabilizer_states_cached(d)]
    return np.column_stack(columns)


def in_stabilizer_polytope(rho, tol=LP_TOL):
    """
    Test rho = sum_i lambda_i |s_i><s_i| with lambda >= 0 over the stabilizer states.

    Solved as min ||V lambda - rho||_1 over lambda >= 0 in the d^2 real
    coordinates of a Hermitian matrix; the margin is minus that residual.
    """
    rho = np.asarray(rho, dtype=complex)
    d = rho.shape[0]
    check_modulus(d)
    vertices = _vertex_matrix(d)
    rows, cols = vertices.shape
    target = _real_parameters(rho)
    identity = np.eye(rows)
    a_eq = np.hstack([vertices, identity, -identity])
    cost = np.concatenate([np.zeros(cols), np.ones(2 * rows)])
    result = linprog(cost, A_eq=a_eq, b_eq=target, bounds=(0, None), method="highs")
    if result.status != 0:
        return PolytopeVerdict(False, -np.inf)
    margin = -float(result.fun)
    return PolytopeVerdict(margin >= -tol, margin)
