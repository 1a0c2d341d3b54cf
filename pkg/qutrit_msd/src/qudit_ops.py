"""
Qudit Operator Module for the Qutrit Distillation Toolkit

Generalized Pauli (displacement) operators D_(x|z) = w^(2^-1 xz) X^x Z^z, the
single-qudit symplectic unitaries U_F, and the small dense matrix algebra the
rest of the toolkit is built on. Operators are plain complex numpy arrays.
"""

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from qutrit_msd.src.errors import DimensionError, DomainError, InvalidState
from qutrit_msd.src.gf_arith import DEFAULT_D, check_modulus, half, inv_mod

# Entrywise tolerance for operator comparisons
OP_TOL = 1e-10

Operator = np.ndarray


def omega(d=DEFAULT_D):
    """Primitive d-th root of unity e^(2 pi i / d)."""
    return np.exp(2j * np.pi / d)


def _frozen(matrix):
    matrix.flags.writeable = False
    return matrix


@dataclass(frozen=True)
class PauliLabel:
    """
    An n-qudit displacement label (x|z) with an extra phase w^phase_exp.

    x and z are tuples of length n with entries reduced mod d.
    """

    x: tuple
    z: tuple
    phase_exp: int = 0
    d: int = DEFAULT_D

    def __post_init__(self):
        check_modulus(self.d)
        if len(self.x) != len(self.z):
            raise DimensionError(f"x has length {len(self.x)} but z has length {len(self.z)}")
        object.__setattr__(self, "x", tuple(int(v) % self.d for v in self.x))
        object.__setattr__(self, "z", tuple(int(v) % self.d for v in self.z))
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % self.d)

    @property
    def n(self):
        return len(self.x)

    @classmethod
    def from_row(cls, row, d=DEFAULT_D):
        """Build a label from a table row (x_1..x_n | z_1..z_n)."""
        row = list(row)
        if len(row) % 2:
            raise DimensionError(f"row of odd length {len(row)} cannot be split into (x|z)")
        n = len(row) // 2
        return cls(tuple(row[:n]), tuple(row[n:]), 0, d)

    def to_row(self):
        return list(self.x) + list(self.z)

    def symplectic_product(self, other):
        """<u, v> = x.z' - z.x' (mod d); the labels commute iff this is 0."""
        if self.n != other.n:
            raise DimensionError(f"labels act on {self.n} and {other.n} qudits")
        value = sum(a * b for a, b in zip(self.x, other.z)) - sum(a * b for a, b in zip(self.z, other.x))
        return value % self.d

    def power(self, m):
        """Label of D^m up to phase: (m x | m z)."""
        return PauliLabel(tuple(m * v for v in self.x), tuple(m * v for v in self.z), 0, self.d)

    def is_identity(self):
        return not any(self.x) and not any(self.z)

    def __str__(self):
        xs = "".join(str(v) for v in self.x)
        zs = "".join(str(v) for v in self.z)
        return f"({xs}|{zs})"


def pauli_x(d=DEFAULT_D):
    """Shift operator: X|j> = |j+1 mod d>."""
    check_modulus(d)
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def pauli_z(d=DEFAULT_D):
    """Clock operator: Z|j> = w^j |j>."""
    check_modulus(d)
    return np.diag(omega(d) ** np.arange(d))


@lru_cache(maxsize=None)
def _single_displacement(x, z, d):
    w = omega(d)
    phase = w ** ((half(d) * x * z) % d)
    matrix = phase * np.linalg.matrix_power(pauli_x(d), x) @ np.linalg.matrix_power(pauli_z(d), z)
    return _frozen(matrix)


@lru_cache(maxsize=4096)
def displacement(label):
    """
    Matrix of the displacement operator for a PauliLabel.

    Single-qudit factors are w^(2^-1 xz) X^x Z^z; an n-qudit label is the tensor product
    of its factors in qudit order, times w^phase_exp. The returned array is
    read-only because results are cached.
    """
    factors = [_single_displacement(x, z, label.d) for x, z in zip(label.x, label.z)]
    matrix = reduce(np.kron, factors) * omega(label.d) ** label.phase_exp
    return _frozen(matrix)


def clifford_unitary(F):
    """
    The symplectic unitary U_F, evaluated literally from its matrix formula (no rephasing).

    Args:
        F (SymplecticMat2): Unit-determinant matrix over Z_d

    Returns:
        np.ndarray: d x d unitary with U_F D_u U_F^dag ~ D_(F u)
    """
    d = F.d
    w = omega(d)
    h = half(d)
    U = np.zeros((d, d), dtype=complex)
    if F.beta != 0:
        b_inv = inv_mod(F.beta, d)
        for j in range(d):
            for k in range(d):
                exponent = h * b_inv * (F.alpha * k * k - 2 * j * k + F.delta * j * j)
                U[j, k] = w ** (exponent % d)
        U /= np.sqrt(d)
    else:
        for k in range(d):
            U[(F.alpha * k) % d, k] = w ** ((h * F.alpha * F.gamma * k * k) % d)
    return U


def norrell_target_gate(d=DEFAULT_D):
    """The non-Clifford diag(1, 1, -1) that two Norrell-state copies can implement."""
    if d != 3:
        raise DomainError("diag(1, 1, -1) is a qutrit gate")
    return np.diag([1.0, 1.0, -1.0]).astype(complex)


def _check_square(op, name="operator"):
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {op.shape}")


def _check_same(a, b):
    _check_square(a)
    _check_square(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def tensor(*ops):
    """Kronecker product of one or more operators, left to right."""
    if not ops:
        raise DimensionError("tensor() needs at least one operator")
    for op in ops:
        _check_square(op)
    return reduce(np.kron, ops)


def dagger(op):
    return np.conj(op).T


def mul(a, b):
    _check_same(a, b)
    return a @ b


def add(a, b):
    _check_same(a, b)
    return a + b


def scale(op, c):
    return c * op


def trace(op):
    _check_square(op)
    return np.trace(op)


def ket_to_dm(psi):
    """|psi><psi| for a (not necessarily normalized) vector, normalized."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, np.conj(psi))


def fidelity(rho, target):
    """
    Overlap of a state with a pure target.

    Args:
        rho: Density matrix
        target: Pure target as a vector |psi> or as |psi><psi|

    Returns:
        float: <psi|rho|psi>
    """
    _check_square(rho, "rho")
    target = np.asarray(target)
    if target.ndim == 1:
        if target.shape[0] != rho.shape[0]:
            raise DimensionError(f"target of length {target.shape[0]} for {rho.shape} state")
        psi = target / np.linalg.norm(target)
        return float(np.real(np.vdot(psi, rho @ psi)))
    _check_same(rho, target)
    return float(np.real(np.trace(rho @ target)))


def trace_distance(a, b):
    """(1/2) || a - b ||_1 for Hermitian a, b."""
    _check_same(a, b)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def purity(rho):
    _check_square(rho)
    return float(np.real(np.trace(rho @ rho)))


def approx_equal(a, b, tol=OP_TOL):
    """Entrywise max-modulus comparison."""
    return a.shape == b.shape and float(np.max(np.abs(a - b))) <= tol


def equal_up_to_phase(a, b, tol=OP_TOL):
    """True when a = c b for some unit-modulus complex c."""
    if a.shape != b.shape:
        return False
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return approx_equal(a, b, tol)
    c = a[idx] / b[idx]
    return abs(abs(c) - 1.0) <= tol and approx_equal(a, c * b, tol)


def validate_density_matrix(rho, tol=OP_TOL, require_psd=True):
    """
    Raise InvalidState unless rho is Hermitian, unit trace and (optionally) PSD.

    Returns:
        np.ndarray: rho as a complex array
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidState(f"density matrix must be square, got shape {rho.shape}")
    if not approx_equal(rho, dagger(rho), tol):
        raise InvalidState("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol:
        raise InvalidState(f"density matrix has trace {tr.real:.12g}, expected 1")
    if require_psd and np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise InvalidState("density matrix has a negative eigenvalue")
    return rho


def project_to_density_matrix(rho):
    """
    Pull a nearly valid density matrix back onto the PSD cone: negative
    eigenvalues are clipped to zero and the rest renormalized.
    """
    rho = 0.5 * (rho + dagger(rho))
    values, vectors = np.linalg.eigh(rho)
    values = np.clip(values, 0.0, None)
    values /= np.sum(values)
    return (vectors * values) @ dagger(vectors)


def maximally_mixed(d=DEFAULT_D):
    return np.eye(d, dtype=complex) / d


def depolarize(target, p):
    """(1 - p)|M><M| + p 1/d for a pure target given as vector or projector."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"noise rate p must lie in [0, 1], got {p}")
    target = np.asarray(target, dtype=complex)
    if target.ndim == 1:
        target = ket_to_dm(target)
    d = target.shape[0]
    return (1.0 - p) * target + p * np.eye(d, dtype=complex) / d


def dominant_eigenpair(rho):
    """Largest eigenvalue of a Hermitian matrix and its unit eigenvector."""
    values, vectors = np.linalg.eigh(rho)
    return float(values[-1]), vectors[:, -1]
