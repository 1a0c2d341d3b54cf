"""
(a,b,b) Subspace Geometry Module for the Qutrit Distillation Toolkit

The +1 eigenspace of A_00 is spanned by e0 = |0> and e1 = (|1>+|2>)/sqrt(2),
so its pure states (cos t, e^(ip) sin t/sqrt2, e^(ip) sin t/sqrt2) form a
Bloch-like sphere with polar angle 2t. This module converts between sphere
coordinates and density matrices, names the distinguished states, and
reduces states to a reference wedge under the PSL(2, Z_3) symmetry.
"""

import math
from dataclasses import dataclass

import numpy as np

from qutrit_msd.src.errors import DomainError, SubspaceError
from qutrit_msd.src.gf_arith import DEFAULT_D, SymplecticMat2, enumerate_psl2
from qutrit_msd.src.qudit_ops import clifford_unitary, dagger, dominant_eigenpair, ket_to_dm, maximally_mixed
from qutrit_msd.src.wigner import phase_point_operator

SUBSPACE_TOL = 1e-9
# Coordinate ties in wedge selection
TIE_TOL = 1e-9

# |E> = (0.774149, 0.447601, 0.447601)
E_AMPLITUDE = 0.774149
THETA_E = math.acos(E_AMPLITUDE)
# +1 eigenstate of the qutrit Fourier transform (midpoint of the |0>-(1,1,1) edge)
THETA_FOURIER = 0.5 * math.acos(1.0 / math.sqrt(3.0))
# Stabilizer vertex (1,1,1)/sqrt3; end of the edge arc starting at |0>
THETA_EDGE_MAX = math.acos(1.0 / math.sqrt(3.0))

_E0 = np.array([1.0, 0.0, 0.0], dtype=complex)
_E1 = np.array([0.0, 1.0, 1.0], dtype=complex) / math.sqrt(2.0)
_BASIS = np.column_stack([_E0, _E1])


@dataclass(frozen=True)
class CartesianPoint:
    """Point of the unit ball: (x, y, z) = r (sin 2t cos p, sin 2t sin p, cos 2t)."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if self.norm > 1.0 + 1e-12:
            raise DomainError(f"({self.x}, {self.y}, {self.z}) lies outside the unit ball")

    @property
    def norm(self):
        return math.sqrt(self.x ** 2 + self.y ** 2 + self.z ** 2)

    def as_tuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class AbbPoint:
    """Spherical coordinates (r, theta, phi) of a depolarized (a,b,b) state."""

    r: float
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.r <= 1.0 + 1e-12:
            raise DomainError(f"r must lie in [0, 1], got {self.r}")
        if not -1e-12 <= self.theta <= math.pi / 2 + 1e-12:
            raise DomainError(f"theta must lie in [0, pi/2], got {self.theta}")
        object.__setattr__(self, "r", min(max(self.r, 0.0), 1.0))
        object.__setattr__(self, "theta", min(max(self.theta, 0.0), math.pi / 2))
        object.__setattr__(self, "phi", self.phi % (2 * math.pi))

    @property
    def rho(self):
        return depolarized(self)

    def to_cartesian(self):
        s = math.sin(2 * self.theta)
        return CartesianPoint(self.r * s * math.cos(self.phi),
                              self.r * s * math.sin(self.phi),
                              self.r * math.cos(2 * self.theta))

    @classmethod
    def from_cartesian(cls, point):
        r = point.norm
        if r == 0.0:
            return cls(0.0, 0.0, 0.0)
        theta = 0.5 * math.acos(max(-1.0, min(1.0, point.z / r)))
        phi = math.atan2(point.y, point.x) if math.hypot(point.x, point.y) > 0.0 else 0.0
        return cls(min(r, 1.0), theta, phi)


def pure_state(theta, phi=0.0):
    """
    Unit vector (cos t, e^(ip) sin t/sqrt2, e^(ip) sin t/sqrt2).

    Args:
        theta (float): Polar parameter in [0, pi/2]
        phi (float): Azimuth in [0, 2 pi)

    Returns:
        np.ndarray: State vector with A_00 |psi> = |psi>
    """
    if not -1e-12 <= theta <= math.pi / 2 + 1e-12:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta}")
    b = np.exp(1j * phi) * math.sin(theta) / math.sqrt(2.0)
    return np.array([math.cos(theta), b, b], dtype=complex)


def depolarized(point):
    """r |psi(t,p)><psi(t,p)| + (1 - r) 1/3; the depolarizing rate is p = 1 - r."""
    return point.r * ket_to_dm(pure_state(point.theta, point.phi)) + (1.0 - point.r) * maximally_mixed()


def state_from_cartesian(point):
    return depolarized(AbbPoint.from_cartesian(point))


def in_abb_subspace(rho, tol=SUBSPACE_TOL):
    """True when rho commutes with A_00."""
    a00 = phase_point_operator(0, 0, DEFAULT_D)
    return float(np.max(np.abs(a00 @ rho - rho @ a00))) <= tol


def cartesian(rho):
    """
    Bloch-type coordinates of a state commuting with A_00.

    The coordinates are the qubit Bloch vector of rho compressed to span(e0, e1);
    for depolarized states this is r (sin 2t cos p, sin 2t sin p, cos 2t).
    """
    if not in_abb_subspace(rho):
        raise SubspaceError("state does not commute with A_00")
    block = dagger(_BASIS) @ rho @ _BASIS
    return CartesianPoint(float(2.0 * block[0, 1].real),
                          float(2.0 * block[1, 0].imag),
                          float((block[0, 0] - block[1, 1]).real))


def north_pole():
    return ket_to_dm(_E0)


def south_pole():
    """|N> = (|1> + |2>)/sqrt2."""
    return ket_to_dm(_E1)


def norrell_ket():
    return np.array([2.0, -1.0, -1.0], dtype=complex) / math.sqrt(6.0)


def norrell_state():
    """|N'><N'| with |N'> = (2, -1, -1)/sqrt6, the maximal sum-negativity state."""
    return ket_to_dm(norrell_ket())


def edge_ket_E():
    return pure_state(THETA_E, 0.0)


def edge_state_E():
    """|E><E| for the edge code's limiting state (0.774149, 0.447601, 0.447601)."""
    return ket_to_dm(edge_ket_E())


def fourier_plus_ket():
    return pure_state(THETA_FOURIER, 0.0)


def fourier_plus_state():
    """+1 eigenstate of the qutrit Fourier transform, proportional to (1 + sqrt3, 1, 1)."""
    return ket_to_dm(fourier_plus_ket())


def stabilizer_vertices():
    """The four pure stabilizer states of the subspace: |0> and (1, w^k, w^k)/sqrt3."""
    theta = THETA_EDGE_MAX
    return [pure_state(0.0, 0.0)] + [pure_state(theta, 2 * math.pi * k / 3) for k in range(3)]


def injection_clifford():
    """U_F for F = (1,1;0,1), applied to |E> before conversion to an equatorial state."""
    return clifford_unitary(SymplecticMat2(1, 1, 0, 1))


def _candidate_order():
    return sorted(enumerate_psl2(DEFAULT_D), key=lambda F: (not F.is_identity(), F.entries))


def psl_images(rho):
    """[(F, U_F rho U_F^dag)] for the 12 PSL(2, Z_3) representatives, identity first."""
    images = []
    for F in _candidate_order():
        U = clifford_unitary(F)
        images.append((F, U @ rho @ dagger(U)))
    return images


def wedge_canonicalize(rho):
    """
    Map a subspace state into the reference wedge.

    Among the 12 images U_F rho U_F^dag, pick the one with the largest z;
    ties go to the largest x, then to F = 1, then to the lexicographically
    smallest F. The reference wedge is therefore the sector closest to |0>
    with |phi| <= pi/3.

    Returns:
        tuple: (canonical state, SymplecticMat2 F that produced it)
    """
    if not in_abb_subspace(rho):
        raise SubspaceError("wedge canonicalization needs a state commuting with A_00")
    best = None
    for F, image in psl_images(rho):
        point = cartesian(image)
        if best is None:
            best = (F, image, point)
            continue
        current = best[2]
        if point.z > current.z + TIE_TOL:
            best = (F, image, point)
        elif abs(point.z - current.z) <= TIE_TOL and point.x > current.x + TIE_TOL:
            best = (F, image, point)
    return best[1], best[0]


def norrell_wedge_ket():
    """
    Reference-wedge image of |N'>, the Norrell axis for codes that are not
    Clifford covariant.

    |N'> and the South pole |N> canonicalize to the same wedge point
    (x, y, z) = (sqrt2/3, sqrt(2/3), 1/3).
    """
    image, _ = wedge_canonicalize(norrell_state())
    _, vector = dominant_eigenpair(image)
    return vector
