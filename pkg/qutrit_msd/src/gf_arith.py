"""
Finite-Field Arithmetic Module for the Qutrit Distillation Toolkit

Exact arithmetic over Z_d (d an odd prime, 3 by default) and enumeration of
the single-qudit symplectic groups SL(2, Z_d) and PSL(2, Z_d) = SL(2, Z_d)/{+-1}.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache

import galois

from qutrit_msd.src.errors import DomainError, NonInvertible

DEFAULT_D = 3


def check_modulus(d):
    """Raise DomainError unless d is an odd prime."""
    if d < 3 or not galois.is_prime(d):
        raise DomainError(f"d must be an odd prime, got {d}")
    return d


@dataclass(frozen=True)
class Zd:
    """An element of Z_d, always stored reduced."""

    value: int
    modulus: int = DEFAULT_D

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _coerce(self, other):
        if isinstance(other, Zd):
            if other.modulus != self.modulus:
                raise DomainError(f"cannot mix Z_{self.modulus} and Z_{other.modulus}")
            return other.value
        return int(other)

    def __add__(self, other):
        return Zd(self.value + self._coerce(other), self.modulus)

    def __sub__(self, other):
        return Zd(self.value - self._coerce(other), self.modulus)

    def __mul__(self, other):
        return Zd(self.value * self._coerce(other), self.modulus)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Zd(-self.value, self.modulus)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def inv(a):
    """
    Multiplicative inverse in Z_d.

    Args:
        a (Zd): Nonzero element

    Returns:
        Zd: b with a*b = 1 (mod d)
    """
    if a.value == 0:
        raise NonInvertible(f"0 has no inverse in Z_{a.modulus}")
    return Zd(pow(a.value, -1, a.modulus), a.modulus)


def inv_mod(a, d=DEFAULT_D):
    """Integer shortcut for inv(Zd(a, d)).value."""
    return inv(Zd(a, d)).value


def half(d=DEFAULT_D):
    """The element 2^-1 of Z_d used by displacement phases and symplectic unitaries."""
    return inv_mod(2, d)


@dataclass(frozen=True, order=True)
class SymplecticMat2:
    """
    A 2x2 matrix F = ((alpha, beta), (gamma, delta)) over Z_d with det F = 1.

    Entries are stored as reduced integers; ordering is lexicographic on
    (alpha, beta, gamma, delta).
    """

    alpha: int
    beta: int
    gamma: int
    delta: int
    d: int = DEFAULT_D

    def __post_init__(self):
        check_modulus(self.d)
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, getattr(self, name) % self.d)
        if self.det != 1:
            raise DomainError(f"{self.entries} has determinant {self.det}, not 1 (mod {self.d})")

    @property
    def det(self):
        return (self.alpha * self.delta - self.beta * self.gamma) % self.d

    @property
    def entries(self):
        return (self.alpha, self.beta, self.gamma, self.delta)

    def __neg__(self):
        return SymplecticMat2(-self.alpha, -self.beta, -self.gamma, -self.delta, self.d)

    def apply(self, x, z):
        """F (x, z)^T, reduced mod d."""
        return ((self.alpha * x + self.beta * z) % self.d,
                (self.gamma * x + self.delta * z) % self.d)

    def is_identity(self):
        return self.entries == (1, 0, 0, 1)

    def __str__(self):
        return f"({self.alpha},{self.beta};{self.gamma},{self.delta})"


def identity(d=DEFAULT_D):
    return SymplecticMat2(1, 0, 0, 1, d)


def symplectic_mul(F, G):
    """Matrix product F.G over Z_d."""
    if F.d != G.d:
        raise DomainError(f"cannot multiply matrices over Z_{F.d} and Z_{G.d}")
    return SymplecticMat2(
        F.alpha * G.alpha + F.beta * G.gamma,
        F.alpha * G.beta + F.beta * G.delta,
        F.gamma * G.alpha + F.delta * G.gamma,
        F.gamma * G.beta + F.delta * G.delta,
        F.d,
    )


def symplectic_inv(F):
    """Inverse of a unit-determinant matrix: ((delta, -beta), (-gamma, alpha))."""
    return SymplecticMat2(F.delta, -F.beta, -F.gamma, F.alpha, F.d)


def psl_canonical(F):
    """The representative of {F, -F} with the lexicographically smaller entries."""
    return min(F, -F)


@lru_cache(maxsize=None)
def _sl2_cached(d):
    matrices = []
    for a, b, c, e in itertools.product(range(d), repeat=4):
        if (a * e - b * c) % d == 1:
            matrices.append(SymplecticMat2(a, b, c, e, d))
    return tuple(matrices)


def enumerate_sl2(d=DEFAULT_D):
    """
    All matrices of SL(2, Z_d) in lexicographic order of their entries.

    Args:
        d (int): Odd prime

    Returns:
        list[SymplecticMat2]: d(d^2 - 1) matrices (24 for qutrits)
    """
    check_modulus(d)
    return list(_sl2_cached(d))


def enumerate_psl2(d=DEFAULT_D):
    """
    One canonical representative per {F, -F} pair of SL(2, Z_d).

    Returns:
        list[SymplecticMat2]: d(d^2 - 1)/2 matrices (12 for qutrits), lexicographic
    """
    return [F for F in enumerate_sl2(d) if psl_canonical(F) == F]
