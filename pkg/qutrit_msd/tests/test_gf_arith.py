"""
Test module for gf_arith.py
"""

import os
import sys

import pytest

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.errors import DomainError, NonInvertible
from qutrit_msd.src.gf_arith import (
    SymplecticMat2,
    Zd,
    check_modulus,
    enumerate_psl2,
    enumerate_sl2,
    half,
    identity,
    inv,
    inv_mod,
    psl_canonical,
    symplectic_inv,
    symplectic_mul,
)


def test_inverse_examples():
    """Inverses in Z_3 and Z_5."""
    assert inv(Zd(2, 3)) == Zd(2, 3), "2 * 2 = 4 = 1 (mod 3)"
    assert inv(Zd(1, 3)) == Zd(1, 3)
    assert inv_mod(2, 5) == 3
    assert half(3) == 2, "2^-1 = 2 in Z_3"


def test_inverse_of_zero_raises():
    with pytest.raises(NonInvertible):
        inv(Zd(0, 3))
    with pytest.raises(NonInvertible):
        inv_mod(3, 3)


def test_every_nonzero_element_inverts():
    for d in (3, 5, 7):
        for a in range(1, d):
            assert (a * inv_mod(a, d)) % d == 1, f"{a} * {a}^-1 != 1 in Z_{d}"


def test_modulus_must_be_odd_prime():
    assert check_modulus(3) == 3
    for bad in (2, 4, 9, 1):
        with pytest.raises(DomainError):
            check_modulus(bad)


def test_zd_arithmetic_reduces():
    a, b = Zd(2), Zd(2)
    assert a + b == Zd(1)
    assert a * b == Zd(1)
    assert a - b == Zd(0)
    assert -a == Zd(1)
    assert int(Zd(7)) == 1
    with pytest.raises(DomainError):
        Zd(1, 3) + Zd(1, 5)


def test_symplectic_matrix_requires_unit_determinant():
    with pytest.raises(DomainError):
        SymplecticMat2(1, 0, 0, 2)
    F = SymplecticMat2(4, 1, 2, 1)
    assert F.entries == (1, 1, 2, 1), "entries are reduced mod 3"
    assert F.det == 1


def test_product_with_inverse_is_identity():
    for F in enumerate_sl2(3):
        assert symplectic_mul(F, symplectic_inv(F)).is_identity(), f"F.F^-1 != 1 for {F}"
        assert symplectic_mul(symplectic_inv(F), F) == identity()


def test_group_orders():
    sl2 = enumerate_sl2(3)
    psl2 = enumerate_psl2(3)
    assert len(sl2) == 24, f"Expected 24 elements of SL(2,3), got {len(sl2)}"
    assert len(psl2) == 12, f"Expected 12 elements of PSL(2,3), got {len(psl2)}"
    assert len(set(sl2)) == 24, "SL(2,3) enumeration has duplicates"
    assert len(enumerate_sl2(5)) == 120


def test_sl2_is_closed_under_products():
    sl2 = set(enumerate_sl2(3))
    for F in sl2:
        for G in sl2:
            product = symplectic_mul(F, G)
            assert product.det == 1, f"det({F}.{G}) = {product.det}"
            assert product in sl2


def test_psl_is_closed_under_canonical_products():
    psl2 = enumerate_psl2(3)
    for F in psl2:
        for G in psl2:
            assert psl_canonical(symplectic_mul(F, G)) in psl2, f"{F}.{G} leaves PSL(2,3)"


def test_enumeration_is_lexicographic():
    entries = [F.entries for F in enumerate_sl2(3)]
    assert entries == sorted(entries)
    assert enumerate_sl2(3)[0].entries == (0, 1, 2, 0)


def test_psl_representatives_cover_each_pair_once():
    psl2 = enumerate_psl2(3)
    for F in enumerate_sl2(3):
        canonical = psl_canonical(F)
        assert canonical in psl2
        assert psl_canonical(-F) == canonical
    assert identity() in psl2
    assert (-identity()) not in psl2


def test_apply_acts_on_columns():
    F = SymplecticMat2(1, 1, 0, 1)
    assert F.apply(1, 1) == (2, 1)
    assert F.apply(0, 2) == (2, 2)
    assert str(F) == "(1,1;0,1)"
