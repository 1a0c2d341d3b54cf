"""
Stabilizer Code Module for the Qutrit Distillation Toolkit

[[n,1]]_d stabilizer codes given as (x|z) generator tables: loading and saving
the JSON code format, validation of the stabilizer-code conditions, the
trivial-syndrome projector and the decoding isometry onto one logical qudit.
"""

import json
import os
from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np

from qutrit_msd.src.errors import CodeFormatError, LogicalAlgebraError, PhaseConventionError
from qutrit_msd.src.gf_arith import DEFAULT_D, inv_mod
from qutrit_msd.src.qudit_ops import PauliLabel, dagger, displacement, omega
from qutrit_msd.src.settings import CODES_DIR

# Tolerance for projector / isometry identities
CODE_TOL = 1e-9


@dataclass(frozen=True)
class StabilizerCode:
    """Generators and one logical (Z_L, X_L) pair, all as PauliLabels."""

    n: int
    k: int
    generators: tuple
    logical_z: PauliLabel
    logical_x: PauliLabel
    d: int = DEFAULT_D
    name: str = ""

    @classmethod
    def from_rows(cls, generators, logical_z, logical_x, d=DEFAULT_D, name=""):
        gens = tuple(PauliLabel.from_row(row, d) for row in generators)
        zl = PauliLabel.from_row(logical_z, d)
        xl = PauliLabel.from_row(logical_x, d)
        return cls(zl.n, zl.n - len(gens), gens, zl, xl, d, name)

    def to_dict(self):
        return {
            "d": self.d,
            "n": self.n,
            "generators": [g.to_row() for g in self.generators],
            "logical_z": self.logical_z.to_row(),
            "logical_x": self.logical_x.to_row(),
        }

    def __str__(self):
        rows = [f"G{i + 1} {g}" for i, g in enumerate(self.generators)]
        rows += [f"Z_L {self.logical_z}", f"X_L {self.logical_x}"]
        return "\n".join(rows)


@dataclass(frozen=True)
class CodeSpace:
    """Trivial-syndrome projector (d^n x d^n) and decoding isometry V (d^n x d)."""

    projector: np.ndarray
    isometry: np.ndarray


def code_from_dict(data, name=""):
    """
    Build a code from the JSON code format.

    Args:
        data (dict): {"d", "n", "generators", "logical_z", "logical_x"}
        name (str): Label used in reports

    Returns:
        StabilizerCode
    """
    try:
        d = int(data.get("d", DEFAULT_D))
        n = int(data["n"])
        generators = [[int(v) for v in row] for row in data["generators"]]
        logical_z = [int(v) for v in data["logical_z"]]
        logical_x = [int(v) for v in data["logical_x"]]
    except (KeyError, TypeError, ValueError) as e:
        raise CodeFormatError(f"malformed code description: {e}") from e
    for row in generators + [logical_z, logical_x]:
        if len(row) != 2 * n:
            raise CodeFormatError(f"row {row} has length {len(row)}, expected {2 * n}")
        if any(not 0 <= v < d for v in row):
            raise CodeFormatError(f"row {row} has entries outside Z_{d}")
    return StabilizerCode.from_rows(generators, logical_z, logical_x, d, name or data.get("name", ""))


def load_code(path):
    """Read a code from a JSON file."""
    try:
        with open(path) as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise CodeFormatError(f"cannot read code file {path}: {e}") from e
    name = os.path.splitext(os.path.basename(path))[0]
    return code_from_dict(data, name)


def save_code(code, path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as f:
        json.dump(code.to_dict(), f, indent=2)


def edge_code():
    """The [[4,1,2]]_3 code whose limiting state is |E>."""
    return load_code(os.path.join(CODES_DIR, "edge_code.json"))


def face_code():
    """The [[4,1,2]]_3 code whose limiting state is the Norrell state."""
    return load_code(os.path.join(CODES_DIR, "face_code.json"))


def rank_mod_d(rows, d=DEFAULT_D):
    """Rank over Z_d of a list of integer rows."""
    if not rows:
        return 0
    GF = galois.GF(d)
    return int(np.linalg.matrix_rank(GF(np.array(rows, dtype=int) % d)))


def validate(code):
    """
    Check the stabilizer-code conditions.

    Returns:
        list[str]: One message per violation; empty when the code is valid
    """
    violations = []
    if code.k != 1:
        violations.append(f"code encodes k={code.k} logical qudits; only k=1 is supported")
    labels = list(code.generators) + [code.logical_z, code.logical_x]
    for label in labels:
        if label.n != code.n or label.d != code.d:
            violations.append(f"label {label} does not act on {code.n} qudits of dimension {code.d}")
    if violations:
        return violations

    for i, gi in enumerate(code.generators):
        for j in range(i + 1, len(code.generators)):
            product = gi.symplectic_product(code.generators[j])
            if product:
                violations.append(f"generators G{i + 1} and G{j + 1} do not commute (symplectic product {product})")
    for name, logical in (("Z_L", code.logical_z), ("X_L", code.logical_x)):
        for i, gi in enumerate(code.generators):
            product = logical.symplectic_product(gi)
            if product:
                violations.append(f"{name} and G{i + 1} do not commute (symplectic product {product})")
    if code.logical_z.symplectic_product(code.logical_x) == 0:
        violations.append("Z_L and X_L commute; they do not form a conjugate pair")

    rows = [g.to_row() for g in code.generators]
    rank = rank_mod_d(rows, code.d)
    if rank != len(rows):
        violations.append(f"generators are dependent: rank {rank} over Z_{code.d} for {len(rows)} rows")
    return violations


def _group_projector(matrix, d):
    dim = matrix.shape[0]
    total = np.zeros((dim, dim), dtype=complex)
    power = np.eye(dim, dtype=complex)
    for _ in range(d):
        total += power
        power = power @ matrix
    return total / d


def trivial_syndrome_projector(code):
    """
    Projector onto the joint +1 eigenspace of all generators.

    Pi = prod_i (1/d) sum_m G_i^m with each G_i realized by displacement()
    and no extra row phase.
    """
    dim = code.d ** code.n
    projector = np.eye(dim, dtype=complex)
    for g in code.generators:
        projector = projector @ _group_projector(displacement(g), code.d)
    rank = float(np.real(np.trace(projector)))
    expected = code.d ** code.k
    if abs(rank - expected) > 1e-6:
        raise PhaseConventionError(f"trivial-syndrome projector has rank {rank:.6g}, expected {expected}")
    return projector


def logical_isometry(code):
    """
    Decoding isometry V with Z_L V|j> = w^j V|j> and X_L V|j> = V|j+1>.

    X_L is replaced by the power X_L^m that satisfies Z_L X_L^m = w X_L^m Z_L, so
    tables listing the conjugate partner with another symplectic product still
    decode. V is fixed up to one global phase.

    Returns:
        CodeSpace: projector and isometry
    """
    d = code.d
    projector = trivial_syndrome_projector(code)
    zl = displacement(code.logical_z)
    product = code.logical_z.symplectic_product(code.logical_x)
    if product == 0:
        raise LogicalAlgebraError("Z_L and X_L commute")
    # Z_L X_L = w^(-<Z_L, X_L>) X_L Z_L
    m = (-inv_mod(product, d)) % d
    xl = np.linalg.matrix_power(displacement(code.logical_x), m)
    for name, op in (("Z_L", zl), ("X_L", xl)):
        if np.max(np.abs(op @ projector - projector @ op)) > CODE_TOL:
            raise LogicalAlgebraError(f"{name} does not preserve the codespace")

    zero_sector = _group_projector(zl, d) @ projector
    if abs(np.real(np.trace(zero_sector)) - 1.0) > 1e-6:
        raise LogicalAlgebraError("Z_L eigenvalue 1 is not simple on the codespace")
    column = int(np.argmax(np.linalg.norm(zero_sector, axis=0)))
    v0 = zero_sector[:, column] / np.linalg.norm(zero_sector[:, column])

    columns = [v0]
    for _ in range(d - 1):
        columns.append(xl @ columns[-1])
    isometry = np.column_stack(columns)

    w = omega(d)
    checks = (
        (dagger(isometry) @ isometry, np.eye(d)),
        (zl @ isometry, isometry * (w ** np.arange(d))),
        (projector @ isometry, isometry),
    )
    for lhs, rhs in checks:
        if np.max(np.abs(lhs - rhs)) > CODE_TOL:
            raise LogicalAlgebraError("logical operators do not close the Weyl algebra on the codespace")
    return CodeSpace(projector, isometry)


@lru_cache(maxsize=256)
def code_space(code):
    """Cached logical_isometry(); codes are immutable so the result can be shared."""
    space = logical_isometry(code)
    space.projector.flags.writeable = False
    space.isometry.flags.writeable = False
    return space
