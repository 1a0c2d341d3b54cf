"""
Test module for stab_codes.py
"""

import json
import os
import sys

import galois
import numpy as np
import pytest

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.errors import CodeFormatError, LogicalAlgebraError, PhaseConventionError
from qutrit_msd.src.qudit_ops import approx_equal, dagger, displacement, omega
from qutrit_msd.src.stab_codes import (
    StabilizerCode,
    code_from_dict,
    code_space,
    edge_code,
    face_code,
    load_code,
    logical_isometry,
    rank_mod_d,
    save_code,
    trivial_syndrome_projector,
    validate,
)


@pytest.fixture(params=["edge", "face"])
def code(request):
    """Both built-in [[4,1,2]]_3 codes."""
    return edge_code() if request.param == "edge" else face_code()


@pytest.fixture
def edge_rows():
    return edge_code().to_dict()


def test_builtin_codes_are_valid(code):
    assert code.n == 4 and code.k == 1 and code.d == 3
    assert len(code.generators) == 3
    assert validate(code) == [], f"{code.name} has violations: {validate(code)}"


def test_projector_has_rank_three(code):
    projector = trivial_syndrome_projector(code)
    assert projector.shape == (81, 81)
    assert approx_equal(projector @ projector, projector, 1e-9), "projector is idempotent"
    assert approx_equal(projector, dagger(projector), 1e-9)
    assert abs(np.trace(projector).real - 3) < 1e-9
    for g in code.generators:
        G = displacement(g)
        assert approx_equal(G @ projector, projector, 1e-9), "codespace has eigenvalue 1 for every generator"


def test_projector_does_not_depend_on_generating_set(code):
    rows = [g.to_row() for g in code.generators]
    reduced = galois.GF(3)(np.array(rows, dtype=int)).row_reduce()
    g1, g2, g3 = (np.array(row, dtype=int) for row in rows)
    mixed = [(g1 + g2) % 3, (2 * g2) % 3, (g3 + 2 * g1) % 3]
    for new_rows in (np.array(reduced, dtype=int), mixed):
        rebuilt = StabilizerCode.from_rows([list(map(int, row)) for row in new_rows],
                                           code.logical_z.to_row(), code.logical_x.to_row())
        assert approx_equal(trivial_syndrome_projector(rebuilt), trivial_syndrome_projector(code), 1e-9)


def test_isometry_realizes_logical_pair(code):
    space = code_space(code)
    V = space.isometry
    assert V.shape == (81, 3)
    assert approx_equal(dagger(V) @ V, np.eye(3), 1e-9)
    assert approx_equal(V @ dagger(V), space.projector, 1e-9)
    Z_L = displacement(code.logical_z)
    assert approx_equal(Z_L @ V, V * omega() ** np.arange(3), 1e-9)
    X_L = displacement(code.logical_x)
    # <Z_L, X_L> = -1 in both tables, so X_L shifts the logical basis directly
    assert approx_equal(X_L @ V[:, 0], V[:, 1], 1e-9)
    assert approx_equal(X_L @ V[:, 2], V[:, 0], 1e-9)


def test_code_space_is_cached_and_read_only():
    a = code_space(edge_code())
    b = code_space(edge_code())
    assert a is b
    with pytest.raises(ValueError):
        a.projector[0, 0] = 0


def test_other_power_of_logical_x_decodes_identically(edge_rows):
    doubled = dict(edge_rows)
    doubled["logical_x"] = [(2 * v) % 3 for v in edge_rows["logical_x"]]
    code = code_from_dict(doubled)
    assert code.logical_z.symplectic_product(code.logical_x) == 1
    assert approx_equal(logical_isometry(code).isometry, code_space(edge_code()).isometry, 1e-9)


def test_validate_reports_non_commuting_generators(edge_rows):
    broken = dict(edge_rows)
    broken["generators"] = edge_rows["generators"][:2] + [[1, 0, 0, 0, 0, 0, 0, 0]]
    problems = validate(code_from_dict(broken))
    assert any("G1 and G3" in p for p in problems), f"Expected a G1/G3 violation, got {problems}"


def test_validate_reports_dependent_generators(edge_rows):
    broken = dict(edge_rows)
    broken["generators"] = edge_rows["generators"][:2] + [edge_rows["generators"][0]]
    problems = validate(code_from_dict(broken))
    assert any("dependent" in p for p in problems)


def test_validate_reports_commuting_logicals(edge_rows):
    broken = dict(edge_rows)
    broken["logical_x"] = edge_rows["logical_z"]
    code = code_from_dict(broken)
    assert any("Z_L and X_L commute" in p for p in validate(code))
    with pytest.raises(LogicalAlgebraError):
        logical_isometry(code)


def test_dependent_generators_break_projector_rank(edge_rows):
    g = edge_rows["generators"][0]
    broken = dict(edge_rows)
    broken["generators"] = [g, [(2 * v) % 3 for v in g], edge_rows["generators"][2]]
    with pytest.raises(PhaseConventionError):
        trivial_syndrome_projector(code_from_dict(broken))


def test_rank_mod_d():
    assert rank_mod_d([[1, 0], [0, 1]]) == 2
    assert rank_mod_d([[1, 2], [2, 1]]) == 1, "(2,1) = 2 (1,2) mod 3"
    assert rank_mod_d([]) == 0


def test_malformed_code_files(tmp_path, edge_rows):
    with pytest.raises(CodeFormatError):
        code_from_dict({"n": 4})
    short = dict(edge_rows)
    short["logical_z"] = [1, 0, 0]
    with pytest.raises(CodeFormatError):
        code_from_dict(short)
    out_of_range = dict(edge_rows)
    out_of_range["logical_x"] = [0, 0, 0, 0, 1, 5, 0, 0]
    with pytest.raises(CodeFormatError):
        code_from_dict(out_of_range)
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    with pytest.raises(CodeFormatError):
        load_code(str(bad_json))


def test_save_and_load(tmp_path):
    path = tmp_path / "codes" / "face_copy.json"
    save_code(face_code(), str(path))
    loaded = load_code(str(path))
    assert loaded.name == "face_copy"
    assert loaded.to_dict() == face_code().to_dict()
    with open(path) as f:
        assert set(json.load(f)) == {"d", "n", "generators", "logical_z", "logical_x"}


def test_from_rows_counts_logical_qudits():
    code = StabilizerCode.from_rows([[1, 1, 0, 0], [0, 0, 1, 1]], [1, 0, 0, 0], [0, 0, 1, 0])
    assert code.n == 2 and code.k == 0
    assert any("k=0" in p for p in validate(code))
    assert str(edge_code()).startswith("G1 (")
