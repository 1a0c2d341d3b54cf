"""
Test module for code_search.py
"""

import json
import math
import os
import sys

import numpy as np
import pytest

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.abb_geometry import edge_ket_E, norrell_state, pure_state
from qutrit_msd.src.code_search import (
    ATLAS_COLUMNS,
    SearchConfig,
    atlas,
    candidate_codes,
    classify_code,
    default_start_ensemble,
    label_fixed_point,
    random_code,
)
from qutrit_msd.src.distillation import distill_round
from qutrit_msd.src.qudit_ops import fidelity, ket_to_dm, maximally_mixed
from qutrit_msd.src.stab_codes import edge_code, face_code, rank_mod_d, validate
from qutrit_msd.src.wigner import in_wigner_polytope


@pytest.fixture
def small_config():
    """A cheap search: three codes, fifteen starting states."""
    return SearchConfig(seed=7, num_candidates=3, starts=default_start_ensemble(per_meridian=5))


def test_default_start_ensemble():
    starts = default_start_ensemble()
    assert len(starts) == 60
    assert all(point.r == pytest.approx(0.9) for point in starts)
    assert sorted({round(point.phi, 9) for point in starts}) == [0.0, round(math.pi / 3, 9), round(math.pi, 9)]


def test_random_codes_are_valid():
    rng = np.random.default_rng(1)
    for _ in range(20):
        code = random_code(rng)
        assert code.n == 4 and code.k == 1
        assert validate(code) == [], f"invalid random code:\n{code}"
        assert rank_mod_d([g.to_row() for g in code.generators]) == 3
        assert code.logical_z.symplectic_product(code.logical_x) == 2


def test_seed_fixes_code_stream():
    first = [code.to_dict() for _, code in candidate_codes(SearchConfig(seed=42, num_candidates=5))]
    second = [code.to_dict() for _, code in candidate_codes(SearchConfig(seed=42, num_candidates=5))]
    other = [code.to_dict() for _, code in candidate_codes(SearchConfig(seed=43, num_candidates=5))]
    assert first == second
    assert first != other


def test_labels_of_known_states():
    assert label_fixed_point(ket_to_dm(edge_ket_E()))[0] == "edge"
    assert label_fixed_point(norrell_state())[0] == "face"
    assert label_fixed_point(ket_to_dm([1, 0, 0]))[0] == "stabilizer"
    assert label_fixed_point(maximally_mixed())[0] == "stabilizer"
    assert label_fixed_point(ket_to_dm(pure_state(1.3, math.pi / 6)))[0] == "other"


def test_edge_code_limiting_state():
    config = SearchConfig(seed=0, num_candidates=0, starts=default_start_ensemble(per_meridian=6))
    hits = classify_code(edge_code(), config, "edge")
    magic = [hit for hit in hits if hit.classification != "stabilizer"]
    assert magic, "edge code has a magic limiting state"
    assert all(hit.classification == "edge" for hit in magic)
    assert any(fidelity(hit.fixed_point, edge_ket_E()) > 1 - 1e-6 for hit in magic)


def test_face_code_limiting_state():
    config = SearchConfig(seed=0, num_candidates=0, starts=default_start_ensemble(per_meridian=6))
    hits = classify_code(face_code(), config, "face")
    face_hits = [hit for hit in hits if hit.classification == "face"]
    assert face_hits, "face code reaches the Norrell orbit"
    for hit in face_hits:
        assert hit.sum_negativity == pytest.approx(1 / 3, abs=1e-6)


def test_hits_are_verified_fixed_points(small_config):
    for code_id, code in candidate_codes(small_config):
        for hit in classify_code(code, small_config, code_id):
            again = distill_round(code, hit.fixed_point).rho_out
            assert np.max(np.abs(again - hit.fixed_point)) <= 1e-9
            if hit.classification != "stabilizer":
                assert not in_wigner_polytope(hit.fixed_point).inside


def test_empty_atlas():
    report = atlas([])
    assert report.rows == [] and report.codes == {}


def test_atlas_is_deterministic(small_config, tmp_path):
    first = atlas([small_config], reference_codes=[("edge", edge_code())])
    second = atlas([small_config], reference_codes=[("edge", edge_code())], workers=2)
    assert first.rows == second.rows
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    first.write(str(a), str(tmp_path / "a.json"))
    second.write(str(b), str(tmp_path / "b.json"))
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert a.read_text().splitlines()[0] == ",".join(ATLAS_COLUMNS)


def test_atlas_contains_reference_edge_hit(small_config, tmp_path):
    report = atlas([small_config], reference_codes=[("edge", edge_code())])
    edge_rows = [row for row in report.rows if row["code_id"] == "edge"]
    assert edge_rows and all(row["fixed_point_class"] == "edge" for row in edge_rows)
    assert "edge" in report.codes
    path = tmp_path / "codes.json"
    report.write(str(tmp_path / "atlas.csv"), str(path))
    with open(path) as f:
        assert json.load(f)["edge"] == edge_code().to_dict()
