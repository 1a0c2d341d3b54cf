"""
Test module for pipeline.py

The Prefect tasks are called through ``.fn`` so no flow run or API server is needed.
"""

import os
import sys

import polars as pl
import pytest

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.abb_geometry import norrell_ket, norrell_wedge_ket
from qutrit_msd.src.pipeline import (
    named_code,
    task_atlas,
    task_load,
    task_report,
    task_scan,
    threshold_axes,
)
from qutrit_msd.src.qudit_ops import approx_equal
from qutrit_msd.src.stab_codes import edge_code


def test_threshold_axes():
    axes = threshold_axes()
    assert [(axis, code) for axis, code, _, _, _ in axes] == [
        ("fourier", "edge"), ("norrell", "face"), ("norrell", "edge")]
    assert axes[0][4] == pytest.approx(0.354438, abs=1e-6)
    assert approx_equal(axes[1][3], norrell_ket())
    assert approx_equal(axes[2][3], norrell_wedge_ket()), "edge code uses the wedge image of |N'>"
    assert named_code("edge").to_dict() == edge_code().to_dict()


def test_scan_load_and_report(tmp_path):
    output_dir = str(tmp_path)
    scan_csv = task_scan.fn("xy", 5, "edge", output_dir)
    atlas_csv = task_atlas.fn(seed=1, num_candidates=0, output_dir=output_dir)

    frame = pl.read_csv(scan_csv)
    assert frame.columns == ["coord1", "coord2", "class", "fidelity", "p_succ"]
    assert os.path.exists(os.path.join(output_dir, "atlas_codes.json"))

    db_path = task_load.fn({"scan_xy": scan_csv, "atlas": atlas_csv}, os.path.join(output_dir, "results.duckdb"))
    report = task_report.fn(db_path, output_dir)
    text = open(report).read()
    assert "## Scan of the xy plane" in text
    assert "## Limiting-State Atlas" in text
    assert "| edge |" in text, "the reference edge code reaches |E>"
