"""
Test module for settings.py
"""

import os
import sys

# Add the parent directory to the path so we can import from qutrit_msd
sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))
from qutrit_msd.src.settings import CODES_DIR, OUTPUT_DIR, PACKAGE_DIR, worker_count


def test_directories():
    assert os.path.basename(PACKAGE_DIR) == "qutrit_msd"
    assert os.path.exists(os.path.join(CODES_DIR, "edge_code.json"))
    assert os.path.exists(os.path.join(CODES_DIR, "face_code.json"))
    assert os.path.dirname(OUTPUT_DIR) == PACKAGE_DIR


def test_worker_count_reads_threads(monkeypatch):
    monkeypatch.delenv("THREADS", raising=False)
    assert worker_count() == 1
    assert worker_count(3) == 3
    monkeypatch.setenv("THREADS", "4")
    assert worker_count() == 4


def test_worker_count_rejects_bad_values(monkeypatch):
    for raw in ("zero", "0", "-2", ""):
        monkeypatch.setenv("THREADS", raw)
        assert worker_count(2) == 2, f"THREADS={raw!r} should fall back"
