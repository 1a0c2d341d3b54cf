"""
Filesystem defaults and environment-driven settings.
"""

import os

PACKAGE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Built-in code fixtures (edge and face codes)
CODES_DIR = os.path.join(PACKAGE_DIR, "codes")

# Where the report pipeline writes CSV, DuckDB and Markdown output
OUTPUT_DIR = os.path.join(PACKAGE_DIR, "output")


def worker_count(default=1):
    """
    Number of worker threads allowed for scans and searches.

    Reads the optional THREADS environment variable; anything that is not a
    positive integer falls back to ``default``.
    """
    raw = os.environ.get("THREADS")
    if raw is None:
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default
