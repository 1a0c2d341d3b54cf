"""
Figure-Data Pipeline for the Qutrit Distillation Toolkit

A Prefect flow that regenerates every data file behind the figures:
1. Thresholds along the reference depolarizing axes
2. Classification scans of the x-z, y-z and x-y planes
3. The limiting-state atlas from a seeded code search
4. Loading all CSVs into DuckDB
5. The Markdown summary report
"""

import os
from datetime import datetime

import duckdb
from prefect import flow, task
from prefect.task_runners import ThreadPoolTaskRunner
from rich.console import Console
from rich.panel import Panel

from qutrit_msd.src.abb_geometry import THETA_FOURIER, fourier_plus_ket, norrell_ket, norrell_wedge_ket
from qutrit_msd.src.code_search import SearchConfig, atlas
from qutrit_msd.src.data_loading import load_tables_to_duckdb, save_table
from qutrit_msd.src.distillation import (
    BISECTION_TOL,
    THRESHOLD_COLUMNS,
    GridSpec,
    edge_threshold_formula,
    scan_region,
    threshold_bisection,
    write_scan_csv,
)
from qutrit_msd.src.reporting import generate_summary_report
from qutrit_msd.src.settings import OUTPUT_DIR, worker_count
from qutrit_msd.src.stab_codes import edge_code, face_code

console = Console()

SCAN_PLANES = ("xz", "yz", "xy")


def threshold_axes():
    """(axis, code name, code, target ket, closed-form p* or None) for the reference axes."""
    return [
        ("fourier", "edge", edge_code(), fourier_plus_ket(), edge_threshold_formula(THETA_FOURIER)),
        ("norrell", "face", face_code(), norrell_ket(), None),
        ("norrell", "edge", edge_code(), norrell_wedge_ket(), None),
    ]


def named_code(name):
    return {"edge": edge_code, "face": face_code}[name]()


@task(name="Compute Axis Thresholds")
def task_thresholds(output_dir, tol=BISECTION_TOL):
    """Bisect the threshold of each reference axis."""
    console.print(Panel.fit("Step 1: Computing Axis Thresholds", style="bold blue"))

    rows = []
    for axis, code_name, code, target, p_formula in threshold_axes():
        result = threshold_bisection(code, target, tol=tol)
        console.print(f"[bold green]{axis} axis, {code_name} code: p* = {result.p_star:.6f}[/bold green]")
        rows.append({"axis": axis, "code": code_name, "p_star": result.p_star,
                     "bracket_width": result.bracket_width, "p_formula": p_formula})

    return save_table(rows, THRESHOLD_COLUMNS, os.path.join(output_dir, "thresholds.csv"))


@task(name="Scan Plane")
def task_scan(plane, resolution, code_name, output_dir, workers=1):
    """Classify one coordinate plane of the (a,b,b) ball."""
    console.print(Panel.fit(f"Step 2: Scanning the {plane} plane", style="bold blue"))

    rows = scan_region(named_code(code_name), GridSpec(plane=plane, resolution=resolution), workers=workers)
    return write_scan_csv(rows, os.path.join(output_dir, f"scan_{plane}.csv"))


@task(name="Build Limiting-State Atlas")
def task_atlas(seed, num_candidates, output_dir, workers=1):
    """Search random codes and record their magic limiting states."""
    console.print(Panel.fit("Step 3: Building the Limiting-State Atlas", style="bold blue"))

    config = SearchConfig(seed=seed, num_candidates=num_candidates)
    report = atlas([config], reference_codes=[("edge", edge_code()), ("face", face_code())],
                   workers=workers, show_progress=True)
    csv_path = os.path.join(output_dir, "atlas.csv")
    report.write(csv_path, os.path.join(output_dir, "atlas_codes.json"))
    return csv_path


@task(name="Load Results into DuckDB")
def task_load(csv_paths, db_path):
    """Load every result CSV into DuckDB."""
    console.print(Panel.fit("Step 4: Loading Results into DuckDB", style="bold blue"))

    con = load_tables_to_duckdb(csv_paths, db_path)
    con.close()
    return db_path


@task(name="Generate Summary Report")
def task_report(db_path, output_dir):
    """Write the Markdown report from the database."""
    console.print(Panel.fit("Step 5: Generating Summary Report", style="bold blue"))

    con = duckdb.connect(db_path, read_only=True)
    try:
        return generate_summary_report(con, os.path.join(output_dir, "distillation_report.md"))
    finally:
        con.close()


@flow(name="Qutrit Distillation Figure Data", task_runner=ThreadPoolTaskRunner(max_workers=worker_count(3)))
def figure_data_pipeline(output_dir=OUTPUT_DIR, resolution=41, code_name="edge", seed=0, num_candidates=20,
                         tol=BISECTION_TOL):
    """Run the complete figure-data pipeline."""
    start_time = datetime.now()
    workers = worker_count()

    console.print(Panel.fit(
        f"[bold]Qutrit Distillation Figure Data[/bold]\n"
        f"Starting pipeline at {start_time.strftime('%Y-%m-%d %H:%M:%S')}\n"
        f"Scans at {resolution}x{resolution} for the {code_name} code, "
        f"atlas of {num_candidates} codes from seed {seed}",
        style="bold green"
    ))

    os.makedirs(output_dir, exist_ok=True)

    thresholds_csv = task_thresholds(output_dir, tol)
    scan_futures = {plane: task_scan.submit(plane, resolution, code_name, output_dir, workers)
                    for plane in SCAN_PLANES}
    atlas_csv = task_atlas(seed, num_candidates, output_dir, workers)
    scan_csvs = {f"scan_{plane}": future.result() for plane, future in scan_futures.items()}

    csv_paths = {"thresholds": thresholds_csv, **scan_csvs, "atlas": atlas_csv}
    db_path = task_load(csv_paths, os.path.join(output_dir, "distillation.duckdb"))
    report_path = task_report(db_path, output_dir)

    duration = (datetime.now() - start_time).total_seconds()
    console.print(Panel.fit(
        f"[bold]Pipeline Completed Successfully![/bold]\n"
        f"Total duration: {duration:.2f} seconds\n\n"
        f"Output files available at:\n"
        f"- Thresholds: {thresholds_csv}\n"
        f"- Scans: {', '.join(scan_csvs.values())}\n"
        f"- Atlas: {atlas_csv}\n"
        f"- DuckDB database: {db_path}\n"
        f"- Summary report: {report_path}",
        style="bold green"
    ))

    return {"csv_paths": csv_paths, "db_path": db_path, "report": report_path, "duration": duration}
