"""
Reporting Module for the Qutrit Distillation Toolkit

Builds the Markdown summary of a figure-data run from the DuckDB tables:
axis thresholds, per-plane scan class counts and the limiting-state atlas.
"""

import os
from datetime import datetime

from rich.console import Console
from rich.table import Table

console = Console()

CLASS_ORDER = """
    CASE class
        WHEN 'STAB' THEN 1
        WHEN 'POSW' THEN 2
        WHEN 'DISTILL' THEN 3
        WHEN 'NEGUNDIST' THEN 4
    END
"""


def _tables(con):
    return {row[0] for row in con.execute("SHOW TABLES").fetchall()}


def threshold_summary(con):
    """Rows (axis, code, p_star, bracket_width, p_formula) in insertion order."""
    return con.execute("""
        SELECT axis, code, p_star, bracket_width, p_formula
        FROM thresholds
    """).fetchall()


def scan_summary(con, table):
    """Class counts and percentages for one scan table."""
    return con.execute(f"""
        SELECT
            class,
            COUNT(*) AS count,
            COUNT(*) * 100.0 / (SELECT COUNT(*) FROM "{table}") AS percentage,
            AVG(p_succ) AS mean_p_succ
        FROM "{table}"
        GROUP BY class
        ORDER BY {CLASS_ORDER}
    """).fetchall()


def atlas_summary(con):
    """Hit counts, distinct codes and sum-negativity range per fixed-point class."""
    return con.execute("""
        SELECT
            fixed_point_class,
            COUNT(*) AS hits,
            COUNT(DISTINCT code_id) AS codes,
            MIN(sum_negativity) AS min_sn,
            MAX(sum_negativity) AS max_sn
        FROM atlas
        GROUP BY fixed_point_class
        ORDER BY fixed_point_class
    """).fetchall()


def print_threshold_table(rows):
    table = Table(title="Depolarizing Thresholds")
    table.add_column("Axis", style="cyan")
    table.add_column("Code")
    table.add_column("p* (numeric)", justify="right")
    table.add_column("Bracket", justify="right")
    table.add_column("p* (closed form)", justify="right")
    for axis, code, p_star, width, p_formula in rows:
        formula = f"{p_formula:.6f}" if p_formula is not None else "-"
        table.add_row(axis, code, f"{p_star:.6f}", f"{width:.1e}", formula)
    console.print(table)


def generate_summary_report(con, output_path):
    """
    Write the Markdown report for the tables present in the database.

    Args:
        con: DuckDB connection holding thresholds, scan_* and atlas tables
        output_path (str): Path of the Markdown file
    """
    console.print("[bold blue]Generating summary report...[/bold blue]")

    os.makedirs(os.path.dirname(os.path.abspath(output_path)), exist_ok=True)
    tables = _tables(con)
    scans = sorted(t for t in tables if t.startswith("scan_"))

    with open(output_path, "w") as f:
        f.write("# Qutrit Magic State Distillation Report\n\n")
        f.write(f"Report generated at: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}\n\n")

        if "thresholds" in tables:
            rows = threshold_summary(con)
            print_threshold_table(rows)
            f.write("## Depolarizing Thresholds\n\n")
            f.write("| Axis | Code | p* | Bracket | Closed form |\n")
            f.write("|------|------|----|---------|-------------|\n")
            for axis, code, p_star, width, p_formula in rows:
                formula = f"{p_formula:.6f}" if p_formula is not None else "-"
                f.write(f"| {axis} | {code} | {p_star:.6f} | {width:.1e} | {formula} |\n")
            f.write("\n")

        for table in scans:
            plane = table.removeprefix("scan_")
            f.write(f"## Scan of the {plane} plane\n\n")
            f.write("| Class | Points | Percentage | Mean p_succ |\n")
            f.write("|-------|--------|------------|-------------|\n")
            for cls, count, percentage, mean_p in scan_summary(con, table):
                f.write(f"| {cls} | {count} | {percentage:.2f}% | {mean_p:.4f} |\n")
            f.write("\n")

        if "atlas" in tables:
            f.write("## Limiting-State Atlas\n\n")
            summary = atlas_summary(con)
            if not summary:
                f.write("No magic limiting states were found.\n\n")
            else:
                f.write("| Class | Hits | Codes | Min sn | Max sn |\n")
                f.write("|-------|------|-------|--------|--------|\n")
                for cls, hits, codes, min_sn, max_sn in summary:
                    f.write(f"| {cls} | {hits} | {codes} | {min_sn:.6f} | {max_sn:.6f} |\n")
                f.write("\n")

    console.print(f"[bold green]Summary report saved to {output_path}[/bold green]")
    return output_path
