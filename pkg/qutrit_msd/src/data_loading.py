"""
Data Loading Module for the Qutrit Distillation Toolkit

This module writes result tables (scan grids, atlas rows, threshold tables)
as CSV and loads them into a DuckDB database for reporting.
"""

import os

import duckdb
import polars as pl
from rich.console import Console

console = Console()

SIGNIFICANT_DIGITS = 9


def format_value(value):
    """Render floats with 9 significant digits; strings and ints pass through, None stays null."""
    if value is None:
        return None
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        # +0.0 folds negative zero into "0"
        return f"{value + 0.0:.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def rows_to_frame(rows, columns):
    """
    Build a string-typed polars DataFrame so the CSV text is fixed by format_value().

    Args:
        rows (list[dict]): One dict per row
        columns (list[str]): Column order of the output

    Returns:
        pl.DataFrame
    """
    data = {col: [format_value(row.get(col)) for row in rows] for col in columns}
    return pl.DataFrame(data, schema={col: pl.Utf8 for col in columns})


def save_table(rows, columns, csv_path, quiet=True):
    """
    Write rows to a CSV file with a fixed header.

    Args:
        rows (list[dict]): Table rows
        columns (list[str]): Header, also the column order
        csv_path (str): Output path; parent directories are created

    Returns:
        str: csv_path
    """
    directory = os.path.dirname(os.path.abspath(csv_path))
    os.makedirs(directory, exist_ok=True)
    rows_to_frame(rows, columns).write_csv(csv_path)
    if not quiet:
        console.print(f"[bold green]Wrote {len(rows)} rows to {csv_path}[/bold green]")
    return csv_path


def load_tables_to_duckdb(csv_paths, db_path):
    """
    Load result CSVs into a DuckDB database, one table per entry.

    Args:
        csv_paths (dict): Table name -> CSV path
        db_path (str): Path of the DuckDB database file

    Returns:
        duckdb.DuckDBPyConnection: Connection to the database
    """
    console.print("[bold blue]Loading result tables into DuckDB...[/bold blue]")

    os.makedirs(os.path.dirname(os.path.abspath(db_path)), exist_ok=True)
    con = duckdb.connect(db_path)

    try:
        for table, csv_path in csv_paths.items():
            con.execute(f'DROP TABLE IF EXISTS "{table}"')
            con.execute(f'CREATE TABLE "{table}" AS SELECT * FROM read_csv_auto(?, header = true)', [csv_path])
            count = con.execute(f'SELECT COUNT(*) FROM "{table}"').fetchone()[0]
            console.print(f"[bold green]Loaded {count} rows into {table}[/bold green]")

            schema = con.execute(f'DESCRIBE "{table}"').fetchall()
            for column in schema:
                console.print(f"  - {column[0]}: {column[1]}")

        return con

    except Exception as e:
        console.print(f"[bold red]Error loading data into DuckDB: {e}[/bold red]")
        con.close()
        raise
