"""
Command-Line Module for the Qutrit Distillation Toolkit

Sub-commands:
    wigner       Wigner table, sum-negativity and polytope verdicts of a state
    membership   Coordinates, polytope verdicts and wedge canonicalization
    distill      Round-by-round iteration of a code on a state
    threshold    Depolarizing threshold along an axis
    scan         Classification grid of a plane or of the reference wedge
    search       Seeded random code search (limiting-state atlas)
    verify       Acceptance checks with a pass/fail table
    report       Full figure-data pipeline with a Markdown report

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain error.
"""

import argparse
import json
import math
import os
import time

import numpy as np
from rich.console import Console
from rich.progress import Progress
from rich.table import Table

from qutrit_msd.src.abb_geometry import (
    THETA_EDGE_MAX,
    AbbPoint,
    CartesianPoint,
    cartesian,
    edge_ket_E,
    fourier_plus_ket,
    in_abb_subspace,
    injection_clifford,
    norrell_ket,
    norrell_wedge_ket,
    pure_state,
    stabilizer_vertices,
    wedge_canonicalize,
)
from qutrit_msd.src.code_search import SearchConfig, atlas
from qutrit_msd.src.distillation import (
    GridSpec,
    edge_boundary_wigner,
    edge_threshold_formula,
    edge_tightness_sweep,
    iterate_to_fixed_point,
    scan_region,
    success_probability,
    suppression_ratios,
    threshold_bisection,
    write_scan_csv,
)
from qutrit_msd.src.data_loading import save_table
from qutrit_msd.src.errors import DistillationError, NoThresholdInBracket
from qutrit_msd.src.gf_arith import enumerate_psl2, enumerate_sl2
from qutrit_msd.src.qudit_ops import (
    PauliLabel,
    clifford_unitary,
    dagger,
    depolarize,
    displacement,
    dominant_eigenpair,
    equal_up_to_phase,
    fidelity,
    ket_to_dm,
    maximally_mixed,
    omega,
    purity,
    validate_density_matrix,
)
from qutrit_msd.src.settings import OUTPUT_DIR, worker_count
from qutrit_msd.src.stab_codes import edge_code, face_code, load_code, validate
from qutrit_msd.src.wigner import (
    in_stabilizer_polytope,
    in_wigner_polytope,
    phase_point_operator,
    sum_negativity,
    wigner_function,
)

console = Console()

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

NAMED_KETS = {
    "E": edge_ket_E,
    "norrell": norrell_ket,
    "norrell-wedge": norrell_wedge_ket,
    "fourier": fourier_plus_ket,
    "zero": lambda: pure_state(0.0, 0.0),
    "N": lambda: pure_state(math.pi / 2, 0.0),
}

FOURIER_THRESHOLD = 0.354438
FACE_NORRELL_THRESHOLD = 0.32989
EDGE_NORRELL_THRESHOLD = 0.304379


class UsageError(Exception):
    "Raised for flag combinations argparse cannot reject on its own."


def unit_interval(value):
    number = float(value)
    if not 0.0 <= number <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is not in [0, 1]")
    return number


def polar_angle(value):
    number = float(value)
    if not 0.0 <= number <= math.pi / 2:
        raise argparse.ArgumentTypeError(f"{value} is not in [0, pi/2]")
    return number


def positive_float(value):
    number = float(value)
    if not number > 0.0:
        raise argparse.ArgumentTypeError(f"{value} is not a positive number")
    return number


def azimuth(value):
    number = float(value)
    if not 0.0 <= number < 2 * math.pi:
        raise argparse.ArgumentTypeError(f"{value} is not in [0, 2pi)")
    return number


def grid_extent(value):
    number = float(value)
    if not 0.0 < number <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is not in (0, 1]")
    return number


def positive_int(value):
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"{value} is not a positive integer")
    return number


def add_state_arguments(parser):
    """Flags for a state: --theta/--phi/--r, --named or --json, plus an optional --p."""
    group = parser.add_argument_group("state")
    group.add_argument("--theta", type=polar_angle, help="Polar parameter theta in [0, pi/2]")
    group.add_argument("--phi", type=azimuth, default=0.0, help="Azimuth phi in [0, 2pi) (default: 0)")
    group.add_argument("--r", type=unit_interval, default=1.0, help="Bloch radius r = 1 - p (default: 1)")
    group.add_argument("--named", choices=sorted(NAMED_KETS), help="Named pure state")
    group.add_argument("--json", dest="json_path", help="JSON file with 'real' (and 'imag') ket or matrix")
    group.add_argument("--p", type=unit_interval, default=0.0,
                       help="Depolarizing rate applied to --named/--json states (default: 0)")


def read_state_json(path):
    """A ket (1-D) or density matrix (2-D) from {"real": ..., "imag": ...}."""
    try:
        with open(path) as f:
            data = json.load(f)
        values = np.array(data["real"], dtype=float) + 1j * np.array(data.get("imag", 0.0), dtype=float)
    except (OSError, KeyError, TypeError, ValueError) as e:
        raise UsageError(f"cannot read state file {path}: {e}") from e
    if values.ndim == 1:
        return ket_to_dm(values)
    return validate_density_matrix(values)


def resolve_state(args):
    """Turn the state flags into a density matrix; exactly one source must be given."""
    sources = [args.theta is not None, args.named is not None, args.json_path is not None]
    if sum(sources) != 1:
        raise UsageError("give exactly one of --theta/--phi/--r, --named or --json")
    if args.theta is not None:
        return AbbPoint(args.r, args.theta, args.phi).rho
    if args.named is not None:
        return depolarize(NAMED_KETS[args.named](), args.p)
    return depolarize(read_state_json(args.json_path), args.p)


def resolve_code(name_or_path):
    """'edge', 'face' or a path to a JSON code file."""
    if name_or_path == "edge":
        return edge_code()
    if name_or_path == "face":
        return face_code()
    if not os.path.exists(name_or_path):
        raise UsageError(f"code {name_or_path!r} is neither 'edge', 'face' nor an existing JSON file")
    return load_code(name_or_path)


def print_wigner_table(table, title="Wigner function W(x, z)"):
    grid = Table(title=title)
    grid.add_column("x \\ z", style="cyan")
    for z in range(table.d):
        grid.add_column(str(z), justify="right")
    for x in range(table.d):
        cells = []
        for z in range(table.d):
            value = table[x, z]
            style = "red" if value < -1e-12 else "white"
            cells.append(f"[{style}]{value:+.6f}[/{style}]")
        grid.add_row(str(x), *cells)
    console.print(grid)


def print_verdicts(rho):
    wigner = in_wigner_polytope(rho)
    stab = in_stabilizer_polytope(rho)
    console.print(f"Wigner polytope: {'[green]inside[/green]' if wigner.inside else '[red]outside[/red]'}"
                  f" (min entry {wigner.margin:+.3e})")
    console.print(f"Stabilizer polytope: {'[green]inside[/green]' if stab.inside else '[red]outside[/red]'}"
                  f" (margin {stab.margin:+.3e})")


def cmd_wigner(args):
    rho = resolve_state(args)
    table = wigner_function(rho)
    print_wigner_table(table)
    console.print(f"[bold]Sum-negativity:[/bold] {table.negativity():.9f}")
    print_verdicts(rho)
    if args.named == "E":
        image = injection_clifford() @ edge_ket_E()
        amplitudes = ", ".join(f"{a.real:+.6f}{a.imag:+.6f}i" for a in image)
        console.print(f"Injection Clifford (1,1;0,1) maps |E> to ({amplitudes})")
    if args.csv:
        rows = [{"x": x, "z": z, "value": float(table[x, z])} for x in range(3) for z in range(3)]
        save_table(rows, ["x", "z", "value"], args.csv, quiet=False)
    return EXIT_OK


def cmd_membership(args):
    rho = resolve_state(args)
    print_verdicts(rho)
    console.print(f"Purity: {purity(rho):.9f}")
    if not in_abb_subspace(rho):
        console.print("[yellow]State does not commute with A_00; no (a,b,b) coordinates.[/yellow]")
        return EXIT_OK
    point = cartesian(rho)
    console.print(f"Cartesian (x, y, z): ({point.x:+.9f}, {point.y:+.9f}, {point.z:+.9f})")
    canonical, F = wedge_canonicalize(rho)
    image = AbbPoint.from_cartesian(cartesian(canonical))
    console.print(f"Wedge canonicalization: F = {F}, (r, theta, phi) = "
                  f"({image.r:.9f}, {image.theta:.9f}, {image.phi:.9f})")
    return EXIT_OK


def cmd_distill(args):
    code = resolve_code(args.code)
    rho = resolve_state(args)
    trace = iterate_to_fixed_point(code, rho, max_iters=args.max_iters, tol=args.tol)
    _, limit = dominant_eigenpair(trace.fixed_point)

    table = Table(title=f"Distillation rounds ({args.code} code)")
    table.add_column("Round", justify="right", style="cyan")
    table.add_column("Fidelity with final state", justify="right")
    table.add_column("p_succ", justify="right")
    table.add_column("Trace distance", justify="right")
    for index, state in enumerate(trace.states):
        p_succ = f"{trace.success_probabilities[index - 1]:.6f}" if index else "-"
        distance = f"{trace.distances[index - 1]:.3e}" if index else "-"
        table.add_row(str(index), f"{fidelity(state, limit):.9f}", p_succ, distance)
    console.print(table)

    status = "[bold green]converged[/bold green]" if trace.converged else "[bold yellow]did not converge[/bold yellow]"
    console.print(f"Iteration {status} after {trace.iterations} rounds; "
                  f"final sum-negativity {sum_negativity(trace.fixed_point):.9f}")
    return EXIT_OK


def edge_arc_theta(target):
    """theta when the target ket lies on the |0> -> (1,1,1)/sqrt3 arc, else None."""
    rho = ket_to_dm(target)
    if not in_abb_subspace(rho):
        return None
    point = AbbPoint.from_cartesian(cartesian(rho))
    on_meridian = min(point.phi, 2 * math.pi - point.phi) < 1e-9 or point.theta < 1e-9
    if on_meridian and point.theta <= THETA_EDGE_MAX + 1e-12:
        return point.theta
    return None


def cmd_threshold(args):
    code = resolve_code(args.code)
    if args.target is not None:
        target = NAMED_KETS[args.target]()
    elif args.target_theta is not None:
        target = pure_state(args.target_theta, args.target_phi)
    else:
        raise UsageError("give --target NAME or --target-theta")
    limit = ket_to_dm(NAMED_KETS[args.limit]()) if args.limit else None

    start = time.perf_counter()
    result = threshold_bisection(code, target, p_lo=args.p_lo, p_hi=args.p_hi, tol=args.tol, limit=limit)
    elapsed = time.perf_counter() - start

    console.print(f"[bold green]p* = {result.p_star:.7f}[/bold green] (bracket width {result.bracket_width:.1e})")
    console.print(f"Distills at p = {result.p_distills:.7f} (fidelity {result.fidelity_distills:.6f}, "
                  f"{result.iterations_distills} rounds); fails at p = {result.p_fails:.7f}")
    theta = edge_arc_theta(target)
    if theta is not None:
        formula = edge_threshold_formula(theta)
        console.print(f"Closed form on the edge arc: {formula:.7f} (difference {result.p_star - formula:+.2e})")
    console.print(f"Elapsed: {elapsed:.2f} s")
    return EXIT_OK


def cmd_scan(args):
    code = resolve_code(args.code)
    grid = GridSpec(plane=args.plane, resolution=args.resolution, extent=args.extent, radius=args.radius)
    limit = ket_to_dm(NAMED_KETS[args.limit]()) if args.limit else None
    rows = scan_region(code, grid, limit=limit, workers=worker_count(), show_progress=True)
    out = args.out or os.path.join(OUTPUT_DIR, f"scan_{args.plane}.csv")
    write_scan_csv(rows, out)
    counts = {cls: sum(1 for row in rows if row.cls == cls) for cls in ("STAB", "POSW", "DISTILL", "NEGUNDIST")}
    console.print(f"[bold green]Wrote {len(rows)} points to {out}[/bold green] "
                  + ", ".join(f"{k}={v}" for k, v in counts.items()))
    return EXIT_OK


def cmd_search(args):
    config = SearchConfig(seed=args.seed, num_candidates=args.candidates, max_iters=args.max_iters)
    report = atlas([config], workers=worker_count(), show_progress=True)
    out = args.out or os.path.join(OUTPUT_DIR, f"atlas_seed{args.seed}.csv")
    codes_out = args.codes_out or os.path.splitext(out)[0] + "_codes.json"
    report.write(out, codes_out)
    console.print(f"[bold green]Wrote {len(report.rows)} hits to {out} and {len(report.codes)} codes to "
                  f"{codes_out}[/bold green]")
    return EXIT_OK


def cmd_report(args):
    from qutrit_msd.src.pipeline import figure_data_pipeline

    figure_data_pipeline(output_dir=args.output_dir, resolution=args.resolution, code_name=args.code,
                         seed=args.seed, num_candidates=args.candidates)
    return EXIT_OK


# Acceptance checks: each returns (passed, detail)

def _random_states(rng, count):
    states = []
    for _ in range(count):
        g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        rho = g @ dagger(g)
        rho /= np.trace(rho)
        weight = rng.uniform()
        states.append(weight * rho + (1.0 - weight) * maximally_mixed())
    return states


def check_threshold(code, target, expected, tolerance):
    result = threshold_bisection(code, target)
    error = abs(result.p_star - expected)
    return error <= tolerance, f"p* = {result.p_star:.6f} (expected {expected} +- {tolerance:g})"


def check_edge_tightness(code, count):
    thetas = [float(t) for t in np.linspace(0.05, THETA_EDGE_MAX - 0.05, count)]
    worst = 0.0
    for row in edge_tightness_sweep(code, thetas):
        theta = row["theta"]
        worst = max(worst, abs(row["p_numeric"] - row["p_formula"]))
        if not -1e-9 <= row["min_wigner"] <= 1e-6:
            return False, f"theta={theta:.4f}: boundary min Wigner {row['min_wigner']:.2e}"
        boundary = wigner_function(depolarize(pure_state(theta), row["p_formula"]))
        if np.max(np.abs(boundary.values - edge_boundary_wigner(theta).values)) > 1e-9:
            return False, f"theta={theta:.4f}: analytic table differs from numeric table"
    return worst <= 1e-4, f"{count} directions, max |numeric - formula| = {worst:.2e}"


def check_fixed_points(edge, face):
    edge_trace = iterate_to_fixed_point(edge, depolarize(edge_ket_E(), 0.1))
    face_trace = iterate_to_fixed_point(face, depolarize(norrell_ket(), 0.1))
    f_edge = fidelity(edge_trace.fixed_point, edge_ket_E())
    f_face = fidelity(face_trace.fixed_point, norrell_ket())
    ok = f_edge > 1 - 1e-6 and f_face > 1 - 1e-6
    return ok, f"edge -> |E> fidelity {f_edge:.9f}, face -> |N'> fidelity {f_face:.9f}"


def check_success_probability(edge, face):
    p_edge = success_probability(edge, ket_to_dm(edge_ket_E()))
    p_face = success_probability(face, ket_to_dm(norrell_ket()))
    ok = abs(p_edge - 0.12) <= 0.01 and abs(p_face - 0.12) <= 0.01
    return ok, f"edge {p_edge:.4f}, face {p_face:.4f}"


def check_norrell_negativity():
    table = wigner_function(ket_to_dm(norrell_ket()))
    negatives = sorted(v for v in table.values.ravel() if v < -1e-12)
    ok = abs(table.negativity() - 1 / 3) <= 1e-12 and len(negatives) == 2 \
        and all(abs(v + 1 / 6) <= 1e-12 for v in negatives)
    return ok, f"sn = {table.negativity():.12f}, negative entries {[round(v, 12) for v in negatives]}"


def check_group_orders():
    sl2, psl2 = enumerate_sl2(3), enumerate_psl2(3)
    a00 = phase_point_operator(0, 0)
    preserves = all(equal_up_to_phase(clifford_unitary(F) @ a00 @ dagger(clifford_unitary(F)), a00)
                    for F in psl2)
    minus_one = [F for F in sl2 if F.entries == (2, 0, 0, 2)][0]
    trivial = equal_up_to_phase(clifford_unitary(minus_one), a00)
    ok = len(sl2) == 24 and len(psl2) == 12 and preserves and trivial
    return ok, f"|SL| = {len(sl2)}, |PSL| = {len(psl2)}, subspace preserved {preserves}, U_(-1) ~ A_00 {trivial}"


def check_properties(samples, polytope_samples):
    w = omega(3)
    labels = [PauliLabel((x,), (z,)) for x in range(3) for z in range(3)]
    for u in labels:
        for v in labels:
            phase = w ** ((2 * (u.z[0] * v.x[0] - u.x[0] * v.z[0])) % 3)
            combined = displacement(PauliLabel((u.x[0] + v.x[0],), (u.z[0] + v.z[0],)))
            if np.max(np.abs(displacement(u) @ displacement(v) - phase * combined)) > 1e-10:
                return False, f"Weyl relation fails for {u}, {v}"
    for F in enumerate_sl2(3):
        U = clifford_unitary(F)
        for u in labels:
            image = PauliLabel(*[(c,) for c in F.apply(u.x[0], u.z[0])])
            if not equal_up_to_phase(U @ displacement(u) @ dagger(U), displacement(image)):
                return False, f"Clifford covariance fails for F = {F}, u = {u}"
    rng = np.random.default_rng(2024)
    operators = [[phase_point_operator(x, z) for z in range(3)] for x in range(3)]
    for rho in _random_states(rng, samples):
        table = wigner_function(rho)
        rebuilt = sum(table[x, z] * operators[x][z] for x in range(3) for z in range(3))
        if abs(table.total - 1) > 1e-10 or abs(np.sum(table.values ** 2) - purity(rho) / 3) > 1e-10 \
                or np.max(np.abs(rebuilt - rho)) > 1e-10:
            return False, "Wigner normalization, purity identity or reconstruction fails"
    inside = 0
    for rho in _random_states(rng, polytope_samples):
        if in_stabilizer_polytope(rho).inside:
            inside += 1
            if not in_wigner_polytope(rho).inside:
                return False, "a stabilizer mixture has a negative Wigner entry"
    return True, f"81 Weyl pairs, 216 covariance cases, {samples} states, {inside}/{polytope_samples} stabilizer mixtures"


def check_mixture_decomposition():
    north, south = ket_to_dm(pure_state(0.0)), ket_to_dm(pure_state(math.pi / 2))
    mixture = 0.5 * north + 0.5 * south
    vertices = sum(ket_to_dm(v) for v in stabilizer_vertices()) / 4
    equal = float(np.max(np.abs(mixture - vertices)))
    mixture_inside = in_stabilizer_polytope(mixture).inside
    mixed_inside = in_stabilizer_polytope(maximally_mixed()).inside
    same_point = max(abs(c) for c in cartesian(mixture).as_tuple()) < 1e-12
    ok = equal < 1e-12 and mixture_inside and mixed_inside and same_point
    return ok, (f"|mixture - vertex average| = {equal:.1e}, both at the origin, "
                f"inside: mixture {mixture_inside}, 1/3 {mixed_inside}")


def check_linear_suppression(edge):
    trace = iterate_to_fixed_point(edge, depolarize(edge_ket_E(), 0.1))
    ratios = suppression_ratios(trace)[1:6]
    if len(ratios) < 5:
        return False, f"only {len(ratios)} rounds before convergence"
    spread = (max(ratios) - min(ratios)) / np.mean(ratios)
    ok = spread <= 0.2 and 0.0 < min(ratios) and max(ratios) < 1.0
    return ok, f"ratios {', '.join(f'{r:.4f}' for r in ratios)} (relative spread {spread:.2%})"


def check_scan_consistency(edge):
    rows = scan_region(edge, GridSpec(plane="xz", resolution=21))
    distills = [row for row in rows if row.cls == "DISTILL"]
    for row in distills:
        rho = AbbPoint.from_cartesian(_xz_point(row)).rho
        if in_wigner_polytope(rho).inside:
            return False, f"DISTILL point ({row.coord1}, {row.coord2}) lies in the Wigner polytope"
    return bool(distills), f"{len(rows)} points, {len(distills)} distill, all outside the Wigner polytope"


def _xz_point(row):
    return CartesianPoint(row.coord1, 0.0, row.coord2)


def acceptance_checks(edge, face, fast=False):
    """(name, callable) pairs in report order."""
    checks = [
        ("Edge threshold, Fourier axis",
         lambda: check_threshold(edge, fourier_plus_ket(), FOURIER_THRESHOLD, 1e-4)),
        ("Face threshold, Norrell axis",
         lambda: check_threshold(face, norrell_ket(), FACE_NORRELL_THRESHOLD, 1e-3)),
        ("Edge threshold, Norrell axis",
         lambda: check_threshold(edge, norrell_wedge_ket(), EDGE_NORRELL_THRESHOLD, 1e-3)),
        ("Edge tightness sweep", lambda: check_edge_tightness(edge, 5 if fast else 20)),
        ("Limiting states", lambda: check_fixed_points(edge, face)),
        ("Success probability", lambda: check_success_probability(edge, face)),
        ("Norrell negativity", check_norrell_negativity),
        ("Group orders", check_group_orders),
        ("Property suite", lambda: check_properties(100 if fast else 1000, 1000 if fast else 10000)),
        ("Mixture decomposition", check_mixture_decomposition),
        ("Linear suppression", lambda: check_linear_suppression(edge)),
    ]
    if not fast:
        checks.append(("Scan consistency", lambda: check_scan_consistency(edge)))
    return checks


def _load_for_verify(path, default):
    if path is None:
        return default()
    code = load_code(path)
    problems = validate(code)
    if problems:
        raise DistillationError("; ".join(problems))
    return code


def cmd_verify(args):
    try:
        edge = _load_for_verify(args.edge_code, edge_code)
        face = _load_for_verify(args.face_code, face_code)
    except DistillationError as e:
        console.print(f"[bold red]Threshold criteria cannot run: invalid code fixture ({e})[/bold red]")
        return EXIT_VERIFY_FAILED

    results = []
    checks = acceptance_checks(edge, face, fast=args.fast)
    with Progress(console=console, transient=True) as progress:
        task = progress.add_task("[cyan]Running acceptance checks", total=len(checks))
        for name, check in checks:
            start = time.perf_counter()
            try:
                passed, detail = check()
            except DistillationError as e:
                passed, detail = False, f"{type(e).__name__}: {e}"
            results.append((name, passed, detail, time.perf_counter() - start))
            progress.update(task, advance=1)

    table = Table(title="Acceptance Checks")
    table.add_column("#", justify="right", style="cyan")
    table.add_column("Criterion")
    table.add_column("Result")
    table.add_column("Detail")
    table.add_column("Time", justify="right")
    for index, (name, passed, detail, elapsed) in enumerate(results, 1):
        verdict = "[bold green]PASS[/bold green]" if passed else "[bold red]FAIL[/bold red]"
        table.add_row(str(index), name, verdict, detail, f"{elapsed:.1f}s")
    console.print(table)

    failed = [name for name, passed, _, _ in results if not passed]
    if failed:
        console.print(f"[bold red]Failed: {', '.join(failed)}[/bold red]")
        return EXIT_VERIFY_FAILED
    console.print("[bold green]All acceptance checks passed[/bold green]")
    return EXIT_OK


def build_parser():
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(prog="qutrit_msd", description="Qutrit magic state distillation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    wigner = sub.add_parser("wigner", help="Wigner table and polytope verdicts of a state")
    add_state_arguments(wigner)
    wigner.add_argument("--csv", help="Also write the table as CSV (x,z,value)")
    wigner.set_defaults(handler=cmd_wigner)

    membership = sub.add_parser("membership", help="Coordinates, verdicts and wedge canonicalization")
    add_state_arguments(membership)
    membership.set_defaults(handler=cmd_membership)

    distill = sub.add_parser("distill", help="Iterate a code on a state")
    distill.add_argument("--code", default="edge", help="edge, face or a JSON code file (default: edge)")
    add_state_arguments(distill)
    distill.add_argument("--max-iters", type=positive_int, default=200, help="Round cap (default: 200)")
    distill.add_argument("--tol", type=positive_float, default=1e-12, help="Convergence tolerance (default: 1e-12)")
    distill.set_defaults(handler=cmd_distill)

    threshold = sub.add_parser("threshold", help="Depolarizing threshold along an axis")
    threshold.add_argument("--code", default="edge", help="edge, face or a JSON code file (default: edge)")
    threshold.add_argument("--target", choices=sorted(NAMED_KETS), help="Named axis state")
    threshold.add_argument("--target-theta", type=polar_angle, help="Axis state theta in [0, pi/2]")
    threshold.add_argument("--target-phi", type=azimuth, default=0.0, help="Axis state phi in [0, 2pi) (default: 0)")
    threshold.add_argument("--limit", choices=sorted(NAMED_KETS),
                           help="Limiting state a run must reach (default: any pure magic state)")
    threshold.add_argument("--p-lo", type=unit_interval, default=0.0, help="Lower bracket end (default: 0)")
    threshold.add_argument("--p-hi", type=unit_interval, default=1.0, help="Upper bracket end (default: 1)")
    threshold.add_argument("--tol", type=positive_float, default=1e-6, help="Bracket width (default: 1e-6)")
    threshold.set_defaults(handler=cmd_threshold)

    scan = sub.add_parser("scan", help="Classification grid as CSV")
    scan.add_argument("--code", default="edge", help="edge, face or a JSON code file (default: edge)")
    scan.add_argument("--plane", choices=["xz", "yz", "xy", "wedge"], default="xz", help="Grid (default: xz)")
    scan.add_argument("--resolution", type=positive_int, default=101, help="Points per axis (default: 101)")
    scan.add_argument("--extent", type=grid_extent, default=1.0, help="Half-width of plane grids in (0, 1] (default: 1)")
    scan.add_argument("--radius", type=unit_interval, default=0.9, help="Radius of the wedge grid (default: 0.9)")
    scan.add_argument("--limit", choices=sorted(NAMED_KETS), help="Limiting state for the DISTILL class")
    scan.add_argument("--out", help="CSV path (default: output/scan_<plane>.csv)")
    scan.set_defaults(handler=cmd_scan)

    search = sub.add_parser("search", help="Seeded random code search")
    search.add_argument("--seed", type=int, required=True, help="Random seed (required)")
    search.add_argument("--candidates", type=positive_int, default=100, help="Number of codes (default: 100)")
    search.add_argument("--max-iters", type=positive_int, default=200, help="Rounds per start (default: 200)")
    search.add_argument("--out", help="Atlas CSV path (default: output/atlas_seed<seed>.csv)")
    search.add_argument("--codes-out", help="JSON dump of the codes behind the hits")
    search.set_defaults(handler=cmd_search)

    verify = sub.add_parser("verify", help="Run the acceptance checks")
    verify.add_argument("--fast", action="store_true", help="Skip scans and shrink the property suite")
    verify.add_argument("--edge-code", help="Edge code JSON to verify instead of the built-in fixture")
    verify.add_argument("--face-code", help="Face code JSON to verify instead of the built-in fixture")
    verify.set_defaults(handler=cmd_verify)

    report = sub.add_parser("report", help="Regenerate all figure data and the Markdown report")
    report.add_argument("--output-dir", default=OUTPUT_DIR, help="Output directory (default: qutrit_msd/output)")
    report.add_argument("--resolution", type=positive_int, default=41, help="Scan points per axis (default: 41)")
    report.add_argument("--code", choices=["edge", "face"], default="edge", help="Code for the scans")
    report.add_argument("--seed", type=int, default=0, help="Atlas seed (default: 0)")
    report.add_argument("--candidates", type=positive_int, default=20, help="Atlas codes (default: 20)")
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv=None):
    """Run one command and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE
    try:
        return args.handler(args)
    except UsageError as e:
        console.print(f"[bold red]Usage error: {e}[/bold red]")
        return EXIT_USAGE
    except DistillationError as e:
        console.print(f"[bold red]Error ({type(e).__name__}): {e}[/bold red]")
        if isinstance(e, NoThresholdInBracket):
            console.print("Choose a target outside the stabilizer polytope or narrow --p-lo/--p-hi.")
        return EXIT_DOMAIN
