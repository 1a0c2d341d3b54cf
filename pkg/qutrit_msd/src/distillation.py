"""
Distillation Module for the Qutrit Distillation Toolkit

One round of the n-to-1 stabilizer-code distillation map (prepare n copies,
postselect on the trivial syndrome, decode), its iteration to a limiting
state, threshold bisection along depolarizing axes, the closed-form edge
threshold and boundary Wigner function, and grid scans of the (a,b,b) ball.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from rich.console import Console
from rich.progress import Progress

from qutrit_msd.src.abb_geometry import (
    THETA_EDGE_MAX,
    AbbPoint,
    CartesianPoint,
    pure_state,
    state_from_cartesian,
    wedge_canonicalize,
)
from qutrit_msd.src.data_loading import save_table
from qutrit_msd.src.errors import DomainError, NoThresholdInBracket, PostselectionImpossible
from qutrit_msd.src.qudit_ops import (
    dagger,
    depolarize,
    dominant_eigenpair,
    fidelity,
    ket_to_dm,
    project_to_density_matrix,
    tensor,
    trace_distance,
    validate_density_matrix,
)
from qutrit_msd.src.stab_codes import code_space
from qutrit_msd.src.wigner import (
    WignerTable,
    in_stabilizer_polytope,
    in_wigner_polytope,
    sum_negativity,
    wigner_function,
)

console = Console()

# Postselection on an event of smaller probability is refused
MIN_SUCCESS_PROBABILITY = 1e-14
MAX_ITERS = 200
CONVERGENCE_TOL = 1e-12
# A run "distills" when its final fidelity with the limiting state exceeds this
DISTILL_FIDELITY = 0.99
# Sum-negativity a dominant eigenvector needs to count as a magic state
MAGIC_NEGATIVITY = 1e-6
BISECTION_TOL = 1e-6

SCAN_CLASSES = ("STAB", "POSW", "DISTILL", "NEGUNDIST")


@dataclass(frozen=True)
class RoundResult:
    rho_out: np.ndarray
    p_succ: float


@dataclass
class IterationTrace:
    """States visited by the iteration, starting with the input state."""

    states: list
    fidelities: list
    success_probabilities: list
    distances: list
    converged: bool
    fixed_point: np.ndarray

    @property
    def iterations(self):
        return len(self.states) - 1


@dataclass(frozen=True)
class ThresholdResult:
    """Bisection outcome: distills at p_star - bracket/2, fails at p_star + bracket/2."""

    p_star: float
    bracket_width: float
    p_distills: float
    p_fails: float
    fidelity_distills: float
    fidelity_fails: float
    iterations_distills: int


@dataclass(frozen=True)
class GridSpec:
    """
    Scan grid over a coordinate plane of the ball or over the reference wedge.

    For planes ("xz", "yz", "xy") both coordinates run over
    [-extent, extent]; points outside the unit ball are dropped. For "wedge"
    the coordinates are (theta, phi) on the sphere of radius ``radius`` and
    only points whose canonical image is themselves are kept.
    """

    plane: str = "xz"
    resolution: int = 101
    extent: float = 1.0
    radius: float = 0.9

    def __post_init__(self):
        if self.plane not in ("xz", "yz", "xy", "wedge"):
            raise DomainError(f"unknown scan plane {self.plane!r}")
        if self.resolution < 2:
            raise DomainError(f"scan resolution must be at least 2, got {self.resolution}")
        if not 0.0 < self.extent <= 1.0 or not 0.0 <= self.radius <= 1.0:
            raise DomainError("scan extent must lie in (0, 1] and radius in [0, 1]")


@dataclass(frozen=True)
class ScanRow:
    coord1: float
    coord2: float
    cls: str
    fidelity: float
    p_succ: float

    def as_dict(self):
        return {"coord1": self.coord1, "coord2": self.coord2, "class": self.cls,
                "fidelity": self.fidelity, "p_succ": self.p_succ}


def _n_copies(rho, n):
    return tensor(*([rho] * n))


def success_probability(code, rho_in):
    """p_succ = Tr(Pi rho_in^(tensor n)) for trivial-syndrome postselection."""
    rho_in = validate_density_matrix(rho_in)
    space = code_space(code)
    sigma = _n_copies(rho_in, code.n)
    value = float(np.real(np.einsum("ij,ji->", space.projector, sigma)))
    return min(max(value, 0.0), 1.0)


def distill_round(code, rho_in):
    """
    One round of distillation.

    Args:
        code (StabilizerCode): Validated [[n,1]] code
        rho_in: Input density matrix, used for all n copies

    Returns:
        RoundResult: rho_out = V^dag sigma V / p_succ with sigma = rho_in^(tensor n)
    """
    rho_in = validate_density_matrix(rho_in)
    space = code_space(code)
    sigma = _n_copies(rho_in, code.n)
    V = space.isometry
    unnormalized = dagger(V) @ sigma @ V
    p_succ = float(np.real(np.trace(unnormalized)))
    if p_succ < MIN_SUCCESS_PROBABILITY:
        raise PostselectionImpossible(f"trivial syndrome has probability {p_succ:.3g}")
    rho_out = unnormalized / p_succ
    rho_out = project_to_density_matrix(rho_out)
    return RoundResult(rho_out, min(p_succ, 1.0))


def iterate_to_fixed_point(code, rho0, max_iters=MAX_ITERS, tol=CONVERGENCE_TOL, target=None):
    """
    Feed each round's output back in as all n inputs until it stops moving.

    Args:
        code (StabilizerCode): Distillation code
        rho0: Starting state
        max_iters (int): Round cap
        tol (float): Trace-distance convergence threshold between successive states
        target: Optional pure state; fidelities are recorded against it

    Returns:
        IterationTrace: non-convergence is reported, not raised
    """
    rho = validate_density_matrix(rho0)
    states = [rho]
    fidelities = [fidelity(rho, target)] if target is not None else []
    probabilities = []
    distances = []
    converged = False
    for _ in range(max_iters):
        result = distill_round(code, rho)
        distance = trace_distance(result.rho_out, rho)
        rho = result.rho_out
        states.append(rho)
        probabilities.append(result.p_succ)
        distances.append(distance)
        if target is not None:
            fidelities.append(fidelity(rho, target))
        if distance < tol:
            converged = True
            break
    return IterationTrace(states, fidelities, probabilities, distances, converged, rho)


def magic_fidelity(rho, limit=None):
    """
    Closeness of a final state to a magic limiting state.

    With ``limit`` this is the fidelity with it. Without, it is the largest
    eigenvalue of rho when the matching eigenvector has sum-negativity, and 0
    when that eigenvector is a stabilizer-like state.
    """
    if limit is not None:
        return fidelity(rho, limit)
    value, vector = dominant_eigenpair(rho)
    if sum_negativity(ket_to_dm(vector)) <= MAGIC_NEGATIVITY:
        return 0.0
    return value


def classify_run(code, rho0, limit=None, max_iters=MAX_ITERS, tol=CONVERGENCE_TOL):
    """
    Iterate from rho0 and decide whether it distills.

    Returns:
        tuple: (distills, final magic fidelity, IterationTrace or None)
    """
    try:
        trace = iterate_to_fixed_point(code, rho0, max_iters=max_iters, tol=tol)
    except PostselectionImpossible:
        return False, 0.0, None
    score = magic_fidelity(trace.fixed_point, limit)
    return score > DISTILL_FIDELITY, score, trace


def threshold_bisection(code, target, p_lo=0.0, p_hi=1.0, tol=BISECTION_TOL, limit=None,
                        max_iters=MAX_ITERS, conv_tol=CONVERGENCE_TOL):
    """
    Bisect the depolarizing rate p of (1 - p)|M><M| + p 1/3 at which distillation stops.

    Args:
        code (StabilizerCode): Distillation code
        target: Pure axis state |M> (vector or projector)
        p_lo (float): Noise rate that must distill
        p_hi (float): Noise rate that must fail
        tol (float): Final bracket width
        limit: State a successful run must end on; see magic_fidelity()

    Returns:
        ThresholdResult
    """
    if not 0.0 <= p_lo < p_hi <= 1.0:
        raise DomainError(f"bisection bracket [{p_lo}, {p_hi}] is not inside [0, 1]")
    if not tol > 0.0:
        raise DomainError(f"bisection tolerance must be positive, got {tol}")

    def run(p):
        return classify_run(code, depolarize(target, p), limit, max_iters, conv_tol)

    lo_ok, lo_fid, lo_trace = run(p_lo)
    hi_ok, hi_fid, _ = run(p_hi)
    if not lo_ok or hi_ok:
        raise NoThresholdInBracket(
            f"p={p_lo} {'distills' if lo_ok else 'fails'} and p={p_hi} {'distills' if hi_ok else 'fails'}; "
            "need a bracket that distills at its low end and fails at its high end"
        )
    lo_iters = lo_trace.iterations if lo_trace is not None else 0
    while p_hi - p_lo > tol:
        mid = 0.5 * (p_lo + p_hi)
        # Bracket already at float resolution
        if not p_lo < mid < p_hi:
            break
        ok, fid, trace = run(mid)
        if ok:
            p_lo, lo_fid = mid, fid
            lo_iters = trace.iterations if trace is not None else 0
        else:
            p_hi, hi_fid = mid, fid
    return ThresholdResult(0.5 * (p_lo + p_hi), p_hi - p_lo, p_lo, p_hi, lo_fid, hi_fid, lo_iters)


def _edge_parts(theta):
    if not -1e-12 <= theta <= THETA_EDGE_MAX + 1e-12:
        raise DomainError(f"edge direction theta must lie in [0, arccos(1/sqrt3)], got {theta}")
    c, s = math.cos(2 * theta), math.sin(2 * theta)
    return c, s, 1.0 + 3.0 * c + 3.0 * math.sqrt(2.0) * s


def edge_threshold_formula(theta):
    """p*(theta) = 1 - 4 / (1 + 3 cos 2t + 3 sqrt2 sin 2t) along the Wigner tetrahedron edge."""
    _, _, delta = _edge_parts(theta)
    return 1.0 - 4.0 / delta


def edge_boundary_wigner(theta):
    """
    Analytic Wigner table of (1 - p*)|t><t| + p* 1/3 at the edge threshold.

    Layout (rows x, columns z): [[r, s, s], [t, 0, 0], [t, 0, 0]].
    """
    c, s, delta = _edge_parts(theta)
    r = (c + math.sqrt(2.0) * s + 3.0) / (3.0 * delta)
    s_val = (4.0 * c + math.sqrt(2.0) * s) / (3.0 * delta)
    t = math.sqrt(2.0) * s / delta
    values = np.array([[r, s_val, s_val], [t, 0.0, 0.0], [t, 0.0, 0.0]])
    return WignerTable(3, values)


def edge_tightness_sweep(code, thetas, limit=None, tol=BISECTION_TOL, max_iters=MAX_ITERS):
    """
    Compare numeric and closed-form thresholds along several edge directions.

    Returns:
        list[dict]: theta, p_numeric, p_formula, min_wigner (at the formula threshold)
    """
    rows = []
    for theta in thetas:
        target = pure_state(theta, 0.0)
        result = threshold_bisection(code, target, tol=tol, limit=limit, max_iters=max_iters)
        p_formula = edge_threshold_formula(theta)
        boundary = depolarize(target, p_formula)
        rows.append({
            "theta": theta,
            "p_numeric": result.p_star,
            "p_formula": p_formula,
            "min_wigner": wigner_function(boundary).minimum,
        })
    return rows


def suppression_ratios(trace):
    """
    Per-round infidelity ratios eps_(t+1)/eps_t against the trace's fixed point.

    eps_t = 1 - <psi*|rho_t|psi*> where psi* is the dominant eigenvector of
    the final state. Rounds whose infidelity is already at rounding level are
    dropped.
    """
    _, psi = dominant_eigenpair(trace.fixed_point)
    eps = [1.0 - fidelity(rho, psi) for rho in trace.states]
    ratios = []
    for before, after in zip(eps, eps[1:]):
        if before <= 1e-13:
            break
        ratios.append(after / before)
    return ratios


def _grid_points(grid):
    axis = np.linspace(-grid.extent, grid.extent, grid.resolution)
    points = []
    if grid.plane == "wedge":
        thetas = np.linspace(0.0, math.pi / 2, grid.resolution)
        phis = np.linspace(0.0, 2 * math.pi, grid.resolution, endpoint=False)
        for theta in thetas:
            for phi in phis:
                rho = AbbPoint(grid.radius, float(theta), float(phi)).rho
                _, F = wedge_canonicalize(rho)
                if F.is_identity():
                    points.append((float(theta), float(phi), rho))
        return points
    for a in axis:
        for b in axis:
            a, b = float(a), float(b)
            if a * a + b * b > 1.0 + 1e-12:
                continue
            if grid.plane == "xz":
                coords = (a, 0.0, b)
            elif grid.plane == "yz":
                coords = (0.0, a, b)
            else:
                coords = (a, b, 0.0)
            scale = min(1.0, 1.0 / max(math.sqrt(a * a + b * b), 1e-300))
            point = CartesianPoint(*(c * scale for c in coords))
            points.append((a, b, state_from_cartesian(point)))
    return points


def classify_state(code, rho, limit=None, max_iters=MAX_ITERS, tol=CONVERGENCE_TOL):
    """
    Four-way scan class of one state.

    STAB (inside the stabilizer polytope), POSW (nonnegative Wigner function),
    DISTILL (iteration ends on the limiting state) or NEGUNDIST.

    Returns:
        tuple: (class, fidelity, p_succ of the first round)
    """
    p_succ = success_probability(code, rho)
    if in_stabilizer_polytope(rho).inside:
        return "STAB", magic_fidelity(rho, limit), p_succ
    if in_wigner_polytope(rho).inside:
        return "POSW", magic_fidelity(rho, limit), p_succ
    ok, score, _ = classify_run(code, rho, limit, max_iters, tol)
    return ("DISTILL" if ok else "NEGUNDIST"), score, p_succ


def scan_region(code, grid, limit=None, max_iters=MAX_ITERS, workers=1, show_progress=False):
    """
    Classify every grid point; rows come back in grid order whatever the scheduling.

    Args:
        code (StabilizerCode): Distillation code
        grid (GridSpec): Plane or wedge grid
        limit: Limiting state for the DISTILL class (see magic_fidelity)
        workers (int): Thread count

    Returns:
        list[ScanRow]
    """
    points = _grid_points(grid)

    def work(point):
        a, b, rho = point
        cls, score, p_succ = classify_state(code, rho, limit, max_iters)
        return ScanRow(a, b, cls, score, p_succ)

    if show_progress:
        console.print(f"[bold blue]Scanning {len(points)} points on the {grid.plane} grid...[/bold blue]")
    rows = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = pool.map(work, points)
        if show_progress:
            with Progress(console=console) as progress:
                task = progress.add_task(f"[cyan]{grid.plane} scan", total=len(points))
                for row in results:
                    rows.append(row)
                    progress.update(task, advance=1)
        else:
            rows.extend(results)
    return rows


SCAN_COLUMNS = ["coord1", "coord2", "class", "fidelity", "p_succ"]
THRESHOLD_COLUMNS = ["axis", "code", "p_star", "bracket_width", "p_formula"]


def write_scan_csv(rows, csv_path):
    """Write scan rows with the header coord1,coord2,class,fidelity,p_succ."""
    return save_table([row.as_dict() for row in rows], SCAN_COLUMNS, csv_path)
