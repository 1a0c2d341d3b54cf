"""
Code Search Module for the Qutrit Distillation Toolkit

Draws random four-qutrit [[4,1]] stabilizer codes, runs the distillation
iteration from an ensemble of starting states, and labels the limiting states
it finds (edge-type, face-type, stabilizer or other). The atlas aggregates
those hits over many codes into CSV rows plus a JSON dump of the codes.
"""

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import galois
import numpy as np
from rich.console import Console
from rich.progress import Progress

from qutrit_msd.src.abb_geometry import (
    THETA_EDGE_MAX,
    AbbPoint,
    cartesian,
    in_abb_subspace,
    norrell_state,
    psl_images,
    wedge_canonicalize,
)
from qutrit_msd.src.data_loading import save_table
from qutrit_msd.src.distillation import MAX_ITERS, distill_round, iterate_to_fixed_point
from qutrit_msd.src.errors import PostselectionImpossible
from qutrit_msd.src.gf_arith import inv_mod
from qutrit_msd.src.qudit_ops import PauliLabel, dagger, displacement, trace_distance
from qutrit_msd.src.stab_codes import StabilizerCode, rank_mod_d
from qutrit_msd.src.wigner import in_stabilizer_polytope, in_wigner_polytope, sum_negativity

console = Console()

SEARCH_N = 4
SEARCH_D = 3
DEDUPE_TOL = 1e-6
FIXED_POINT_TOL = 1e-9
ORBIT_TOL = 1e-4

HIT_CLASSES = ("edge", "face", "stabilizer", "other")
ATLAS_COLUMNS = ["code_id", "fixed_point_class", "theta", "phi", "r", "sum_negativity"]


def default_start_ensemble(per_meridian=20, r=0.9):
    """20 states on each of the meridians phi = 0, pi/3, pi at radius 0.9."""
    thetas = np.linspace(0.0, math.pi / 2, per_meridian)
    return tuple(AbbPoint(r, float(theta), phi) for phi in (0.0, math.pi / 3, math.pi) for theta in thetas)


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    num_candidates: int
    max_iters: int = MAX_ITERS
    starts: tuple = field(default_factory=default_start_ensemble)


@dataclass(frozen=True)
class SearchHit:
    """A verified fixed point of one code, with its coordinates when it lies in the subspace."""

    code_id: str
    code: StabilizerCode
    fixed_point: np.ndarray
    point: AbbPoint | None
    sum_negativity: float
    classification: str

    def as_row(self):
        return {
            "code_id": self.code_id,
            "fixed_point_class": self.classification,
            "theta": self.point.theta if self.point else None,
            "phi": self.point.phi if self.point else None,
            "r": self.point.r if self.point else None,
            "sum_negativity": self.sum_negativity,
        }


@dataclass
class AtlasReport:
    rows: list
    codes: dict

    def write(self, csv_path, json_path=None):
        save_table(self.rows, ATLAS_COLUMNS, csv_path)
        if json_path is not None:
            os.makedirs(os.path.dirname(os.path.abspath(json_path)), exist_ok=True)
            with open(json_path, "w") as f:
                json.dump(self.codes, f, indent=2, sort_keys=True)
        return csv_path


def _symplectic_product(u, v, n):
    return (int(np.dot(u[:n], v[n:])) - int(np.dot(u[n:], v[:n]))) % SEARCH_D


def _draw_generators(rng, n, count):
    rows = []
    while len(rows) < count:
        row = rng.integers(0, SEARCH_D, size=2 * n)
        if not row.any():
            continue
        if any(_symplectic_product(row, g, n) for g in rows):
            continue
        if rank_mod_d([list(g) for g in rows] + [list(row)], SEARCH_D) != len(rows) + 1:
            continue
        rows.append(row)
    return rows


def _symplectic_complement(rows, n):
    """Basis of {v : <v, g> = 0 for every row g} via the null space of [g_z | -g_x]."""
    GF = galois.GF(SEARCH_D)
    conjugate = np.array([np.concatenate([g[n:], (-g[:n]) % SEARCH_D]) for g in rows], dtype=int)
    return np.array(GF(conjugate % SEARCH_D).null_space(), dtype=int)


def random_code(rng, n=SEARCH_N):
    """
    Draw a random [[n,1]]_3 stabilizer code.

    Generators are sampled row by row, rejecting rows that fail to commute
    with earlier ones or do not raise the rank. Z_L and X_L are random
    combinations of the symplectic complement with nonzero mutual product;
    X_L is rescaled so that <Z_L, X_L> = -1.

    Args:
        rng (np.random.Generator): Source of randomness; fixes the code stream
        n (int): Number of physical qutrits

    Returns:
        StabilizerCode: a code that passes validate()
    """
    generators = _draw_generators(rng, n, n - 1)
    basis = _symplectic_complement(generators, n)
    while True:
        z_l = (rng.integers(0, SEARCH_D, size=len(basis)) @ basis) % SEARCH_D
        x_l = (rng.integers(0, SEARCH_D, size=len(basis)) @ basis) % SEARCH_D
        product = _symplectic_product(z_l, x_l, n)
        if product:
            break
    x_l = (x_l * ((-inv_mod(product, SEARCH_D)) % SEARCH_D)) % SEARCH_D
    return StabilizerCode.from_rows([list(map(int, g)) for g in generators],
                                    list(map(int, z_l)), list(map(int, x_l)), SEARCH_D)


def _displacement_images(rho):
    images = []
    for x in range(SEARCH_D):
        for z in range(SEARCH_D):
            D = displacement(PauliLabel((x,), (z,), 0, SEARCH_D))
            images.append(D @ rho @ dagger(D))
    return images


def _edge_arc_distance(point):
    """Euclidean distance from a Cartesian point to the pure-state arc |0> -> (1,1,1)/sqrt3."""
    angle = min(max(math.atan2(point.x, point.z), 0.0), 2 * THETA_EDGE_MAX)
    nearest = np.array([math.sin(angle), 0.0, math.cos(angle)])
    return float(np.linalg.norm(np.array(point.as_tuple()) - nearest))


def _norrell_orbit():
    orbit = []
    for _, image in psl_images(norrell_state()):
        orbit.extend(_displacement_images(image))
    return orbit


def subspace_representative(rho):
    """A displaced copy D rho D^dag inside the (a,b,b) subspace, or None."""
    for image in _displacement_images(rho):
        if in_abb_subspace(image):
            return image
    return None


def label_fixed_point(rho):
    """
    Label a limiting state.

    Order: stabilizer (inside the stabilizer polytope), edge (canonical image
    within 1e-4 of the |0> -> (1,1,1)/sqrt3 arc), face (within 1e-4 of the
    |N'> orbit), otherwise other.

    Returns:
        tuple: (label, AbbPoint of the canonical image or None)
    """
    representative = subspace_representative(rho)
    point = None
    if representative is not None:
        canonical, _ = wedge_canonicalize(0.5 * (representative + dagger(representative)))
        coords = cartesian(canonical)
        point = AbbPoint.from_cartesian(coords)
    if in_stabilizer_polytope(rho).inside:
        return "stabilizer", point
    if point is not None and _edge_arc_distance(coords) <= ORBIT_TOL:
        return "edge", point
    if min(trace_distance(rho, other) for other in _norrell_orbit()) <= ORBIT_TOL:
        return "face", point
    return "other", point


def classify_code(code, config, code_id=""):
    """
    Find and label the limiting states a code reaches from the start ensemble.

    Non-converged runs and starts with impossible postselection are skipped.
    Fixed points closer than 1e-6 in trace distance are merged, and every
    kept point is re-checked against one more distillation round.

    Returns:
        list[SearchHit]
    """
    fixed_points = []
    for start in config.starts:
        try:
            trace = iterate_to_fixed_point(code, start.rho, max_iters=config.max_iters)
        except PostselectionImpossible:
            continue
        if not trace.converged:
            continue
        rho = trace.fixed_point
        if any(trace_distance(rho, seen) <= DEDUPE_TOL for seen in fixed_points):
            continue
        try:
            again = distill_round(code, rho).rho_out
        except PostselectionImpossible:
            continue
        if float(np.max(np.abs(again - rho))) > FIXED_POINT_TOL:
            continue
        fixed_points.append(rho)

    hits = []
    for rho in fixed_points:
        label, point = label_fixed_point(rho)
        # Positively represented fixed points carry no distillable magic
        if label != "stabilizer" and in_wigner_polytope(rho).inside:
            label = "stabilizer"
        hits.append(SearchHit(code_id, code, rho, point, sum_negativity(rho), label))
    return hits


def candidate_codes(config):
    """The (code_id, code) stream a config fixes."""
    rng = np.random.default_rng(config.seed)
    return [(f"s{config.seed}-c{index:05d}", random_code(rng)) for index in range(config.num_candidates)]


def atlas(configs, reference_codes=(), workers=1, show_progress=False):
    """
    Aggregate limiting states over many codes.

    Args:
        configs (list[SearchConfig]): Search streams; an empty list gives an empty report
        reference_codes: Extra (code_id, code) pairs classified with the first config's settings
        workers (int): Threads for classifying candidates
        show_progress (bool): Show a rich progress bar

    Returns:
        AtlasReport: one row per non-stabilizer hit, in candidate order
    """
    jobs = []
    for config in configs:
        jobs.extend((code_id, code, config) for code_id, code in candidate_codes(config))
    if configs:
        jobs = [(code_id, code, configs[0]) for code_id, code in reference_codes] + jobs
    if not jobs:
        return AtlasReport([], {})

    def work(job):
        code_id, code, config = job
        return classify_code(code, config, code_id)

    results = []
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        mapped = pool.map(work, jobs)
        if show_progress:
            with Progress(console=console) as progress:
                task = progress.add_task("[cyan]Classifying codes", total=len(jobs))
                for hits in mapped:
                    results.append(hits)
                    progress.update(task, advance=1)
        else:
            results.extend(mapped)

    rows = []
    codes = {}
    for (code_id, code, _), hits in zip(jobs, results):
        kept = [hit for hit in hits if hit.classification != "stabilizer"]
        for hit in kept:
            rows.append(hit.as_row())
        if kept:
            codes[code_id] = code.to_dict()
    if show_progress:
        counts = {label: sum(1 for row in rows if row["fixed_point_class"] == label) for label in HIT_CLASSES}
        console.print(f"[bold green]Atlas: {len(jobs)} codes, {len(rows)} magic hits "
                      f"(edge {counts['edge']}, face {counts['face']}, other {counts['other']})[/bold green]")
    return AtlasReport(rows, codes)
