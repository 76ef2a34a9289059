"""Refinement solvers for the origin-covering point and the coincidence point.

``solve_theorem`` walks a sequence of ever finer equivariant triangulations.
On each one it builds the antipodal PL map from vertex selections, locates
a zero, and reads off a simplex whose vertex witnesses y_k in F(v_k) have
the origin as a convex combination.  The loop stops once the mesh norm is
below the requested target; no limit is taken.

``solve_coincidence`` runs the same loop on x -> F(x) - F(A(x)) and then
looks for a common point of F(x0) and F(A(x0)).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional

import numpy as np

from .convex import ConvexSet, distance, dykstra
from .manifolds import MAX_SUBDIVISIONS, ManifoldSpec, refinements
from .plmap import EPS_BARY, PLMap, ZeroPoint, build_antipodal_plmap, locate_zeros
from .setmap import SELECT_TOL, MinkowskiDifferenceMap, SetValuedMap, eval_map
from .simplicial import EquivariantComplex, mesh_norm

ANTIPODALITY_TOL = 1e-9
N_SUPPORT_DIRECTIONS = 20


class NoZeroFound(RuntimeError):
    def __init__(self, round_index: int, subdivisions: int):
        self.round_index = round_index
        self.subdivisions = subdivisions
        super().__init__(f"no zero of the antipodal PL map at round {round_index} "
                         f"({subdivisions} subdivisions); the manifold is not verified BUT at this resolution")


@dataclass(frozen=True)
class SolveOptions:
    mesh_target: float = 0.2
    max_rounds: int = 8
    selection_tol: float = SELECT_TOL
    reproject: bool = True
    eps_bary: float = EPS_BARY
    diagnose: bool = False
    seed: int = 0

    def __post_init__(self):
        if not self.mesh_target > 0:
            raise ValueError("mesh_target must be > 0")
        if not 0 <= self.max_rounds <= MAX_SUBDIVISIONS:
            raise ValueError(f"max_rounds must lie in [0, {MAX_SUBDIVISIONS}]")
        if not self.selection_tol > 0:
            raise ValueError("selection_tol must be > 0")


@dataclass
class SolveReport:
    x0: np.ndarray
    simplex: int
    vertices: np.ndarray            # (d+1, k) final simplex vertices v_k
    antipodes: np.ndarray           # (d+1, k) their involution images
    witnesses: np.ndarray           # (d+1, d) y_k in F(v_k)
    membership_residuals: np.ndarray
    weights: np.ndarray
    combination_residual: float
    locality_radius: float
    mesh_target: float
    selection_tol: float
    complete: bool
    trace: List[dict]
    setmap: dict
    manifold: dict

    def to_json(self) -> dict:
        return {
            "type": "theorem",
            "x0": self.x0.tolist(),
            "simplex": self.simplex,
            "vertices": self.vertices.tolist(),
            "antipodes": self.antipodes.tolist(),
            "witnesses": self.witnesses.tolist(),
            "membership_residuals": self.membership_residuals.tolist(),
            "weights": self.weights.tolist(),
            "combination_residual": self.combination_residual,
            "locality_radius": self.locality_radius,
            "mesh_target": self.mesh_target,
            "selection_tol": self.selection_tol,
            "complete": self.complete,
            "rounds": len(self.trace),
            "trace": self.trace,
            "setmap": self.setmap,
            "manifold": self.manifold,
        }


@dataclass
class CoincidenceReport:
    x0: np.ndarray
    ax0: np.ndarray
    a: np.ndarray
    b: np.ndarray
    gap: float
    gap_bound: float
    theorem: SolveReport

    def to_json(self) -> dict:
        return {
            "type": "coincidence",
            "x0": self.x0.tolist(),
            "ax0": self.ax0.tolist(),
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "gap": self.gap,
            "gap_bound": self.gap_bound,
            "theorem": self.theorem.to_json(),
        }


def _choose_zero(zeros: List[ZeroPoint], previous: Optional[np.ndarray]) -> ZeroPoint:
    if previous is None:
        return min(zeros, key=lambda z: tuple(z.point))
    return min(zeros, key=lambda z: (float(np.linalg.norm(z.point - previous)), tuple(z.point)))


def _setmap_json(F: SetValuedMap):
    try:
        return F.to_json()
    except TypeError:
        return None


def _report(c: EquivariantComplex, F: SetValuedMap, f: PLMap, z: ZeroPoint, mn: float,
            opts: SolveOptions, complete: bool, trace: List[dict], spec: ManifoldSpec) -> SolveReport:
    idx = c.simplices[z.simplex]
    V = c.vertices[idx]
    AV = c.vertices[c.involution[idx]]
    Y = f.values[idx]
    t = z.weights
    resid = np.array([distance(eval_map(F, v, av), y) for v, av, y in zip(V, AV, Y)])
    return SolveReport(
        x0=t @ V, simplex=int(z.simplex), vertices=V, antipodes=AV, witnesses=Y,
        membership_residuals=resid, weights=t.copy(),
        combination_residual=float(np.linalg.norm(t @ Y)), locality_radius=mn,
        mesh_target=opts.mesh_target, selection_tol=opts.selection_tol, complete=complete,
        trace=trace, setmap=_setmap_json(F), manifold=spec.to_json())


def solve_theorem(spec: ManifoldSpec, F: SetValuedMap, opts: SolveOptions = SolveOptions(),
                  _round_hook=None) -> SolveReport:
    """Find x0 and witnesses y_k in F(v_k) near x0 with 0 in conv(y_k).

    Round i triangulates the manifold with ``spec.subdivisions + i``
    barycentric subdivisions.  The first round takes the lexicographically
    smallest zero; later rounds take the zero nearest the previous choice.

    Raises
    ------
    HypothesisViolation
        Some vertex pair admits no y in F(x) with -y in F(A(x)).
    NoZeroFound
        The PL map has no zero on some round.

    When the rounds run out before the mesh target is met the last
    round's report is returned with ``complete`` False.
    """
    base = spec.subdivisions
    last = min(base + opts.max_rounds, spec.max_subdivisions)
    run_spec = replace(spec, subdivisions=last, reproject=opts.reproject)
    trace: List[dict] = []
    previous = None
    state = None
    for k, c in enumerate(refinements(run_spec)):
        if k < base:
            continue
        i = k - base
        mn = mesh_norm(c)
        f = build_antipodal_plmap(c, F, opts.selection_tol, opts.diagnose)
        if _round_hook is not None:
            _round_hook(c, f)
        zeros = locate_zeros(f, opts.eps_bary)
        if not zeros:
            raise NoZeroFound(i, k)
        z = _choose_zero(zeros, previous)
        previous = z.point
        trace.append({"round": i, "subdivisions": k, "mesh_norm": mn, "n_simplices": c.n_simplices,
                      "zero_count": len(zeros), "simplex": int(z.simplex), "chosen": z.point.tolist()})
        state = (c, f, z, mn, k)
        if mn <= opts.mesh_target:
            break
    c, f, z, mn, k = state
    return _report(c, F, f, z, mn, opts, mn <= opts.mesh_target, trace, replace(run_spec, subdivisions=k))


# ---------------------------------------------------------------------------
# coincidence
# ---------------------------------------------------------------------------

def _support_batch(batch, U: np.ndarray) -> np.ndarray:
    """Support values of every set in ``batch`` along every direction in U."""
    if batch.kind == "singleton":
        return batch.points @ U.T
    if batch.kind == "ball":
        return batch.points @ U.T + batch.radius
    return np.max(batch.points @ U.T, axis=1)


def check_difference_antipodality(c: EquivariantComplex, Fbar: MinkowskiDifferenceMap,
                                  n_dirs: int = N_SUPPORT_DIRECTIONS, seed: int = 0) -> float:
    """Largest support-function mismatch between Fbar(A(x)) and -Fbar(x) over all vertices."""
    rng = np.random.default_rng(seed)
    U = rng.normal(size=(n_dirs, Fbar.output_dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    X = c.vertices
    AX = c.vertices[c.involution]
    here = Fbar.batch(X, AX).negated()
    there = Fbar.batch(AX, X)
    return float(np.max(np.abs(_support_batch(here, U) - _support_batch(there, U))))


def extract_common_point(F: SetValuedMap, x0, ax0, tol: float = SELECT_TOL):
    """Common point of F(x0) and F(ax0), or the closest pair found.

    Returns ``(a, b, gap)``.  When the sets meet within ``tol`` then
    ``a == b`` and ``gap`` is its larger distance to the two sets;
    otherwise ``a`` and ``b`` are the final Dykstra iterates on each set
    and ``gap = |a - b|``.
    """
    Sa: ConvexSet = eval_map(F, x0)
    Sb: ConvexSet = eval_map(F, ax0)
    res = dykstra(Sa, Sb, tol)
    if res.feasible:
        y = res.b
        return y, y.copy(), max(distance(Sa, y), distance(Sb, y))
    return res.a, res.b, float(np.linalg.norm(res.a - res.b))


def solve_coincidence(spec: ManifoldSpec, F: SetValuedMap, opts: SolveOptions = SolveOptions()) -> CoincidenceReport:
    """Find x0 where F(x0) and F(A(x0)) (nearly) intersect."""
    Fbar = MinkowskiDifferenceMap(F)

    def guard(c, f):
        worst = check_difference_antipodality(c, Fbar, seed=opts.seed)
        if worst > ANTIPODALITY_TOL:
            raise RuntimeError(f"difference map fails antipodality by {worst:.3g}")

    rep = solve_theorem(spec, Fbar, opts, _round_hook=guard)
    x0 = rep.x0
    ax0 = rep.weights @ rep.antipodes
    a, b, gap = extract_common_point(F, x0, ax0, opts.selection_tol)
    # dist(0, Fbar(x0)) <= max_k dist(y_k, Fbar(x0)) because Fbar(x0) is convex
    here = eval_map(Fbar, x0, ax0)
    bound = max(distance(here, y) for y in rep.witnesses) + opts.selection_tol
    return CoincidenceReport(x0=x0, ax0=ax0, a=a, b=b, gap=float(gap), gap_bound=float(bound), theorem=rep)
