"""Piecewise-linear maps on equivariant complexes and their zeros.

A :class:`PLMap` stores one value in R^d per vertex and is extended
affinely over each top simplex.  Zeros are found simplex by simplex by
solving for the barycentric coordinates of the origin among the vertex
values, then merged across shared faces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .convex import COND_MAX, batch_barycentric_origin, min_norm_point
from .setmap import SELECT_TOL, SetValuedMap, select_pairs
from .simplicial import EquivariantComplex, mesh_norm, vertex_pairing

EPS_BARY = 1e-9
CONSISTENT = "consistent-with-BUT"
INCONSISTENT = "inconsistent"
NOT_TRANSVERSAL = "not-transversal"


@dataclass(frozen=True)
class PairViolation:
    vertex: int
    antipode: int
    x: Tuple[float, ...]
    ax: Tuple[float, ...]
    gap: float

    def to_json(self) -> dict:
        return {"vertex": self.vertex, "antipode": self.antipode, "x": list(self.x),
                "ax": list(self.ax), "gap": self.gap}


class HypothesisViolation(Exception):
    """No y in F(x) with -y in F(A(x)) exists at one or more vertex pairs."""

    def __init__(self, pairs: Sequence[PairViolation]):
        self.pairs = list(pairs)
        p = self.pairs[0]
        more = f" (and {len(self.pairs) - 1} more pairs)" if len(self.pairs) > 1 else ""
        super().__init__(f"selection infeasible at vertex pair ({p.vertex}, {p.antipode}): "
                         f"F(x) and -F(A(x)) are {p.gap:.3g} apart{more}")


@dataclass(frozen=True, eq=False)
class PLMap:
    complex: EquivariantComplex
    values: np.ndarray     # (V, d)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[0] != self.complex.n_vertices:
            raise ValueError("need exactly one value per vertex")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def is_antipodal(self) -> bool:
        return bool(np.array_equal(self.values[self.complex.involution], -self.values))

    def at(self, simplex: int, weights) -> np.ndarray:
        return np.asarray(weights) @ self.values[self.complex.simplices[simplex]]


def build_antipodal_plmap(c: EquivariantComplex, F: SetValuedMap, tol: float = SELECT_TOL,
                          diagnose: bool = False) -> PLMap:
    """Vertex values y at each representative and -y at its antipode.

    Raises :class:`HypothesisViolation` naming the first infeasible pair,
    or every infeasible pair when ``diagnose`` is set.
    """
    if F.ambient_dim != c.ambient_dim or F.output_dim != c.manifold_dim:
        raise ValueError(f"map R^{F.ambient_dim} -> R^{F.output_dim} does not fit a "
                         f"{c.manifold_dim}-manifold in R^{c.ambient_dim}")
    pairs = vertex_pairing(c).pairs
    X = c.vertices[pairs[:, 0]]
    AX = c.vertices[pairs[:, 1]]
    Y, _, feasible, gap = select_pairs(F, X, AX, tol)
    if not feasible.all():
        bad = np.flatnonzero(~feasible)
        if not diagnose:
            bad = bad[:1]
        raise HypothesisViolation([
            PairViolation(int(pairs[i, 0]), int(pairs[i, 1]), tuple(X[i].tolist()),
                          tuple(AX[i].tolist()), float(gap[i]))
            for i in bad])
    values = np.empty((c.n_vertices, c.manifold_dim))
    values[pairs[:, 0]] = Y
    values[pairs[:, 1]] = -Y
    return PLMap(c, values)


def sample_plmap(c: EquivariantComplex, g) -> PLMap:
    """Values of ``g`` at the embedded vertices; antipodality is not enforced."""
    if g.ambient_dim != c.ambient_dim:
        raise ValueError(f"function on R^{g.ambient_dim} cannot be sampled on a complex in R^{c.ambient_dim}")
    return PLMap(c, g.many(c.vertices))


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroPoint:
    simplex: int
    weights: np.ndarray
    point: np.ndarray
    interior: bool
    nondegenerate: bool
    regular: bool = True
    simplices: Tuple[int, ...] = ()     # every top simplex that located this zero

    def to_json(self) -> dict:
        return {"simplex": self.simplex, "weights": self.weights.tolist(), "point": self.point.tolist(),
                "interior": self.interior, "nondegenerate": self.nondegenerate, "regular": self.regular,
                "simplices": list(self.simplices)}


def _probe_direction(d: int) -> np.ndarray:
    # fixed, non-axis-aligned direction used to break ties at boundary zeros
    u = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0])[:d]) * (-1.0) ** np.arange(d)
    return u / np.linalg.norm(u)


def _raw_zeros(f: PLMap, eps_bary: float, cond_max: float):
    c = f.complex
    S = c.simplices
    vals = f.values
    scale = float(np.max(np.linalg.norm(vals, axis=1))) if vals.size else 0.0
    scale = scale if scale > 0 else 1.0
    slack = 1e-6 * scale
    Ys = vals[S]                                   # (N, d+1, d)
    cand = np.flatnonzero(np.all(Ys.min(axis=1) <= slack, axis=1) & np.all(Ys.max(axis=1) >= -slack, axis=1))
    W, degenerate = batch_barycentric_origin(Ys[cand], cond_max)
    found = []
    for row, s in enumerate(cand):
        if not degenerate[row]:
            w = W[row]
            if np.any(w < -eps_bary):
                continue
        else:
            x, w = min_norm_point(Ys[s])
            if np.linalg.norm(x) > 1e-9 * scale:
                continue
        t = np.clip(w, 0.0, None)
        t = t / t.sum()
        found.append((int(s), t, bool(degenerate[row])))
    return found, scale


def _preimage_count(f: PLMap, simplices, target: np.ndarray, cond_max: float) -> int:
    Ys = f.values[f.complex.simplices[list(simplices)]] - target
    W, degenerate = batch_barycentric_origin(Ys, cond_max)
    if degenerate.any():
        return -1
    return int(np.count_nonzero(np.all(W >= 0.0, axis=1)))


def locate_zeros(f: PLMap, eps_bary: float = EPS_BARY, eps_det: float = COND_MAX) -> List[ZeroPoint]:
    """Zeros of the PL extension of ``f``.

    A top simplex contributes a zero when the origin has barycentric
    weights >= -eps_bary among its vertex values; weights are clamped and
    renormalized.  Degenerate images (condition number above ``eps_det``)
    fall back to the minimum-norm point of their hull.  Zeros found in
    several simplices (shared faces) are merged when their embedded
    locations lie within ``10 * eps_bary * mesh_norm``; the lowest simplex
    index is kept as representative.

    A merged zero is marked ``regular`` when all simplices that found it
    are nondegenerate and exactly one of them contains the preimage of a
    tiny generic value near the origin, i.e. the map is a local
    homeomorphism there.  Interior zeros in nondegenerate simplices are
    always regular.
    """
    c = f.complex
    raw, scale = _raw_zeros(f, eps_bary, eps_det)
    h = 10.0 * eps_bary * mesh_norm(c)
    grid: Dict[tuple, List[int]] = {}
    clusters: List[List[int]] = []
    centers: List[np.ndarray] = []
    offsets = np.array(np.meshgrid(*[[-1, 0, 1]] * c.ambient_dim)).reshape(c.ambient_dim, -1).T
    for i, (s, t, _) in enumerate(raw):
        p = t @ c.vertices[c.simplices[s]]
        cell = np.floor(p / h).astype(np.int64)
        hit = None
        for off in offsets:
            for j in grid.get(tuple(cell + off), ()):
                if np.linalg.norm(centers[j] - p) <= h:
                    hit = j
                    break
            if hit is not None:
                break
        if hit is None:
            grid.setdefault(tuple(cell), []).append(len(clusters))
            clusters.append([i])
            centers.append(p)
        else:
            clusters[hit].append(i)

    probe = _probe_direction(c.manifold_dim) * (1e-7 * scale)
    zeros = []
    for members in clusters:
        s, t, degen = raw[members[0]]
        simplices = tuple(raw[m][0] for m in members)
        all_nondeg = not any(raw[m][2] for m in members)
        regular = all_nondeg and _preimage_count(f, simplices, probe, eps_det) == 1
        zeros.append(ZeroPoint(
            simplex=s, weights=t, point=t @ c.vertices[c.simplices[s]],
            interior=bool(np.all(t > eps_bary)), nondegenerate=not degen,
            regular=regular, simplices=simplices))
    return zeros


# ---------------------------------------------------------------------------
# mod-4 certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mod4Certificate:
    zeros: List[ZeroPoint]
    count: int
    transversal: bool
    verdict: str

    def to_json(self) -> dict:
        return {"zeros": [z.to_json() for z in self.zeros], "count": self.count,
                "transversal": self.transversal, "verdict": self.verdict}


def certify_but(c: EquivariantComplex, f: PLMap, eps_bary: float = EPS_BARY) -> Mod4Certificate:
    """Count the zeros of an antipodal PL map and test |Z| = 2 (mod 4).

    The map is transversal when every zero is regular (see
    :func:`locate_zeros`).  A transversal map with 2 (mod 4) zeros is a
    positive witness for the BUT property of ``c``.
    """
    if f.complex is not c and f.values.shape[0] != c.n_vertices:
        raise ValueError("map is defined on a different complex")
    f = f if f.complex is c else PLMap(c, f.values)
    if not f.is_antipodal():
        raise ValueError("map not antipodal")
    zeros = locate_zeros(f, eps_bary)
    transversal = all(z.regular for z in zeros)
    n = len(zeros)
    if not transversal:
        verdict = NOT_TRANSVERSAL
    elif n % 4 == 2:
        verdict = CONSISTENT
    else:
        verdict = INCONSISTENT
    return Mod4Certificate(zeros, n, transversal, verdict)
