"""Re-verify solver reports from their raw JSON.

Nothing from the solver path is reused: polynomials are re-evaluated
here, ball and point membership is closed form, and hull membership goes
through scipy's NNLS rather than the Wolfe routine the solver uses.
"""
from __future__ import annotations

from typing import List

import numpy as np
from scipy.optimize import nnls

WEIGHT_SUM_TOL = 1e-9
COMBINATION_TOL = 1e-8
LOCATION_TOL = 1e-9


def _poly(poly: list, x: np.ndarray) -> np.ndarray:
    out = []
    for coord in poly:
        v = 0.0
        for mono in coord:
            v += float(mono["c"]) * float(np.prod(x ** np.asarray(mono["e"], dtype=float)))
        out.append(v)
    return np.array(out)


def _hull_distance(G: np.ndarray, p: np.ndarray) -> float:
    """Upper bound on dist(p, conv G) from a feasible NNLS weight vector."""
    heavy = 1e4
    A = np.vstack([(G - p).T, heavy * np.ones(G.shape[0])])
    b = np.append(np.zeros(G.shape[1]), heavy)
    lam, _ = nnls(A, b)
    if lam.sum() <= 0:
        return float(np.min(np.linalg.norm(G - p, axis=1)))
    lam = lam / lam.sum()
    return float(min(np.linalg.norm(lam @ G - p), np.min(np.linalg.norm(G - p, axis=1))))


def _value(setmap: dict, x: np.ndarray, ax: np.ndarray):
    """(kind, data) describing F(x) for a serialized set-valued map."""
    kind = setmap["kind"]
    if kind == "singleton":
        return "points", _poly(setmap["point"], x)[None, :]
    if kind == "ball":
        return "ball", (_poly(setmap["center"], x), float(setmap["radius"]))
    if kind == "vpolytope":
        return "points", np.array([_poly(g, x) for g in setmap["generators"]])
    if kind == "minkowski_difference":
        ka, da = _value(setmap["base"], x, ax)
        kb, db = _value(setmap["base"], ax, x)
        if ka == "ball" and kb == "ball":
            return "ball", (da[0] - db[0], da[1] + db[1])
        if ka == "points" and kb == "points":
            return "points", (da[:, None, :] - db[None, :, :]).reshape(-1, da.shape[1])
        raise ValueError("unsupported Minkowski pair")
    raise ValueError(f"unknown set-valued map kind {kind!r}")


def set_distance(setmap: dict, x, ax, p) -> float:
    kind, data = _value(setmap, np.asarray(x, float), np.asarray(ax, float))
    p = np.asarray(p, dtype=float)
    if kind == "ball":
        c, r = data
        return max(0.0, float(np.linalg.norm(p - c)) - r)
    if data.shape[0] == 1:
        return float(np.linalg.norm(p - data[0]))
    return _hull_distance(data, p)


def check_theorem_report(rep: dict) -> List[str]:
    failures = []
    t = np.asarray(rep["weights"], dtype=float)
    V = np.asarray(rep["vertices"], dtype=float)
    AV = np.asarray(rep["antipodes"], dtype=float)
    Y = np.asarray(rep["witnesses"], dtype=float)
    x0 = np.asarray(rep["x0"], dtype=float)
    tol = float(rep["selection_tol"])
    if t.shape[0] != V.shape[0] or t.shape[0] != Y.shape[0] or V.shape != AV.shape:
        return ["shape: weights, vertices, antipodes and witnesses disagree in length"]
    if np.any(t < 0):
        failures.append(f"weights: negative weight {t.min():.3g}")
    if abs(t.sum() - 1.0) > WEIGHT_SUM_TOL:
        failures.append(f"weights: sum {t.sum():.17g} differs from 1")
    comb = float(np.linalg.norm(t @ Y))
    if comb > COMBINATION_TOL:
        failures.append(f"combination: |sum t_k y_k| = {comb:.3g} > {COMBINATION_TOL}")
    if np.linalg.norm(t @ V - x0) > LOCATION_TOL * (1.0 + np.linalg.norm(x0)):
        failures.append("location: x0 is not the weighted vertex combination")
    radius = float(rep["locality_radius"])
    spread = float(np.max(np.linalg.norm(V - x0, axis=1)))
    if spread > radius * (1 + 1e-12):
        failures.append(f"locality: vertex {spread:.6g} from x0 exceeds radius {radius:.6g}")
    if rep.get("complete") and radius > float(rep["mesh_target"]):
        failures.append(f"mesh-target: radius {radius:.6g} above target {rep['mesh_target']}")
    setmap = rep.get("setmap")
    if setmap is None:
        failures.append("membership: report carries no serialized set-valued map")
    else:
        for k, (v, av, y) in enumerate(zip(V, AV, Y)):
            dist = set_distance(setmap, v, av, y)
            if dist > tol * (1 + 1e-9) + 1e-15:
                failures.append(f"membership: witness {k} is {dist:.3g} from F(v_{k}) (tol {tol:g})")
    return failures


def check_coincidence_report(rep: dict) -> List[str]:
    failures = ["theorem/" + f for f in check_theorem_report(rep["theorem"])]
    inner = rep["theorem"]
    base = inner["setmap"]["base"] if inner.get("setmap") else None
    x0 = np.asarray(rep["x0"], float)
    ax0 = np.asarray(rep["ax0"], float)
    a = np.asarray(rep["a"], float)
    b = np.asarray(rep["b"], float)
    tol = float(inner["selection_tol"])
    t = np.asarray(inner["weights"], float)
    if np.linalg.norm(t @ np.asarray(inner["antipodes"], float) - ax0) > LOCATION_TOL * (1 + np.linalg.norm(ax0)):
        failures.append("location: ax0 is not the weighted antipode combination")
    gap = float(rep["gap"])
    if gap > float(rep["gap_bound"]):
        failures.append(f"gap: {gap:.3g} exceeds reported bound {rep['gap_bound']:.3g}")
    if base is not None:
        da = set_distance(base, x0, ax0, a)
        db = set_distance(base, ax0, x0, b)
        if da > tol * (1 + 1e-9) + 1e-15:
            failures.append(f"membership: a is {da:.3g} from F(x0)")
        if db > tol * (1 + 1e-9) + 1e-15:
            failures.append(f"membership: b is {db:.3g} from F(A(x0))")
        if gap < float(np.linalg.norm(a - b)) - 1e-12 and gap > tol:
            failures.append("gap: smaller than |a - b|")
    return failures


def check_report(rep: dict) -> List[str]:
    """Every violated report invariant; an empty list means the report passes."""
    if not isinstance(rep, dict):
        raise ValueError("report must be a JSON object")
    kind = rep.get("type")
    if kind == "theorem":
        return check_theorem_report(rep)
    if kind == "coincidence":
        return check_coincidence_report(rep)
    raise ValueError(f"unknown report type {kind!r}")
