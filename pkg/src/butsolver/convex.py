"""Convex-geometry kernel.

Compact convex sets in R^d come in three flavours: a single point, a closed
Euclidean ball, and the convex hull of a finite generator list.  Every
operation here is exact in closed form except projection onto a hull, which
goes through Wolfe's minimum-norm-point algorithm.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

COND_MAX = 1e12
PROJECT_TOL = 1e-10
# Wolfe optimality gap |x|^2 - min <x, P_j>, relative to max |P_j|^2
WOLFE_GAP_TOL = 1e-20
INTERSECT_TOL = 1e-10
INTERSECT_MAX_ITER = 10000


def _vec(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.ndim != 1:
        raise ValueError(f"expected a point (1-d array), got shape {a.shape}")
    return a


@dataclass(frozen=True, eq=False)
class Singleton:
    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", _vec(self.point))

    @property
    def dim(self) -> int:
        return self.point.shape[0]


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center))
        r = float(self.radius)
        if not r >= 0.0:
            raise ValueError(f"ball radius must be >= 0, got {r}")
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.shape[0]


@dataclass(frozen=True, eq=False)
class VPolytope:
    generators: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generators, dtype=float)
        if g.ndim != 2 or g.shape[0] == 0:
            raise ValueError("VPolytope needs a nonempty (m, d) generator array")
        object.__setattr__(self, "generators", g)

    @property
    def dim(self) -> int:
        return self.generators.shape[1]


ConvexSet = Union[Singleton, Ball, VPolytope]


def _check_dim(S: ConvexSet, p: np.ndarray) -> None:
    if S.dim != p.shape[0]:
        raise ValueError(f"dimension mismatch: set in R^{S.dim}, point in R^{p.shape[0]}")


def same_set(a: ConvexSet, b: ConvexSet) -> bool:
    """Structural equality (same variant, identical arrays)."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Singleton):
        return np.array_equal(a.point, b.point)
    if isinstance(a, Ball):
        return np.array_equal(a.center, b.center) and a.radius == b.radius
    return np.array_equal(a.generators, b.generators)


def representative(S: ConvexSet) -> np.ndarray:
    """A canonical point of S: the point, the center, or the generator centroid."""
    if isinstance(S, Singleton):
        return S.point.copy()
    if isinstance(S, Ball):
        return S.center.copy()
    return S.generators.mean(axis=0)


# ---------------------------------------------------------------------------
# barycentric solves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BarycentricSolution:
    weights: np.ndarray
    residual_norm: float
    degenerate: bool


def _bary_matrix(Y: np.ndarray) -> np.ndarray:
    # columns are the points, last row of ones
    n = Y.shape[-2]
    ones = np.ones(Y.shape[:-2] + (1, n))
    return np.concatenate([np.swapaxes(Y, -1, -2), ones], axis=-2)


def barycentric_coordinates(y, target) -> BarycentricSolution:
    """Affine weights of ``target`` relative to the d+1 points ``y`` in R^d.

    Weights may be negative; the caller decides what a sign means.  The
    solve is flagged degenerate when the augmented matrix has condition
    number above ``COND_MAX``; the weights are then a least-squares answer.
    """
    Y = np.asarray(y, dtype=float)
    t = _vec(target)
    if Y.ndim != 2 or Y.shape[0] != Y.shape[1] + 1:
        raise ValueError(f"need d+1 points in R^d, got array of shape {Y.shape}")
    if Y.shape[1] != t.shape[0]:
        raise ValueError("dimension mismatch between points and target")
    M = _bary_matrix(Y)
    rhs = np.append(t, 1.0)
    cond = np.linalg.cond(M)
    degenerate = not np.isfinite(cond) or cond > COND_MAX
    if degenerate:
        w = np.linalg.lstsq(M, rhs, rcond=None)[0]
    else:
        w = np.linalg.solve(M, rhs)
    resid = float(np.linalg.norm(w @ Y - t))
    return BarycentricSolution(weights=w, residual_norm=resid, degenerate=bool(degenerate))


def batch_barycentric_origin(Y: np.ndarray, cond_max: float = COND_MAX):
    """Barycentric weights of the origin for a stack of (d+1, d) point sets.

    Returns ``(weights, degenerate)``; rows flagged degenerate carry NaN
    weights and must be handled by the caller.
    """
    M = _bary_matrix(Y)
    n = M.shape[-1]
    degenerate = np.zeros(M.shape[0], dtype=bool)
    weights = np.full((M.shape[0], n), np.nan)
    if M.shape[0] == 0:
        return weights, degenerate
    cond = np.linalg.cond(M)
    degenerate = ~np.isfinite(cond) | (cond > cond_max)
    ok = ~degenerate
    if ok.any():
        rhs = np.zeros((int(ok.sum()), n, 1))
        rhs[:, -1, 0] = 1.0
        weights[ok] = np.linalg.solve(M[ok], rhs)[..., 0]
    return weights, degenerate


# ---------------------------------------------------------------------------
# minimum-norm point of a polytope (Wolfe's algorithm)
# ---------------------------------------------------------------------------

def _affine_minimizer(Q: np.ndarray) -> np.ndarray:
    k = Q.shape[0]
    K = np.zeros((k + 1, k + 1))
    K[:k, :k] = Q @ Q.T
    K[:k, k] = 1.0
    K[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    return np.linalg.lstsq(K, rhs, rcond=None)[0][:k]


def min_norm_point(P, tol: float = WOLFE_GAP_TOL, max_iter: int = 1000):
    """Point of minimum Euclidean norm in conv(P) and its convex weights.

    Parameters
    ----------
    P : array, shape (m, d)
        Generators of the polytope.
    tol : float
        Optimality tolerance on the Wolfe gap ``|x|^2 - min_j <x, P_j>``,
        relative to the squared generator scale.

    Returns
    -------
    x : array, shape (d,)
    weights : array, shape (m,)
        Nonnegative, summing to one, with ``weights @ P == x``.
    """
    P = np.asarray(P, dtype=float)
    m = P.shape[0]
    scale = max(1.0, float(np.max(np.einsum("ij,ij->i", P, P))))
    eps = 1e-14
    j0 = int(np.argmin(np.einsum("ij,ij->i", P, P)))
    S = [j0]
    w = np.array([1.0])
    x = P[j0].copy()
    best = np.inf
    for _ in range(max_iter):
        xx = float(x @ x)
        # x at roundoff level (origin inside the hull) or no strict progress:
        # further corral updates only shuffle rounding errors
        if xx <= (64 * np.finfo(float).eps) ** 2 * scale or xx >= best:
            break
        best = xx
        g = P @ x
        k = int(np.argmin(g))
        if xx - g[k] <= tol * scale or k in S:
            break
        S.append(k)
        w = np.append(w, 0.0)
        # minor cycle: move to the affine minimizer of the corral, dropping
        # generators whose weight hits zero on the way
        while True:
            v = _affine_minimizer(P[S])
            if np.all(v > eps):
                w = v
                break
            mask = v <= eps
            denom = w[mask] - v[mask]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(denom > 0, w[mask] / denom, np.inf)
            theta = float(min(1.0, np.min(ratios)))
            w = theta * v + (1.0 - theta) * w
            keep = w > eps
            if not keep.any():
                keep[int(np.argmax(w))] = True
            S = [s for s, kp in zip(S, keep) if kp]
            w = w[keep]
            w = w / w.sum()
            if len(S) == 1:
                w = np.array([1.0])
                break
        x = w @ P[S]
    weights = np.zeros(m)
    weights[S] = w
    weights = np.clip(weights, 0.0, None)
    weights /= weights.sum()
    return weights @ P, weights


# ---------------------------------------------------------------------------
# membership, projection, distance
# ---------------------------------------------------------------------------

def project(S: ConvexSet, p) -> np.ndarray:
    """Nearest point of S to p."""
    p = _vec(p)
    _check_dim(S, p)
    if isinstance(S, Singleton):
        return S.point.copy()
    if isinstance(S, Ball):
        diff = p - S.center
        r = float(np.linalg.norm(diff))
        if r <= S.radius:
            return p.copy()
        return S.center + diff * (S.radius / r)
    x, _ = min_norm_point(S.generators - p)
    return x + p


def distance(S: ConvexSet, p) -> float:
    p = _vec(p)
    _check_dim(S, p)
    if isinstance(S, Singleton):
        return float(np.linalg.norm(p - S.point))
    if isinstance(S, Ball):
        return max(0.0, float(np.linalg.norm(p - S.center)) - S.radius)
    x, _ = min_norm_point(S.generators - p)
    return float(np.linalg.norm(x))


def contains(S: ConvexSet, p, tol: float = 0.0) -> bool:
    if tol < 0:
        raise ValueError("tol must be >= 0")
    p = _vec(p)
    _check_dim(S, p)
    if isinstance(S, Singleton):
        return float(np.linalg.norm(p - S.point)) <= tol
    if isinstance(S, Ball):
        return float(np.linalg.norm(p - S.center)) <= S.radius + tol
    # the min-norm iterate carries a few ulps of roundoff relative to the
    # generator scale, so exact membership (tol=0) needs a small floor
    floor = 16 * np.finfo(float).eps * float(np.max(np.abs(S.generators - p), initial=1.0))
    return distance(S, p) <= tol + floor


# ---------------------------------------------------------------------------
# intersection via Dykstra's alternating projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DykstraResult:
    a: np.ndarray          # last iterate on Sa
    b: np.ndarray          # last iterate on Sb
    gap: float
    feasible: bool
    iterations: int


def dykstra(Sa: ConvexSet, Sb: ConvexSet, tol: float = INTERSECT_TOL,
            max_iter: int = INTERSECT_MAX_ITER, start=None) -> DykstraResult:
    """Alternating projections with Dykstra's correction terms.

    Starts from the midpoint of the two representative points.  When the
    start is already within ``tol`` of both sets it is returned untouched,
    which is also what the first Dykstra sweep would produce.  Stops as
    soon as the two iterates are within ``tol``; reports infeasible when
    the iterates stop moving with the gap still above ``tol`` or when
    ``max_iter`` sweeps run out.
    """
    if Sa.dim != Sb.dim:
        raise ValueError(f"dimension mismatch: R^{Sa.dim} vs R^{Sb.dim}")
    z = 0.5 * (representative(Sa) + representative(Sb)) if start is None else _vec(start)
    if distance(Sa, z) <= tol and distance(Sb, z) <= tol:
        return DykstraResult(z, z.copy(), 0.0, True, 0)
    p = np.zeros_like(z)
    q = np.zeros_like(z)
    x = z
    a_prev = b_prev = None
    scale = 1.0 + float(np.linalg.norm(z))
    gap = np.inf
    a = b = z
    for it in range(1, max_iter + 1):
        a = project(Sa, x + p)
        p = x + p - a
        b = project(Sb, a + q)
        q = a + q - b
        x = b
        gap = float(np.linalg.norm(a - b))
        if gap <= tol:
            return DykstraResult(a, b, gap, True, it)
        if a_prev is not None:
            moved = max(float(np.linalg.norm(a - a_prev)), float(np.linalg.norm(b - b_prev)))
            if moved <= 1e-15 * scale:
                break
        a_prev, b_prev = a, b
    return DykstraResult(a, b, gap, False, it)


def intersect_point(Sa: ConvexSet, Sb: ConvexSet, tol: float = INTERSECT_TOL,
                    max_iter: int = INTERSECT_MAX_ITER) -> Optional[np.ndarray]:
    """A point within ``tol`` of both sets, or None when none was found."""
    res = dykstra(Sa, Sb, tol, max_iter)
    return res.b if res.feasible else None


# ---------------------------------------------------------------------------
# set algebra
# ---------------------------------------------------------------------------

def reflect(S: ConvexSet) -> ConvexSet:
    if isinstance(S, Singleton):
        return Singleton(-S.point)
    if isinstance(S, Ball):
        return Ball(-S.center, S.radius)
    return VPolytope(-S.generators)


def _as_polytope(S: ConvexSet) -> VPolytope:
    if isinstance(S, Singleton):
        return VPolytope(S.point[None, :])
    if isinstance(S, VPolytope):
        return S
    raise ValueError("unsupported Minkowski pair")


def minkowski_difference(Sa: ConvexSet, Sb: ConvexSet) -> ConvexSet:
    """The set {a - b : a in Sa, b in Sb}."""
    if Sa.dim != Sb.dim:
        raise ValueError(f"dimension mismatch: R^{Sa.dim} vs R^{Sb.dim}")
    if isinstance(Sa, Singleton) and isinstance(Sb, Singleton):
        return Singleton(Sa.point - Sb.point)
    if isinstance(Sa, Ball) and isinstance(Sb, Ball):
        return Ball(Sa.center - Sb.center, Sa.radius + Sb.radius)
    if isinstance(Sa, Ball) and isinstance(Sb, Singleton):
        return Ball(Sa.center - Sb.point, Sa.radius)
    if isinstance(Sa, Singleton) and isinstance(Sb, Ball):
        return Ball(Sa.point - Sb.center, Sb.radius)
    A = _as_polytope(Sa).generators
    B = _as_polytope(Sb).generators
    diffs = (A[:, None, :] - B[None, :, :]).reshape(-1, A.shape[1])
    return VPolytope(diffs)


def support(S: ConvexSet, u) -> float:
    """max over x in S of <x, u>, for a unit direction u."""
    u = _vec(u)
    n = float(np.linalg.norm(u))
    if n == 0.0:
        raise ValueError("zero direction")
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"direction must be a unit vector, |u| = {n}")
    if u.shape[0] != S.dim:
        raise ValueError("dimension mismatch")
    if isinstance(S, Singleton):
        return float(S.point @ u)
    if isinstance(S, Ball):
        return float(S.center @ u) + S.radius
    return float(np.max(S.generators @ u))


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def set_to_json(S: ConvexSet) -> dict:
    if isinstance(S, Singleton):
        return {"kind": "singleton", "point": S.point.tolist()}
    if isinstance(S, Ball):
        return {"kind": "ball", "center": S.center.tolist(), "radius": S.radius}
    return {"kind": "vpolytope", "generators": S.generators.tolist()}


def set_from_json(obj: dict) -> ConvexSet:
    kind = obj.get("kind")
    if kind == "singleton":
        return Singleton(obj["point"])
    if kind == "ball":
        return Ball(obj["center"], obj["radius"])
    if kind == "vpolytope":
        return VPolytope(obj["generators"])
    raise ValueError(f"unknown convex set kind {kind!r}")
