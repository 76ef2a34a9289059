"""Set-valued maps x -> F(x), a compact convex subset of R^d.

Coordinate functions are polynomials in the ambient coordinates of the
embedding (:class:`PolyFunc`), or arbitrary callables for library use.
Closed graph and continuity are the caller's obligation; nothing here
checks them.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .convex import Ball, ConvexSet, Singleton, VPolytope, distance, dykstra, minkowski_difference, reflect

SELECT_TOL = 1e-8


class PolyFunc:
    """Polynomial map R^k -> R^d given as monomial lists per output coordinate.

    >>> g = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 2))], [(1.0, (0, 1, 0))]])
    >>> g(np.array([0.0, 0.0, 1.0]))
    array([1., 0.])
    """

    def __init__(self, terms: Sequence[Sequence[Tuple[float, Sequence[int]]]], ambient_dim: Optional[int] = None):
        dims = {len(e) for coord in terms for _, e in coord}
        if ambient_dim is None:
            if not dims:
                raise ValueError("cannot infer ambient dimension of an all-zero polynomial")
            ambient_dim = dims.pop() if len(dims) == 1 else -1
        if ambient_dim < 1 or any(k != ambient_dim for k in dims):
            raise ValueError("exponent vectors must all match the ambient dimension")
        self.ambient_dim = int(ambient_dim)
        self.terms = tuple(tuple((float(c), tuple(int(x) for x in e)) for c, e in coord) for coord in terms)
        if any(x < 0 for coord in self.terms for _, e in coord for x in e):
            raise ValueError("exponents must be nonnegative")
        self._coefs = [np.array([c for c, _ in coord]) for coord in self.terms]
        self._exps = [np.array([e for _, e in coord], dtype=np.int64).reshape(-1, self.ambient_dim)
                      for coord in self.terms]

    @property
    def output_dim(self) -> int:
        return len(self.terms)

    def __call__(self, x) -> np.ndarray:
        return eval_poly(self, x)

    def many(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.ambient_dim:
            raise ValueError(f"expected points in R^{self.ambient_dim}, got shape {X.shape}")
        out = np.zeros((X.shape[0], self.output_dim))
        for j, (c, E) in enumerate(zip(self._coefs, self._exps)):
            if c.size:
                mono = np.prod(X[:, None, :] ** E[None, :, :], axis=2)
                out[:, j] = mono @ c
        return out

    def to_json(self) -> list:
        return [[{"c": c, "e": list(e)} for c, e in coord] for coord in self.terms]

    @classmethod
    def from_json(cls, obj, ambient_dim: Optional[int] = None) -> "PolyFunc":
        if not isinstance(obj, list):
            raise ValueError("polynomial JSON must be a list of output coordinates")
        terms = [[(m["c"], m["e"]) for m in coord] for coord in obj]
        return cls(terms, ambient_dim)

    @classmethod
    def coordinates(cls, ambient_dim: int, *axes: int) -> "PolyFunc":
        """The projection x -> (x[axes[0]], x[axes[1]], ...)."""
        terms = []
        for a in axes:
            e = [0] * ambient_dim
            e[a] = 1
            terms.append([(1.0, tuple(e))])
        return cls(terms, ambient_dim)


class CallableFunc:
    """Wrap a plain Python function R^k -> R^d; not serializable."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], ambient_dim: int, output_dim: int):
        self.fn = fn
        self.ambient_dim = ambient_dim
        self.output_dim = output_dim

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(x, dtype=float)), dtype=float).reshape(self.output_dim)

    def many(self, X: np.ndarray) -> np.ndarray:
        return np.array([self(x) for x in np.asarray(X, dtype=float)]).reshape(-1, self.output_dim)

    def to_json(self):
        raise TypeError("callable coordinate functions cannot be serialized")


PointFunc = Union[PolyFunc, CallableFunc]


def eval_poly(g: PointFunc, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != g.ambient_dim:
        raise ValueError(f"dimension mismatch: function on R^{g.ambient_dim}, point of shape {x.shape}")
    return g.many(x[None, :])[0]


# ---------------------------------------------------------------------------
# batches of convex sets of one variant, for vectorized evaluation
# ---------------------------------------------------------------------------

@dataclass
class SetBatch:
    kind: str                      # singleton | ball | vpolytope
    points: np.ndarray             # (n, d) or (n, m, d) for vpolytope
    radius: float = 0.0

    def __len__(self) -> int:
        return self.points.shape[0]

    def item(self, i: int) -> ConvexSet:
        if self.kind == "singleton":
            return Singleton(self.points[i])
        if self.kind == "ball":
            return Ball(self.points[i], self.radius)
        return VPolytope(self.points[i])

    def negated(self) -> "SetBatch":
        return SetBatch(self.kind, -self.points, self.radius)

    def representatives(self) -> np.ndarray:
        return self.points.mean(axis=1) if self.kind == "vpolytope" else self.points


def _minkowski_batch(A: SetBatch, B: SetBatch) -> SetBatch:
    if A.kind == "singleton" and B.kind == "singleton":
        return SetBatch("singleton", A.points - B.points)
    if A.kind == "ball" and B.kind == "ball":
        return SetBatch("ball", A.points - B.points, A.radius + B.radius)
    if A.kind == "vpolytope" and B.kind == "vpolytope":
        n, m, d = A.points.shape
        k = B.points.shape[1]
        diffs = (A.points[:, :, None, :] - B.points[:, None, :, :]).reshape(n, m * k, d)
        return SetBatch("vpolytope", diffs)
    raise ValueError("unsupported Minkowski pair")


# ---------------------------------------------------------------------------
# set-valued maps
# ---------------------------------------------------------------------------

class SetValuedMap:
    """Base class; ``batch(X, AX)`` evaluates at many points at once.

    ``AX`` holds the coordinates of the involution images and is only used
    by derived maps such as :class:`MinkowskiDifferenceMap`.
    """

    ambient_dim: int
    output_dim: int

    def batch(self, X: np.ndarray, AX: Optional[np.ndarray] = None) -> SetBatch:
        raise NotImplementedError

    def __call__(self, x, ax=None) -> ConvexSet:
        return eval_map(self, x, ax)

    def to_json(self) -> dict:
        raise NotImplementedError


class SingletonOf(SetValuedMap):
    def __init__(self, g: PointFunc):
        self.g = g
        self.ambient_dim, self.output_dim = g.ambient_dim, g.output_dim

    def batch(self, X, AX=None):
        return SetBatch("singleton", self.g.many(X))

    def to_json(self):
        return {"kind": "singleton", "point": self.g.to_json()}


class BallOf(SetValuedMap):
    def __init__(self, center: PointFunc, radius: float):
        if not float(radius) >= 0:
            raise ValueError("radius must be >= 0")
        self.center = center
        self.radius = float(radius)
        self.ambient_dim, self.output_dim = center.ambient_dim, center.output_dim

    def batch(self, X, AX=None):
        return SetBatch("ball", self.center.many(X), self.radius)

    def to_json(self):
        return {"kind": "ball", "center": self.center.to_json(), "radius": self.radius}


class VPolytopeOf(SetValuedMap):
    def __init__(self, generators: Sequence[PointFunc]):
        generators = list(generators)
        if not generators:
            raise ValueError("need at least one generator")
        dims = {(g.ambient_dim, g.output_dim) for g in generators}
        if len(dims) != 1:
            raise ValueError("all generators must share ambient and output dimensions")
        self.generators = generators
        self.ambient_dim, self.output_dim = dims.pop()

    def batch(self, X, AX=None):
        return SetBatch("vpolytope", np.stack([g.many(X) for g in self.generators], axis=1))

    def to_json(self):
        return {"kind": "vpolytope", "generators": [g.to_json() for g in self.generators]}


class MinkowskiDifferenceMap(SetValuedMap):
    """x -> F(x) - F(A(x)); reflecting the value at x gives the value at A(x)."""

    def __init__(self, base: SetValuedMap):
        self.base = base
        self.ambient_dim, self.output_dim = base.ambient_dim, base.output_dim

    def batch(self, X, AX=None):
        if AX is None:
            raise ValueError("Minkowski difference map needs the involution images")
        return _minkowski_batch(self.base.batch(X), self.base.batch(AX))

    def to_json(self):
        return {"kind": "minkowski_difference", "base": self.base.to_json()}


def setmap_from_json(obj: dict, ambient_dim: Optional[int] = None) -> SetValuedMap:
    kind = obj.get("kind") if isinstance(obj, dict) else None
    if kind == "singleton":
        return SingletonOf(PolyFunc.from_json(obj["point"], ambient_dim))
    if kind == "ball":
        return BallOf(PolyFunc.from_json(obj["center"], ambient_dim), obj["radius"])
    if kind == "vpolytope":
        return VPolytopeOf([PolyFunc.from_json(g, ambient_dim) for g in obj["generators"]])
    if kind == "minkowski_difference":
        return MinkowskiDifferenceMap(setmap_from_json(obj["base"], ambient_dim))
    raise ValueError(f"unknown set-valued map kind {kind!r}")


def eval_map(F: SetValuedMap, x, ax=None) -> ConvexSet:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != F.ambient_dim:
        raise ValueError(f"dimension mismatch: map on R^{F.ambient_dim}, point of shape {x.shape}")
    AX = None if ax is None else np.asarray(ax, dtype=float)[None, :]
    return F.batch(x[None, :], AX).item(0)


# ---------------------------------------------------------------------------
# antipodal selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Selection:
    vertex: Optional[int]
    antipode: Optional[int]
    y: Optional[np.ndarray]
    residual: float        # max distance of y to F(x) and to -F(A(x))
    feasible: bool
    gap: float = 0.0       # distance between the Dykstra iterates when infeasible


def _select_generic(Sa: ConvexSet, Sb: ConvexSet, tol: float):
    res = dykstra(Sa, Sb, tol)
    if not res.feasible:
        return None, np.inf, res.gap
    y = res.b
    return y, max(distance(Sa, y), distance(Sb, y)), 0.0


def select_pairs(F: SetValuedMap, X: np.ndarray, AX: np.ndarray, tol: float = SELECT_TOL):
    """Vectorized antipodal selection over many (x, A(x)) pairs.

    For each pair finds y with y in F(x) and -y in F(A(x)), both up to
    ``tol``, by intersecting F(x) with the reflection of F(A(x)).

    Returns
    -------
    Y : array, shape (n, d)
        Selected points (NaN rows where infeasible).
    residual : array, shape (n,)
    feasible : bool array, shape (n,)
    gap : array, shape (n,)
        Final gap between the two sets' iterates, zero when feasible.
    """
    X = np.asarray(X, dtype=float)
    AX = np.asarray(AX, dtype=float)
    A = F.batch(X, AX)
    B = F.batch(AX, X).negated()
    n, d = X.shape[0], F.output_dim
    Y = np.full((n, d), np.nan)
    residual = np.full(n, np.inf)
    gap = np.zeros(n)
    feasible = np.zeros(n, dtype=bool)

    # the Dykstra start point; accepted as is when it already lies in both sets
    Z = 0.5 * (A.representatives() + B.representatives())
    if A.kind == "singleton":
        half = 0.5 * np.linalg.norm(A.points - B.points, axis=1)
        feasible = half <= tol
        Y[feasible] = Z[feasible]
        residual[feasible] = half[feasible]
        gap[~feasible] = 2.0 * half[~feasible]
        return Y, residual, feasible, gap
    if A.kind == "ball":
        da = np.maximum(0.0, np.linalg.norm(Z - A.points, axis=1) - A.radius)
        db = np.maximum(0.0, np.linalg.norm(Z - B.points, axis=1) - B.radius)
        quick = (da <= tol) & (db <= tol)
        Y[quick] = Z[quick]
        residual[quick] = np.maximum(da, db)[quick]
        feasible[quick] = True
        todo = np.flatnonzero(~quick)
    else:
        # identical generator lists (the exactly antipodal case): the
        # centroid lies in both hulls
        same = np.all(A.points == B.points, axis=(1, 2)) if A.points.shape == B.points.shape else np.zeros(n, bool)
        Y[same] = A.representatives()[same]
        residual[same] = 0.0
        feasible[same] = True
        todo = np.flatnonzero(~same)
    for i in todo:
        y, r, g = _select_generic(A.item(i), B.item(i), tol)
        if y is not None:
            Y[i], residual[i], feasible[i] = y, r, True
        else:
            gap[i] = g
    return Y, residual, feasible, gap


def antipodal_select(F: SetValuedMap, x, ax, tol: float = SELECT_TOL,
                     vertex: Optional[int] = None, antipode: Optional[int] = None) -> Selection:
    """Pick y in F(x) with -y in F(ax); ``feasible`` is False when none exists."""
    x = np.asarray(x, dtype=float)
    ax = np.asarray(ax, dtype=float)
    if x.shape != (F.ambient_dim,) or ax.shape != (F.ambient_dim,):
        raise ValueError("dimension mismatch")
    Y, r, ok, g = select_pairs(F, x[None, :], ax[None, :], tol)
    return Selection(vertex, antipode, Y[0] if ok[0] else None, float(r[0]), bool(ok[0]), float(g[0]))
