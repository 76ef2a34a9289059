"""Concrete BUT manifolds: cross-polytope spheres, polygon circles and a genus-2 surface."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from importlib import resources
from typing import Optional

import numpy as np

from .simplicial import (
    ComplexFormatError,
    EquivariantComplex,
    barycentric_subdivide,
    complex_from_json,
    load_complex,
    validate_complex,
)

MAX_SPHERE_DIM = 4
MAX_SUBDIVISIONS = 8
KINDS = ("sphere", "circle", "genus2", "file")


@dataclass(frozen=True)
class ManifoldSpec:
    kind: str
    dim: Optional[int] = None
    segments: Optional[int] = None
    path: Optional[str] = None
    subdivisions: int = 0
    reproject: bool = False
    max_subdivisions: int = MAX_SUBDIVISIONS

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown manifold kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "sphere" and self.dim is None:
            raise ValueError("sphere needs dim")
        if self.kind == "circle" and self.segments is None:
            raise ValueError("circle needs segments")
        if self.kind == "file" and not self.path:
            raise ValueError("file needs path")
        if not 0 <= self.subdivisions <= self.max_subdivisions:
            raise ValueError(f"subdivisions must lie in [0, {self.max_subdivisions}], got {self.subdivisions}")

    def with_subdivisions(self, k: int) -> "ManifoldSpec":
        return replace(self, subdivisions=k)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "subdivisions": self.subdivisions, "reproject": self.reproject}
        if self.kind == "sphere":
            out["dim"] = self.dim
        elif self.kind == "circle":
            out["segments"] = self.segments
        elif self.kind == "file":
            out["path"] = str(self.path)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "ManifoldSpec":
        return cls(kind=obj["kind"], dim=obj.get("dim"), segments=obj.get("segments"),
                   path=obj.get("path"), subdivisions=int(obj.get("subdivisions", 0)),
                   reproject=bool(obj.get("reproject", False)))


def build_sphere(d: int, max_dim: int = MAX_SPHERE_DIM) -> EquivariantComplex:
    """Boundary of the (d+1)-dimensional cross-polytope with v -> -v.

    Vertex ``2i`` is ``+e_i`` and vertex ``2i + 1`` is ``-e_i``.
    """
    if not 1 <= d <= max_dim:
        raise ValueError(f"sphere dimension must lie in [1, {max_dim}], got {d}")
    n = d + 1
    verts = np.zeros((2 * n, n))
    for i in range(n):
        verts[2 * i, i] = 1.0
        verts[2 * i + 1, i] = -1.0
    simplices = [[2 * i + s for i, s in enumerate(signs)]
                 for signs in itertools.product((0, 1), repeat=n)]
    involution = np.arange(2 * n) ^ 1
    return EquivariantComplex(n, d, verts, np.array(simplices), involution)


def build_circle(n: int) -> EquivariantComplex:
    """Regular 2n-gon on the unit circle, vertex j at angle pi*j/n."""
    if n < 2:
        raise ValueError(f"circle needs n >= 2, got {n}")
    m = 2 * n
    ang = np.pi * np.arange(n) / n
    half = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    verts = np.concatenate([half, -half])   # exact negation for the antipodes
    edges = np.stack([np.arange(m), (np.arange(m) + 1) % m], axis=1)
    involution = (np.arange(m) + n) % m
    return EquivariantComplex(2, 1, verts, edges, involution)


def build_genus2() -> EquivariantComplex:
    """The bundled centrally symmetric genus-2 surface in R^3."""
    text = resources.files("butsolver").joinpath("data/genus2.json").read_text()
    c = complex_from_json(json.loads(text))
    report = validate_complex(c)
    if not report.ok:
        raise ComplexFormatError(f"bundled genus-2 asset is invalid: {report.violations[:3]}")
    return c


def _reproject(c: EquivariantComplex) -> EquivariantComplex:
    V = c.vertices / np.linalg.norm(c.vertices, axis=1, keepdims=True)
    return EquivariantComplex(c.ambient_dim, c.manifold_dim, V, c.simplices, c.involution)


def base_complex(spec: ManifoldSpec) -> EquivariantComplex:
    if spec.kind == "sphere":
        return build_sphere(spec.dim)
    if spec.kind == "circle":
        return build_circle(spec.segments)
    if spec.kind == "genus2":
        return build_genus2()
    c = load_complex(spec.path)
    report = validate_complex(c)
    if not report.ok:
        v = report.violations[0]
        raise ComplexFormatError(f"{spec.path}: invalid complex ({v.kind} at {list(v.indices)})")
    return c


def refinements(spec: ManifoldSpec):
    """Yield the complexes for 0, 1, ..., spec.subdivisions subdivision rounds.

    Reprojection onto the unit sphere happens after every round, and only
    for the sphere and circle kinds.
    """
    c = base_complex(spec)
    project = spec.reproject and spec.kind in ("sphere", "circle")
    yield c
    for _ in range(spec.subdivisions):
        c = barycentric_subdivide(c, check=False)
        if project:
            c = _reproject(c)
        yield c


def realize(spec: ManifoldSpec) -> EquivariantComplex:
    c = None
    for c in refinements(spec):
        pass
    return c
