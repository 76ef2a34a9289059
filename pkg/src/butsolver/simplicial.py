"""Simplicial complexes carrying a free simplicial involution.

An :class:`EquivariantComplex` is a geometric pure simplicial complex
embedded in R^k together with a vertex permutation ``involution`` that
plays the role of the free involution A.  The complex is a closed
pseudomanifold; the link condition in dimension >= 3 is not checked.

Everything here is vectorized over simplices because repeated barycentric
subdivision grows the simplex count by a factor (d+1)! per round.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

DEGENERACY_RTOL = 1e-12


class ComplexFormatError(ValueError):
    """Raised when a complex file cannot be parsed."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class EquivariantComplex:
    ambient_dim: int
    manifold_dim: int
    vertices: np.ndarray       # (V, ambient_dim) float
    simplices: np.ndarray      # (N, manifold_dim + 1) int
    involution: np.ndarray     # (V,) int

    def __post_init__(self):
        k, d = int(self.ambient_dim), int(self.manifold_dim)
        if k < 1 or d < 1:
            raise ValueError("ambient_dim and manifold_dim must be >= 1")
        V = np.asarray(self.vertices, dtype=float)
        if V.ndim != 2 or V.shape[1] != k:
            raise ValueError(f"vertices must have shape (n, {k}), got {V.shape}")
        S = np.asarray(self.simplices, dtype=np.int64)
        if S.size == 0:
            S = S.reshape(0, d + 1)
        if S.ndim != 2 or S.shape[1] != d + 1:
            raise ValueError(f"simplices must be ({d + 1})-tuples, got shape {S.shape}")
        if S.size and (S.min() < 0 or S.max() >= V.shape[0]):
            raise ValueError("simplex vertex index out of range")
        inv = np.asarray(self.involution, dtype=np.int64)
        if inv.shape != (V.shape[0],):
            raise ValueError(f"involution must list one image per vertex ({V.shape[0]})")
        if inv.size and (inv.min() < 0 or inv.max() >= V.shape[0]):
            raise ValueError("involution index out of range")
        object.__setattr__(self, "ambient_dim", k)
        object.__setattr__(self, "manifold_dim", d)
        object.__setattr__(self, "vertices", _frozen(V))
        object.__setattr__(self, "simplices", _frozen(S))
        object.__setattr__(self, "involution", _frozen(inv))

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_simplices(self) -> int:
        return self.simplices.shape[0]

    def is_odd_embedding(self) -> bool:
        """True when the involution acts on coordinates as exact negation."""
        return bool(np.array_equal(self.vertices[self.involution], -self.vertices))

    def euler_characteristic(self) -> int:
        """Alternating count of faces of every dimension."""
        chi = 0
        S = np.sort(self.simplices, axis=1)
        for r in range(1, self.manifold_dim + 2):
            faces = np.concatenate([S[:, list(c)] for c in itertools.combinations(range(S.shape[1]), r)])
            chi += (-1) ** (r - 1) * len(np.unique(_row_keys(faces, self.n_vertices)))
        return chi


# ---------------------------------------------------------------------------
# row keys: encode sorted index rows into hashable/sortable scalars
# ---------------------------------------------------------------------------

def _row_keys(rows: np.ndarray, n: int) -> np.ndarray:
    """One scalar key per row of nonnegative-or-(-1) indices below n."""
    rows = np.ascontiguousarray(rows, dtype=np.int64)
    width = rows.shape[1]
    base = n + 1
    if width * math.log2(base) < 62:
        keys = np.zeros(rows.shape[0], dtype=np.int64)
        for j in range(width):
            keys = keys * base + (rows[:, j] + 1)
        return keys
    return rows.view(np.dtype((np.void, 8 * width))).ravel()


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

VIOLATION_KINDS = (
    "involution-not-involutive",
    "fixed-point",
    "non-simplicial",
    "boundary-face",
    "overused-face",
    "degenerate-simplex",
)


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: Tuple[int, ...]


@dataclass(frozen=True)
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def to_json(self) -> dict:
        return {"valid": self.ok,
                "violations": [{"kind": v.kind, "indices": list(v.indices)} for v in self.violations]}


def _simplex_diameters(c: EquivariantComplex) -> np.ndarray:
    S, V = c.simplices, c.vertices
    diam = np.zeros(S.shape[0])
    for i, j in itertools.combinations(range(S.shape[1]), 2):
        diam = np.maximum(diam, np.linalg.norm(V[S[:, i]] - V[S[:, j]], axis=1))
    return diam


def validate_complex(c: EquivariantComplex) -> ValidationReport:
    """List every violated invariant; an empty list means the complex is valid."""
    out: List[Violation] = []
    inv = c.involution
    idx = np.arange(c.n_vertices)
    for v in np.flatnonzero(inv[inv] != idx):
        out.append(Violation("involution-not-involutive", (int(v),)))
    for v in np.flatnonzero(inv == idx):
        out.append(Violation("fixed-point", (int(v),)))

    S = np.sort(c.simplices, axis=1)
    n = c.n_vertices
    keys = _row_keys(S, n)
    img_keys = _row_keys(np.sort(inv[S], axis=1), n)
    for s in np.flatnonzero(~np.isin(img_keys, keys)):
        out.append(Violation("non-simplicial", (int(s),)))

    d = c.manifold_dim
    cols = list(itertools.combinations(range(d + 1), d))
    faces = np.concatenate([S[:, list(cc)] for cc in cols])
    fkeys = _row_keys(faces, n)
    uniq, first, counts = np.unique(fkeys, return_index=True, return_counts=True)
    for u in np.flatnonzero(counts == 1):
        out.append(Violation("boundary-face", tuple(int(x) for x in faces[first[u]])))
    for u in np.flatnonzero(counts > 2):
        out.append(Violation("overused-face", tuple(int(x) for x in faces[first[u]])))

    # affine independence of embedded vertices
    if S.shape[0]:
        V = c.vertices[c.simplices]
        edges = V[:, 1:, :] - V[:, :1, :]
        sv = np.linalg.svd(edges, compute_uv=False)
        smin = sv[:, -1] if d <= c.ambient_dim else np.zeros(S.shape[0])
        diam = _simplex_diameters(c)
        repeated = np.any(S[:, 1:] == S[:, :-1], axis=1)
        bad = repeated | (smin <= DEGENERACY_RTOL * diam) | (diam == 0)
        for s in np.flatnonzero(bad):
            out.append(Violation("degenerate-simplex", (int(s),)))
    return ValidationReport(out)


# ---------------------------------------------------------------------------
# measurement and pairing
# ---------------------------------------------------------------------------

def mesh_norm(c: EquivariantComplex) -> float:
    """Diameter of the largest top simplex."""
    if c.n_simplices == 0:
        raise ValueError("empty complex")
    return float(_simplex_diameters(c).max())


@dataclass(frozen=True)
class VertexPairing:
    pairs: np.ndarray    # (V/2, 2): representative, antipode

    def __len__(self) -> int:
        return self.pairs.shape[0]

    @property
    def representatives(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def antipodes(self) -> np.ndarray:
        return self.pairs[:, 1]


def vertex_pairing(c: EquivariantComplex) -> VertexPairing:
    """Partition the vertices into (representative, antipode) pairs.

    The representative is the vertex with the lexicographically smaller
    coordinate vector, ties going to the smaller index.  Pairs are listed
    in order of their smaller vertex index.
    """
    inv = c.involution
    idx = np.arange(c.n_vertices)
    if np.any(inv[inv] != idx) or np.any(inv == idx):
        raise ValueError("involution is not a free involution")
    # lexsort is stable, so equal coordinates fall back to index order
    order = np.lexsort(c.vertices.T[::-1])
    rank = np.empty_like(order)
    rank[order] = idx
    rep = idx[rank < rank[inv]]
    pairs = np.stack([rep, inv[rep]], axis=1)
    pairs = pairs[np.argsort(pairs.min(axis=1), kind="stable")]
    return VertexPairing(pairs)


# ---------------------------------------------------------------------------
# barycentric subdivision
# ---------------------------------------------------------------------------

def _chain_masks(d: int) -> np.ndarray:
    """For each permutation of d+1 positions, the bitmasks of its prefix chain."""
    perms = list(itertools.permutations(range(d + 1)))
    masks = np.zeros((len(perms), d + 1), dtype=np.int64)
    for p, perm in enumerate(perms):
        m = 0
        for j, pos in enumerate(perm):
            m |= 1 << pos
            masks[p, j] = m
    return masks


def barycentric_subdivide(c: EquivariantComplex, check: bool = True) -> EquivariantComplex:
    """Standard barycentric subdivision with the induced involution.

    New vertices sit at the barycenters of all faces; the barycenter of a
    face is sent to the barycenter of its image face.  Original vertices
    keep their indices.  When the input embedding is exactly odd the
    output is forced to stay exactly odd, so sampled odd maps remain
    exactly antipodal.
    """
    if check and not validate_complex(c).ok:
        raise ValueError("invalid complex")
    d = c.manifold_dim
    n = c.n_vertices
    S = np.sort(c.simplices, axis=1)
    N = S.shape[0]
    nmask = (1 << (d + 1)) - 1

    # faces[:, m-1] is the padded sorted vertex row of the face with bitmask m
    face_rows = np.full((N, nmask, d + 1), -1, dtype=np.int64)
    sizes = np.zeros(nmask, dtype=np.int64)
    for m in range(1, nmask + 1):
        bits = [j for j in range(d + 1) if m >> j & 1]
        sizes[m - 1] = len(bits)
        face_rows[:, m - 1, d + 1 - len(bits):] = S[:, bits]
    flat_rows = face_rows.reshape(-1, d + 1)
    keys = _row_keys(flat_rows, n)
    uniq, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
    inverse = inverse.reshape(N, nmask)
    uniq_rows = flat_rows[first]
    uniq_size = np.count_nonzero(uniq_rows >= 0, axis=1)

    # vertex ids: original ids for singleton faces, fresh ids after them
    is_vertex = uniq_size == 1
    new_id = np.empty(len(uniq), dtype=np.int64)
    new_id[is_vertex] = uniq_rows[is_vertex, -1]
    n_new = int((~is_vertex).sum())
    new_id[~is_vertex] = n + np.arange(n_new)
    total = n + n_new

    coords = np.zeros((total, c.ambient_dim))
    coords[:n] = c.vertices
    inv_new = np.empty(total, dtype=np.int64)
    inv_new[:n] = c.involution
    hi = np.flatnonzero(~is_vertex)
    hi_rows = uniq_rows[hi]
    for s in np.unique(uniq_size[hi]):
        sel = hi[uniq_size[hi] == s]
        rows = uniq_rows[sel][:, d + 1 - s:]
        coords[new_id[sel]] = c.vertices[rows].mean(axis=1)
    img = np.where(hi_rows >= 0, c.involution[np.maximum(hi_rows, 0)], -1)
    img = np.sort(img, axis=1)
    pos = np.searchsorted(uniq, _row_keys(img, n))
    inv_new[new_id[hi]] = new_id[pos]

    if c.is_odd_embedding():
        rep = np.arange(total) < inv_new
        coords[inv_new[rep]] = -coords[rep]

    masks = _chain_masks(d)
    new_simplices = new_id[inverse[:, masks - 1]].reshape(-1, d + 1)
    return EquivariantComplex(c.ambient_dim, d, coords, new_simplices, inv_new)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def complex_to_json(c: EquivariantComplex) -> dict:
    return {
        "ambient_dim": c.ambient_dim,
        "manifold_dim": c.manifold_dim,
        "vertices": c.vertices.tolist(),
        "simplices": c.simplices.tolist(),
        "involution": c.involution.tolist(),
    }


def complex_from_json(obj: dict) -> EquivariantComplex:
    if not isinstance(obj, dict):
        raise ComplexFormatError("complex JSON must be an object")
    for name in ("ambient_dim", "manifold_dim", "vertices", "simplices", "involution"):
        if name not in obj:
            raise ComplexFormatError(f"missing field {name!r}")
    try:
        return EquivariantComplex(
            ambient_dim=int(obj["ambient_dim"]),
            manifold_dim=int(obj["manifold_dim"]),
            vertices=np.asarray(obj["vertices"], dtype=float),
            simplices=np.asarray(obj["simplices"], dtype=np.int64),
            involution=np.asarray(obj["involution"], dtype=np.int64),
        )
    except (TypeError, ValueError) as exc:
        raise ComplexFormatError(f"bad complex data: {exc}") from exc


def load_complex(path) -> EquivariantComplex:
    with open(path) as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ComplexFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        return complex_from_json(obj)
    except ComplexFormatError as exc:
        raise ComplexFormatError(f"{path}: {exc}") from exc
