"""Build the bundled centrally symmetric genus-2 surface.

The surface is the boundary of a 5 x 3 x 1 slab of unit cubes with two
cubes removed, centered at the origin so that x -> -x maps the solid to
itself.  Each boundary square is coned from its center into 4 triangles,
which keeps the triangulation invariant under negation without having to
pick diagonals consistently.

Run once; the output is committed as src/butsolver/data/genus2.json.
"""
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))
from butsolver.simplicial import EquivariantComplex, complex_to_json, validate_complex  # noqa: E402

NX, NY = 5, 3
HOLES = {(1, 1), (3, 1)}


def solid_cells():
    return {(i, j) for i in range(NX) for j in range(NY) if (i, j) not in HOLES}


def boundary_squares(cells):
    """Boundary squares as 4-tuples of corner points (doubled coordinates)."""
    squares = []
    for (i, j) in sorted(cells):
        # cell spans [2i, 2i+2] x [2j, 2j+2] x [0, 2] in doubled units
        x0, y0 = 2 * i, 2 * j
        squares.append(((x0, y0, 2), (x0 + 2, y0, 2), (x0 + 2, y0 + 2, 2), (x0, y0 + 2, 2)))
        squares.append(((x0, y0, 0), (x0, y0 + 2, 0), (x0 + 2, y0 + 2, 0), (x0 + 2, y0, 0)))
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            if (i + di, j + dj) in cells:
                continue
            if di == 1:
                xs = x0 + 2
                squares.append(((xs, y0, 0), (xs, y0 + 2, 0), (xs, y0 + 2, 2), (xs, y0, 2)))
            elif di == -1:
                squares.append(((x0, y0, 0), (x0, y0, 2), (x0, y0 + 2, 2), (x0, y0 + 2, 0)))
            elif dj == 1:
                ys = y0 + 2
                squares.append(((x0, ys, 0), (x0, ys, 2), (x0 + 2, ys, 2), (x0 + 2, ys, 0)))
            else:
                squares.append(((x0, y0, 0), (x0 + 2, y0, 0), (x0 + 2, y0, 2), (x0, y0, 2)))
    return squares


def build():
    center = np.array([NX, NY, 1], dtype=float)   # doubled-unit center of the slab
    index = {}
    points = []

    def vid(p):
        if p not in index:
            index[p] = len(points)
            points.append(p)
        return index[p]

    triangles = []
    for sq in boundary_squares(solid_cells()):
        c = tuple(sum(q[k] for q in sq) / 4 for k in range(3))
        ci = vid(c)
        for a, b in zip(sq, sq[1:] + sq[:1]):
            triangles.append((vid(a), vid(b), ci))

    verts = (np.array(points, dtype=float) - center) / 2.0
    lookup = {tuple(v): i for i, v in enumerate(verts.tolist())}
    involution = [lookup[tuple((-v).tolist())] for v in verts]
    c = EquivariantComplex(3, 2, verts, np.array(triangles), np.array(involution))
    report = validate_complex(c)
    if not report.ok:
        raise SystemExit(f"asset invalid: {report.violations[:5]}")
    chi = c.euler_characteristic()
    if chi != -2:
        raise SystemExit(f"unexpected Euler characteristic {chi}")
    return c


if __name__ == "__main__":
    c = build()
    out = Path(__file__).resolve().parents[1] / "src" / "butsolver" / "data" / "genus2.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(complex_to_json(c)) + "\n")
    print(f"wrote {out}: {c.n_vertices} vertices, {c.n_simplices} triangles, chi={c.euler_characteristic()}")
