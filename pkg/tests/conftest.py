import numpy as np
import pytest
from hypothesis import settings

from butsolver.manifolds import build_circle, build_sphere
from butsolver.setmap import PolyFunc

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

ACCEPTANCE_RESULTS = []


def record_criterion(number, description, ok, detail=""):
    ACCEPTANCE_RESULTS.append((number, description, bool(ok), detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: (r[0], r[1])):
        status = "PASS" if ok else "FAIL"
        extra = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"{status} criterion {number}: {description}{extra}")


@pytest.fixture
def octahedron():
    return build_sphere(2)


@pytest.fixture
def square():
    return build_circle(2)


@pytest.fixture
def xy():
    """(x1, x2) on R^3."""
    return PolyFunc.coordinates(3, 0, 1)


def odd_jitter(c, rng, scale=0.05):
    """Copy of ``c`` with vertices perturbed while keeping v -> -v exact."""
    from butsolver.simplicial import EquivariantComplex, vertex_pairing

    V = c.vertices.copy()
    pairs = vertex_pairing(c).pairs
    V[pairs[:, 0]] += scale * rng.normal(size=(len(pairs), c.ambient_dim))
    V[pairs[:, 1]] = -V[pairs[:, 0]]
    return EquivariantComplex(c.ambient_dim, c.manifold_dim, V, c.simplices, c.involution)


def relabel(c, rng):
    """Same complex with vertex labels shuffled and simplices reordered."""
    from butsolver.simplicial import EquivariantComplex

    n = c.n_vertices
    perm = rng.permutation(n)          # old -> new
    V = np.empty_like(c.vertices)
    V[perm] = c.vertices
    inv = np.empty(n, dtype=np.int64)
    inv[perm] = perm[c.involution]
    S = perm[c.simplices]
    S = S[rng.permutation(len(S))]
    S = np.array([rng.permutation(row) for row in S])
    return EquivariantComplex(c.ambient_dim, c.manifold_dim, V, S, inv)
