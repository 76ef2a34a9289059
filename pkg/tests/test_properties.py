"""Randomized invariants; each draws a seed and builds its case from a numpy Generator."""
import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from butsolver.convex import (
    Ball,
    Singleton,
    VPolytope,
    barycentric_coordinates,
    distance,
    intersect_point,
    minkowski_difference,
    project,
    reflect,
    same_set,
    support,
)
from butsolver.manifolds import build_circle, build_sphere
from butsolver.plmap import PLMap, build_antipodal_plmap, locate_zeros
from butsolver.setmap import PolyFunc, SingletonOf
from butsolver.simplicial import barycentric_subdivide, mesh_norm, validate_complex

from conftest import odd_jitter, relabel

seeds = st.integers(min_value=0, max_value=2**32 - 1)
EXAMPLES = settings(max_examples=100, deadline=None)


def random_complex(rng):
    kind = rng.integers(3)
    if kind == 0:
        c = build_circle(int(rng.integers(2, 7)))
    elif kind == 1:
        c = build_sphere(2)
    else:
        c = build_sphere(3)
    return relabel(odd_jitter(c, rng, 0.1), rng)


def random_set(rng, d):
    kind = rng.integers(3)
    if kind == 0:
        return Singleton(rng.normal(size=d))
    if kind == 1:
        return Ball(rng.normal(size=d), float(rng.uniform(0.05, 2.0)))
    return VPolytope(rng.normal(size=(int(rng.integers(1, 7)), d)) + rng.normal(size=d))


def unit(rng, d):
    u = rng.normal(size=d)
    return u / np.linalg.norm(u)


@EXAMPLES
@given(seeds)
def test_subdivision_keeps_involution_free(seed):
    rng = np.random.default_rng(seed)
    c = random_complex(rng)
    s = barycentric_subdivide(c)
    n = np.arange(s.n_vertices)
    assert np.all(s.involution[s.involution] == n)
    assert np.all(s.involution != n)
    assert validate_complex(s).ok


@EXAMPLES
@given(seeds)
def test_mesh_decay_factor(seed):
    rng = np.random.default_rng(seed)
    c = random_complex(rng)
    d = c.manifold_dim
    assert mesh_norm(barycentric_subdivide(c)) <= d / (d + 1) * mesh_norm(c) * (1 + 1e-12)


@EXAMPLES
@given(seeds)
def test_antipodal_zeros_come_in_pairs(seed):
    rng = np.random.default_rng(seed)
    c = odd_jitter(barycentric_subdivide(build_sphere(2)), rng, 0.05)
    M = rng.normal(size=(3, 2))
    g = PolyFunc([[(M[j, i], tuple(int(k == j) for k in range(3))) for j in range(3)] for i in range(2)])
    f = build_antipodal_plmap(c, SingletonOf(g))
    assert f.is_antipodal()
    pts = np.array([z.point for z in locate_zeros(f)])
    assert len(pts) % 2 == 0
    for p in pts:
        assert np.min(np.linalg.norm(pts + p, axis=1)) <= 1e-9


@EXAMPLES
@given(seeds)
def test_random_odd_values_pair_up(seed):
    rng = np.random.default_rng(seed)
    c = odd_jitter(build_circle(int(rng.integers(3, 12))), rng, 0.05)
    vals = rng.normal(size=(c.n_vertices, 1))
    half = np.flatnonzero(np.arange(c.n_vertices) < c.involution)
    vals[c.involution[half]] = -vals[half]
    zeros = locate_zeros(PLMap(c, vals))
    assert len(zeros) % 2 == 0


@EXAMPLES
@given(seeds)
def test_barycentric_reconstruction(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    P = rng.normal(size=(d + 1, d))
    target = rng.normal(size=d)
    sol = barycentric_coordinates(P, target)
    if not sol.degenerate:
        assert np.linalg.norm(sol.weights @ P - target) <= 1e-9
        assert abs(sol.weights.sum() - 1) <= 1e-9


@EXAMPLES
@given(seeds)
def test_minkowski_support_additive(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    A, B = random_set(rng, d), random_set(rng, d)
    if {type(A), type(B)} == {Ball, VPolytope}:
        B = Ball(rng.normal(size=d), 0.5) if isinstance(A, Ball) else VPolytope(rng.normal(size=(3, d)))
    D = minkowski_difference(A, B)
    for _ in range(5):
        u = unit(rng, d)
        assert abs(support(D, u) - (support(A, u) + support(B, -u))) <= 1e-9


@EXAMPLES
@given(seeds)
def test_reflect_involutive(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    S = random_set(rng, d)
    assert same_set(reflect(reflect(S)), S)
    u = unit(rng, d)
    assert abs(support(reflect(S), u) - support(S, -u)) <= 1e-12


@EXAMPLES
@given(seeds)
def test_dykstra_membership(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    common = rng.normal(size=d)
    tol = 1e-8

    def containing(p):
        kind = rng.integers(2)
        if kind == 0:
            return Ball(p + rng.uniform(0, 0.5) * unit(rng, d), float(rng.uniform(0.5, 1.5)))
        G = rng.normal(size=(int(rng.integers(d + 1, d + 5)), d))
        w = rng.dirichlet(np.ones(len(G)))
        return VPolytope(G - w @ G + p)

    A, B = containing(common), containing(common)
    y = intersect_point(A, B, tol=tol)
    assert y is not None
    assert distance(A, y) <= tol and distance(B, y) <= tol


@EXAMPLES
@given(seeds)
def test_project_idempotent_nonexpansive(seed):
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 4))
    S = random_set(rng, d)
    p, q = 2 * rng.normal(size=d), 2 * rng.normal(size=d)
    pp, pq = project(S, p), project(S, q)
    assert np.linalg.norm(project(S, pp) - pp) <= 1e-9
    assert np.linalg.norm(pp - pq) <= np.linalg.norm(p - q) + 1e-9
