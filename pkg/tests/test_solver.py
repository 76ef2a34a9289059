import numpy as np
import pytest

from butsolver.checker import check_report
from butsolver.convex import distance
from butsolver.manifolds import ManifoldSpec
from butsolver.plmap import HypothesisViolation
from butsolver.setmap import BallOf, PolyFunc, SingletonOf, VPolytopeOf, eval_map
from butsolver.solver import (
    NoZeroFound,
    SolveOptions,
    extract_common_point,
    solve_coincidence,
    solve_theorem,
)

S2 = ManifoldSpec("sphere", dim=2)
POLES = np.array([[0, 0, 1.0], [0, 0, -1.0]])


def pole_distance(x):
    return float(np.min(np.linalg.norm(POLES - x, axis=1)))


class TestTheorem:

    def test_singleton_pole(self, xy):
        rep = solve_theorem(S2, SingletonOf(xy), SolveOptions(mesh_target=0.2))
        assert rep.complete
        assert pole_distance(rep.x0) <= 0.2
        assert check_report(rep.to_json()) == []

    def test_witnesses_in_images(self, xy):
        F = BallOf(xy, 0.3)
        rep = solve_theorem(S2, F, SolveOptions(mesh_target=0.2))
        for v, y in zip(rep.vertices, rep.witnesses):
            assert distance(eval_map(F, v), y) <= 1e-8
        assert np.linalg.norm(rep.weights @ rep.witnesses) <= 1e-8

    def test_circle(self):
        spec = ManifoldSpec("circle", segments=16)
        rep = solve_theorem(spec, SingletonOf(PolyFunc.coordinates(2, 0)), SolveOptions(mesh_target=0.2))
        # the 32-gon already has mesh 2 sin(pi/32) < 0.2, so no subdivision is needed
        assert rep.complete and len(rep.trace) == 1
        assert abs(rep.x0[0]) <= 0.2
        assert check_report(rep.to_json()) == []

    def test_linear_interior_zero_bound(self):
        # g(x) = Mx is odd; on the chosen simplex |g(x0)| <= |M| * radius
        M = np.array([[1.0, 0.3, 0.2], [-0.4, 1.0, 0.5]])
        g = PolyFunc([[(M[i, j], tuple(int(k == j) for k in range(3))) for j in range(3)] for i in range(2)])
        rep = solve_theorem(S2, SingletonOf(g), SolveOptions(mesh_target=0.15))
        lip = np.linalg.norm(M, 2)
        # the PL value at x0 is zero, and g differs from it by at most lip * radius
        assert np.linalg.norm(M @ rep.x0) <= lip * rep.locality_radius + 1e-12
        assert check_report(rep.to_json()) == []

    def test_radius_monotone_in_target(self, xy):
        radii = [solve_theorem(S2, SingletonOf(xy), SolveOptions(mesh_target=t)).locality_radius
                 for t in (0.8, 0.4, 0.2, 0.1)]
        assert all(b <= a for a, b in zip(radii, radii[1:]))

    def test_incomplete_when_rounds_run_out(self, xy):
        rep = solve_theorem(S2, SingletonOf(xy), SolveOptions(mesh_target=0.01, max_rounds=1))
        assert not rep.complete
        assert len(rep.trace) == 2
        assert check_report(rep.to_json()) == []

    def test_violation(self):
        g = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 0))], [(1.0, (0, 1, 0))]])
        with pytest.raises(HypothesisViolation):
            solve_theorem(S2, SingletonOf(g))

    def test_no_zero_message(self):
        assert "3 subdivisions" in str(NoZeroFound(0, 3))

    def test_options_validation(self):
        with pytest.raises(ValueError):
            SolveOptions(mesh_target=0)
        with pytest.raises(ValueError):
            SolveOptions(max_rounds=9)
        with pytest.raises(ValueError):
            SolveOptions(selection_tol=0)

    def test_trace_records_rounds(self, xy):
        rep = solve_theorem(S2, SingletonOf(xy), SolveOptions(mesh_target=0.3))
        assert [t["round"] for t in rep.trace] == list(range(len(rep.trace)))
        assert rep.to_json()["manifold"]["subdivisions"] == rep.trace[-1]["subdivisions"]


class TestCoincidence:

    def test_shifted_singleton(self):
        g = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 2))], [(1.0, (0, 1, 0))]])
        rep = solve_coincidence(S2, SingletonOf(g), SolveOptions(mesh_target=0.2))
        assert pole_distance(rep.x0) <= 0.2
        assert rep.gap <= 1e-6
        assert check_report(rep.to_json()) == []

    def test_polytope_map(self, xy):
        shifted = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 0))], [(1.0, (0, 1, 0))]])
        rep = solve_coincidence(S2, VPolytopeOf([xy, shifted]), SolveOptions(mesh_target=0.3))
        assert rep.gap <= rep.gap_bound
        assert check_report(rep.to_json()) == []

    def test_ax0_is_weighted_antipodes(self, xy):
        rep = solve_coincidence(S2, BallOf(xy, 0.1), SolveOptions(mesh_target=0.3))
        np.testing.assert_allclose(rep.ax0, rep.theorem.weights @ rep.theorem.antipodes)


class TestExtract:

    def test_balls_overlap(self):
        eps = 0.05
        F = BallOf(PolyFunc([[(1.0, (1, 0)), ], [(1.0, (0, 1))]]), 1.0)
        x0 = np.array([1 - eps, 0.0])
        a, b, gap = extract_common_point(F, x0, -x0)
        np.testing.assert_array_equal(a, b)
        assert gap <= 1e-8

    def test_singletons_apart(self):
        F = SingletonOf(PolyFunc([[(1.0, (1, 0))], [(1.0, (0, 1))]]))
        a, b, gap = extract_common_point(F, np.array([0.05, 0.0]), np.array([-0.05, 0.0]))
        assert gap == pytest.approx(0.1)
        np.testing.assert_allclose(a, [0.05, 0])
        np.testing.assert_allclose(b, [-0.05, 0])
