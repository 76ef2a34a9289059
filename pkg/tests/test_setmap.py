import json

import numpy as np
import pytest

from butsolver.convex import Ball, Singleton, VPolytope, contains, reflect, same_set, support
from butsolver.setmap import (
    BallOf,
    CallableFunc,
    MinkowskiDifferenceMap,
    PolyFunc,
    SingletonOf,
    VPolytopeOf,
    antipodal_select,
    eval_map,
    eval_poly,
    select_pairs,
    setmap_from_json,
)

X1_PLUS_X3SQ = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 2))], [(1.0, (0, 1, 0))]])
SHIFTED = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 0))], [(1.0, (0, 1, 0))]])


class TestPoly:

    def test_projection(self, xy):
        np.testing.assert_array_equal(eval_poly(xy, [0.6, 0.8, 0]), [0.6, 0.8])

    def test_square_term(self):
        np.testing.assert_array_equal(eval_poly(X1_PLUS_X3SQ, [0, 0, 1]), [1, 0])

    def test_zero_polynomial(self):
        z = PolyFunc([[], []], ambient_dim=3)
        np.testing.assert_array_equal(eval_poly(z, [0.3, -2, 5]), [0, 0])

    def test_dimension_mismatch(self, xy):
        with pytest.raises(ValueError):
            eval_poly(xy, [1, 2])

    def test_json_round_trip(self):
        obj = X1_PLUS_X3SQ.to_json()
        assert obj == [[{"c": 1.0, "e": [1, 0, 0]}, {"c": 1.0, "e": [0, 0, 2]}], [{"c": 1.0, "e": [0, 1, 0]}]]
        g = PolyFunc.from_json(json.loads(json.dumps(obj)))
        x = np.array([0.2, -0.4, 0.7])
        np.testing.assert_array_equal(g(x), X1_PLUS_X3SQ(x))

    def test_many_matches_pointwise(self):
        X = np.random.default_rng(3).normal(size=(20, 3))
        M = X1_PLUS_X3SQ.many(X)
        for x, row in zip(X, M):
            assert row.tolist() == pytest.approx([x[0] + x[2] ** 2, x[1]], abs=1e-15)

    def test_callable(self):
        g = CallableFunc(lambda x: [x[0] * x[1], x[2]], 3, 2)
        np.testing.assert_allclose(eval_poly(g, [2, 3, 4]), [6, 4])


class TestEvalMap:

    def test_ball(self, xy):
        S = eval_map(BallOf(xy, 0.3), [0, 0, 1])
        assert same_set(S, Ball([0, 0], 0.3))

    def test_singleton(self, xy):
        assert same_set(eval_map(SingletonOf(xy), [0.6, 0.8, 0]), Singleton([0.6, 0.8]))

    def test_segment(self, xy):
        shifted = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 0))], [(1.0, (0, 1, 0))]])
        S = eval_map(VPolytopeOf([xy, shifted]), [0, 0, 1])
        assert same_set(S, VPolytope([(0, 0), (1, 0)]))

    def test_dimension_mismatch(self, xy):
        with pytest.raises(ValueError):
            eval_map(SingletonOf(xy), [0, 0])

    def test_difference_needs_images(self, xy):
        with pytest.raises(ValueError):
            eval_map(MinkowskiDifferenceMap(SingletonOf(xy)), [0, 0, 1])

    @pytest.mark.parametrize("kind", ["singleton", "ball", "vpolytope"])
    def test_json_round_trip(self, xy, kind):
        F = {"singleton": SingletonOf(xy), "ball": BallOf(xy, 0.3),
             "vpolytope": VPolytopeOf([xy, SHIFTED])}[kind]
        G = setmap_from_json(json.loads(json.dumps(F.to_json())))
        x = np.array([0.1, 0.2, 0.3])
        assert same_set(eval_map(F, x), eval_map(G, x))

    def test_difference_is_antipodal(self, xy):
        rng = np.random.default_rng(5)
        for base in (SingletonOf(X1_PLUS_X3SQ), BallOf(X1_PLUS_X3SQ, 0.2), VPolytopeOf([xy, SHIFTED])):
            Fbar = MinkowskiDifferenceMap(base)
            for _ in range(5):
                x = rng.normal(size=3)
                ax = -x
                here = reflect(eval_map(Fbar, x, ax))
                there = eval_map(Fbar, ax, x)
                for _ in range(20):
                    u = rng.normal(size=2)
                    u /= np.linalg.norm(u)
                    assert support(here, u) == pytest.approx(support(there, u), abs=1e-9)


class TestSelect:

    def test_antipodal_singleton(self, xy):
        x = np.array([0.6, 0.8, 0.0])
        sel = antipodal_select(SingletonOf(xy), x, -x)
        assert sel.feasible and sel.residual == 0
        np.testing.assert_array_equal(sel.y, [0.6, 0.8])

    def test_ball_picks_center(self, xy):
        rng = np.random.default_rng(11)
        F = BallOf(xy, 0.3)
        for _ in range(20):
            x = rng.normal(size=3)
            x /= np.linalg.norm(x)
            sel = antipodal_select(F, x, -x)
            assert sel.feasible and sel.residual == 0
            np.testing.assert_array_equal(sel.y, x[:2])
            assert contains(eval_map(F, x), sel.y, 0) and contains(eval_map(F, -x), -sel.y, 0)

    def test_non_antipodal_singleton_infeasible(self):
        x = np.array([0.6, 0.8, 0.0])
        sel = antipodal_select(SingletonOf(SHIFTED), x, -x)
        assert not sel.feasible
        # g(x) + g(-x) = (2, 0)
        assert sel.gap == pytest.approx(2.0)

    def test_shifted_balls_need_dykstra(self):
        # F(x) = Ball((x1 + 0.5, x2), 1): the centers no longer mirror, but the sets overlap
        g = PolyFunc([[(1.0, (1, 0, 0)), (0.5, (0, 0, 0))], [(1.0, (0, 1, 0))]])
        F = BallOf(g, 1.0)
        x = np.array([0.0, 0.6, 0.8])
        sel = antipodal_select(F, x, -x, tol=1e-9)
        assert sel.feasible
        assert contains(eval_map(F, x), sel.y, 1e-9)
        assert contains(eval_map(F, -x), -sel.y, 1e-9)

    def test_polytope_selection(self, xy):
        F = VPolytopeOf([xy, SHIFTED])
        x = np.array([0.0, 0.6, 0.8])
        sel = antipodal_select(F, x, -x, tol=1e-9)
        assert sel.feasible
        assert contains(eval_map(F, x), sel.y, 1e-9)
        assert contains(eval_map(F, -x), -sel.y, 1e-9)

    def test_batch_matches_single(self, xy):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(10, 3))
        F = BallOf(PolyFunc([[(1.0, (1, 0, 0)), (0.5, (0, 0, 0))], [(1.0, (0, 1, 0))]]), 1.0)
        Y, r, ok, _ = select_pairs(F, X, -X, 1e-9)
        for i in range(10):
            s = antipodal_select(F, X[i], -X[i], 1e-9)
            assert s.feasible == ok[i]
            if s.feasible:
                np.testing.assert_array_equal(s.y, Y[i])
