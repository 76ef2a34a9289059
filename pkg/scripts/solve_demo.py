"""Run both solvers on a few standard maps and print the outcome.

Usage: python3 scripts/solve_demo.py [--mesh-target 0.1]
"""
import argparse

import numpy as np

from butsolver.checker import check_report
from butsolver.manifolds import ManifoldSpec
from butsolver.setmap import BallOf, PolyFunc, SingletonOf
from butsolver.solver import SolveOptions, solve_coincidence, solve_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mesh-target", type=float, default=0.1)
    args = ap.parse_args()
    opts = SolveOptions(mesh_target=args.mesh_target)
    xy = PolyFunc.coordinates(3, 0, 1)
    bent = PolyFunc([[(1.0, (1, 0, 0)), (1.0, (0, 0, 2))], [(1.0, (0, 1, 0))]])
    s2 = ManifoldSpec("sphere", dim=2)

    cases = [
        ("theorem, S^2, {(x1, x2)}", lambda: solve_theorem(s2, SingletonOf(xy), opts)),
        ("theorem, S^2, Ball((x1, x2), 0.3)", lambda: solve_theorem(s2, BallOf(xy, 0.3), opts)),
        ("coincidence, S^2, {(x1 + x3^2, x2)}", lambda: solve_coincidence(s2, SingletonOf(bent), opts)),
        ("coincidence, genus 2, {(x1, x2)}",
         lambda: solve_coincidence(ManifoldSpec("genus2"), SingletonOf(xy), SolveOptions(mesh_target=0.2))),
    ]
    for label, solve in cases:
        rep = solve()
        js = rep.to_json()
        failures = check_report(js)
        extra = f"  gap={js['gap']:.2e}" if js["type"] == "coincidence" else ""
        print(f"{label:40s} x0={np.round(rep.x0, 4).tolist()}{extra}  "
              f"check={'PASS' if not failures else failures}")


if __name__ == "__main__":
    main()
