"""Print mesh norm per subdivision round for the bundled manifolds.

Usage: python3 scripts/mesh_decay.py [--rounds 5] [--no-reproject]
"""
import argparse

from butsolver.manifolds import ManifoldSpec, refinements
from butsolver.simplicial import mesh_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=5)
    ap.add_argument("--no-reproject", dest="reproject", action="store_false")
    args = ap.parse_args()
    specs = [ManifoldSpec("circle", segments=4, subdivisions=args.rounds, reproject=args.reproject),
             ManifoldSpec("sphere", dim=2, subdivisions=args.rounds, reproject=args.reproject),
             ManifoldSpec("sphere", dim=3, subdivisions=min(args.rounds, 3), reproject=args.reproject),
             ManifoldSpec("genus2", subdivisions=min(args.rounds, 3))]
    for spec in specs:
        label = spec.kind + (f"({spec.dim})" if spec.dim else "")
        prev = None
        for k, c in enumerate(refinements(spec)):
            mn = mesh_norm(c)
            ratio = f"{mn / prev:.4f}" if prev else "-"
            print(f"{label:10s} k={k}  simplices={c.n_simplices:8d}  mesh={mn:.6f}  ratio={ratio}")
            prev = mn
        print()


if __name__ == "__main__":
    main()
