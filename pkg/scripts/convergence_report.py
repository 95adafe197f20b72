#!/usr/bin/env python3
"""Mesh-refinement study on the smooth supercritical ramp (test 6).

Reports the L1(h) error ladder per scheme and the first cell count at
which each one meets the target bound; optionally sweeps the ramp
height to show how the required resolution grows with the slope.
"""

import argparse
import sys

from swelab.diagnostics import convergence_study
from swelab.presets import build_preset, exact_profile
from swelab.solver import SCHEMES, SchemeConfig


def ladder(scheme, bound, meshes, dH, dl):
    rows, cells = convergence_study(
        lambda n: build_preset(6, n_cells=n, dH=dH, dl=dl),
        SchemeConfig.from_id(scheme),
        lambda x: exact_profile(6, x, dH=dH, dl=dl),
        bound=bound,
        meshes=meshes,
    )
    errs = " ".join(f"{r.l1_error:.5f}" for r in rows)
    print(f"dH={dH:g} dl={dl:g} {scheme:12s} errors [{errs}] "
          f"cells_needed={cells if cells is not None else 'not reached'}")
    return cells


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=float, default=0.008)
    ap.add_argument("--schemes", nargs="*",
                    default=[s for s, e in SCHEMES.items() if e["implemented"]])
    ap.add_argument("--max-cells", type=int, default=3200)
    ap.add_argument("--ramp-sweep", action="store_true",
                    help="also vary the ramp height at fixed length")
    args = ap.parse_args()

    meshes = [n for n in (100, 200, 400, 800, 1600, 3200, 6400, 12800)
              if n <= args.max_cells]
    for scheme in args.schemes:
        ladder(scheme, args.bound, meshes, dH=0.3, dl=0.2)
    if args.ramp_sweep:
        for dH in (0.1, 0.2, 0.3, 0.4, 0.5):
            ladder("roe", args.bound, meshes, dH=dH, dl=0.2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
