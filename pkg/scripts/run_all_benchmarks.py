#!/usr/bin/env python3
"""Run every benchmark with every implemented scheme.

Writes results/test<t>/<scheme>/snapshot_final.csv + summary.json via
the CLI entry point, so the outputs are byte-identical to what
`swelab run` produces.
"""

import argparse
import sys
from pathlib import Path

from swelab.cli import main as cli_main
from swelab.presets import DEFAULT_CELLS
from swelab.solver import SCHEMES


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="results")
    ap.add_argument("--tests", type=int, nargs="*", default=sorted(DEFAULT_CELLS))
    ap.add_argument("--schemes", nargs="*",
                    default=[s for s, e in SCHEMES.items() if e["implemented"]])
    args = ap.parse_args()

    failures = []
    for t in args.tests:
        for scheme in args.schemes:
            out = Path(args.out) / f"test{t}" / scheme
            rc = cli_main(["run", "--test", str(t), "--scheme", scheme,
                           "--out", str(out)])
            if rc != 0:
                failures.append((t, scheme, rc))
    if failures:
        print(f"{len(failures)} runs failed: {failures}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
