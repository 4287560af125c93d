#!/usr/bin/env python3
"""Tabulate the coupling constant and boson mass over mass-ratio space.

Writes the CSV consumed by external plotting tools; equivalent to
`diracsea scan --reg exp --m2 1.05:5:20 --m3 1.1:6:20` but also prints
summary statistics of the surfaces.
"""

import argparse
import sys

import numpy as np

from diracsea.regularization import model_from_name, scan


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--reg", choices=["exp", "cutoff"], default="exp")
    ap.add_argument("--n", type=int, default=20)
    ap.add_argument("--out", default="-", help="CSV path (default stdout)")
    args = ap.parse_args()

    model = model_from_name(args.reg)
    rows, failures = scan(model, np.linspace(1.05, 5.0, args.n),
                          np.linspace(1.1, 6.0, args.n))
    out = sys.stdout if args.out == "-" else open(args.out, "w")
    out.write("m2_over_m1,m3_over_m1,e,M_over_m1\n")
    for row in rows:
        e = "" if row.e is None else f"{row.e:.12g}"
        M = "" if row.M_over_m1 is None else f"{row.M_over_m1:.12g}"
        out.write(f"{row.ratio2:.12g},{row.ratio3:.12g},{e},{M}\n")
    if out is not sys.stdout:
        out.close()

    es = [r.e for r in rows if r.e is not None]
    Ms = [r.M_over_m1 for r in rows if r.M_over_m1 is not None]
    print(f"# {len(rows)} grid points, {failures} failures", file=sys.stderr)
    print(f"# e   in [{min(es):.4f}, {max(es):.4f}]", file=sys.stderr)
    print(f"# M/m1 in [{min(Ms):.4f}, {max(Ms):.4f}]", file=sys.stderr)


if __name__ == "__main__":
    main()
