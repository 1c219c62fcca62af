#!/usr/bin/env python3
"""Scan how deep the matched spectral prefix reaches as the truncation
dimension grows.

For each (q, N) pair the position operator is diagonalized and its
eigenvalues matched against +-q^s; the deepest continuously matched level
s_match is reported as CSV on stdout (or --out).
"""

import argparse
import sys

from qosc import DeformationContext, build_Q, spectrum_report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=float, nargs="+", default=[0.3, 0.5, 0.8])
    ap.add_argument("--dims", type=int, nargs="+",
                    default=[16, 32, 48, 64, 96, 128])
    ap.add_argument("--depth", type=int, default=64,
                    help="lattice levels made available for matching")
    ap.add_argument("--match-tol", type=float, default=1e-10)
    ap.add_argument("--out", type=str, default=None)
    args = ap.parse_args(argv)

    lines = ["q,N,s_match,max_error,n_unmatched"]
    for q in args.q:
        for n in args.dims:
            ctx = DeformationContext(q=q, fock_dim=n,
                                     lattice_depth=args.depth,
                                     match_tol=args.match_tol)
            rep = spectrum_report(build_Q(ctx), ctx)
            lines.append(f"{q},{n},{rep.s_match},{rep.max_error!r},"
                         f"{len(rep.unmatched)}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
