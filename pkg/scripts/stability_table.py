"""Run the stability pipeline on sharpness instances and tabulate the margins.

For each (n, k, p_int) the construction moves p_int·C(n,k-1) vertices off
the sphere.  The table compares that error with the guaranteed allowance
C·C(n,k-1)·p·k, so the ratio column shows how far from tight the bound is.
"""

import argparse
from math import comb

from harperlab.stability import (
    deletion_accounting, discard_algorithm, sharpness_instance, sharpness_params,
    stability_report,
)

DEFAULT_CASES = [(12, 2, 1), (16, 2, 1), (16, 2, 2), (20, 2, 3), (20, 3, 1), (24, 2, 4),
                 (24, 3, 1)]


def parse_case(text):
    n, k, p = (int(x) for x in text.split(","))
    return n, k, p


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case", type=parse_case, action="append",
                    help="n,k,p_int (repeatable); defaults to a small grid")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    cols = ["n", "k", "p_int", "p", "|Γ(A)|", "budget", "outliers", "allowance",
            "ratio", "|B|", "accounting", "satisfied", "centre_ok"]
    print(",".join(cols))
    for n, k, p_int in args.case or DEFAULT_CASES:
        A, w, _ = sharpness_instance(n, k, p_int)
        P = sharpness_params(A, k, p_int)
        rep = stability_report(A, P, seed=args.seed)
        B, trace = discard_algorithm(A, P)
        g, total, matched = deletion_accounting(A, trace)
        outliers = rep.outliers
        assert outliers == p_int * comb(n, k - 1)
        ratio = P.error_allowance / outliers if outliers else float("inf")
        print(",".join(str(x) for x in [
            n, k, p_int, P.p, rep.gamma_size, P.gamma_budget, outliers, P.error_allowance,
            f"{float(ratio):.1f}", len(B), g == total and matched, rep.satisfied,
            rep.center == w]))


if __name__ == "__main__":
    main()
