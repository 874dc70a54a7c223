"""Sampled Harper check for n = 5..8 (default 10^6 random subsets per n)."""

import argparse
import time

from harperlab.verify import verify_harper


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-min", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    print("n,samples,result,min_slack,seconds")
    for n in range(args.n_min, args.n_max + 1):
        t0 = time.perf_counter()
        run = verify_harper(n, exhaustive=False, samples=args.samples, seed=args.seed,
                            threads=args.threads)
        dt = time.perf_counter() - t0
        print(f"{n},{run.checked},{run.result},{run.stats['min_slack']},{dt:.1f}", flush=True)
        if not run.passed:
            print("witness:", run.witness)


if __name__ == "__main__":
    main()
