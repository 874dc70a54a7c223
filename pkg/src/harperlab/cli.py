"""Command-line front end: ``harperlab <subcommand> ...``.

Exit codes: 0 pass (or evidence), 1 counterexample found, 2 usage or scale error.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import re
import sys
from fractions import Fraction
from math import comb

from . import formats
from .cube import (
    Vertex, closed_neighbourhood, format_set, gamma, kth_neighbourhood, parse_bits, to_mask,
)
from .orderings import (
    OrderKind, initial_segment, rank, simplicial_initial_segment, simplicial_segment_masks,
    sort_key, unrank,
)
from .shadows import (
    find_band_index, harper_gamma_lower, harper_min_closed, kk_factor, kk_refined_bound,
    kruskbound_factor, kruskbound_lhs, lym_shadow_bound, lym_upper_bound,
)
from .stability import (
    EXACT_CENTER_MAX_N, SearchClass, StabilityParams, neighbourhood_excess,
    sharpness_instance, sharpness_params, stability_report,
)
from . import verify as V

SCALE_LIMITS = (
    f"scale limits: harper exhaustive n <= {V.HARPER_EXHAUSTIVE_MAX_N}; "
    f"kk/lym exhaustive C(n,r) <= {V.KK_EXHAUSTIVE_MAX_LAYER}; "
    f"sampled n <= {V.SAMPLED_MAX_N}; best_center exact n <= {EXACT_CENTER_MAX_N}"
)


class UsageError(Exception):
    pass


def _threads(args) -> int:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("HARPERLAB_THREADS")
    return int(env) if env else 1


GRID_NAMES = {"n", "r", "k"}


def parse_grid(text: str | None) -> dict[str, tuple[int, int]]:
    """``"n<=40,r<=5"`` or ``"n=3..8,r=2"`` -> {name: (lo, hi)} (inclusive)."""
    out: dict[str, tuple[int, int]] = {}
    if not text:
        return out
    for part in text.split(","):
        part = part.strip().replace("≤", "<=")
        m = re.fullmatch(r"(\w+)\s*<=\s*(\d+)", part)
        if m:
            out[m[1]] = (None, int(m[2]))
            continue
        m = re.fullmatch(r"(\w+)\s*=\s*(\d+)(?:\.\.(\d+))?", part)
        if m:
            lo = int(m[2])
            out[m[1]] = (lo, int(m[3]) if m[3] else lo)
            continue
        raise UsageError(f"cannot parse grid term {part!r}")
    unknown = set(out) - GRID_NAMES
    if unknown:
        raise UsageError(f"unknown grid parameter(s) {sorted(unknown)}; use {sorted(GRID_NAMES)}")
    return out


def _values(args, grid, name, default_lo, default_hi) -> list[int]:
    exact = getattr(args, name, None)
    if exact is not None:
        return [exact]
    lo, hi = grid.get(name, (default_lo, default_hi))
    lo = default_lo if lo is None else lo
    return list(range(lo, hi + 1))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: formats.jsonable(v) for k, v in row.items()})
    return buf.getvalue()


def cmd_verify(args) -> int:
    grid = parse_grid(args.grid)
    rows = args.format == "csv"
    t = args.target
    threads = _threads(args)
    if t == "harper":
        n = args.n if args.n is not None else 3
        if args.samples:
            run = V.verify_harper(n, exhaustive=False, samples=args.samples, seed=args.seed,
                                  threads=threads)
        else:
            run = V.verify_harper(n)
    elif t == "kk":
        run = V.verify_kk(_values(args, grid, "n", 1, 5), _layer_values(args, grid))
    elif t == "lym":
        if args.samples:
            n_max = args.n if args.n is not None else grid.get("n", (None, 10))[1]
            run = V.verify_lym_sampled(n_max, args.samples, args.seed, threads=threads)
        else:
            run = V.verify_lym_exhaustive(_values(args, grid, "n", 1, 5),
                                          _layer_values(args, grid))
    elif t == "lemma3":
        run = V.verify_lemma3(_values(args, grid, "n", 1, 12), rows=rows)
    elif t == "lemma4":
        r_max = args.r if args.r is not None else grid.get("r", (None, 5))[1]
        run = V.verify_lemma4(_values(args, grid, "n", 1, 40), r_max, rows=rows)
    elif t == "cor_monotone":
        r_max = args.r if args.r is not None else grid.get("r", (None, 10))[1]
        run = V.verify_cor_monotone(_values(args, grid, "n", 1, 40), r_max, rows=rows)
    elif t == "cor2":
        n = args.n if args.n is not None else 4
        runs = [V.verify_cor2(n, k) for k in _values(args, grid, "k", 1, 2)]
        run = runs[0]
        for extra in runs[1:]:
            run.checked += extra.checked
            if extra.witness:
                run.fail(**extra.witness)
        run.scope["k"] = _values(args, grid, "k", 1, 2)
        run.stats = {}
    elif t == "duality":
        n_max = args.n if args.n is not None else grid.get("n", (None, 8))[1]
        run = V.verify_duality(n_max, args.samples or 100_000, args.seed)
    elif t == "stability":
        cases = None
        if args.case:
            cases = [tuple(int(x) for x in c.split(",")) for c in args.case]
        run = V.verify_stability(cases, seed=args.seed)
    else:
        raise UsageError(f"unknown target {t!r}")
    if rows:
        _emit(args, _rows_csv(run.rows))
    else:
        _emit(args, formats.dumps(run))
    print(f"{run.target}: {run.result} ({run.checked} checked)", file=sys.stderr)
    return run.exit_code


def _layer_values(args, grid) -> list[int] | None:
    """Explicit layers from --r or the grid; None means every layer."""
    if args.r is not None:
        return [args.r]
    if "r" not in grid:
        return None
    lo, hi = grid["r"]
    return list(range(1 if lo is None else lo, hi + 1))


def _vertex_arg(text: str | None, n: int) -> Vertex:
    if text is None:
        return Vertex(n, 0)
    if text.lower().startswith("0x"):
        return Vertex(n, int(text, 16))
    if len(text) != n:
        raise UsageError(f"vertex {text!r} must have length {n}")
    return Vertex(n, parse_bits(text))


def cmd_construct(args) -> int:
    n = args.n
    params = None
    if args.kind == "segment":
        if args.l is None:
            raise UsageError("segment needs --l")
        A = simplicial_initial_segment(n, args.l)
    elif args.kind == "layer":
        if args.r is None:
            raise UsageError("layer needs --r")
        A = kth_neighbourhood(_vertex_arg(args.around, n), args.r)
    else:
        if args.k is None:
            raise UsageError("sharpness needs --k")
        p_int = args.p if args.p is not None else 1
        A, w, _ = sharpness_instance(n, args.k, p_int, _vertex_arg(args.around, n))
        params = sharpness_params(A, args.k, p_int).to_dict()
    summary = {"size": len(A), "gamma": len(gamma(A)), "closed": len(closed_neighbourhood(A))}
    k = args.k if args.k is not None else args.r
    if k is not None and 1 <= k < n and len(A) == comb(n, k):
        excess = neighbourhood_excess(A, k)
        summary["neighbourhood_excess_p"] = excess
        if params:
            summary["hypothesis_margin"] = StabilityParams.from_dict(params).gamma_budget - summary["gamma"]
    text = formats.dumps(formats.vertex_set_to_dict(A, params))
    _emit(args, text)
    print(" ".join(f"{k}={formats.jsonable(v)}" for k, v in summary.items()), file=sys.stderr)
    return 0


def cmd_stability(args) -> int:
    A, block = formats.read_instance(args.instance)
    block = dict(block)
    for name in ("k", "p", "rho", "kappa", "delta"):
        value = getattr(args, name, None)
        if value is not None:
            block[name] = value
    block.setdefault("n", A.n)
    if "k" not in block or "p" not in block:
        raise UsageError("parameters k and p are required (params block or --k/--p)")
    params = StabilityParams.from_dict(block)
    rep = stability_report(A, params, SearchClass(args.search), args.center_mode, args.seed)
    _emit(args, formats.dumps(rep))
    print(f"stability: satisfied={rep.satisfied} hypothesis_ok={rep.hypothesis_ok} "
          f"overlap={rep.overlap}", file=sys.stderr)
    return 0


def _parse_set(text: str) -> int:
    text = text.strip().strip("{}")
    if not text:
        return 0
    return to_mask(int(x) for x in text.split(","))


def cmd_rank(args) -> int:
    print(rank(OrderKind(args.order), _parse_set(args.set), args.n))
    return 0


def cmd_unrank(args) -> int:
    print(format_set(unrank(OrderKind(args.order), args.n, args.m, args.r)))
    return 0


def cmd_segment(args) -> int:
    kind = OrderKind(args.order)
    if kind is OrderKind.SIMPLICIAL:
        masks = simplicial_segment_masks(args.n, args.m)
    else:
        if args.r is None:
            raise UsageError("segment needs --r for layer orders")
        masks = sorted(initial_segment(kind, args.n, args.r, args.m), key=sort_key(kind))
    for m in masks:
        print(format_set(m))
    return 0


def _need(args, *names):
    missing = [x for x in names if getattr(args, x) is None]
    if missing:
        raise UsageError(f"bound {args.kind} needs " + ", ".join("--" + x for x in missing))
    return [getattr(args, x) for x in names]


def cmd_bound(args) -> int:
    kind = args.kind
    if kind == "kk-refined":
        n, r, m = _need(args, "n", "r", "m")
        i = args.i if args.i is not None else find_band_index(n, r, m).i
        value = kk_refined_bound(n, r, i, m)
    elif kind == "kk-factor":
        value = kk_factor(*_need(args, "n", "r", "i"))
    elif kind == "band":
        n, r, m = _need(args, "n", "r", "m")
        b = find_band_index(n, r, m)
        print(f"i={b.i} [{b.lo}, {b.hi}]")
        return 0
    elif kind == "lym-lower":
        value = lym_shadow_bound(*_need(args, "n", "r", "m"))
    elif kind == "lym-upper":
        value = lym_upper_bound(*_need(args, "n", "r", "m"))
    elif kind == "harper-gamma":
        value = harper_gamma_lower(*_need(args, "n", "k", "m"))
    elif kind == "harper-min":
        value = Fraction(harper_min_closed(*_need(args, "n", "l")))
    elif kind == "lemma4":
        n, r = _need(args, "n", "r")
        if args.a is not None:
            lhs, c = kruskbound_lhs(n, r, args.a)
            print(f"lhs={formats.fraction_str(lhs)} rhs={formats.fraction_str(kruskbound_factor(n, r, c))} "
                  f"c={formats.fraction_str(c)}")
            return 0
        (c,) = _need(args, "c")
        value = kruskbound_factor(n, r, Fraction(c))
    else:
        raise UsageError(f"unknown bound {kind!r}")
    print(formats.fraction_str(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="PRNG seed for sampled scopes (default 0)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (fallback: $HARPERLAB_THREADS, else 1)")
    common.add_argument("--format", choices=["json", "csv"], default="json")

    parser = argparse.ArgumentParser(prog="harperlab", description=__doc__, epilog=SCALE_LIMITS,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run an exhaustive or sampled check",
                       epilog=SCALE_LIMITS)
    p.add_argument("target", choices=sorted(V.TARGETS))
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--grid", help='parameter ranges, e.g. "n<=40,r<=5" or "n=3..8"')
    scope = p.add_mutually_exclusive_group()
    scope.add_argument("--exhaustive", action="store_true")
    scope.add_argument("--samples", type=int)
    p.add_argument("--case", action="append", help="stability case n,k,p_int (repeatable)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common], help="write a vertex-set file")
    p.add_argument("kind", choices=["sharpness", "segment", "layer"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--p", type=int, help="number of far centres (sharpness)")
    p.add_argument("--l", type=int, help="segment length")
    p.add_argument("--r", type=int, help="sphere radius (layer)")
    p.add_argument("--around", help="centre vertex as bits or 0x-hex (default 0)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("stability", parents=[common], help="stability report for an instance file")
    p.add_argument("instance")
    p.add_argument("--k", type=int)
    p.add_argument("--p")
    p.add_argument("--rho")
    p.add_argument("--kappa")
    p.add_argument("--delta")
    p.add_argument("--search", choices=[s.value for s in SearchClass], default="singletons")
    p.add_argument("--center-mode", choices=["auto", "exact", "heuristic"], default="auto")
    p.set_defaults(func=cmd_stability)

    orders = [k.value for k in OrderKind]
    p = sub.add_parser("rank", parents=[common], help="rank of a set in an order")
    p.add_argument("--order", choices=orders, required=True)
    p.add_argument("--set", required=True, help="comma-separated 1-based elements")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("unrank", parents=[common], help="set at a given rank")
    p.add_argument("--order", choices=orders, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_unrank)

    p = sub.add_parser("segment", parents=[common], help="initial segment of an order")
    p.add_argument("--order", choices=orders, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("bound", parents=[common], help="evaluate a bound exactly")
    p.add_argument("kind", choices=["kk-refined", "kk-factor", "band", "lym-lower", "lym-upper",
                                    "harper-gamma", "harper-min", "lemma4"])
    for name in ("n", "r", "i", "m", "k", "l", "a"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--c", help="rational c in (0,1), e.g. 1/2")
    p.set_defaults(func=cmd_bound)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, V.ScaleError, ValueError) as exc:
        print(f"harperlab {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
