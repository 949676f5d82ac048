"""Command-line front end: scans, verification, identity checks, exports.

Subcommands:
    scan      stream per-prime records to CSV plus a JSON summary
    verify    compare the pipeline against the brute-force oracle
    identity  exact divisor-decomposition identity at a bound
    aux       schur / wintner / bt / trivlem diagnostics

Exit codes: 0 success, 1 failed check or mismatch, 2 bad arguments,
3 ambiguous Frobenius disambiguation (with the prime reported).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import stats
from .eccurve import CmCurve, custom_curve, get_curve, load_table
from .frobenius import AmbiguousFrobenius, dp_ep, validate_curve
from .oracle import ENUMERATION_BOUND, group_structure
from .primesieve import primes_upto
from .quadorder import QuadInt, order
from .stats import ScanResult, scan

CSV_HEADER = "p,kind,a_p,pi_a,pi_b,N,d_p,e_p"


def _default_seed() -> int:
    return int(os.environ.get("CMIF_SEED", "0"))


def _resolve_curve(args) -> CmCurve:
    table = load_table(args.table) if getattr(args, "table", None) else None
    if getattr(args, "custom", None):
        parts = args.custom.split(",")
        if len(parts) != 4:
            raise SystemExit2("--custom expects A,B,g,f")
        a, b, g, f = (int(t) for t in parts)
        curve = custom_curve(a, b, g, f)
        mismatches = validate_curve(curve, 200)
        if mismatches:
            p, got, want = mismatches[0]
            raise SystemExit2(
                f"custom curve failed validation at p={p}: a_p={got} but count gives {want}"
            )
        return curve
    label = getattr(args, "curve", None)
    if not label:
        raise SystemExit2("one of --curve or --custom is required")
    try:
        return get_curve(label, table)
    except KeyError as e:
        raise SystemExit2(str(e))


class SystemExit2(Exception):
    """Bad arguments detected after parsing."""


def _record_line(rec) -> str:
    return (
        f"{rec.p},{rec.kind},{rec.a_p},{rec.pi_a},{rec.pi_b},"
        f"{rec.N},{rec.d_p},{rec.e_p}"
    )


def _summary_dict(curve: CmCurve, seed, result: ScanResult, x_max: int) -> dict:
    acc = result.accumulator
    return {
        "curve": curve.label,
        "seed": seed,
        "xmax": x_max,
        "sum_dp": acc.sum_dp,
        "sum_ep": acc.sum_ep,
        "counts": {
            "bad": acc.count_bad,
            "ord": acc.count_ord,
            "small": acc.count_small,
            "ss": acc.count_ss,
        },
        "checkpoints": [
            {"x": c.x, "sum_dp": c.sum_dp, "sum_ep": c.sum_ep, "pi_x": c.pi_x}
            for c in acc.checkpoints
        ],
    }


def cmd_scan(args) -> int:
    curve = _resolve_curve(args)
    if args.xmax < 2:
        raise SystemExit2("--xmax must be at least 2")
    checkpoints = [int(t) for t in args.checkpoints.split(",")] if args.checkpoints else []
    seed = args.seed if args.seed is not None else _default_seed()
    try:
        result = scan(
            curve,
            args.xmax,
            seed=seed,
            checkpoints=checkpoints,
            workers=args.workers,
            keep_records=args.out is not None,
        )
    except AmbiguousFrobenius as e:
        print(f"ambiguous Frobenius at p={e.p}", file=sys.stderr)
        return 3
    summary = _summary_dict(curve, seed, result, args.xmax)
    text = json.dumps(summary, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(CSV_HEADER + "\n")
            for rec in result.records:
                fh.write(_record_line(rec) + "\n")
        summary_path = args.out + ".summary.json"
        with open(summary_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {len(result.records)} records to {args.out}")
        print(f"wrote summary to {summary_path}")
    print(text)
    return 0


def cmd_verify(args) -> int:
    curve = _resolve_curve(args)
    if args.pmax > ENUMERATION_BOUND:
        raise SystemExit2(f"--pmax is capped at {ENUMERATION_BOUND}")
    mismatches = []
    checked = 0
    for p in primes_upto(args.pmax):
        if p in curve.bad_primes:
            continue
        checked += 1
        d, e = group_structure(curve, p)
        n = d * e
        try:
            rec = dp_ep(p, curve)
        except AmbiguousFrobenius:
            mismatches.append((p, None, (d, e, n)))
            continue
        if (rec.d_p, rec.e_p, rec.N, rec.a_p) != (d, e, n, p + 1 - n):
            mismatches.append((p, rec, (d, e, n)))
    if mismatches:
        print(f"{curve.label}: {len(mismatches)} mismatches over {checked} good primes")
        print("p,pipeline(d,e,N,a),oracle(d,e,N)")
        for p, rec, oracle_t in mismatches:
            pipe = "unresolved" if rec is None else f"({rec.d_p},{rec.e_p},{rec.N},{rec.a_p})"
            print(f"{p},{pipe},{oracle_t}")
        return 1
    print(f"{curve.label}: 0 mismatches over {checked} good primes up to {args.pmax}")
    return 0


def cmd_identity(args) -> int:
    curve = _resolve_curve(args)
    seed = args.seed if args.seed is not None else _default_seed()
    lhs, rhs, equal = stats.decomposition_check(curve, args.x, seed=seed)
    print(f"lhs={lhs} rhs={rhs} equal={equal}")
    return 0 if equal else 1


def _parse_pair(text: str, od) -> QuadInt:
    parts = text.split(",")
    if len(parts) == 1:
        return QuadInt(int(parts[0]), 0, od)
    if len(parts) == 2:
        return QuadInt(int(parts[0]), int(parts[1]), od)
    raise SystemExit2(f"expected a or a,b coordinates, got {text!r}")


def cmd_aux(args) -> int:
    if args.aux_command == "schur":
        val = stats.schur_sum(args.t)
        ratio = val / args.t
        if isinstance(val, Fraction):
            print(f"sum={val} sum/t={float(ratio):.6f}")
        else:
            print(f"sum={val:.6f} sum/t={ratio:.6f}")
        return 0
    if args.aux_command == "wintner":
        s = stats.wintner_sum(args.z)
        if isinstance(s, Fraction):
            print(f"sum={s}")
        else:
            print(f"sum={s:.6f}")
        if args.z >= 2:
            print(f"slope={stats.wintner_slope(args.z):.6f}")
        return 0
    if args.aux_command == "bt":
        od = order(args.g, 1)
        mu = _parse_pair(args.mu, od)
        alpha = _parse_pair(args.alpha, od)
        try:
            count = stats.bt_counter(args.x, mu, alpha)
            ratio = stats.bt_ratio(args.x, mu, alpha)
        except ValueError as e:
            raise SystemExit2(str(e))
        print(f"count={count} ratio={ratio:.6f}")
        return 0
    if args.aux_command == "trivlem":
        rng = random.Random(args.seed if args.seed is not None else _default_seed())
        failures = 0
        for _ in range(args.trials):
            primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
            gmap = {p: Fraction(rng.randint(0, 8), 4) for p in primes}
            k = rng.randint(1, 100)
            t = rng.randint(1, 1000)
            res = stats.trivlem_check(lambda p: gmap.get(p, Fraction(1, 2)), k, t)
            if not res.holds:
                failures += 1
        print(f"{args.trials - failures}/{args.trials} hold")
        return 0 if failures == 0 else 1
    raise SystemExit2("unknown aux subcommand")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmfactors",
        description="Invariant factors of CM elliptic curve reductions mod p",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_curve_args(sp):
        sp.add_argument("--curve", help="curve label from the table (e.g. j1728-D4 or D4)")
        sp.add_argument("--custom", help="custom model as A,B,g,f (validated against the oracle)")
        sp.add_argument("--table", help="path to an alternative curve table file")

    sp = sub.add_parser("scan", help="scan primes up to a bound and export records")
    add_curve_args(sp)
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None, help="defaults to $CMIF_SEED or 0")
    sp.add_argument("--checkpoints", default="", help="comma-separated snapshot bounds")
    sp.add_argument("--out", default=None, help="records CSV path (summary goes to PATH.summary.json)")
    sp.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("verify", help="compare pipeline and oracle for all good p <= pmax")
    add_curve_args(sp)
    sp.add_argument("--pmax", type=int, required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("identity", help="exact divisor-decomposition identity check")
    add_curve_args(sp)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_identity)

    sp = sub.add_parser("aux", help="auxiliary diagnostics")
    aux = sp.add_subparsers(dest="aux_command", required=True)

    s = aux.add_parser("schur", help="sum of (m/phi(m))^4 up to t")
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_aux)

    s = aux.add_parser("wintner", help="squarefree phi(d)/d^2 partial sum and slope")
    s.add_argument("--z", type=int, required=True, dest="z")
    s.set_defaults(func=cmd_aux)

    s = aux.add_parser("bt", help="prime-element congruence count")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--mu", required=True, help="a,b coordinates of the modulus")
    s.add_argument("--alpha", required=True, help="a,b coordinates of the residue")
    s.add_argument("--g", type=int, default=-1, help="field parameter (default -1)")
    s.set_defaults(func=cmd_aux)

    s = aux.add_parser("trivlem", help="randomized squarefree-restriction inequality suite")
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_aux)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SystemExit2 as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except AmbiguousFrobenius as e:
        print(f"ambiguous Frobenius at p={e.p}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
