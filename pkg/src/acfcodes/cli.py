"""Command-line front end: ``acfcodes <subcommand> [flags]``.

Every subcommand prints one JSON object per result line (sorted keys), each
carrying ``format_version`` and the fully resolved ``config``.  Exit status is
0 on success, 1 on malformed input or domain errors, 2 when a work budget
would be exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import bounds as bd
from .core import BudgetExceeded, CodeError, worked_example_code, read_code
from .cover import DEFAULT_BUDGET, analyze, is_bad_set
from .decoder import decode
from .design import DEFAULT_DESIGN_BUDGET, RELAXED, STRICT, analyze_design, format_superset, outcome, parse_superset
from .ensemble import EnsembleParams, exhaustive_bad_probability, mc_bad_probability, union_bound_expectation
from .optimize import DomainError

FORMAT_VERSION = "acfcodes/1"


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for budget refusals
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(args, rows: list[dict], out=None) -> None:
    out = out or sys.stdout
    fmt = getattr(args, "format", "json")
    if fmt == "csv":
        keys = sorted({k for r in rows for k in r if not isinstance(r[k], (dict, list))})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k) for k in keys})
        out.write(buf.getvalue())
        return
    config = _config(args)
    for r in rows:
        obj = {"format_version": FORMAT_VERSION, "config": config, "result": r}
        if fmt == "text":
            for k, v in sorted(r.items()):
                out.write(f"{k}: {json.dumps(v, sort_keys=True)}\n")
            out.write("\n")
        else:
            out.write(json.dumps(obj, sort_keys=True) + "\n")


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


def cmd_analyze(args) -> int:
    X = read_code(args.code)
    if args.mode == "sample" and (args.seed is None or args.trials is None):
        raise DomainError("sample mode needs --trials and --seed")
    rep = analyze(X, args.s, args.l, mode=args.mode, trials=args.trials, seed=args.seed,
                  budget=args.budget, workers=_threads(args))
    d = rep.to_dict()
    if args.mode == "exact" and not rep.bad_sets_overflow:
        d["good_sets"] = [[j + 1 for j in S] for S in rep.good_sets()]
    _emit(args, [d])
    return 0


def cmd_design(args) -> int:
    X = read_code(args.code)
    rep = analyze_design(X, args.s, args.l, model=args.model, budget=args.budget)
    _emit(args, [rep.to_dict()])
    return 0


def cmd_decode(args) -> int:
    X = read_code(args.code)
    bits = args.outcome.strip()
    if len(bits) != X.n_rows or set(bits) - {"0", "1"}:
        raise DomainError(f"--outcome must be a 0/1 string of length {X.n_rows}")
    r = sum(1 << i for i, c in enumerate(bits) if c == "1")
    res = decode(X, r, args.s, args.l, exhaustive_check=args.exhaustive, model=args.model, budget=args.budget)
    _emit(args, [res.to_dict()])
    return 0


def cmd_simulate(args) -> int:
    params = EnsembleParams(args.N, args.t, args.Q)
    est = mc_bad_probability(params, args.s, args.l, args.trials, args.seed)
    row = {
        "params": params.to_dict(),
        "estimate": est.p_hat,
        "std_error": est.std_error,
        "successes": est.successes,
        "trials": est.trials,
        "union_bound": union_bound_expectation(params, args.s, args.l),
    }
    if args.exact:
        p = exhaustive_bad_probability(params, args.s, args.l, budget=args.budget)
        row["exact"] = {"num": p.numerator, "den": p.denominator, "float": float(p)}
    _emit(args, [row])
    return 0


def _bound_rows(args) -> list[dict]:
    rows = []
    for s in args.s:
        for l in args.l:
            base = {"kind": args.kind, "s": s, "l": l}
            if args.kind == "capacity":
                r = bd.capacity_lower(s, l)
                rows.append({**base, **r.to_dict(), "upper": bd.capacity_upper(s, l)})
            elif args.kind == "upper":
                rows.append({**base, "value": bd.capacity_upper(s, l)})
            elif args.kind == "asymptotic":
                rows.append({**base, **bd.asymptotic_rates(s, l)})
            elif args.kind == "exponent":
                for R in _need(args.R, "--R"):
                    rows.append({**base, "R": R, **bd.exponent_lower(s, l, R).to_dict()})
            elif args.kind == "point":
                for Q in _need(args.Q, "--Q"):
                    for q in args.q or [None]:
                        p = bd.bound_point(s, l, Q, q)
                        rows.append({
                            **base, "Q": Q, "q": p.q, "q_hat": p.q_hat, "y": p.y, "z": p.z,
                            "A": bd.A_exponent(s, Q, p.q), "D": bd.D_closed(l, Q, p.q),
                            "y_residual": p.y_residual, "z_residual": p.z_residual,
                        })
            elif args.kind == "floor":
                for R in _need(args.R, "--R"):
                    for N in _need(args.N, "--N"):
                        rows.append({**base, "R": R, "N": N, "value": bd.design_error_floor(N, R, s, l)})
    return rows


def _need(values, flag):
    if not values:
        raise DomainError(f"this bound needs {flag}")
    return values


def cmd_bounds(args) -> int:
    _emit(args, _bound_rows(args))
    return 0


def _golden_checks() -> list[tuple[str, bool, str]]:
    X = worked_example_code()
    checks = []

    rep = analyze(X, 2, 2)
    good = [[j + 1 for j in S] for S in rep.good_sets()]
    want = [[1, 2], [1, 3], [2, 3], [1, 4], [1, 5]]
    ok = sorted(good) == sorted(want) and rep.epsilon == Fraction(1, 2)
    checks.append(("code example: good sets and epsilon 1/2", ok, f"good={good} eps={rep.epsilon}"))

    ok = is_bad_set(X, (3, 4), 2) and not is_bad_set(X, (1, 2), 2)
    checks.append(("code example: {4,5} bad, {2,3} good", ok, ""))

    pairs = [("{1,4}|{2,3}", "11100"), ("{1,2}|{4,5}", "10011")]
    got = [str(outcome(X, parse_superset(p, STRICT))) for p, _ in pairs]
    ok = got == [r for _, r in pairs]
    checks.append(("design example: outcome vectors", ok, f"got={got}"))

    drep = analyze_design(X, 2, 2, STRICT)
    listed = {"{1,2}|{4,5}", "{1,3}|{4,5}", "{1,4}|{2,3}", "{1,5}|{2,3}"}
    found = {format_superset(p) for p in drep.bad_supersets}
    ok = drep.total == 15 and found == listed and drep.epsilon == Fraction(4, 15)
    checks.append(("design example: four bad supersets, epsilon 4/15", ok,
                   f"total={drep.total} bad={sorted(found)} eps={drep.epsilon}"))

    res = decode(X, 0b11001, 2, 2, exhaustive_check=True, model=STRICT)
    pre = sorted(format_superset(p) for p in res.preimages)
    ok = res.status == "not_cf_ambiguous" and pre == ["{1,2}|{4,5}", "{1,3}|{4,5}"]
    checks.append(("design example: decode 10011 ambiguous", ok, f"status={res.status} preimages={pre}"))
    return checks


def cmd_selftest(args) -> int:
    checks = _golden_checks()
    rows = [{"check": name, "pass": ok, "detail": detail} for name, ok, detail in checks]
    _emit(args, rows)
    return 0 if all(ok for _, ok, _ in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="acfcodes", description="Almost cover-free codes and designs.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, budget):
        sp.add_argument("--format", choices=["json", "csv", "text"], default="json")
        sp.add_argument("--budget", type=int, default=budget)
        sp.add_argument("--threads", type=int, default=None, help="worker cap (default: all cores)")

    a = sub.add_parser("analyze", help="count (s,l)-bad subsets of a code")
    a.add_argument("--code", required=True)
    a.add_argument("--s", type=int, required=True)
    a.add_argument("--l", type=int, required=True)
    a.add_argument("--mode", choices=["exact", "sample"], default="exact")
    a.add_argument("--trials", type=int)
    a.add_argument("--seed", type=int)
    common(a, DEFAULT_BUDGET)
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("design", help="find colliding supersets of a code")
    d.add_argument("--code", required=True)
    d.add_argument("--s", type=int, required=True)
    d.add_argument("--l", type=int, required=True)
    d.add_argument("--model", choices=[STRICT, RELAXED], default=STRICT)
    common(d, DEFAULT_DESIGN_BUDGET)
    d.set_defaults(func=cmd_design)

    c = sub.add_parser("decode", help="recover a superset from an outcome vector")
    c.add_argument("--code", required=True)
    c.add_argument("--outcome", required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--exhaustive", action="store_true", help="also list every preimage and flag collisions")
    c.add_argument("--model", choices=[STRICT, RELAXED], default=STRICT)
    common(c, DEFAULT_DESIGN_BUDGET)
    c.set_defaults(func=cmd_decode)

    m = sub.add_parser("simulate", help="Monte Carlo over the constant-weight ensemble")
    m.add_argument("--N", type=int, required=True)
    m.add_argument("--t", type=int, required=True)
    m.add_argument("--Q", type=float, required=True)
    m.add_argument("--s", type=int, required=True)
    m.add_argument("--l", type=int, required=True)
    m.add_argument("--trials", type=int, required=True)
    m.add_argument("--seed", type=int, required=True)
    m.add_argument("--exact", action="store_true", help="also enumerate the whole ensemble (tiny sizes)")
    common(m, 5 * 10**7)
    m.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bounds", help="capacity and error-exponent tables")
    b.add_argument("kind", choices=["capacity", "upper", "asymptotic", "exponent", "point", "floor"])
    b.add_argument("--s", type=_int_list, required=True)
    b.add_argument("--l", type=_int_list, required=True)
    b.add_argument("--R", type=_float_list)
    b.add_argument("--Q", type=_float_list)
    b.add_argument("--q", type=_float_list)
    b.add_argument("--N", type=_int_list)
    common(b, 0)
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("selftest", help="run the worked examples")
    common(t, 0)
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        print(f"acfcodes: budget exceeded: {e}", file=sys.stderr)
        return 2
    except (CodeError, DomainError, OSError, ValueError) as e:
        print(f"acfcodes: error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
