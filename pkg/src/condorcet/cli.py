"""Command-line front end.

Subcommands: exact, mc, limit, classify, min-table, ic-curve, audit, culture.
Results go to stdout (or ``--out``) as a human-readable table on a terminal
and CSV when piped; ``--format {table,csv,json}`` overrides. Exit codes:
0 success, 1 computation error (enumeration budget, degenerate input,
failed audit), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .asymptotic import (
    DegenerateVarianceError,
    audit_table1,
    classify_m3,
    ic_curve,
    limiting_probability,
)
from .culture import (
    Culture,
    CultureFormatError,
    cyclic_minimizer_culture,
    impartial_culture,
    is_dual_culture,
    load_culture_file,
    save_culture,
)
from .exact import (
    EnumerationBudgetError,
    WinnerMode,
    exact_winner_probability,
    minimum_table,
)
from .montecarlo import McConfig, mc_convergence_sweep
from .orthant import CorrelationMatrixError

DEFAULT_SEED = 0
DEFAULT_TRIALS = 100_000


def load_culture(name_or_path: str, m: int | None = None) -> Culture:
    """Resolve a culture argument: ``ic``, ``cyclic``, ``dc:<path>``, or a file path.

    Named cultures require ``--m``. ``dc:<path>`` loads a file and rejects it
    unless every order and its reversal carry equal probability. Plain paths
    are read as JSON or CSV based on their suffix.
    """
    if name_or_path in ("ic", "cyclic"):
        if m is None:
            raise CultureFormatError(f"culture {name_or_path!r} requires --m")
        return impartial_culture(m) if name_or_path == "ic" else cyclic_minimizer_culture(m)
    if name_or_path.startswith("dc:"):
        culture = load_culture_file(name_or_path[3:])
        if not is_dual_culture(culture):
            raise CultureFormatError(
                f"{name_or_path[3:]}: probabilities are not symmetric under order reversal"
            )
    else:
        culture = load_culture_file(name_or_path)
    if m is not None and culture.m != m:
        raise CultureFormatError(f"culture has m={culture.m}, but --m {m} was given")
    return culture


def _parse_int_list(text: str) -> list[int]:
    """Comma-separated integers; ``a-b`` items expand to inclusive ranges."""
    out: list[int] = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "-" in item[1:]:
            lo, hi = item.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(item))
    if not out:
        raise argparse.ArgumentTypeError(f"no integers in {text!r}")
    return out


def _parse_count(text: str) -> int:
    value = int(float(text))
    if value < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {text!r}")
    return value


def _emit(args, table: str, csv_text: str, json_obj) -> None:
    fmt = args.format
    if fmt is None:
        interactive = args.out is None and sys.stdout.isatty()
        fmt = "table" if interactive else "csv"
    if fmt == "table":
        payload = table if table.endswith("\n") else table + "\n"
    elif fmt == "csv":
        payload = csv_text
    else:
        payload = json.dumps(json_obj, indent=2) + "\n"
    if args.out is None:
        sys.stdout.write(payload)
    else:
        with open(args.out, "w") as handle:
            handle.write(payload)


def _scalar_outputs(value: float, json_obj) -> tuple[str, str]:
    return f"{value:.5f}", f"value\n{value!r}\n"


def _cmd_exact(args) -> int:
    culture = load_culture(args.culture, args.m)
    result = exact_winner_probability(
        culture, args.n, WinnerMode(args.mode), budget=args.budget
    )
    obj = {
        "value": result.value,
        "method": result.method.value,
        "m": culture.m,
        "n": args.n,
        "mode": args.mode,
        "detail": result.detail,
    }
    table, csv_text = _scalar_outputs(result.value, obj)
    _emit(args, table, csv_text, obj)
    return 0


def _cmd_mc(args) -> int:
    culture = load_culture(args.culture, args.m)
    config = McConfig(trials=args.trials, seed=args.seed, mode=WinnerMode(args.mode))
    rows = mc_convergence_sweep(culture, sorted(args.n), config)
    csv_lines = ["n,estimate,stderr,trials,seed"]
    table_lines = []
    for n, result in rows:
        csv_lines.append(f"{n},{result.value!r},{result.stderr!r},{config.trials},{config.seed}")
        table_lines.append(f"n={n}  {result.value:.5f} (stderr {result.stderr:.5f})")
    obj = [
        {"n": n, "estimate": r.value, "stderr": r.stderr, "trials": config.trials, "seed": config.seed}
        for n, r in rows
    ]
    _emit(args, "\n".join(table_lines), "\n".join(csv_lines) + "\n", obj)
    return 0


def _cmd_limit(args) -> int:
    culture = load_culture(args.culture, args.m)
    result = limiting_probability(culture, tol=args.tol, mc_samples=args.samples, mc_seed=args.seed)
    obj = {
        "value": result.value,
        "terms": result.detail["terms"],
        "case": result.detail.get("case"),
    }
    table, csv_text = _scalar_outputs(result.value, obj)
    _emit(args, table, csv_text, obj)
    return 0


def _cmd_classify(args) -> int:
    culture = load_culture(args.culture, args.m)
    case, value = classify_m3(culture, tol=args.tol)
    obj = {"case": case, "value": value}
    _emit(args, f"case {case}: {value:.5f}", f"case,probability\n{case},{value!r}\n", obj)
    return 0


def _cmd_min_table(args) -> int:
    rows = minimum_table(args.m, args.n)
    csv_lines = ["n,m,probability,probability_full"]
    for n, m, p in rows:
        csv_lines.append(f"{n},{m},{p:.4f},{p!r}")
    ms = list(dict.fromkeys(args.m))
    table_lines = ["n    " + "".join(f"m={m:<8}" for m in ms)]
    for n in args.n:
        cells = "".join(f"{p:<10.4f}" for (rn, rm, p) in rows if rn == n)
        table_lines.append(f"{n:<5}{cells}")
    obj = [{"n": n, "m": m, "probability": p} for n, m, p in rows]
    _emit(args, "\n".join(table_lines), "\n".join(csv_lines) + "\n", obj)
    return 0


def _cmd_ic_curve(args) -> int:
    rows = ic_curve(args.m)
    csv_lines = ["m,probability"] + [f"{m},{p!r}" for m, p in rows]
    table_lines = [f"m={m:<4} {p:.5f}" for m, p in rows]
    obj = [{"m": m, "probability": p} for m, p in rows]
    _emit(args, "\n".join(table_lines), "\n".join(csv_lines) + "\n", obj)
    return 0


def _cmd_audit(args) -> int:
    rows = audit_table1(samples=args.samples, seed=args.seed)
    csv_lines = ["case,sign_01,sign_02,sign_12,formula,estimate,stderr,pass"]
    table_lines = []
    for r in rows:
        csv_lines.append(
            f"{r.number},{r.signs[0]},{r.signs[1]},{r.signs[2]},"
            f"{r.formula_value!r},{r.mc_value!r},{r.mc_stderr!r},{int(r.passed)}"
        )
        status = "ok" if r.passed else "MISMATCH"
        table_lines.append(
            f"case {r.number:>2}  formula {r.formula_value:.5f}  "
            f"mc {r.mc_value:.5f}  stderr {r.mc_stderr:.5f}  {status}"
        )
    obj = [
        {
            "case": r.number,
            "signs": list(r.signs),
            "formula": r.formula_value,
            "estimate": r.mc_value,
            "stderr": r.mc_stderr,
            "pass": r.passed,
        }
        for r in rows
    ]
    _emit(args, "\n".join(table_lines), "\n".join(csv_lines) + "\n", obj)
    return 0 if all(r.passed for r in rows) else 1


def _cmd_culture(args) -> int:
    culture = load_culture(args.culture, args.m)
    if args.out is None:
        raise CultureFormatError("culture requires --out PATH")
    save_culture(culture, args.out, fmt=args.format)
    return 0


def _add_common(parser, *, culture=False, needs_m=False, out=True) -> None:
    if culture:
        parser.add_argument(
            "--culture",
            required=True,
            help="named culture (ic, cyclic, dc:<path>) or path to a JSON/CSV file",
        )
    if needs_m:
        parser.add_argument("--m", type=int, default=None, help="candidate count")
    if out:
        parser.add_argument("--out", default=None, help="write output to a file")
        parser.add_argument("--format", choices=("table", "csv", "json"), default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="condorcet",
        description="Probability that a pairwise-majority winner exists.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact probability by multinomial enumeration")
    _add_common(p, culture=True, needs_m=True)
    p.add_argument("--n", type=int, required=True, help="number of voters")
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    p.add_argument("--budget", type=_parse_count, default=50_000_000)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("mc", help="Monte Carlo estimate (one or more voter counts)")
    _add_common(p, culture=True, needs_m=True)
    p.add_argument("--n", type=_parse_int_list, required=True, help="voter counts, e.g. 11,101,1001")
    p.add_argument("--trials", type=_parse_count, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--mode", choices=("strong", "weak"), default="strong")
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("limit", help="limiting probability as voters grow without bound")
    _add_common(p, culture=True, needs_m=True)
    p.add_argument("--tol", type=float, default=1e-12, help="margin sign tolerance")
    p.add_argument("--samples", type=_parse_count, default=10_000_000,
                   help="Monte Carlo samples for orthant terms without closed form")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_limit)

    p = sub.add_parser("classify", help="three-candidate table row and value")
    _add_common(p, culture=True, needs_m=True)
    p.add_argument("--tol", type=float, default=1e-12, help="margin sign tolerance")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("min-table", help="minimum winner probabilities over cultures")
    _add_common(p)
    p.add_argument("--m", type=_parse_int_list, required=True, help="candidate counts, e.g. 3,4,5,10")
    p.add_argument("--n", type=_parse_int_list, required=True, help="voter counts, e.g. 3-10,19,20")
    p.set_defaults(func=_cmd_min_table)

    p = sub.add_parser("ic-curve", help="uniform-culture limit against the candidate count")
    _add_common(p)
    p.add_argument("--m", type=_parse_int_list, required=True, help="candidate counts, e.g. 2-25")
    p.set_defaults(func=_cmd_ic_curve)

    p = sub.add_parser("audit", help="audit the 27-row classification table by simulation")
    _add_common(p)
    p.add_argument("--table1", action="store_true", help="audit the m=3 table (default action)")
    p.add_argument("--samples", type=_parse_count, default=10_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("culture", help="write a named or loaded culture to a file")
    p.add_argument(
        "--culture",
        required=True,
        help="named culture (ic, cyclic, dc:<path>) or path to a JSON/CSV file",
    )
    p.add_argument("--m", type=int, default=None, help="candidate count")
    p.add_argument("--out", required=True, help="destination file")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.set_defaults(func=_cmd_culture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EnumerationBudgetError, DegenerateVarianceError, CorrelationMatrixError) as exc:
        print(f"condorcet: {exc}", file=sys.stderr)
        return 1
    except (CultureFormatError, ValueError) as exc:
        print(f"condorcet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
