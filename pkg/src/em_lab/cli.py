"""Command-line front end: ``em-lab <subcommand> ...``.

Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional, Sequence, TextIO

from .errors import EmLabError
from .identities import VerifyReport, default_workers, get_record, registry, verify, verify_all
from .stats import distribution, format_statistic, parse_statistic, statistic_vector
from .tableaux import RPartiteTableau, colored_rsk, tableau_descent_set
from .wreath import SUBSETS, enumerate_group, format_window, parse_window

FORMATS = ("text", "json", "csv")
VERIFY_KEYS = ("n", "r", "m", "k", "l", "k2", "l2", "M", "N", "cap")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside square brackets, so ``fmaj[2,1],des`` has two items.

    >>> split_top_level("fmaj[2,1]:q,des:x")
    ['fmaj[2,1]:q', 'des:x']
    """
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur).strip())
    return [s for s in out if s]


def _parse_specs(text: str) -> list[tuple]:
    specs = []
    for item in split_top_level(text):
        stat, sep, var = item.rpartition(":")
        if not sep or not stat or not var:
            raise UsageError(f"expected STAT:VAR, got {item!r}")
        specs.append((parse_statistic(stat), var.strip()))
    return specs


def _window_obj(w) -> dict:
    return {"window": format_window(w), **w.to_json_obj()}


def _dump(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, separators=(",", ":"), sort_keys=False) + "\n")


# subcommands

def _cmd_enumerate(args, out: TextIO) -> int:
    elements = enumerate_group(args.n, args.r, args.subset)
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["window"])
        for w in elements:
            writer.writerow([format_window(w)])
    elif args.format == "json":
        for w in elements:
            _dump(_window_obj(w), out)
    else:
        for w in elements:
            out.write(format_window(w) + "\n")
    return 0


def _cmd_stats(args, out: TextIO) -> int:
    specs = [parse_statistic(s) for s in split_top_level(args.stat)]
    names = [format_statistic(s) for s in specs]
    elements = enumerate_group(args.n, args.r, args.subset)
    if args.format == "json":
        for w in elements:
            _dump({**_window_obj(w), "stats": dict(zip(names, statistic_vector(w, specs)))}, out)
        return 0
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["window"] + names)
        for w in elements:
            writer.writerow([format_window(w)] + list(statistic_vector(w, specs)))
        return 0
    out.write("\t".join(["window"] + names) + "\n")
    for w in elements:
        out.write("\t".join([format_window(w)] + [str(v) for v in statistic_vector(w, specs)]) + "\n")
    return 0


def _cmd_distribution(args, out: TextIO) -> int:
    specs = _parse_specs(args.stats)
    poly = distribution(args.n, args.r, args.subset, specs)
    if args.format == "json":
        _dump(poly.to_json_obj(), out)
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(list(poly.vars) + ["coeff"])
        for e, c in poly.sorted_terms():
            writer.writerow(list(e) + [c])
    else:
        out.write(str(poly) + "\n")
    return 0


def _tableau_text(T: RPartiteTableau) -> str:
    comps = []
    for t in T:
        comps.append("(" + " / ".join(" ".join(map(str, row)) for row in t) + ")")
    return " | ".join(comps)


def _cmd_rsk(args, out: TextIO) -> int:
    w = parse_window(args.w, args.r)
    P, Q = colored_rsk(w)
    des_q = sorted(tableau_descent_set(Q))
    des_p = sorted(tableau_descent_set(P))
    if args.format == "json":
        _dump({"w": _window_obj(w), "P": P.to_json_obj(), "Q": Q.to_json_obj(),
               "des_P": des_p, "des_Q": des_q}, out)
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["w", "P", "Q", "des_P", "des_Q"])
        writer.writerow([format_window(w), _tableau_text(P), _tableau_text(Q),
                         " ".join(map(str, des_p)), " ".join(map(str, des_q))])
    else:
        out.write(f"w     {format_window(w)}\n")
        out.write(f"P     {_tableau_text(P)}\n")
        out.write(f"Q     {_tableau_text(Q)}\n")
        out.write(f"Des P {{{', '.join(map(str, des_p))}}}\n")
        out.write(f"Des Q {{{', '.join(map(str, des_q))}}}\n")
    return 0


def _fmt_kv(d: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in d.items()) or "-"


def _report_line(rep: VerifyReport) -> str:
    status = "PASS" if rep.passed else "FAIL"
    line = f"{status} {rep.id} [{_fmt_kv(rep.params)}] [{_fmt_kv(rep.truncations)}]"
    if rep.mismatch is not None:
        mm = rep.mismatch
        line += f" first mismatch at {_fmt_kv(dict(mm.exponents)) if mm.exponents else '1'}: lhs {mm.lhs}, rhs {mm.rhs}"
    if rep.error is not None:
        line += f" error: {rep.error}"
    return line


def _write_reports(reports: Sequence[VerifyReport], fmt: str, out: TextIO, summary: bool) -> None:
    if fmt == "json":
        _dump([r.to_json_obj() for r in reports], out)
        return
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["id", "params", "truncations", "pass", "mismatch", "error"])
        for r in reports:
            mm = json.dumps(r.mismatch.to_json_obj(), separators=(",", ":")) if r.mismatch else ""
            writer.writerow([r.id, json.dumps(r.params, separators=(",", ":")),
                             json.dumps(r.truncations, separators=(",", ":")),
                             "true" if r.passed else "false", mm, r.error or ""])
        return
    for r in reports:
        out.write(_report_line(r) + "\n")
    if summary:
        failed = sum(1 for r in reports if not r.passed)
        out.write(f"{len(reports) - failed} passed, {failed} failed\n")


def _cmd_verify(args, out: TextIO) -> int:
    rec = get_record(args.id)
    given = {k: getattr(args, k) for k in VERIFY_KEYS if getattr(args, k) is not None}
    params = {k: v for k, v in given.items() if k not in rec.truncations}
    truncs = {k: v for k, v in given.items() if k in rec.truncations}
    rep = verify(rec.id, params, truncs).stripped()
    _write_reports([rep], args.format, out, summary=False)
    return 0 if rep.passed else 1


def _load_grid(path: str) -> list:
    try:
        with open(path, encoding="utf-8") as fh:
            grid = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read grid file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"grid file is not valid JSON: {exc}") from None
    if not isinstance(grid, list):
        raise UsageError("grid file must hold a JSON list")
    for item in grid:
        if not isinstance(item, dict) or not isinstance(item.get("id"), str):
            raise UsageError("every grid entry needs a string 'id'")
        for key in ("params", "truncations"):
            if not isinstance(item.get(key, {}), dict):
                raise UsageError(f"grid entry {key!r} must be an object")
    return grid


def _resolve_workers(flag: Optional[int]) -> int:
    if os.environ.get("EM_LAB_WORKERS"):
        return default_workers()
    return flag if flag is not None else default_workers()


def _cmd_verify_all(args, out: TextIO) -> int:
    grid = _load_grid(args.grid) if args.grid else None
    reports = verify_all(grid, workers=_resolve_workers(args.workers))
    _write_reports(reports, args.format, out, summary=True)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_list(args, out: TextIO) -> int:
    recs = registry()
    if args.format == "json":
        _dump([{"id": r.id, "strategy": r.strategy, "params": {k: list(v) for k, v in r.validity.items()},
                "truncations": dict(r.truncations), "summary": r.summary,
                **({"note": r.note} if r.note else {})} for r in recs], out)
    elif args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["id", "strategy", "params", "truncations", "summary", "note"])
        for r in recs:
            writer.writerow([r.id, r.strategy, " ".join(r.validity), " ".join(r.truncations),
                             r.summary, r.note])
    else:
        width = max(len(r.id) for r in recs)
        for r in recs:
            out.write(f"{r.id:<{width}}  {r.strategy:<13}  {r.summary}\n")
            if r.note:
                out.write(f"{'':<{width}}  {'':<13}  note: {r.note}\n")
    return 0


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--workers", type=_positive, default=None,
                        help="worker processes (EM_LAB_WORKERS overrides)")

    parser = _Parser(prog="em-lab", description="Colored permutation statistics and identity checks.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def group_args(p, subset=True):
        p.add_argument("--n", type=_nonneg, required=True)
        p.add_argument("--r", type=_positive, required=True)
        if subset:
            p.add_argument("--subset", choices=SUBSETS, default="all")

    p = sub.add_parser("enumerate", parents=[common], help="list elements in window notation")
    group_args(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("stats", parents=[common], help="statistic table, one row per element")
    group_args(p)
    p.add_argument("--stat", required=True, help='comma-separated statistics, e.g. "des,fmaj[2,1]"')
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("distribution", parents=[common], help="joint generating polynomial")
    group_args(p)
    p.add_argument("--stats", required=True, help='STAT:VAR pairs, e.g. "des@color:x,fmaj:q"')
    p.set_defaults(func=_cmd_distribution)

    p = sub.add_parser("rsk", parents=[common], help="colored RSK of one element")
    p.add_argument("--r", type=_positive, required=True)
    p.add_argument("--w", required=True, help='window, e.g. "2^1 1^0 3^2"')
    p.set_defaults(func=_cmd_rsk)

    p = sub.add_parser("verify", parents=[common], help="check one identity at one point")
    p.add_argument("--id", required=True)
    for key in VERIFY_KEYS:
        p.add_argument(f"--{key}", type=_nonneg, default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("verify-all", parents=[common], help="check every identity on its grid")
    p.add_argument("--grid", default=None, help="JSON list of {id, params, truncations}")
    p.set_defaults(func=_cmd_verify_all)

    p = sub.add_parser("list-identities", parents=[common], help="registry ids and summaries")
    p.set_defaults(func=_cmd_list)
    return parser


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
        err: Optional[TextIO] = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return 2
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"em-lab {args.command}: {exc}\n")
        return 2
    except EmLabError as exc:
        err.write(f"em-lab {args.command}: {exc}\n")
        return 2


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
