"""Command-line front end.

Exit status: 0 on success, 1 on a usage error, 2 on a domain error and 3 when
the rule base is inconsistent. Errors go to stderr only.

Machine output (``--format machine``) is JSON with sorted keys; rationals are
strings ``"p/q"`` (bare integers when the denominator is 1).
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import sys

from . import decision, invariants as inv
from .decision import ConsistencyError, RuleSet, Target, Verdict
from .exact_arith import DomainError, format_rational


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        v = int(text)
        return range(v, v + 1)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None


def _add_common(p, degree=True, rank=True):
    p.add_argument("-g", "--genus", type=int, required=True)
    if rank:
        p.add_argument("-n", "--rank", type=int, required=True)
    if degree:
        p.add_argument("-d", "--degree", type=int, required=True)
    p.add_argument("--no-petri", action="store_true", help="do not assume a Petri curve")
    p.add_argument("--format", choices=("human", "machine", "csv"), default="human")
    p.add_argument("--output", metavar="FILE", help="write the result to FILE")


def _add_rules(p):
    p.add_argument("--mode", choices=("full", "no-blanket"), default="full")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cohsys",
        description="Invariants and existence verdicts for coherent systems of type (n,d,n+1).",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("beta", help="Brill-Noether number")
    _add_common(p)
    p.add_argument("-k", "--sections", type=int, help="number of sections (default n+1)")

    _add_common(sub.add_parser("alpha-l", help="large-alpha threshold alpha_l"))
    _add_common(sub.add_parser("critical-values", help="candidate critical values"))
    _add_common(sub.add_parser("strata", help="stratification of G_L by torsion length"))
    _add_common(sub.add_parser("count", help="number of points of G_L when beta=0"))
    _add_common(sub.add_parser("flip", help="extension types of the top flip"))

    p = sub.add_parser("decide", help="decide (non)emptiness of GL, U, US or B")
    _add_common(p)
    _add_rules(p)
    p.add_argument("--target", choices=("gl", "u", "us", "b"), default="u", type=str.lower)
    p.add_argument("--explain", action="store_true", help="print the provenance chain")

    p = sub.add_parser("sweep", help="verdict table over ranges of genus and degree")
    p.add_argument("--genus-range", type=_range, required=True, metavar="A..B")
    p.add_argument("--degree-range", type=_range, required=True, metavar="A..B")
    rk = p.add_mutually_exclusive_group(required=True)
    rk.add_argument("-n", "--rank", type=int)
    rk.add_argument("--rank-range", type=_range, metavar="A..B")
    p.add_argument("--target", choices=("gl", "u", "us", "b"), default="u", type=str.lower)
    _add_rules(p)
    p.add_argument("--no-petri", action="store_true")
    p.add_argument("--format", choices=("human", "machine", "csv"), default="csv")
    p.add_argument("--output", metavar="FILE")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("butler", help="stable dual span status (via U(n,d,n+1))")
    _add_common(p)
    _add_rules(p)

    p = sub.add_parser("bn-report", help="facts about the Brill-Noether locus B(n,d,n+1)")
    _add_common(p)
    _add_rules(p)
    return parser


# --- serialisation -----------------------------------------------------------


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def _type(t: inv.CSType) -> list[int]:
    return [t.n, t.d, t.k]


def verdict_to_dict(v: Verdict) -> dict:
    return {
        "status": v.status.value,
        "target": v.target.value,
        "genus": v.genus,
        "rank": v.n,
        "degree": v.d,
        "summary": v.summary(),
        "note": v.note,
        "rule_ids": list(v.rule_ids),
        "provenance": [
            {
                "rule_id": s.rule_id,
                "citation": s.citation,
                "conclusion": s.conclusion,
                "reason": s.reason,
                "premises": list(s.premises),
            }
            for s in v.provenance
        ],
    }


def _table(rows: list[list], header: list[str]) -> str:
    cells = [header] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    # numbers right-aligned; the last (free text) column left-aligned
    lines = [
        "  ".join([c.rjust(w) for c, w in zip(r[:-1], widths)] + [r[-1]]).rstrip()
        for r in cells
    ]
    return "\n".join(lines) + "\n"


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _require(fmt: str, allowed: tuple[str, ...], command: str):
    if fmt not in allowed:
        raise UsageError(f"--format {fmt} is not available for {command}")


# --- commands ----------------------------------------------------------------


def _ctx(args) -> inv.CurveContext:
    return inv.CurveContext(args.genus, petri=not args.no_petri)


def cmd_beta(args) -> str:
    _require(args.format, ("human", "machine"), "beta")
    ctx = _ctx(args)
    k = args.rank + 1 if args.sections is None else args.sections
    value = inv.beta(ctx, inv.CSType(args.rank, args.degree, k))
    if args.format == "machine":
        return _json({"genus": ctx.genus, "rank": args.rank, "degree": args.degree,
                      "sections": k, "beta": value})
    return f"{value}\n"


def cmd_alpha_l(args) -> str:
    _require(args.format, ("human", "machine"), "alpha-l")
    ctx = _ctx(args)
    value = inv.alpha_l(ctx, args.rank, args.degree)
    if args.format == "machine":
        return _json({"genus": ctx.genus, "rank": args.rank, "degree": args.degree,
                      "alpha_l": value})
    return f"{value}\n"


def cmd_critical_values(args) -> str:
    ctx = _ctx(args)
    cands = inv.critical_value_candidates(ctx, args.rank, args.degree)
    top = inv.alpha_l(ctx, args.rank, args.degree)
    if args.format == "machine":
        return _json({
            "genus": ctx.genus, "rank": args.rank, "degree": args.degree,
            "alpha_l": top,
            "candidates": [
                {"alpha": format_rational(c.alpha), "witnesses": [list(w) for w in c.witnesses]}
                for c in cands
            ],
        })
    rows = [
        [format_rational(c.alpha), " ".join(f"({w.n1},{w.d1},{w.k1})" for w in c.witnesses)]
        for c in cands
    ]
    if args.format == "csv":
        return _csv(rows, ["alpha", "witnesses"])
    if not cands:
        return "no candidate critical values\n"
    return _table(rows, ["alpha", "witnesses (n1,d1,k1)"])


def cmd_strata(args) -> str:
    ctx = _ctx(args)
    rows = inv.stratification(ctx, args.rank, args.degree)
    b = inv.beta_np1(ctx, args.rank, args.degree)
    if args.format == "machine":
        return _json({
            "genus": ctx.genus, "rank": args.rank, "degree": args.degree, "beta": b,
            "t1": rows[-1].t,
            "rows": [{"t": r.t, "dim": r.dim, "irreducible": r.irreducible,
                      "equidimensional": r.equidimensional} for r in rows],
        })
    table = [[r.t, r.dim, "yes" if r.irreducible else "no"] for r in rows]
    if args.format == "csv":
        return _csv(table, ["t", "dim", "irreducible"])
    return _table(table, ["t", "dim", "irreducible"])


def cmd_count(args) -> str:
    _require(args.format, ("human", "machine"), "count")
    ctx = _ctx(args)
    value = inv.cardinality_beta_zero(ctx, args.rank, args.degree)
    if args.format == "machine":
        return _json({"genus": ctx.genus, "rank": args.rank, "degree": args.degree,
                      "count": value})
    return f"{value}\n"


def cmd_flip(args) -> str:
    _require(args.format, ("human", "machine"), "flip")
    ctx = _ctx(args)
    f = inv.canonical_flip(ctx, args.rank, args.degree)
    if args.format == "machine":
        return _json({
            "genus": ctx.genus, "rank": args.rank, "degree": args.degree,
            "type1": _type(f.type1), "type2": _type(f.type2),
            "alpha": format_rational(f.alpha), "flip_dim_bound": f.flip_dim_bound,
            "c12": f.c12, "c21": f.c21,
        })
    return (
        f"sub type       {f.type1}\n"
        f"quotient type  {f.type2}\n"
        f"alpha          {format_rational(f.alpha)}\n"
        f"flip dim <=    {f.flip_dim_bound}\n"
        f"C12 = {f.c12}, C21 = {f.c21}\n"
    )


def cmd_decide(args) -> str:
    _require(args.format, ("human", "machine"), "decide")
    ctx = _ctx(args)
    v = decision.decide(ctx, args.rank, args.degree, Target.parse(args.target),
                        RuleSet.from_mode(args.mode))
    if args.format == "machine":
        return _json(verdict_to_dict(v))
    out = [v.summary()]
    if args.explain:
        for i, s in enumerate(v.provenance, 1):
            premises = f" from {', '.join(s.premises)}" if s.premises else ""
            out.append(f"  {i}. {s.conclusion} by {s.rule_id} [{s.reason}]{premises}")
            out.append(f"     {s.citation}")
    return "\n".join(out) + "\n"


SWEEP_HEADER = ["genus", "rank", "degree", "beta", "verdict", "rule_ids"]


def cmd_sweep(args) -> str:
    ranks = args.rank_range if args.rank_range is not None else [args.rank]
    rows = decision.sweep(
        args.genus_range, ranks, args.degree_range, Target.parse(args.target),
        RuleSet.from_mode(args.mode), petri=not args.no_petri, max_workers=args.workers,
    )
    if args.format == "machine":
        return _json([
            {"genus": r.genus, "rank": r.rank, "degree": r.degree, "beta": r.beta,
             "verdict": r.verdict.status.value, "rule_ids": list(r.verdict.rule_ids)}
            for r in rows
        ])
    table = [
        [r.genus, r.rank, r.degree, r.beta, r.verdict.status.value, ";".join(r.verdict.rule_ids)]
        for r in rows
    ]
    if args.format == "csv":
        return _csv(table, SWEEP_HEADER)
    return _table(table, SWEEP_HEADER)


def cmd_butler(args) -> str:
    _require(args.format, ("human", "machine"), "butler")
    ctx = _ctx(args)
    s = decision.butler_status(ctx, args.rank, args.degree, RuleSet.from_mode(args.mode))
    if args.format == "machine":
        return _json({"status": s.status, "note": s.note, "verdict": verdict_to_dict(s.verdict)})
    out = f"{s.status}: U({args.rank},{args.degree},{args.rank + 1}) {s.verdict.summary()}\n"
    if s.note:
        out += f"note: {s.note}\n"
    return out


def cmd_bn_report(args) -> str:
    _require(args.format, ("human", "machine"), "bn-report")
    ctx = _ctx(args)
    r = decision.bn_report(ctx, args.rank, args.degree, RuleSet.from_mode(args.mode))
    if args.format == "machine":
        return _json({"genus": r.genus, "rank": r.n, "degree": r.d, "beta": r.beta,
                      "alpha_l": r.alpha_l, "facts": r.facts, "notes": list(r.notes)})
    lines = [f"B({r.n},{r.d},{r.n + 1}) on genus {r.genus}: beta={r.beta}, alpha_l={r.alpha_l}"]
    lines += [f"{k}: {v}" for k, v in sorted(r.facts.items())]
    lines += [f"- {note}" for note in r.notes]
    return "\n".join(lines) + "\n"


COMMANDS = {
    "beta": cmd_beta,
    "alpha-l": cmd_alpha_l,
    "critical-values": cmd_critical_values,
    "strata": cmd_strata,
    "count": cmd_count,
    "flip": cmd_flip,
    "decide": cmd_decide,
    "sweep": cmd_sweep,
    "butler": cmd_butler,
    "bn-report": cmd_bn_report,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"cohsys: error: {exc}", file=stderr)
        return 1
    except DomainError as exc:
        print(f"cohsys: domain error: {exc}", file=stderr)
        return 2
    except ConsistencyError as exc:
        print(f"cohsys: consistency error: {exc}", file=stderr)
        for label, chain in (("first", exc.first), ("second", exc.second)):
            print(f"  {label} chain:", file=stderr)
            for s in chain:
                print(f"    {s.conclusion} by {s.rule_id} [{s.reason}]", file=stderr)
        return 3
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
