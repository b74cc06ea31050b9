"""Command-line front end: ``ekrlab {count,enumerate,bounds,verify,sweep,criterion}``.

Exit codes: 0 success, 1 inconclusive search (node cap reached) or a
non-monotone criterion, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from . import bounds as bnd
from . import generic
from .core import (
    UniverseParams,
    canonical_family_size,
    count_subpartitions,
    enumerate_subpartitions,
    format_subpartition,
)
from .errors import EKRError, InconclusiveThreshold, NonMonotoneCriterion
from .search import TheoremReport, empirical_threshold, sweep_theorem, verify_theorem

CSV_HEADER = ["command", "n", "k", "ell", "t", "universe_size", "canonical_size",
              "bound_source", "bound_value", "max_size", "exhausted",
              "all_maxima_canonical", "holds"]

@dataclass
class RunPlan:
    command: str
    params: Any
    budget: float = 60.0
    output: Optional[str] = None
    format: str = "text"
    options: dict = field(default_factory=dict)


_DURATION_RE = re.compile(r"^(\d+(?:\.\d+)?)(ms|s|m|h)?$")
_UNITS = {"ms": 0.001, "s": 1, "m": 60, "h": 3600, None: 1}


def parse_duration(text: str) -> float:
    m = _DURATION_RE.match(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"invalid duration {text!r} (try 60s, 2m, 500ms)")
    value = float(m.group(1)) * _UNITS[m.group(2)]
    if value <= 0:
        raise argparse.ArgumentTypeError("--budget must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ekrlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--n", type=int)
    shared.add_argument("--k", type=int)
    shared.add_argument("--ell", type=int)
    shared.add_argument("--t", type=int, default=1)
    shared.add_argument("--budget", type=parse_duration, default=60.0)
    shared.add_argument("--format", choices=("text", "csv", "json"), default="text")
    shared.add_argument("--out")

    for name in ("count", "enumerate", "bounds"):
        sub.add_parser(name, parents=[shared])
    verify = sub.add_parser("verify", parents=[shared])
    verify.add_argument("--all-maxima", action="store_true",
                        help="also enumerate every maximum family and test it is canonical")
    sweep = sub.add_parser("sweep", parents=[shared])
    sweep.add_argument("--n-min", type=int, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--all-maxima", action="store_true")
    crit = sub.add_parser("criterion", parents=[shared])
    crit.add_argument("--family", required=True,
                      choices=("ksets", "sequences", "designs", "subpartitions"))
    crit.add_argument("--vary")
    crit.add_argument("--min", type=int)
    crit.add_argument("--max", type=int)
    crit.add_argument("--q", type=int)
    crit.add_argument("--m", type=int)
    crit.add_argument("--lambda", dest="lam", type=int, default=1)
    crit.add_argument("--strength", type=int, default=2)
    return parser


_FAMILY_FIELDS = {
    "ksets": ("n", "k"),
    "sequences": ("n", "q"),
    "designs": ("strength", "n", "m", "lam"),
    "subpartitions": ("n", "k", "ell"),
}


def parse_args(argv: list[str]) -> RunPlan:
    """Validated plan; usage problems exit with status 2 via argparse."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    cmd = ns.command
    plan = RunPlan(cmd, None, ns.budget, ns.out, ns.format)

    def need(*flags):
        for flag in flags:
            if getattr(ns, flag.replace("-", "_")) is None:
                parser.error(f"{cmd} requires --{flag}")

    if cmd in ("count", "enumerate", "bounds", "verify"):
        need("n", "k", "ell")
        try:
            plan.params = UniverseParams(ns.n, ns.k, ns.ell, ns.t)
        except EKRError as exc:
            parser.error(f"--n/--k/--ell/--t: {exc}")
        if cmd == "enumerate" and ns.format == "csv":
            parser.error("--format csv is not available for enumerate (use text or json)")
        if cmd == "bounds" and ns.t >= ns.ell:
            parser.error(f"--t must be < --ell for bounds, got t={ns.t} ell={ns.ell}")
        if cmd == "verify":
            plan.options["all_maxima"] = ns.all_maxima
    elif cmd == "sweep":
        need("k", "ell")
        try:
            # validates k, ell, t against the largest n in the range
            plan.params = UniverseParams(max(ns.n_max, ns.k * ns.ell), ns.k, ns.ell, ns.t)
        except EKRError as exc:
            parser.error(f"--k/--ell/--t: {exc}")
        if ns.n_min > ns.n_max:
            parser.error("--n-min must not exceed --n-max")
        plan.options.update(n_min=ns.n_min, n_max=ns.n_max, all_maxima=ns.all_maxima)
    else:
        if ns.format == "csv":
            parser.error("--format csv is not available for criterion (use text or json)")
        fields = _FAMILY_FIELDS[ns.family]
        if ns.vary is not None:
            if ns.vary not in fields:
                parser.error(f"--vary must be one of {', '.join(fields)} for {ns.family}")
            need("min", "max")
            if ns.min > ns.max:
                parser.error("--min must not exceed --max")
        template = {}
        for name in fields:
            if name == ns.vary:
                continue
            value = getattr(ns, name)
            if value is None:
                flag = "lambda" if name == "lam" else name
                parser.error(f"criterion --family {ns.family} requires --{flag}")
            template[name] = value
        plan.params = template
        plan.options.update(family=ns.family, vary=ns.vary, min=ns.min, max=ns.max)
        if ns.vary is None:
            try:
                generic.get_family(ns.family).make_params(**template)
            except EKRError as exc:
                parser.error(str(exc))
    return plan


# ---------------------------------------------------------------- rendering

def _num(x) -> str:
    return str(x)


def _bool(x) -> str:
    return "" if x is None else ("true" if x else "false")


def _params_json(p: UniverseParams) -> dict:
    return {"n": p.n, "k": p.k, "ell": p.ell, "t": p.t}


def _csv_text(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, CSV_HEADER, lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else v) for k, v in row.items()})
    return buf.getvalue()


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _base_row(command: str, p: UniverseParams) -> dict:
    return {"command": command, "n": p.n, "k": p.k, "ell": p.ell, "t": p.t}


def _bound_fields(p: UniverseParams) -> Optional[bnd.BoundReport]:
    if p.t >= p.ell:
        return None
    return bnd.bound_report(p)


def _theorem_json(r: TheoremReport, bound: Optional[bnd.BoundReport]) -> dict:
    out = {
        "params": _params_json(r.params),
        "universe_size": _num(r.universe_size),
        "canonical_size": _num(r.canonical_size),
        "max_size": _num(r.max_size),
        "max_is_canonical_size": r.max_is_canonical_size,
        "all_maxima_canonical": r.all_maxima_canonical,
        "maxima_count": None if r.maxima_count is None else _num(r.maxima_count),
        "n0_witness": r.n0_witness,
        "exhausted": r.exhausted,
        "inconclusive": r.inconclusive,
    }
    if bound is not None:
        out["bound_source"] = bound.bound_source
        out["non_centered_bound"] = _num(bound.non_centered_bound)
    return out


def _theorem_row(command: str, r: TheoremReport, bound) -> dict:
    row = _base_row(command, r.params)
    row.update(universe_size=r.universe_size, canonical_size=r.canonical_size,
               max_size=r.max_size, exhausted=_bool(r.exhausted),
               all_maxima_canonical=_bool(r.all_maxima_canonical),
               holds=_bool(r.max_is_canonical_size))
    if bound is not None:
        row.update(bound_source=bound.bound_source, bound_value=bound.non_centered_bound)
    return row


def _theorem_text(r: TheoremReport, bound) -> list[str]:
    p = r.params
    lines = [
        f"n={p.n} k={p.k} ell={p.ell} t={p.t}",
        f"U={r.universe_size}",
        f"canonical(t={p.t})={r.canonical_size}",
        f"max={r.max_size}" + ("" if r.exhausted else " (lower bound, search inconclusive)"),
        f"max_is_canonical_size={_bool(r.max_is_canonical_size)}",
    ]
    if r.all_maxima_canonical is not None:
        lines.append(f"maxima={r.maxima_count} all_maxima_canonical={_bool(r.all_maxima_canonical)}")
    if bound is not None:
        lines.append(f"{bound.bound_source}={bound.non_centered_bound}")
    lines.append(f"exhausted={_bool(r.exhausted)} elapsed={r.elapsed:.3f}s")
    return lines


def _run_count(plan: RunPlan) -> tuple[int, str]:
    p = plan.params
    u = count_subpartitions(p.n, p.ell, p.k)
    canon = {t: canonical_family_size(p.n, p.ell, p.k, t) for t in range(1, p.ell + 1)}
    if plan.format == "json":
        return 0, _json_text({
            "command": "count", "params": _params_json(p), "universe_size": _num(u),
            "canonical_size": _num(canon[p.t]),
            "canonical_sizes": {str(t): _num(c) for t, c in canon.items()},
        })
    if plan.format == "csv":
        row = _base_row("count", p)
        row.update(universe_size=u, canonical_size=canon[p.t])
        return 0, _csv_text([row])
    lines = [f"n={p.n} k={p.k} ell={p.ell}", f"U={u}"]
    lines += [f"canonical(t={t})={c}" for t, c in canon.items()]
    return 0, "\n".join(lines) + "\n"


def _run_enumerate(plan: RunPlan) -> tuple[int, str]:
    items = [format_subpartition(s) for s in enumerate_subpartitions(plan.params)]
    if plan.format == "json":
        return 0, _json_text(items)
    return 0, "".join(line + "\n" for line in items)


def _run_bounds(plan: RunPlan) -> tuple[int, str]:
    p = plan.params
    rep = bnd.bound_report(p)
    extra: dict[str, Any] = {}
    if p.t == 1:
        try:
            ineq = bnd.theorem1_inequality(p.n, p.k, p.ell)
        except EKRError:
            ineq = None
        if ineq is not None:
            extra = {"theorem1_case": ineq.case, "theorem1_lhs": ineq.lhs,
                     "theorem1_rhs": ineq.rhs, "theorem1_holds": ineq.holds}
        holds = rep.inequality_holds
    else:
        cond = bnd.theorem2_condition(p.n, p.k, p.ell, p.t)
        extra = {"condition_lhs": cond.lhs, "condition_rhs": cond.rhs,
                 "condition_holds": cond.holds,
                 "condition_chain_holds": bnd.theorem2_condition_closed(p.n, p.k, p.ell, p.t),
                 "sufficient_n": bnd.sufficient_n_theorem2(p.k, p.ell, p.t)}
        holds = rep.inequality_holds
    universe = count_subpartitions(p.n, p.ell, p.k)
    if plan.format == "json":
        out = {"command": "bounds", "params": _params_json(p), "universe_size": _num(universe),
               "canonical_size": _num(rep.canonical_size),
               "non_centered_bound": _num(rep.non_centered_bound),
               "bound_source": rep.bound_source, "inequality_holds": rep.inequality_holds}
        for key, value in extra.items():
            big = key.endswith(("_lhs", "_rhs"))
            out[key] = _num(value) if big else value
        return 0, _json_text(out)
    if plan.format == "csv":
        row = _base_row("bounds", p)
        row.update(universe_size=universe, canonical_size=rep.canonical_size,
                   bound_source=rep.bound_source, bound_value=rep.non_centered_bound,
                   holds=_bool(holds))
        return 0, _csv_text([row])
    lines = [f"n={p.n} k={p.k} ell={p.ell} t={p.t}", f"U={universe}",
             f"canonical={rep.canonical_size}", f"{rep.bound_source}={rep.non_centered_bound}",
             f"inequality_holds={_bool(rep.inequality_holds)}"]
    for key, value in extra.items():
        lines.append(f"{key}={_bool(value) if isinstance(value, bool) else ('' if value is None else value)}")
    return 0, "\n".join(lines) + "\n"


def _run_verify(plan: RunPlan) -> tuple[int, str]:
    p = plan.params
    r = verify_theorem(p, plan.budget, all_maxima=plan.options.get("all_maxima", False))
    bound = _bound_fields(p)
    code = 1 if r.inconclusive else 0
    if plan.format == "json":
        return code, _json_text({"command": "verify", **_theorem_json(r, bound)})
    if plan.format == "csv":
        return code, _csv_text([_theorem_row("verify", r, bound)])
    return code, "\n".join(_theorem_text(r, bound)) + "\n"


def _run_sweep(plan: RunPlan) -> tuple[int, str]:
    p = plan.params
    o = plan.options
    reports = sweep_theorem(p.k, p.ell, p.t, o["n_min"], o["n_max"], plan.budget,
                            all_maxima=o["all_maxima"])
    try:
        threshold = empirical_threshold(reports)
        code = 0
    except InconclusiveThreshold:
        threshold, code = None, 1
    for r in reports:
        r.n0_witness = threshold
    bounds = [_bound_fields(r.params) for r in reports]
    if plan.format == "json":
        return code, _json_text({
            "command": "sweep", "k": p.k, "ell": p.ell, "t": p.t,
            "n_min": o["n_min"], "n_max": o["n_max"], "n0_witness": threshold,
            "reports": [_theorem_json(r, b) for r, b in zip(reports, bounds)],
        })
    if plan.format == "csv":
        return code, _csv_text([_theorem_row("sweep", r, b) for r, b in zip(reports, bounds)])
    lines = []
    for r, b in zip(reports, bounds):
        lines += _theorem_text(r, b) + [""]
    if code:
        lines.append("empirical threshold: inconclusive")
    elif threshold is None:
        lines.append("empirical threshold: none in tested range")
    else:
        lines.append(f"empirical threshold: n0 <= {threshold} on tested range "
                     f"[{o['n_min']}, {o['n_max']}]")
    return code, "\n".join(lines) + "\n"


def _rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _run_criterion(plan: RunPlan) -> tuple[int, str]:
    o = plan.options
    fam = generic.get_family(o["family"])
    if o["vary"] is None:
        res = generic.ekr_criterion_holds(fam, fam.make_params(**plan.params))
        if plan.format == "json":
            return 0, _json_text({"command": "criterion", "family": fam.name,
                                  "params": plan.params, "lhs": _rational(res.lhs),
                                  "rhs": _rational(res.rhs), "holds": res.holds})
        return 0, (f"family={fam.name} " + " ".join(f"{k}={v}" for k, v in plan.params.items())
                   + f"\nlhs={_rational(res.lhs)}\nrhs={_rational(res.rhs)}"
                   + f"\nholds={_bool(res.holds)}\n")
    error = None
    try:
        threshold = generic.criterion_threshold(fam, plan.params, o["vary"],
                                                range(o["min"], o["max"] + 1))
    except NonMonotoneCriterion as exc:
        threshold, error = None, str(exc)
    code = 1 if error else 0
    if plan.format == "json":
        return code, _json_text({"command": "criterion", "family": fam.name,
                                 "params": plan.params, "vary": o["vary"], "min": o["min"],
                                 "max": o["max"], "threshold": threshold, "error": error})
    head = (f"family={fam.name} " + " ".join(f"{k}={v}" for k, v in plan.params.items())
            + f" vary={o['vary']} range=[{o['min']},{o['max']}]")
    tail = f"error={error}" if error else f"threshold={'' if threshold is None else threshold}"
    return code, head + "\n" + tail + "\n"


_RUNNERS = {
    "count": _run_count,
    "enumerate": _run_enumerate,
    "bounds": _run_bounds,
    "verify": _run_verify,
    "sweep": _run_sweep,
    "criterion": _run_criterion,
}


def execute(plan: RunPlan) -> int:
    try:
        code, text = _RUNNERS[plan.command](plan)
    except EKRError as exc:
        print(f"ekrlab {plan.command}: error: {exc}", file=sys.stderr)
        return 2
    if plan.output:
        with open(plan.output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv: Optional[list[str]] = None) -> int:
    plan = parse_args(sys.argv[1:] if argv is None else argv)
    return execute(plan)


if __name__ == "__main__":
    sys.exit(main())
