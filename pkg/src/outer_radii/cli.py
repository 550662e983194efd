"""Command-line entry point: ``outer-radii radius | table | sympoly | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from typing import Optional

import numpy as np

from . import certify
from .cylinder import Cylinder, touching_set
from .errors import RadiiError
from .geometry import Polytope
from .grassmann import SearchConfig, SearchResult, minimize_rj
from .simplex import Formula, RadiiQuery, closed_form, regular_simplex, standard_embedding
from .sympoly import optimal_solutions

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

TABLE_HEADER = ["n", "j", "closed_form", "numeric", "gap", "exact_expr"]

_nullable_number = {"type": ["number", "null"]}
TABLE_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "rows"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "rows": {
            "type": "array",
            "items": {
                "type": "object",
                "required": TABLE_HEADER + ["enclosure_verified"],
                "properties": {
                    "n": {"type": "integer", "minimum": 1},
                    "j": {"type": "integer", "minimum": 1},
                    "closed_form": _nullable_number,
                    "numeric": _nullable_number,
                    "gap": _nullable_number,
                    "exact_expr": {"type": "string"},
                    "enclosure_verified": {"type": ["boolean", "null"]},
                },
            },
        },
        "wall_time": {"type": "number"},
    },
}


class InputError(Exception):
    pass


def _round(x):
    """15 significant digits; recursive over containers."""
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    if isinstance(x, np.ndarray):
        return _round(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        if not math.isfinite(x):
            return None
        return float(f"{float(x):.15g}") + 0.0
    return x


def _dump_json(report: dict) -> str:
    return json.dumps(_round(report), sort_keys=True, indent=2)


def load_polytope(path: str) -> Polytope:
    """Read ``{"label": optional, "vertices": [[...], ...]}``."""
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read polytope file {path}: {exc}") from exc
    if not isinstance(data, dict) or "vertices" not in data:
        raise InputError("polytope file must be an object with a 'vertices' list")
    verts = data["vertices"]
    if not isinstance(verts, list) or not verts or not all(isinstance(v, list) for v in verts):
        raise InputError("'vertices' must be a non-empty list of lists")
    if len({len(v) for v in verts}) != 1 or len(verts[0]) == 0:
        raise InputError("vertices must all have the same positive length")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for v in verts for x in v):
        raise InputError("vertex coordinates must be numbers")
    try:
        return Polytope(np.array(verts, dtype=float), data.get("label"))
    except (ValueError, RadiiError) as exc:
        raise InputError(str(exc)) from exc


def _config(args) -> SearchConfig:
    return SearchConfig(starts=args.starts, seed=args.seed)


def _enclosure(polytope: Polytope, cyl: Cylinder, radius: float, tol: float) -> dict:
    d = cyl.distances(polytope.vertices)
    excess = float(np.max(d) - radius)
    return {"verified": bool(excess <= tol), "max_excess": excess}


def _touch_dict(polytope: Polytope, cyl: Cylinder) -> dict:
    rep = touching_set(polytope, cyl)
    return {
        "touching": list(rep.touching),
        "nu": rep.nu,
        "case": rep.case.value,
        "hyperplane": list(rep.hyperplane) if rep.hyperplane is not None else None,
        "parallel_to_hyperplane": rep.parallel_to_hyperplane,
    }


def _search_diag(res: SearchResult, starts: int) -> dict:
    return {"starts": starts, "converged_starts": res.converged_starts, "best_start": res.best_start}


# -- radius -------------------------------------------------------------------

def cmd_radius(args) -> tuple:
    if (args.regular is None) == (args.file is None):
        raise InputError("give exactly one of --regular N or --file PATH")
    if args.j is None:
        raise InputError("--j is required")
    if args.regular is not None:
        if args.regular < 1:
            raise InputError("--regular needs n >= 1")
        if not args.edge > 0:
            raise InputError("--edge must be positive")
        polytope = regular_simplex(args.regular, args.edge)
        try:
            answer = closed_form(RadiiQuery(args.regular, args.j, args.edge))
        except (ValueError, RadiiError) as exc:
            raise InputError(str(exc)) from exc
        inputs = {"regular": args.regular, "edge": args.edge, "j": args.j}
    else:
        polytope = load_polytope(args.file)
        answer = None
        inputs = {"file": args.file, "label": polytope.label, "j": args.j}
    n = polytope.dim
    if not 1 <= args.j <= max(n, 1):
        raise InputError(f"j={args.j} outside 1..{n}")

    cfg = _config(args)
    res = minimize_rj(polytope, args.j, cfg)
    cyl = res.best
    numeric = cyl.radius
    has_cf = answer is not None and answer.formula is not Formula.NO_CLOSED_FORM
    radius = answer.value if has_cf else numeric
    gap = abs(numeric - answer.value) if has_cf else None
    # the numeric cylinder is an explicit enclosing witness for the reported radius
    encl = _enclosure(polytope, cyl, radius, args.tol)

    result = {
        "radius": radius,
        "source": "closed_form" if has_cf else "search",
        "formula": answer.formula.value if answer is not None else None,
        "exact_expr": answer.exact_expr if has_cf else "",
        "instance_expr": answer.instance_expr if has_cf else "",
        "numeric": numeric,
        "gap": gap,
        "frame": cyl.axis.vectors,
        "base_point": cyl.base_point,
        "touching": _touch_dict(polytope, cyl),
        "enclosure": encl,
    }
    report = {
        "command": "radius",
        "inputs": inputs,
        "results": result,
        "diagnostics": _search_diag(res, cfg.num_starts(n, args.j)),
    }
    status = EXIT_OK
    if res.converged_starts == 0 or not encl["verified"] or (gap is not None and gap > args.tol):
        status = EXIT_NUMERIC
    return report, status


def _radius_text(report: dict) -> str:
    r = report["results"]
    lines = [f"radius     {r['radius']:.6f}  ({r['source']})"]
    if r["exact_expr"]:
        lines.append(f"exact      {r['exact_expr']}")
    lines.append(f"numeric    {r['numeric']:.6f}")
    t = r["touching"]
    lines.append(f"touching   {t['touching']}  nu={t['nu']}  case={t['case']}")
    lines.append(f"enclosure  {'verified' if r['enclosure']['verified'] else 'FAILED'}")
    return "\n".join(lines)


# -- table --------------------------------------------------------------------

def table_rows(n_min: int, n_max: int, edge: float = 1.0, all_j: bool = False,
               numeric: bool = True, cfg: Optional[SearchConfig] = None, tol: float = 1e-5) -> list:
    rows = []
    scale = edge / math.sqrt(2.0)
    for n in range(n_min, n_max + 1):
        js = range(1, n + 1) if all_j else [n - 1]
        emb = standard_embedding(n).scaled(scale)
        for j in js:
            ans = closed_form(RadiiQuery(n, j, edge))
            cf = None if ans.formula is Formula.NO_CLOSED_FORM else ans.value
            row = {"n": n, "j": j, "closed_form": cf, "numeric": None, "gap": None,
                   "exact_expr": ans.instance_expr, "enclosure_verified": None}
            if numeric:
                cyl = minimize_rj(emb, j, cfg).best
                row["numeric"] = cyl.radius
                row["gap"] = abs(cyl.radius - cf) if cf is not None else None
                row["enclosure_verified"] = _enclosure(emb, cyl, cyl.radius, tol)["verified"]
            rows.append(row)
    return rows


def cmd_table(args) -> tuple:
    if not 2 <= args.n_min <= args.n_max:
        raise InputError("need 2 <= --n-min <= --n-max")
    if not args.edge > 0:
        raise InputError("--edge must be positive")
    rows = table_rows(args.n_min, args.n_max, args.edge, args.all_j, not args.closed_only, _config(args), args.tol)
    report = {
        "command": "table",
        "inputs": {"n_min": args.n_min, "n_max": args.n_max, "edge": args.edge, "all_j": args.all_j},
        "rows": rows,
    }
    bad = any(r["enclosure_verified"] is False or (r["gap"] is not None and r["gap"] > args.tol) for r in rows)
    return report, EXIT_NUMERIC if bad else EXIT_OK


def _fmt6(x) -> str:
    return "" if x is None else f"{x:.6f}"


def table_csv(rows: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_HEADER)
    for r in rows:
        w.writerow([
            r["n"], r["j"],
            "" if r["closed_form"] is None else f"{r['closed_form']:.15g}",
            "" if r["numeric"] is None else f"{r['numeric']:.15g}",
            "" if r["gap"] is None else f"{r['gap']:.3e}",
            r["exact_expr"],
        ])
    return buf.getvalue()


def _table_text(report: dict) -> str:
    lines = [f"{'n':>3} {'j':>3} {'closed':>10} {'numeric':>10} {'gap':>10}  expr"]
    for r in report["rows"]:
        gap = "" if r["gap"] is None else f"{r['gap']:.1e}"
        lines.append(
            f"{r['n']:>3} {r['j']:>3} {_fmt6(r['closed_form']):>10} {_fmt6(r['numeric']):>10} {gap:>10}  {r['exact_expr']}"
        )
    return "\n".join(lines)


# -- sympoly ------------------------------------------------------------------

def cmd_sympoly(args) -> tuple:
    if args.n < 2:
        raise InputError("sympoly needs n >= 2")
    sols = optimal_solutions(args.n)
    sol = sols[0]
    if args.perturb:
        sol = certify.perturb_solution(sol, args.perturb)
    cert = certify.certify_solution(args.n, sol)
    report = {
        "command": "sympoly",
        "inputs": {"n": args.n, "perturb": args.perturb},
        "results": {
            "k": list(sol.k),
            "s": list(sol.s),
            "branch": sol.branch,
            "objective": sol.objective,
            "residuals": list(sol.residuals),
            "distinct_values": sol.distinct_values(),
            "optimal_branches": [{"k": list(s.k), "s": list(s.s), "branch": s.branch} for s in sols],
        },
        "certificate": cert.to_dict(),
    }
    return report, EXIT_OK if cert.passed else EXIT_NUMERIC


def _sympoly_text(report: dict) -> str:
    r, c = report["results"], report["certificate"]
    return "\n".join([
        f"k          {tuple(r['k'])}  ({r['branch']})",
        "s          (" + ", ".join(f"{v:.6f}" for v in r["s"]) + ")",
        f"objective  {r['objective']:.6f}",
        f"certified  {'yes' if c['passed'] else 'NO'}: {c['witness']}",
    ])


# -- verify -------------------------------------------------------------------

def cmd_verify(args) -> tuple:
    certs = []
    if args.suite in ("identities", "all"):
        certs += certify.identity_suite(args.n_max, args.samples, args.seed, corrupt=args.corrupt)
    if args.suite in ("theorem1", "all"):
        n = args.n if args.n is not None else 3
        js = [args.j] if args.j is not None else list(range(1, n + 1))
        for j in js:
            if not 1 <= j <= n:
                raise InputError(f"j={j} outside 1..{n}")
            certs.append(certify.touching_rank_sweep(n, j, args.trials, args.seed, cfg=_config(args)))
    report = {
        "command": "verify",
        "inputs": {"suite": args.suite, "seed": args.seed, "corrupt": args.corrupt},
        "certificates": [c.to_dict() for c in certs],
        "passed": all(c.passed for c in certs),
    }
    return report, EXIT_OK if report["passed"] else EXIT_FAILED


def _verify_text(report: dict) -> str:
    lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['kind']:<18} {c['witness']}" for c in report["certificates"]]
    lines.append("all certificates passed" if report["passed"] else "certification FAILED")
    return "\n".join(lines)


# -- entry ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="outer-radii", description="Outer j-radii of polytopes and regular simplices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "text")):
        sp.add_argument("--starts", type=int, default=None, help="multistart count (default 16*(n-j+1))")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("--tol", type=float, default=1e-5, help="tolerance for enclosure and closed-form agreement")
        sp.add_argument("--timing", action="store_true", help="include wall_time in the report")

    r = sub.add_parser("radius", help="outer j-radius of a regular simplex or a polytope file")
    r.add_argument("--regular", type=int, metavar="N")
    r.add_argument("--file", metavar="PATH")
    r.add_argument("--edge", type=float, default=1.0)
    r.add_argument("--j", type=int, metavar="J")
    common(r)

    t = sub.add_parser("table", help="closed forms against the numeric search for regular simplices")
    t.add_argument("--n-min", type=int, default=2)
    t.add_argument("--n-max", type=int, default=6)
    t.add_argument("--edge", type=float, default=1.0)
    t.add_argument("--all-j", action="store_true", help="every j instead of j = n-1")
    t.add_argument("--closed-only", action="store_true", help="skip the numeric search")
    common(t, ("csv", "json", "text"))

    s = sub.add_parser("sympoly", help="solve and certify the symmetric quartic program")
    s.add_argument("n", type=int)
    s.add_argument("--perturb", type=float, default=0.0, help="shift one entry before certifying (test hook)")
    common(s)

    v = sub.add_parser("verify", help="run certificate suites")
    v.add_argument("suite", choices=["identities", "theorem1", "all"])
    v.add_argument("--n-max", type=int, default=20)
    v.add_argument("--samples", type=int, default=100)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--j", type=int, default=None)
    v.add_argument("--corrupt", action="store_true", help="perturb every identity (test hook)")
    common(v)
    return p


_COMMANDS = {
    "radius": (cmd_radius, _radius_text),
    "table": (cmd_table, _table_text),
    "sympoly": (cmd_sympoly, _sympoly_text),
    "verify": (cmd_verify, _verify_text),
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    run, text = _COMMANDS[args.command]
    t0 = time.perf_counter()
    try:
        report, status = run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RadiiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.timing:
        report["wall_time"] = time.perf_counter() - t0
    if args.format == "json":
        out = _dump_json(report)
    elif args.format == "csv":
        out = table_csv(_round(report)["rows"]).rstrip("\n")
    else:
        out = text(report)
    print(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
