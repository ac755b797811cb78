"""Command-line driver: pick a case, run verification suites, emit a report.

The report is a pure function of the configuration: apart from the
"seconds" timing fields, two runs with the same flags produce
byte-identical output at any --jobs value.  Exit codes: 0 all selected
suites pass, 1 a verification check failed, 2 configuration or usage
error, 3 internal inconsistency.
"""

import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

import click

from .braiding import build_family, verify_appendix_duality, verify_conjugation
from .errors import CheckFailed, ConfigError, InternalError, UsageError
from .hkcalc import (build_T, build_calc_tensors, verify_del_delbar,
                     verify_idT1, verify_idT2, verify_invariant_elements,
                     verify_projector_relations,
                     verify_star_tensor_identities, verify_tbraid_constant)
from .kahlercert import (build_phi_complex, compute_I1, lefschetz_certificate,
                         phi_kappa, verify_classical_limit)
from .quantalg import CoordinateAlgebra
from .rootdata import build_root_system, classical_flag_dim, irreducible_nodes

SUITE_ORDER = ("appendixA", "appendixB", "algebra", "calculus", "kahler")
_CATALOG_RANKS = (("A", (1, 2, 3)), ("B", (2, 3)), ("C", (2, 3)), ("D", (4,)))
_CATALOG_MAX_DIM = 8


class _Context:
    """Shared per-run objects, built once and read by every suite."""

    def __init__(self, rs, node, mode, q_points, tol, jobs):
        self.rs = rs
        self.node = node
        self.mode = mode
        self.q_points = q_points
        self.tol = tol
        self.jobs = jobs
        self.V, self.Vd, self.fam = build_family(rs, node)
        self.T = None
        self.algebra = None
        self.ct = None

    def prepare(self, suites):
        if {"appendixB", "kahler"} & suites:
            self.T = build_T(self.fam)
        if {"algebra", "calculus", "kahler"} & suites:
            self.algebra = CoordinateAlgebra(self.V, self.Vd, self.fam,
                                             max_degree=4)
        if {"calculus", "kahler"} & suites:
            self.ct = build_calc_tensors(self.fam, self.node)


def _suite_appendixA(ctx):
    duality = verify_appendix_duality(ctx.rs, ctx.node)
    dev = 0.0
    for q0 in ctx.q_points:
        dev = max(dev, verify_conjugation(ctx.fam, q0, ctx.tol))
    return {"duality": duality,
            "conjugation_max_dev": dev,
            "q_points": [str(q) for q in ctx.q_points]}


def _suite_appendixB(ctx):
    verify_idT1(ctx.T, ctx.fam, mode=ctx.mode, q_points=ctx.q_points)
    verify_idT2(ctx.T, ctx.fam)
    c = verify_tbraid_constant(ctx.fam)
    verify_invariant_elements(ctx.V, ctx.Vd)
    return {"idT1_mode": ctx.mode,
            "idT1_q_points": ([str(q) for q in ctx.q_points]
                              if ctx.mode == "sampled" else []),
            "idT2": "exact",
            "tensor_entries": len(ctx.T),
            "braid_trace_constant": str(c),
            "invariant_elements": True}


def _suite_algebra(ctx):
    alg = ctx.algebra
    alg.verify_counit()
    alg.verify_graded_dims()
    alg.verify_central()
    alg.verify_projection_identities()
    dev = 0.0
    for q0 in ctx.q_points:
        dev = max(dev, alg.verify_star_relations(q0, ctx.tol))
    return {"counit": "exact", "graded_dims": "exact",
            "centrality": "exact", "projection_identities": "exact",
            "star_closure_max_dev": dev,
            "q_points": [str(q) for q in ctx.q_points]}


def _suite_calculus(ctx):
    verify_projector_relations(ctx.ct)
    dev = 0.0
    for q0 in ctx.q_points:
        dev = max(dev, verify_star_tensor_identities(ctx.ct, q0, ctx.tol))
    verify_del_delbar(ctx.algebra, ctx.ct, max_degree=4)
    return {"projector_relations": "exact",
            "del_delbar_families": "exact",
            "star_tensor_max_dev": dev,
            "q_points": [str(q) for q in ctx.q_points]}


def _suite_kahler(ctx):
    # the closedness witness is re-verified here so the suite stands alone
    witness = {"idT1": False, "idT2": False, "del_delbar": False}
    verify_idT1(ctx.T, ctx.fam, mode=ctx.mode, q_points=ctx.q_points)
    witness["idT1"] = True
    verify_idT2(ctx.T, ctx.fam)
    witness["idT2"] = True
    verify_del_delbar(ctx.algebra, ctx.ct, max_degree=4)
    witness["del_delbar"] = True

    I1, _ = compute_I1(ctx.rs, ctx.node, ctx.V)
    phi = build_phi_complex(ctx.fam, ctx.node, T=ctx.T, I1=I1)
    kappa = phi_kappa(phi)
    classical = verify_classical_limit(phi)
    cert = lefschetz_certificate(phi, kappa, ctx.q_points,
                                 closedness_witness=witness, jobs=ctx.jobs)
    out = {"certificate": cert, "classical_limit": classical}
    if cert["verdict"] != "pass":
        raise CheckFailed("a Lefschetz determinant vanished at a sample point")
    return out


_RUNNERS = {"appendixA": _suite_appendixA, "appendixB": _suite_appendixB,
            "algebra": _suite_algebra, "calculus": _suite_calculus,
            "kahler": _suite_kahler}


def run_suites(ctx, names, jobs):
    """Run the named suites (canonical order) and collect their reports.

    Check failures are recorded per suite; configuration and internal
    errors propagate.  Results are merged in canonical order whatever
    the worker count, so the report is independent of jobs.
    """
    ordered = [s for s in SUITE_ORDER if s in names]
    ctx.prepare(set(ordered))

    def one(name):
        t0 = time.time()
        try:
            res = _RUNNERS[name](ctx)
            res["status"] = "pass"
        except CheckFailed as e:
            res = {"status": "fail", "error": f"{type(e).__name__}: {e}"}
        res["seconds"] = round(time.time() - t0, 3)
        return res

    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, ordered))
    else:
        results = [one(s) for s in ordered]
    return {name: res for name, res in zip(ordered, results)}


def _parse_q(text):
    points = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            q0 = Fraction(part)
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"cannot parse sample point {part!r} as p/r")
        if not (0 < q0 <= 1):
            raise UsageError(f"sample q={q0} outside (0, 1]")
        points.append(q0)
    if not points:
        raise UsageError("no sample points given")
    return points


def _parse_suites(text):
    if text.strip() == "all":
        return set(SUITE_ORDER)
    names = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part not in SUITE_ORDER:
            raise UsageError(f"unknown suite {part!r}; "
                             f"choose from {', '.join(SUITE_ORDER)} or all")
        names.add(part)
    if not names:
        raise UsageError("no suites selected")
    return names


def catalog_rows():
    rows = []
    for series, ranks in _CATALOG_RANKS:
        for rank in ranks:
            rs = build_root_system(series, rank)
            for node in irreducible_nodes(rs):
                n = rs.weyl_dim(rs.omega(node))
                if n > _CATALOG_MAX_DIM:
                    continue
                rows.append({"series": series, "rank": rank, "node": node,
                             "N": n, "M": classical_flag_dim(rs, node),
                             "m": rs.m})
    return rows


def _render_catalog():
    lines = ["series  rank  node   N   M   m"]
    for r in catalog_rows():
        lines.append(f"{r['series']:<6}  {r['rank']:>4}  {r['node']:>4}  "
                     f"{r['N']:>2}  {r['M']:>2}  {r['m']:>2}")
    return "\n".join(lines) + "\n"


def to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_csv(report):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "field", "value"])
    case = report["case"]
    w.writerow(["", "case", f"{case['series']}{case['rank']} "
                            f"node {case['node']}"])
    w.writerow(["", "passed", str(report["passed"]).lower()])
    for name in SUITE_ORDER:
        if name not in report["suites"]:
            continue
        res = report["suites"][name]
        for key in sorted(res):
            if name == "kahler" and key == "certificate":
                cert = res[key]
                w.writerow([name, "verdict", cert["verdict"]])
                w.writerow([name, "dims", " ".join(map(str, cert["dims"]))])
                for row in cert["lefschetz"]:
                    k = row["k"]
                    w.writerow([name, f"det_poly[k={k}]", row["det_poly"]])
                    for v in row["values"]:
                        w.writerow([name, f"det[k={k}]@q={v['q']}",
                                    json.dumps(v["value"], sort_keys=True)
                                    + (" nonzero" if v["nonzero"]
                                       else " ZERO")])
            else:
                v = res[key]
                w.writerow([name, key,
                            v if isinstance(v, str)
                            else json.dumps(v, sort_keys=True)])
    return buf.getvalue()


def run(series, rank, node, mode, q_points, tol, suites, jobs):
    """Build the case, run the suites, and assemble the report dict."""
    rs = build_root_system(series, rank)
    nodes = irreducible_nodes(rs)
    if node not in nodes:
        raise UsageError(f"node {node} is not an irreducible choice for "
                         f"{series}{rank}; valid nodes: "
                         f"{', '.join(map(str, nodes))}")
    ctx = _Context(rs, node, mode, q_points, tol, jobs)
    if ctx.mode is None:
        ctx.mode = "symbolic" if ctx.V.dim <= 3 else "sampled"
    t0 = time.time()
    suite_results = run_suites(ctx, suites, jobs)
    passed = all(r["status"] == "pass" for r in suite_results.values())
    return {
        "case": {"series": series, "rank": rank, "node": node},
        "config": {"mode": ctx.mode,
                   "q_points": [str(q) for q in q_points],
                   "tol": tol,
                   "suites": sorted(suites)},
        "suites": suite_results,
        "passed": passed,
        "seconds": round(time.time() - t0, 3),
        "convention_stamp": rs.convention_stamp(),
    }


@click.command()
@click.option("--type", "series", type=click.Choice(["A", "B", "C", "D"]),
              help="series of the case")
@click.option("--rank", type=int, help="rank of the case")
@click.option("--node", type=int, help="crossed-out node (1-based)")
@click.option("--mode", type=click.Choice(["symbolic", "sampled"]),
              default=None,
              help="exact-symbolic or exact-rational-sample identity checks "
                   "(default: symbolic for N <= 3, sampled otherwise)")
@click.option("--q", "q_text", default="1/2", show_default=True,
              help="comma-separated rational sample points in (0, 1]")
@click.option("--tol", type=float, default=1e-9, show_default=True,
              help="tolerance for the numeric conjugation checks")
@click.option("--suites", "suites_text", default="all", show_default=True,
              help="comma-separated subset of "
                   "appendixA,appendixB,algebra,calculus,kahler")
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="report file (default: stdout)")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--jobs", type=int, default=None,
              help="parallel suite workers (default: cpu count; the report "
                   "does not depend on this)")
@click.option("--catalog", "show_catalog", is_flag=True,
              help="print the supported cases and exit")
def main(series, rank, node, mode, q_text, tol, suites_text, out_path, fmt,
         jobs, show_catalog):
    """Verify the quantum flag manifold structures for one case and emit
    the machine-readable report, including the Kaehler certificate."""
    if show_catalog:
        click.echo(_render_catalog(), nl=False)
        sys.exit(0)
    if jobs is None:
        jobs = os.cpu_count() or 1
    try:
        if series is None or rank is None or node is None:
            raise UsageError("--type, --rank and --node are required "
                             "(or use --catalog)")
        q_points = _parse_q(q_text)
        suites = _parse_suites(suites_text)
        report = run(series, rank, node, mode, q_points, tol, suites, jobs)
    except ConfigError as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(2)
    except CheckFailed as e:
        click.echo(f"verification failed: {e}", err=True)
        sys.exit(1)
    except InternalError as e:
        click.echo(f"internal error: {e}", err=True)
        sys.exit(3)
    text = to_json(report) if fmt == "json" else to_csv(report)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        click.echo(f"report written to {out_path}", err=True)
    else:
        click.echo(text, nl=False)
    sys.exit(0 if report["passed"] else 1)


if __name__ == "__main__":
    main()
