"""Command-line interface: ``dragoncurve {generate,check,certify,constants,scan,render}``.

Exit codes: 0 success or clean, 1 not certified, 2 usage error,
3 self-intersective, 4 engines disagree.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .certify import CertConfig, certify, select_N
from .ifs import MAX_ORDER, ModelParams, curve, make_params, params_from_theta_deg
from .intersect import BRUTE_MAX_SEGMENTS, brute_force, first_bad_order, sweep
from .render import parse_spec, render_svg
from .roots import solve_constants

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_USAGE, EXIT_SELF_INTERSECTIVE, EXIT_INCONSISTENT = 0, 1, 2, 3, 4
MAX_SCAN_ROWS = 5000


class UsageError(Exception):
    pass


def _add_angle(parser: argparse.ArgumentParser, required: bool = True) -> None:
    g = parser.add_mutually_exclusive_group(required=required)
    g.add_argument("--theta-deg", type=float, help="unfolding angle in degrees")
    g.add_argument("--xi", type=float, help="fold parameter in radians (theta = pi - 2 xi)")


def _params(args) -> ModelParams:
    try:
        if args.xi is not None:
            return make_params(args.xi)
        return params_from_theta_deg(args.theta_deg)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _order(k: int) -> int:
    if not 0 <= k <= MAX_ORDER:
        raise UsageError(f"order must be in [0, {MAX_ORDER}], got {k}")
    return k


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


# --- generate -----------------------------------------------------------------------


def cmd_generate(args) -> int:
    p = _params(args)
    poly = curve(p, _order(args.order))
    v = poly.vertices
    if args.format == "json":
        text = _dump({
            "schema": 1,
            "xi": p.xi,
            "theta_deg": p.theta_deg,
            "order": poly.order,
            "n_segments": poly.n_segments,
            "segment_length": poly.segment_length,
            "vertices": [[z.real, z.imag] for z in v.tolist()],
        })
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "re", "im"])
        for n, z in enumerate(v.tolist()):
            w.writerow([n, repr(z.real), repr(z.imag)])
        text = buf.getvalue()
    _emit(text, args.out)
    info = sys.stderr if args.out in (None, "-") else sys.stdout
    print(f"segments: {poly.n_segments}  segment length: {poly.segment_length!r}", file=info)
    return EXIT_OK


# --- check --------------------------------------------------------------------------


def cmd_check(args) -> int:
    p = _params(args)
    poly = curve(p, _order(args.order))
    engines = ["brute", "sweep"] if args.engine == "both" else [args.engine]
    reports = {}
    for eng in engines:
        if eng == "brute" and poly.n_segments > args.max_segments:
            raise UsageError(f"{poly.n_segments} segments exceed the brute-force limit {args.max_segments}; "
                             "use --engine sweep or raise --max-segments")
        run = brute_force if eng == "brute" else sweep
        kwargs = {"max_segments": args.max_segments} if eng == "brute" else {}
        reports[eng] = run(poly, args.tol, **kwargs)
    rep = reports[engines[-1]]
    doc = rep.to_dict()
    doc["engine"] = args.engine
    doc["theta_deg"] = p.theta_deg
    doc["n_events"] = len(rep.events)
    if args.max_events is not None and len(doc["events"]) > args.max_events:
        doc["events"] = doc["events"][: args.max_events]
        doc["events_truncated"] = True
    if args.engine == "both":
        a, b = set(reports["brute"].pairs()), set(reports["sweep"].pairs())
        doc["engines_agree"] = a == b
        if a != b:
            diag = {
                "only_brute": sorted(a - b)[:50],
                "only_sweep": sorted(b - a)[:50],
                "n_only_brute": len(a - b),
                "n_only_sweep": len(b - a),
            }
            doc["disagreement"] = diag
            print("engine disagreement:", json.dumps(diag), file=sys.stderr)
            sys.stdout.write(_dump(doc))
            return EXIT_INCONSISTENT
    sys.stdout.write(_dump(doc))
    return EXIT_SELF_INTERSECTIVE if rep.self_intersective else EXIT_OK


# --- certify ------------------------------------------------------------------------


def cmd_certify(args) -> int:
    p = _params(args)
    if args.depth < 2:
        raise UsageError("--depth must be at least 2")
    cfg = CertConfig(n_max=args.depth, tol=args.tol, endpoint_eps=args.endpoint_eps, samples=args.samples,
                     verify_cone=args.verify_cone)
    rep = certify(p.xi, cfg)
    sys.stdout.write(rep.to_json() + "\n")
    return EXIT_OK if rep.certified else EXIT_NOT_CERTIFIED


# --- constants ----------------------------------------------------------------------


def cmd_constants(args) -> int:
    if args.digits is not None and not 1 <= args.digits <= 17:
        raise UsageError("--digits must be in [1, 17]")
    c = solve_constants()
    if args.json:
        sys.stdout.write(c.to_json(args.digits) + "\n")
    else:
        sys.stdout.write(c.table(args.digits or 12) + "\n")
    return EXIT_OK


# --- scan ---------------------------------------------------------------------------


def scan_grid(theta_min: float, theta_max: float, step: float, max_rows: int = MAX_SCAN_ROWS) -> list[float]:
    """Angles ``theta_min + i * step`` up to ``theta_max`` (inclusive within rounding)."""
    if not (math.isfinite(step) and step > 0):
        raise UsageError("--step must be positive")
    if not theta_max >= theta_min:
        raise UsageError("--theta-max must be at least --theta-min")
    n = int(math.floor((theta_max - theta_min) / step + 1e-9)) + 1
    if n > max_rows:
        raise UsageError(f"grid has {n} rows, more than the limit {max_rows}")
    return [round(theta_min + i * step, 10) for i in range(n)]


def scan_row(theta: float, k_max: int, tol: float | None = None) -> dict:
    p = params_from_theta_deg(theta)
    bad = first_bad_order(p.xi, k_max, tol)
    in_range = 0.0 < p.xi < math.pi / 4
    rep = certify(p.xi, CertConfig(tol=tol)) if in_range else None
    margin = rep.margin if rep is not None else None
    return {
        "theta_deg": f"{theta:.10g}",
        "xi": repr(p.xi),
        "N": select_N(p.xi) if in_range else "",
        "verdict": rep.overall if rep is not None else "not_certified",
        "first_bad_order": bad.order if bad is not None else "none",
        "margin": "" if margin is None else f"{margin:.6e}",
    }


def _scan_task(job):
    return scan_row(*job)


def cmd_scan(args) -> int:
    thetas = scan_grid(args.theta_min, args.theta_max, args.step, args.max_rows)
    for t in (thetas[0], thetas[-1]):
        if not 60.0 < t <= 180.0:
            raise UsageError(f"theta {t} outside (60, 180]")
    if not 1 <= args.k_max <= MAX_ORDER:
        raise UsageError(f"--k-max must be in [1, {MAX_ORDER}]")
    if args.workers < 1:
        raise UsageError("--workers must be positive")
    jobs = [(t, args.k_max, args.tol) for t in thetas]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            rows = list(pool.map(_scan_task, jobs))
    else:
        rows = [_scan_task(j) for j in jobs]
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["theta_deg", "xi", "N", "verdict", "first_bad_order", "margin"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    _emit(buf.getvalue(), args.out)

    bad = [float(r["theta_deg"]) for r in rows if r["first_bad_order"] != "none"]
    cert = [float(r["theta_deg"]) for r in rows if r["verdict"] == "certified_simple_arc"]
    parts = [f"{len(rows)} angles, k <= {args.k_max}"]
    if bad:
        above = [t for t in thetas if t > max(bad)]
        parts.append(f"largest self-intersective theta {max(bad):.10g}")
        parts.append(f"empirical boundary in ({max(bad):.10g}, {above[0]:.10g}]" if above else "no clean angle above it")
    else:
        parts.append("no self-intersection found")
    parts.append(f"smallest certified theta {min(cert):.10g}" if cert else "none certified")
    print("summary: " + "; ".join(parts), file=sys.stderr)
    return EXIT_OK


# --- render -------------------------------------------------------------------------


def cmd_render(args) -> int:
    if args.spec is not None:
        if args.layers or args.xi is not None or args.theta_deg is not None:
            raise UsageError("--spec cannot be combined with --layers/--xi/--theta-deg")
        try:
            if args.spec == "-":
                doc = json.load(sys.stdin)
            else:
                with open(args.spec, encoding="utf-8") as fh:
                    doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read spec: {exc}") from exc
    else:
        if args.xi is None and args.theta_deg is None:
            raise UsageError("give --spec or one of --xi/--theta-deg")
        doc = {"layers": [name for item in args.layers or ["curve"] for name in item.split(",") if name]}
        doc.update({"xi": args.xi} if args.xi is not None else {"theta_deg": args.theta_deg})
        for key in ("order", "width", "height", "margin", "stroke_width"):
            if getattr(args, key) is not None:
                doc[key] = getattr(args, key)
    _emit(render_svg(parse_spec(doc)), args.out)
    return EXIT_OK


# --- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dragoncurve", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write the vertices of D_k")
    _add_angle(g)
    g.add_argument("--order", type=int, default=8)
    g.add_argument("--out", default="-")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("check", help="self-intersection report for D_k")
    _add_angle(c)
    c.add_argument("--order", type=int, default=8)
    c.add_argument("--engine", choices=("brute", "sweep", "both"), default="sweep")
    c.add_argument("--tol", type=float, default=None)
    c.add_argument("--max-segments", type=int, default=BRUTE_MAX_SEGMENTS)
    c.add_argument("--max-events", type=int, default=None, help="truncate the event list in the output")
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("certify", help="run the simple-arc certificate")
    _add_angle(f)
    f.add_argument("--depth", type=int, default=40, help="truncation depth n_max")
    f.add_argument("--tol", type=float, default=None)
    f.add_argument("--endpoint-eps", type=float, default=1e-4)
    f.add_argument("--samples", type=int, default=0)
    f.add_argument("--verify-cone", action="store_true")
    f.set_defaults(func=cmd_certify)

    k = sub.add_parser("constants", help="critical constants x0, xi0, theta0")
    k.add_argument("--json", action="store_true")
    k.add_argument("--digits", type=int, default=None)
    k.set_defaults(func=cmd_constants)

    s = sub.add_parser("scan", help="CSV scan over theta")
    s.add_argument("--theta-min", type=float, required=True)
    s.add_argument("--theta-max", type=float, required=True)
    s.add_argument("--step", type=float, required=True)
    s.add_argument("--k-max", type=int, default=12)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--max-rows", type=int, default=MAX_SCAN_ROWS)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_scan)

    r = sub.add_parser("render", help="SVG of curves and regions")
    r.add_argument("--spec", default=None, help="JSON render spec (path or -)")
    _add_angle(r, required=False)
    r.add_argument("--layers", action="append", help="comma-separated layer names (repeatable)")
    r.add_argument("--order", type=int, default=None)
    r.add_argument("--width", type=int, default=None)
    r.add_argument("--height", type=int, default=None)
    r.add_argument("--margin", type=float, default=None)
    r.add_argument("--stroke-width", type=float, default=None)
    r.add_argument("--out", required=True)
    r.set_defaults(func=cmd_render)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"dragoncurve {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
