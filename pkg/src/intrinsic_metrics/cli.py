"""Command-line front end: constants, tables, figure data, scans and domain reports.

Exit codes: 0 success, 1 usage error, 2 a checked invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import extremal, geometry, specfun
from .errors import DomainError, PrecisionError, SingularityError
from .extremal import ExtremalReport
from .extremal.scans import random_interior_points
from .hypmetric import rect_modulus

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2

M1_ROWS = (1 / 12, 1 / 6, 1 / 4, 1 / 3, 5 / 12)
M2_ROWS = (2 / 3, 3 / 4, 5 / 6)
RHOMB_ROWS = tuple(j * math.pi / 12 for j in range(1, 7))
NGON_ROWS = tuple(range(3, 13))


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_complex(text: str) -> complex:
    """``"re,im"`` or a plain real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}")


def parse_range(text: str) -> tuple[float, float]:
    """``"start..end"``."""
    try:
        a, b = text.split("..")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'start..end', got {text!r}") from None


def parse_radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated radii, got {text!r}") from None


def parse_seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    k: float = 1.0
    x: complex = 0j
    alpha: complex | None = None
    beta: complex | None = None
    delta: float | None = None
    gamma: float | None = None
    lam: float | None = None
    grid: int | None = None
    pairs: int = 10_000
    seed: int = 0
    directions: int = 720
    radii: tuple = field(default=tuple(round(0.1 * j, 10) for j in range(1, 10)))
    span: tuple | None = None
    polygon: str | None = None
    format: str = "json"
    output: str | None = None

    def validate(self) -> None:
        if not (self.k > 0 and math.isfinite(self.k)):
            raise UsageError("--k must be positive")
        if self.grid is not None and self.grid < 2:
            raise UsageError("--grid must be at least 2")
        if self.pairs < 1:
            raise UsageError("--pairs must be at least 1")
        if self.directions < 8:
            raise UsageError("--directions must be at least 8")
        if any(not 0 < r < 1 for r in self.radii):
            raise UsageError("--radii must lie in (0, 1)")
        if self.lam is not None and not 0 < self.lam < 1:
            raise UsageError("--lambda must lie in (0, 1)")


# serialization --------------------------------------------------------

def _json_text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{_json_text(str(k))}: {_json_text(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_json_text(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _json_text(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj) + 0.0  # drops negative zero
        return format(v, ".17g") if math.isfinite(v) else "null"
    if isinstance(obj, (complex, np.complexfloating)):
        return _json_text([float(obj.real), float(obj.imag)], indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "to_json"):
        return _json_text(obj.to_json(), indent)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.12f" % float(v) if math.isfinite(v) else "nan"
    return str(v)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


REPORT_HEADER = ("name", "value", "location_x", "location_y", "formula_ref", "oracle_residual")


def _report_rows(reports: Sequence[ExtremalReport]):
    out = []
    for r in reports:
        loc = complex(r.location)
        out.append((r.name, r.value, loc.real, loc.imag, r.formula_ref, r.oracle_residual))
    return out


class Output:
    """Payload in both shapes; the config picks which one is written."""

    def __init__(self, payload: Any, header: Sequence[str], rows: Sequence[Sequence[Any]], status: int = EXIT_OK):
        self.payload = payload
        self.header = header
        self.rows = rows
        self.status = status

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return _csv_text(self.header, self.rows)
        return _json_text(self.payload) + "\n"


def _flat_output(payload: dict, status: int) -> Output:
    """Single-row CSV of a flat record; nested values are written as JSON text."""
    row = [_json_text(v).replace("\n", "") if isinstance(v, (list, tuple, dict)) else v for v in payload.values()]
    return Output(payload, tuple(payload), [row], status)


def _reports_output(reports: Sequence[ExtremalReport], status: int | None = None) -> Output:
    if status is None:
        status = EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATION
    return Output([r.to_json() for r in reports], REPORT_HEADER, _report_rows(reports), status)


# commands -------------------------------------------------------------

def cmd_constants(cfg: RunConfig) -> Output:
    k = cfg.k
    kn = 1.0 / k if k < 1 else k
    mod = rect_modulus(kn)
    raw, simplified = extremal.c_lambda_forms(mod)
    reports = [
        ExtremalReport(
            "C_lambda", simplified, complex(kn - 1.0, 0) if k >= 1 else complex(0, (kn - 1.0) * k),
            "K*sqrt((1+a^2)(1+lam^2 a^2))/a, a=|sn(iK,lam)|, K/K'=1/(2k)",
            abs(raw - simplified), 1e-12,
            {"k": k, "k_normalized": kn, "lambda": mod.lam, "K": mod.K, "K_prime": mod.Kp, "quotient_form": raw},
        )
    ]
    if cfg.lam is not None:
        mu = min(cfg.lam, extremal.landen_h(cfg.lam))
        value = extremal.c_tilde(cfg.lam)
        raw_t, _ = extremal.c_lambda_forms(specfun.elliptic_k(mu))
        reports.append(
            ExtremalReport(
                "C_tilde", value, cfg.lam, "C(min(lam, h(lam))), h(lam)=((1-sqrt lam)/(1+sqrt lam))^2",
                abs(value - raw_t), 1e-12, {"lambda": cfg.lam, "effective_lambda": mu},
            )
        )
    lam0 = extremal.LAMBDA0
    m0 = specfun.elliptic_k(lam0)
    square = 0.5 * (1 + lam0) * m0.Kp
    gamma_form = specfun.gamma(0.25) ** 2 / (4 * math.sqrt(math.pi))
    reports.append(
        ExtremalReport("square", square, 0j, "(1+lam0)K'(lam0)/2, lam0=3-2sqrt2", abs(square - gamma_form), 1e-12,
                       {"gamma_form": gamma_form})
    )
    reports.append(extremal.half_strip_constant())
    strip = 0.5 * math.pi
    strip_or = extremal.rhomb_ratio(1e-9).value
    reports.append(ExtremalReport("strip", strip, 0j, "pi/2", abs(strip - strip_or), 1e-8, {"oracle": "rhomb at delta=1e-9"}))
    return _reports_output(reports)


def _span_grid(cfg: RunConfig, lo: float, hi: float, default: int = 0) -> np.ndarray:
    count = cfg.grid if cfg.grid is not None else default
    if count == 0:
        return np.empty(0)
    a, b = cfg.span if cfg.span is not None else (lo, hi)
    return np.linspace(a, b, count)


def cmd_table(cfg: RunConfig) -> Output:
    t = cfg.target
    if t == "m1":
        params = list(M1_ROWS) + list(_span_grid(cfg, 0.01, 0.49))
        reports = [extremal.triangle_m1(a) for a in params]
        pname = "alpha"
    elif t == "m2":
        params = list(M2_ROWS) + list(_span_grid(cfg, 0.51, 0.99))
        reports = [extremal.lambda_m2(a) for a in params]
        pname = "alpha"
    elif t == "rhomb":
        params = list(RHOMB_ROWS) + list(_span_grid(cfg, 0.01, 0.5 * math.pi))
        reports = [extremal.rhomb_ratio(d) for d in params]
        pname = "delta"
    elif t == "ngon":
        top = max(12, cfg.grid or 12)
        params = list(range(3, top + 1))
        reports = [extremal.ngon_ratio(n) for n in params]
        pname = "n"
    else:
        raise UsageError(f"unknown table {t!r}")
    rows = [(p, r.value, r.oracle_residual) for p, r in zip(params, reports)]
    payload = {"table": t, "rows": [{pname: p, "value": r.value, "oracle_residual": r.oracle_residual} for p, r in zip(params, reports)]}
    status = EXIT_OK if all(r.ok for r in reports) else EXIT_VIOLATION
    return Output(payload, (pname, "value", "oracle_residual"), rows, status)


def _polygon(cfg: RunConfig):
    if cfg.polygon:
        return geometry.ConvexPolygon.from_json(cfg.polygon)
    return geometry.Rectangle(cfg.k)


def cmd_emit(cfg: RunConfig) -> Output:
    t = cfg.target
    if t == "regions":
        R = geometry.Rectangle(cfg.k)
        reg = geometry.rect_nearest_side_regions(R, cfg.x, cfg.grid or 200)
        rows = [(x, y, int(reg.labels[j, i])) for j, y in enumerate(reg.ys) for i, x in enumerate(reg.xs)]
        payload = {
            "k": cfg.k, "x": cfg.x, "orientation": reg.orientation, "trapezoids": reg.trapezoid_sides,
            "labels_present": sorted(int(v) for v in np.unique(reg.labels)),
            "xs": list(reg.xs), "ys": list(reg.ys), "labels": reg.labels.tolist(),
        }
        return Output(payload, ("x", "y", "side"), rows)
    if t == "s-circle":
        P = _polygon(cfg)
        curves, rows = [], []
        worst = 0.0
        for j, r in enumerate(cfg.radii):
            c = geometry.s_circle(P, cfg.x, r, cfg.directions)
            err = float(np.max(np.abs(geometry.s_metric_values(P, cfg.x, c.points) - r))) if len(c.points) else 0.0
            worst = max(worst, err)
            pts = c.closed()
            corner = np.append(c.corner, c.corner[:1])
            curves.append({"r": r, "points": [[p.real, p.imag] for p in pts], "corners": [int(i) for i in np.flatnonzero(c.corner)],
                           "omitted_rays": list(c.omitted), "nonmonotone_rays": list(c.nonmonotone), "max_abs_s_error": err})
            rows.extend((j, r, p.real, p.imag, bool(cf)) for p, cf in zip(pts, corner))
        status = EXIT_OK if worst <= 1e-9 else EXIT_VIOLATION
        return Output({"x": cfg.x, "curves": curves}, ("curve", "r", "x", "y", "corner"), rows, status)
    if t in ("sigma", "medial"):
        if t == "sigma":
            Rn, c = geometry.Rectangle(cfg.k).normalized()
            g = geometry.sigma_segments(Rn)
            scale = 1 / c
        else:
            g = geometry.medial_graph(_polygon(cfg))
            scale = 1.0
        labels = g.labels or tuple(f"e{i}" for i in range(len(g.edges)))
        segs = [(lab, a * scale, b * scale) for lab, (a, b) in zip(labels, g.segments())]
        rows = [(lab, a.real, a.imag, b.real, b.imag) for lab, a, b in segs]
        payload = {"nodes": [complex(n * scale) for n in g.nodes], "edges": [list(e) for e in g.edges], "labels": list(labels)}
        return Output(payload, ("label", "x0", "y0", "x1", "y1"), rows)
    if t == "ctilde-curve":
        lams = _span_grid(cfg, 0.005, 0.995, default=200)
        vals = [extremal.c_tilde(l) for l in lams]
        i = int(np.argmax(vals))
        payload = {"lambda": list(lams), "value": vals, "argmax": float(lams[i]), "max": vals[i], "lambda0": extremal.LAMBDA0}
        return Output(payload, ("lambda", "value"), list(zip(lams, vals)))
    if t == "m3-curve":
        alphas = _span_grid(cfg, 0.01, 0.99, default=99)
        vals = [extremal.m3(a) for a in alphas]
        return Output({"alpha": list(alphas), "value": vals}, ("alpha", "value"), list(zip(alphas, vals)))
    if t == "rhomb-curve":
        ds = _span_grid(cfg, 0.01, 0.5 * math.pi, default=100)
        vals = [extremal.rhomb_ratio(d).value for d in ds]
        return Output({"delta": list(ds), "value": vals}, ("delta", "value"), list(zip(ds, vals)))
    raise UsageError(f"unknown emitter {t!r}")


def cmd_scan(cfg: RunConfig) -> Output:
    t = cfg.target
    R = geometry.Rectangle(cfg.k)
    if t == "conjecture":
        s = extremal.conjecture_scan(R, cfg.pairs, cfg.seed)
        return _flat_output(s.to_json(), EXIT_OK if s.lower_violations == 0 else EXIT_VIOLATION)
    if t == "rect-ratio":
        rep = extremal.rect_extremal_scan(R, cfg.grid or 64)
        bad = (not rep.ok) or rep.flags["argmax_error"] > 1e-3 or rep.flags["grid_min"] <= 1.0
        return _reports_output([rep], EXIT_VIOLATION if bad else EXIT_OK)
    if t == "lemma-limit":
        grid = cfg.grid or 64
        side = max(2, int(round(math.sqrt(grid))))
        s = extremal.lemma_limit_scan(R, side)
        return _flat_output(s.to_json(), EXIT_OK if s.violations == 0 else EXIT_VIOLATION)
    if t == "monotone":
        rng = np.random.default_rng(cfg.seed)
        pts = random_interior_points(R, cfg.pairs, rng, margin=1e-3)
        results = []
        for z in pts:
            contacts = geometry.boundary_distance(R, z).contacts
            results.append(extremal.segment_monotonicity_check(R, z, contacts[int(rng.integers(len(contacts)))]))
        worst = max(r.max_excess for r in results)
        fails = sum(not r.ok for r in results)
        payload = {"k": cfg.k, "checks": len(results), "violations": fails, "max_excess": worst, "seed": cfg.seed}
        return _flat_output(payload, EXIT_OK if fails == 0 else EXIT_VIOLATION)
    raise UsageError(f"unknown scan {t!r}")


def cmd_report(cfg: RunConfig) -> Output:
    alpha = cfg.alpha
    if cfg.target.upper() == "D5" and alpha is not None:
        alpha = alpha.real
    return _reports_output(extremal.domain_report(cfg.target, alpha, cfg.beta))


COMMANDS = {"constants": cmd_constants, "table": cmd_table, "emit": cmd_emit, "scan": cmd_scan, "report": cmd_report}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of standard output")
    common.add_argument("--k", type=float, default=1.0, help="rectangle half-width")
    common.add_argument("--grid", type=int)

    parser = _Parser(prog="intrinsic-metrics", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", parents=[common], help="C for a rectangle, C-tilde, square, half-strip and strip values")
    p.add_argument("--lambda", dest="lam", type=float)

    p = sub.add_parser("table", parents=[common], help="tables of M1, M2, n-gon and rhomb values")
    p.add_argument("target", choices=("m1", "m2", "ngon", "rhomb"))
    p.add_argument("--range", dest="span", type=parse_range, help="extra grid as start..end, --grid points")

    p = sub.add_parser("emit", parents=[common], help="figure data")
    p.add_argument("target", choices=("regions", "s-circle", "sigma", "medial", "ctilde-curve", "m3-curve", "rhomb-curve"))
    p.add_argument("--x", type=parse_complex, default=0j, help="centre point as re,im")
    p.add_argument("--radii", type=parse_radii, default=RunConfig.__dataclass_fields__["radii"].default)
    p.add_argument("--directions", type=int, default=720)
    p.add_argument("--polygon", help="polygon JSON file for medial and s-circle")
    p.add_argument("--range", dest="span", type=parse_range)

    p = sub.add_parser("scan", parents=[common], help="empirical scans")
    p.add_argument("target", choices=("conjecture", "rect-ratio", "lemma-limit", "monotone"))
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--seed", type=parse_seed, default=0)

    p = sub.add_parser("report", parents=[common], help="extremal values for the domains D1..D5")
    p.add_argument("target", choices=("D1", "D2", "D3", "D4", "D5"))
    p.add_argument("--alpha", type=parse_complex)
    p.add_argument("--beta", type=parse_complex)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    kwargs = {name: getattr(ns, name) for name in fields if hasattr(ns, name) and getattr(ns, name) is not None}
    return RunConfig(**kwargs)


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    out = COMMANDS[cfg.command](cfg)
    return out.status, out.render(cfg.format)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        status, text = run(cfg)
    except (UsageError, DomainError, PrecisionError, SingularityError) as exc:
        print(f"intrinsic-metrics: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
