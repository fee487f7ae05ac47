"""Command-line front end (``hsgap``).

Sources are a figure preset (fig1a, fig1b, fig1c, fig2), a family name built
from flags (circle, confocal_ellipse, variable_focus_ellipse, cassini) or the
path of a JSON scenario document.

Exit status: 0 success, 1 validation failure, 2 usage or config error,
3 domain or topology error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .config import load_scenario
from .core import Family, FluidPair, FocalSchedule, GapSchedule, Scenario, Segment
from .errors import ConfigError, HeleShawError, TopologyError
from .presets import DEFAULT_NU1, DEFAULT_NU2, PRESETS, preset, preset_times
from .schwarz import cassini_q, level_function, on_cut
from .solutions import area, boundary_sample, distributions, evolve, pressure_field
from .validation import run_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


def fmt(v) -> str:
    """17 significant digits: round-trip exact for doubles."""
    return format(float(v), ".17g")


class _UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# sources
# ---------------------------------------------------------------------------

def resolve_source(args) -> tuple:
    """(scenario, default_times) for the positional source argument."""
    src = args.source
    if src in PRESETS:
        return preset(src), preset_times(src)
    families = {f.value: f for f in Family}
    if src in families:
        fam = families[src]
        if args.a0 is None:
            raise _UsageError(f"--a0 is required for family source {src!r}")
        b0 = args.a0 if fam is Family.CIRCLE else args.b0
        if b0 is None:
            raise _UsageError(f"--b0 is required for family source {src!r}")
        sched = None
        if fam is Family.VARIABLE_FOCUS_ELLIPSE:
            if args.lam is None:
                raise _UsageError("--lambda is required for variable_focus_ellipse")
            sched = FocalSchedule.exponential(args.a0 ** 2 - b0 ** 2, args.lam)
        gap = GapSchedule.linear(args.h0, args.rate)
        sc = Scenario(fam, args.a0, b0, gap, FluidPair(args.nu1, args.nu2), d2_schedule=sched, name=src)
        return sc, (0.0,)
    path = Path(src)
    if path.suffix == ".json" or path.exists():
        return load_scenario(path), (0.0,)
    raise _UsageError(f"unknown source {src!r}: expected a preset ({', '.join(PRESETS)}), a family name or a JSON file")


def _times(args, default):
    if getattr(args, "times", None):
        return [float(x) for x in args.times.split(",")]
    if getattr(args, "t", None) is not None:
        return [args.t]
    return list(default)


def _single_time(args, default):
    ts = _times(args, default)
    return ts[-1]


def _writer(out):
    if out is None or out == "-":
        return sys.stdout, False
    return open(out, "w", newline=""), True


def _emit_csv(out, header, rows):
    fh, close = _writer(out)
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([x if isinstance(x, str) else fmt(x) for x in r])
    finally:
        if close:
            fh.close()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_evolve(args):
    sc, default = resolve_source(args)
    rows = []
    for t in _times(args, default):
        try:
            st = evolve(sc, t)
        except TopologyError as exc:
            when = exc.t if exc.t is not None else t
            raise TopologyError(f"topology change at t = {float(when)!r}: {exc}", t=when) from None
        h = sc.gap.width(t)
        A = area(st)
        rows.append((t, st.a, st.b, st.d, A, h, A * h))
    _emit_csv(args.out, ["t", "a", "b", "d", "area", "h", "area_h"], rows)
    return EXIT_OK


def cmd_field(args):
    sc, default = resolve_source(args)
    t = _single_time(args, default)
    st = evolve(sc, t)
    n = args.n
    ext = args.extent if args.extent else 1.6 * st.scale
    xs = np.linspace(-ext, ext, n)
    X, Y = np.meshgrid(xs, xs)
    X, Y = X.ravel(), Y.ravel()
    inside = level_function(st, X, Y)[0] < 0.0
    p1 = pressure_field(sc, st, 1, X, Y, mask=False)
    p2 = pressure_field(sc, st, 2, X, Y, mask=False)
    ratio = sc.gap.ratio(t)
    rows = []
    for x, y, ins, a1, a2 in zip(X, Y, inside, p1, p2):
        if on_cut(st, complex(x, y)):
            continue
        j = 2 if ins else 1
        p = a2 if ins else a1
        k = sc.mobility(j, t)
        rows.append((x, y, str(j), p, p - 0.25 * ratio * (x * x + y * y) / k))
    _emit_csv(args.out, ["x", "y", "region", "p", "p_tilde"], rows)
    return EXIT_OK


def cmd_density(args):
    sc, default = resolve_source(args)
    t = _single_time(args, default)
    st = evolve(sc, t)
    rows = []
    summary = []
    n = args.n
    for dist in distributions(sc, st):
        sup = dist.support
        if isinstance(sup, Segment):
            L = sup.length
            # Chebyshev points avoid the integrable endpoint singularities
            ss = 0.5 * L * (1.0 - np.cos(np.pi * (np.arange(n) + 0.5) / n))
            for s in ss:
                z = complex(sup.point(s))
                rows.append((dist.label, s, z.real, z.imag, dist.density(s)))
            summary.append(f"total_flux[{dist.label}] = {fmt(dist.flux())}")
        else:
            reach = args.ray_length if args.ray_length else 2.0 * st.scale
            ss = reach * ((np.arange(n) + 0.5) / n) ** 2
            for which in (1, 2):
                for s in ss:
                    z = complex(sup.point(s, which))
                    rows.append((f"{dist.label}#{which}", s, z.real, z.imag, dist.density(s)))
            summary.append(f"flux_to_length[{dist.label}, {fmt(reach)}] = {fmt(dist.integrate(upper=reach))}")
    _emit_csv(args.out, ["support", "s", "x", "y", "mu"], rows)
    for line in summary or ["no sink/source distributions"]:
        print(line, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_validate(args):
    sc, default = resolve_source(args)
    t = _single_time(args, default)
    reports = run_all(sc, t)
    payload = json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True, default=float)
    if args.out and args.out != "-":
        Path(args.out).write_text(payload + "\n")
    else:
        print(payload)
    for r in reports:
        print(r.summary(), file=sys.stderr)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _cut_segments(st, reach):
    """Straight cut pieces (z0, z1) to draw dashed."""
    fam = st.family
    if fam is Family.VARIABLE_FOCUS_ELLIPSE:
        return [(complex(-st.d), complex(st.d))]
    if fam is Family.CASSINI:
        q = cassini_q(st)
        return [(complex(-st.b), complex(st.b)), (1j * q, 1j * reach), (-1j * q, -1j * reach)]
    return []


def render_svg(states, size: int = 640, samples: int = 512) -> str:
    """SVG overlay of interfaces (one path per state) and dashed cuts."""
    curves = [boundary_sample(st, samples) for st in states]
    R = 1.15 * max(float(np.max(np.abs(c))) for c in curves)
    scale = size / (2.0 * R)

    def px(z):
        return f"{(z.real + R) * scale:.3f},{(R - z.imag) * scale:.3f}"

    out = io.StringIO()
    out.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">\n')
    out.write(f'<rect width="{size}" height="{size}" fill="white"/>\n')
    out.write(f'<line x1="0" y1="{R * scale:.3f}" x2="{size}" y2="{R * scale:.3f}" stroke="#ccc" stroke-width="0.5"/>\n')
    out.write(f'<line x1="{R * scale:.3f}" y1="0" x2="{R * scale:.3f}" y2="{size}" stroke="#ccc" stroke-width="0.5"/>\n')
    for i, (st, c) in enumerate(zip(states, curves)):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(px(z) for z in c)
        out.write(f'<path d="M {pts} Z" fill="none" stroke="{color}" stroke-width="1.5"><title>t = {fmt(st.t)}</title></path>\n')
        for z0, z1 in _cut_segments(st, R):
            out.write(f'<line x1="{px(z0).split(",")[0]}" y1="{px(z0).split(",")[1]}" '
                      f'x2="{px(z1).split(",")[0]}" y2="{px(z1).split(",")[1]}" '
                      f'stroke="{color}" stroke-width="1" stroke-dasharray="5,4"/>\n')
    out.write("</svg>\n")
    return out.getvalue()


def cmd_figure(args):
    sc, default = resolve_source(args)
    times = _times(args, default)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = sc.name or Path(args.source).stem
    states = []
    for t in times:
        st = evolve(sc, t)
        states.append(st)
        zs = boundary_sample(st, args.samples)
        _emit_csv(str(outdir / f"{stem}_t{t:g}.csv"), ["x", "y"], [(z.real, z.imag) for z in zs])
    (outdir / f"{stem}.svg").write_text(render_svg(states, samples=args.samples))
    print(f"wrote {len(times)} boundary CSVs and {stem}.svg to {outdir}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsgap", description="Exact squeeze-flow solutions of the two-phase Hele-Shaw problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("source", help="preset, family name or JSON scenario file")
        p.add_argument("--a0", type=float)
        p.add_argument("--b0", type=float)
        p.add_argument("--h0", type=float, default=0.1)
        p.add_argument("--rate", type=float, default=-1.0, help="dh/dt of the linear gap law")
        p.add_argument("--lambda", dest="lam", type=float, help="growth rate of d^2 (variable-focus ellipse)")
        p.add_argument("--nu1", type=float, default=DEFAULT_NU1)
        p.add_argument("--nu2", type=float, default=DEFAULT_NU2)
        p.add_argument("--t", type=float)
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = common(sub.add_parser("evolve", help="semi-axes, area and h at given times"))
    p.add_argument("--times", help="comma-separated list of times")
    p.set_defaults(func=cmd_evolve)

    p = common(sub.add_parser("field", help="pressure on a grid"))
    p.add_argument("--n", type=int, default=81)
    p.add_argument("--extent", type=float)
    p.set_defaults(func=cmd_field)

    p = common(sub.add_parser("density", help="sink/source densities on the cuts"))
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--ray-length", type=float)
    p.set_defaults(func=cmd_density)

    p = common(sub.add_parser("validate", help="run the verification suite"))
    p.set_defaults(func=cmd_validate)

    p = common(sub.add_parser("figure", help="boundary CSVs and an SVG overlay"))
    p.add_argument("--times", help="comma-separated list of times")
    p.add_argument("--outdir", default=".")
    p.add_argument("--samples", type=int, default=512)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except (_UsageError, ConfigError) as exc:
        print(f"hsgap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HeleShawError as exc:
        print(f"hsgap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"hsgap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
