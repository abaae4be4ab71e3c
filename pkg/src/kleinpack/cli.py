"""Command line interface: ``kleinpack <subcommand> ...``.

Exit status is 0 on success, 1 when a validation check fails and 2 on
malformed input.  The worker count defaults to ``$KLEINPACK_WORKERS`` (or 1)
when ``--workers`` is not given.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from fractions import Fraction

from . import apollonian, counting, formats, render, schottky, spherical

WORKERS_ENV = "KLEINPACK_WORKERS"


class UsageError(Exception):
    pass


def _number(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        return Fraction(tok) if "/" in tok else float(tok)
    except ValueError:
        raise UsageError(f"not a number: {tok!r}") from None


def _root(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError(f"--root needs four comma-separated curvatures, got {text!r}")
    return tuple(_number(p) for p in parts)


def _floats(text: str, n: int, flag: str):
    parts = text.split(",")
    if len(parts) != n:
        raise UsageError(f"{flag} needs {n} comma-separated numbers, got {text!r}")
    return tuple(float(_number(p)) for p in parts)


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"${WORKERS_ENV} must be an integer, got {env!r}") from None
    return 1


def _emit(text: str, path):
    if path:
        formats.write_text(text, path)
    else:
        sys.stdout.write(text)


def _region(text: str | None, p):
    if text is None or text == "whole":
        if p.is_periodic:
            return counting.PeriodWindow()
        outer = [g for g in p.generators if g.curv < 0]
        if outer:
            x, y = (float(v) for v in outer[0].center_xy())
            return counting.Disk((x, y), 1 / abs(float(outer[0].curv)))
        c, r = p.centers, p.radii
        cx, cy = float(c[:, 0].mean()), float(c[:, 1].mean())
        reach = float(max(math.hypot(a - cx, b - cy) + rr for (a, b), rr in zip(c, r)))
        return counting.Disk((cx, cy), reach)
    kind, _, rest = text.partition(":")
    if kind == "disk":
        x, y, r = _floats(rest, 3, "--region disk:")
        return counting.Disk((x, y), r)
    if kind == "rect":
        return counting.Rectangle(*_floats(rest, 4, "--region rect:"))
    if kind == "period":
        return counting.PeriodWindow()
    raise UsageError(f"unknown region {text!r}; use whole, period, disk:x,y,r or rect:x0,y0,x1,y1")


def _packing(args):
    """Load ``--packing`` or generate from ``--root``/``--max-curv``."""
    if getattr(args, "packing", None) and getattr(args, "root", None):
        raise UsageError("give either --packing or --root, not both")
    if getattr(args, "packing", None):
        if not os.path.exists(args.packing):
            raise UsageError(f"packing file not found: {args.packing}")
        return formats.read_packing(args.packing)
    if getattr(args, "root", None):
        if args.max_curv is None:
            raise UsageError("--root needs --max-curv")
        if args.max_curv <= 0:
            raise UsageError("--max-curv must be positive")
        seed = apollonian.realize_root(apollonian.reduce_to_root(_root(args.root)))
        if getattr(args, "backing", "exact") == "float":
            seed = seed.to_float()
        return apollonian.generate(seed, args.max_curv, workers=_workers(args),
                                   max_circles=getattr(args, "max_circles",
                                                       apollonian.DEFAULT_MAX_CIRCLES))
    raise UsageError("no packing source: give --packing FILE or --root a,b,c,d --max-curv T")


# ----------------------------------------------------------------------------


def cmd_apollonian(args):
    p = _packing(args)
    if args.out:
        formats.write_packing(p, args.out)
    print(f"root {' '.join(map(str, p.root or ()))}; {len(p)} circles with curvature "
          f"<= {args.max_curv}; {len(p.adjacency)} tangent pairs; backing {p.backing}")
    return 0


def cmd_schottky(args):
    if args.config and args.sample:
        raise UsageError("give either --config or --sample")
    if args.config:
        if not os.path.exists(args.config):
            raise UsageError(f"config file not found: {args.config}")
        g = formats.read_schottky_config(args.config)
    else:
        g = schottky.sample_group()
    report = schottky.validate(g)
    print(report)
    if not report.ok:
        return 1
    p = schottky.generate_orbit(g, args.min_radius, workers=_workers(args))
    if args.out:
        formats.write_packing(p, args.out)
    est = schottky.estimate_delta(g, args.max_len)
    print(f"orbit circles with radius >= {args.min_radius:g}: {len(p)}")
    print(f"delta (shell ratios, max_len {args.max_len}): {est.delta:.6f}")
    hi = 1 / args.min_radius
    window = (min(counting.DEFAULT_WINDOW[0], hi / 100), hi)
    series = counting.count_series(p, _region(None, p), counting.log_grid(*window))
    if args.csv:
        formats.write_text(formats.count_series_csv(series), args.csv)
    try:
        fit = counting.fit_exponent(series, window)
        print(f"delta (orbit count fit on [{window[0]:g}, {window[1]:g}]): {fit.exponent:.6f}")
    except ValueError as exc:
        print(f"orbit count fit unavailable: {exc}")
    return 0


def cmd_sphere(args):
    seed = apollonian.realize_root(apollonian.reduce_to_root(_root(args.root)))
    worst, n = 0.0, 0
    for q in apollonian.iter_quadruples(seed, args.max_curv):
        ks = [spherical.planar_spherical_curvature(c) for c in q]
        worst = max(worst, abs(float(spherical.soddy_gossett_residual(*ks))))
        n += 1
    p = apollonian.generate(seed, args.max_curv, workers=_workers(args))
    circles = [spherical.to_sphere(c) for c in p.generators + p.circles]
    if args.out:
        spherical.write_spherical(
            circles, args.out,
            {"root": " ".join(map(str, p.root)), "cutoff": args.max_curv,
             "projection": "north-pole"},
        )
    ok = worst <= args.tol
    print(f"{len(circles)} circles transferred to the sphere")
    print(f"{n} mutually tangent quadruples; max |Q + 4| = {worst:.3e} "
          f"({'ok' if ok else 'FAILED'} at tolerance {args.tol:g})")
    return 0 if ok else 1


def cmd_count(args):
    p = _packing(args)
    T = _number(args.T)
    if T > p.cutoff:
        raise UsageError(f"--T {T} exceeds the packing cutoff {p.cutoff}")
    print(counting.count(p, _region(args.region, p), T))
    return 0


def cmd_exponent(args):
    p = _packing(args)
    lo, hi = _floats(args.window, 2, "--window")
    if hi > p.cutoff:
        raise UsageError(f"fit window ends at {hi:g}, beyond the packing cutoff {p.cutoff}")
    series = counting.count_series(p, _region(args.region, p),
                                   counting.log_grid(lo, hi, args.points))
    fit = counting.fit_exponent(series, (lo, hi))
    if args.csv:
        formats.write_text(formats.count_series_csv(series), args.csv)
    _emit(formats.fit_csv(fit), args.out)
    return 0


def cmd_primes(args):
    p = _packing(args)
    if args.T:
        Ts = [_number(t) for t in args.T.split(",")]
    else:
        Ts = [10**k for k in range(1, 20) if 10**k <= p.cutoff]
    for T in Ts:
        if T > p.cutoff:
            raise UsageError(f"T = {T} exceeds the packing cutoff {p.cutoff}")
    rows = [(T, counting.prime_pi(p, T), counting.twin_prime_pi(p, T),
             counting.distinct_curvatures(p, T)) for T in Ts]
    _emit(formats.prime_table_csv(rows), args.out)
    return 0


def cmd_residues(args):
    print(counting.residue_scan(args.mod))
    return 0


def cmd_render(args):
    p = _packing(args)
    vp = _floats(args.viewport, 4, "--viewport") if args.viewport else None
    svg = render.render_svg(p, labels=not args.no_labels, stroke_width=args.stroke_width,
                            viewport=vp, size=args.size,
                            min_label_radius=args.min_label_radius)
    _emit(svg, args.out)
    return 0


# ----------------------------------------------------------------------------


def _source_flags(sp, need_out=False):
    sp.add_argument("--packing", metavar="FILE", help="packing file written by 'apollonian'")
    sp.add_argument("--root", metavar="A,B,C,D",
                    help="root quadruple of curvatures, e.g. -1,2,2,3 or 0,0,1,1")
    sp.add_argument("--max-curv", type=float, metavar="T",
                    help="generation cutoff: keep circles with curvature <= T")
    sp.add_argument("--backing", choices=("exact", "float"), default="exact",
                    help="numeric backing used for generation (default exact)")
    sp.add_argument("--workers", type=int, help=f"worker processes (default ${WORKERS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kleinpack", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("apollonian", help="generate an Apollonian packing and save it")
    _source_flags(sp)
    sp.add_argument("--out", metavar="FILE", help="write the packing file here")
    sp.add_argument("--max-circles", type=int, default=apollonian.DEFAULT_MAX_CIRCLES,
                    help="abort with an error beyond this many circles")
    sp.set_defaults(func=cmd_apollonian)

    sp = sub.add_parser("schottky", help="validate a Schottky group, build its orbit "
                        "packing and estimate the critical exponent")
    sp.add_argument("--config", metavar="FILE", help="group configuration file")
    sp.add_argument("--sample", action="store_true",
                    help="use the built-in genus-2 sample group (default)")
    sp.add_argument("--min-radius", type=float, default=1e-4,
                    help="prune orbit circles smaller than this (default 1e-4)")
    sp.add_argument("--max-len", type=int, default=12,
                    help="word length for the shell-sum estimate (default 12)")
    sp.add_argument("--out", metavar="FILE", help="write the orbit packing here")
    sp.add_argument("--csv", metavar="FILE", help="write the orbit count series here")
    sp.add_argument("--workers", type=int, help="worker processes")
    sp.set_defaults(func=cmd_schottky)

    sp = sub.add_parser("sphere", help="transfer a packing to the sphere and check the "
                        "Soddy-Gossett identity")
    sp.add_argument("--root", required=True, metavar="A,B,C,D", help="bounded root quadruple")
    sp.add_argument("--max-curv", type=float, required=True, metavar="T",
                    help="planar curvature cutoff")
    sp.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
    sp.add_argument("--out", metavar="FILE", help="write 'nx ny nz t' records here")
    sp.add_argument("--workers", type=int, help="worker processes")
    sp.set_defaults(func=cmd_sphere)

    sp = sub.add_parser("count", help="print N_T: circles with curvature < T meeting a region")
    _source_flags(sp)
    sp.add_argument("--T", required=True, help="curvature threshold (strict)")
    sp.add_argument("--region", help="whole (default), period, disk:x,y,r or rect:x0,y0,x1,y1")
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("exponent", help="fit log N_T against log T")
    _source_flags(sp)
    sp.add_argument("--window", default="100,10000", help="fit window Tmin,Tmax")
    sp.add_argument("--points", type=int, default=41, help="log-spaced grid points")
    sp.add_argument("--region", help="counting region (see 'count')")
    sp.add_argument("--csv", metavar="FILE", help="write the count series (T,count) here")
    sp.add_argument("--out", metavar="FILE", help="write the fit report here (default stdout)")
    sp.set_defaults(func=cmd_exponent)

    sp = sub.add_parser("primes", help="prime, twin prime and distinct curvature counts")
    _source_flags(sp)
    sp.add_argument("--T", help="comma-separated thresholds (default powers of 10)")
    sp.add_argument("--out", metavar="FILE", help="CSV output (default stdout)")
    sp.set_defaults(func=cmd_primes)

    sp = sub.add_parser("residues", help="scan Descartes solutions modulo m")
    sp.add_argument("--mod", type=int, default=16, help="modulus (default 16)")
    sp.set_defaults(func=cmd_residues)

    sp = sub.add_parser("render", help="draw a packing as SVG")
    _source_flags(sp)
    sp.add_argument("--out", metavar="FILE", help="SVG output (default stdout)")
    sp.add_argument("--no-labels", action="store_true", help="omit curvature labels")
    sp.add_argument("--stroke-width", type=float, default=1.0, help="stroke width in pixels")
    sp.add_argument("--size", type=int, default=800, help="output size in pixels")
    sp.add_argument("--viewport", help="xmin,ymin,xmax,ymax in plane coordinates")
    sp.add_argument("--min-label-radius", type=float, default=0.0,
                    help="skip labels on circles smaller than this")
    sp.set_defaults(func=cmd_render)
    return ap


_NEG_VALUE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    """Let ``--root -1,2,2,3`` through argparse, which would read it as a flag."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a.startswith("--") and "=" not in a and i + 1 < len(argv) \
                and _NEG_VALUE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, formats.FormatError, ValueError, OSError) as exc:
        print(f"kleinpack {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except apollonian.ResourceLimitError as exc:
        print(f"kleinpack {args.command}: error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
