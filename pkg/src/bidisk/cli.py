"""Command-line front end.

Exit codes: 0 success, 1 check failure, 2 usage error, 3 search found nothing.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import SearchConfig
from .dirichlet import (CyclicDomainSpec, FaceSampling, axis_basepoint, face_count,
                        find_ray_double_crossing)
from .equidistant import Hypersurface, hypersurfaces_intersect
from .errors import GeometryError, PreconditionFailed
from .hplane import (HPoint, IsometryClass, Mobius, classify, dist, equidistant_line, fmt)
from .product import BidiskIsometry, BidiskPoint
from .sqhyperbola import SquareHyperbola, parametrize, sample_params
from .svg import Figure, PlotSpec
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NOT_FOUND = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _floats(text: str, n: int, what: str) -> list[float]:
    parts = text.replace(" ", "").split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{what}: expected {n} comma-separated numbers, got {text!r}")
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"{what}: expected {n} numbers, got {len(vals)}")
    return vals


def hpoint_arg(text: str) -> HPoint:
    x, y = _floats(text, 2, "point")
    try:
        return HPoint(x, y)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def bidisk_arg(text: str) -> BidiskPoint:
    x1, y1, x2, y2 = _floats(text, 4, "bidisk point")
    try:
        return BidiskPoint.of(x1, y1, x2, y2)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def mobius_arg(text: str) -> Mobius:
    try:
        return Mobius.from_seq(_floats(text, 4, "matrix"))
    except (ValueError, GeometryError) as e:
        raise argparse.ArgumentTypeError(str(e))


def window_arg(text: str) -> tuple[float, ...]:
    return tuple(_floats(text, 4, "window"))


# search options ---------------------------------------------------------------------

SEARCH_FLAGS = ("k_min", "k_max", "k_step", "t_scan", "residual_tol", "max_bisect")


def add_search_flags(p: argparse.ArgumentParser):
    g = p.add_argument_group("search bounds")
    g.add_argument("--config", type=Path, help="key=value file with search defaults")
    g.add_argument("--k-min", type=float)
    g.add_argument("--k-max", type=float)
    g.add_argument("--k-step", type=float)
    g.add_argument("--t-scan", type=float)
    g.add_argument("--residual-tol", type=float)
    g.add_argument("--max-bisect", type=int)


def search_config(args) -> SearchConfig:
    cfg = SearchConfig()
    if getattr(args, "config", None) is not None:
        try:
            cfg = SearchConfig.from_file(args.config)
        except OSError as e:
            raise UsageError(f"cannot read config {args.config}: {e.strerror}")
        except (ValueError, TypeError) as e:
            raise UsageError(f"bad config {args.config}: {e}")
    return cfg.updated(**{k: getattr(args, k, None) for k in SEARCH_FLAGS})


def add_plot_flags(p: argparse.ArgumentParser, window: str):
    p.add_argument("--window", type=window_arg, default=window_arg(window),
                   help="x_min,x_max,y_min,y_max")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=320)


def plot_spec(args) -> PlotSpec:
    try:
        return PlotSpec(*args.window, width=args.width, height=args.height)
    except ValueError as e:
        raise UsageError(str(e))


def write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise OSError(f"{path}: {e.strerror}") from e
    print(f"wrote {path}")


# commands -----------------------------------------------------------------------------

def curve_rows(h: SquareHyperbola, n: int, rho_max: float):
    """(t, branch, x, y) along a curve; for k = 0, t is arc length on the geodesic."""
    if h.k == 0:
        L = equidistant_line(h.z, h.w)
        span = rho_max if L.is_vertical else min(rho_max, 12.0)
        return [(t, br, q.x, q.y) for t, br, q in sample_params(h, 2 * n, span)]
    p = parametrize(h)
    t_hi = max(p.t_for_distance(rho_max), p.t0 + 1e-3)
    return [(t, br, q.x, q.y) for t, br, q in sample_params(h, n, t_hi)]


def draw_curve(fig: Figure, h: SquareHyperbola, n: int, rho_max: float, style: Optional[str] = None,
               group: str = "curve"):
    rows = curve_rows(h, n, rho_max)
    style = style or ("dashed" if h.k == 0 else "solid")
    fig.polyline([r[2] for r in rows], [r[3] for r in rows], style,
                 {"class": group, "data-k": fmt(h.k)})
    return rows


def rows_csv(rows) -> str:
    out = ["t,branch,x,y"]
    out += [f"{fmt(t)},{br.symbol},{fmt(x)},{fmt(y)}" for t, br, x, y in rows]
    return "\n".join(out) + "\n"


def cmd_curve(args) -> int:
    fig = Figure(plot_spec(args))
    fig.axis()
    out = Path(args.out)
    sets = [("curve", args.z, args.w, args.k)]
    if args.overlay_z is not None or args.overlay_w is not None:
        if args.overlay_z is None or args.overlay_w is None or not args.overlay_k:
            raise UsageError("--overlay-z, --overlay-w and --overlay-k go together")
        sets.append(("overlay", args.overlay_z, args.overlay_w, args.overlay_k))
    for group, z, w, ks in sets:
        if z == w:
            raise UsageError(f"{group}: z and w must differ")
        for k in ks:
            h = SquareHyperbola(z, w, k)
            rows = draw_curve(fig, h, args.samples, args.rho_max, group=group)
            write(out.with_name(f"{out.name}_{group}_k{fmt(k)}.csv"), rows_csv(rows))
        if args.equidistant and 0.0 not in ks:
            draw_curve(fig, SquareHyperbola(z, w, 0.0), args.samples, args.rho_max, "dashed",
                       group=f"{group}-equidistant")
    write(out.with_suffix(".svg"), fig.render())
    return EXIT_OK


def cmd_fig4(args) -> int:
    g = Mobius.dilation(args.lam)
    search = search_config(args)
    found = find_ray_double_crossing(g, args.z0, args.m, args.kappa_target, search)
    if found is None:
        print(f"no ray double crossing for z0={args.z0} within the search bounds", file=sys.stderr)
        return EXIT_NOT_FOUND
    spec = plot_spec(args)
    fig = Figure(spec)
    fig.axis()
    rows = draw_curve(fig, found.curve, args.samples, args.rho_max, "thick", group="curve")
    x_end = spec.x_max * 2.0
    fig.polyline([0.0, x_end], [0.0, found.kappa * x_end], "ray",
                 {"class": "ray", "data-kappa": fmt(found.kappa)})
    marked = found.points
    for q in marked:
        fig.circle(q.x, q.y, attrs={"class": "intersection"})
    out = Path(args.out)
    write(out.with_suffix(".svg"), fig.render())
    write(out.with_name(out.name + "_curve.csv"), rows_csv(rows))
    pts = ["x,y,marked"] + [f"{fmt(q.x)},{fmt(q.y)},{int(found.is_marked(q))}"
                            for q in found.ray_hits]
    write(out.with_name(out.name + "_ray.csv"), "\n".join(pts) + "\n")
    print(f"m={fmt(found.m)} kappa={fmt(found.kappa)}")
    for q in marked:
        print(f"intersection {fmt(q.x)},{fmt(q.y)}")
    return EXIT_OK


def cmd_verify(args) -> int:
    ok = True
    for c in run_suite(args.suite, args.seed):
        print(c.line())
        ok = ok and c.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_faces(args) -> int:
    for g in (args.g1, args.g2):
        if classify(g) is not IsometryClass.HYPERBOLIC:
            raise PreconditionFailed(f"factor {g} is not hyperbolic")
    gamma = BidiskIsometry(args.g1, args.g2)
    p = args.p if args.p is not None else axis_basepoint(gamma)
    sampling = FaceSampling(k_max=args.face_k_max, k_count=args.k_count, t_count=args.t_count)
    rep = face_count(CyclicDomainSpec(gamma, p, args.N), sampling)
    out = Path(args.out)
    write(out.with_suffix(".csv"), rep.to_csv())
    summary = f"basepoint {p.to_csv()}\n" + rep.summary()
    write(out.with_name(out.name + "_summary.txt"), summary)
    sys.stdout.write(summary)
    return EXIT_OK


def cmd_intersect(args) -> int:
    h1 = Hypersurface(args.z1, args.w1)
    h2 = Hypersurface(args.z2, args.w2)
    wits = hypersurfaces_intersect(h1, h2, search_config(args), stop_after=args.limit)
    rows = ["k,l,x1,y1,x2,y2,residual"]
    rows += [f"{fmt(w.k)},{fmt(w.l)},{w.point.to_csv()},{fmt(w.max_residual)}" for w in wits]
    text = "\n".join(rows) + "\n"
    if args.out:
        write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if not wits:
        print("no intersection found within bounds", file=sys.stderr)
        return EXIT_NOT_FOUND
    return EXIT_OK


def cmd_distance(args) -> int:
    print(fmt(dist(args.z, args.w)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bidisk", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curve", help="square hyperbolae SH^k(z, w) as SVG and CSV")
    p.add_argument("--z", type=hpoint_arg, default=HPoint(0, 1))
    p.add_argument("--w", type=hpoint_arg, default=HPoint(0, 2))
    p.add_argument("--k", type=float, nargs="+", default=[4.0, 0.0, -4.0])
    p.add_argument("--overlay-z", type=hpoint_arg)
    p.add_argument("--overlay-w", type=hpoint_arg)
    p.add_argument("--overlay-k", type=float, nargs="+")
    p.add_argument("--equidistant", action="store_true", help="also draw the dashed k=0 line")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--rho-max", type=float, default=12.0)
    p.add_argument("--out", default="curve")
    add_plot_flags(p, "-4,4,0,4")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("fig4", help="a ray meeting SH^m(z0, g z0) twice")
    p.add_argument("--z0", type=hpoint_arg, default=HPoint(1.0, 0.25))
    p.add_argument("--lam", type=float, default=2.0, help="g is z -> lam z")
    p.add_argument("--m", type=float, default=10.0)
    p.add_argument("--kappa-target", type=float, default=0.15)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--rho-max", type=float, default=14.0)
    p.add_argument("--out", default="fig4")
    add_plot_flags(p, "-1,6,0,2")
    add_search_flags(p)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("verify", help="run an invariant suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=20240611)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("faces", help="count faces of a cyclic Dirichlet domain")
    p.add_argument("--g1", type=mobius_arg, default=Mobius.dilation(2.0), help="a,b,c,d")
    p.add_argument("--g2", type=mobius_arg, default=Mobius.dilation(3.0), help="a,b,c,d")
    p.add_argument("--p", type=bidisk_arg, help="x1,y1,x2,y2 (default: top of both axes)")
    p.add_argument("--N", type=int, default=6)
    p.add_argument("--face-k-max", type=float, default=20.0)
    p.add_argument("--k-count", type=int, default=41)
    p.add_argument("--t-count", type=int, default=61)
    p.add_argument("--out", default="faces")
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("intersect", help="bounded search for E(z1,w1) n E(z2,w2)")
    for name in ("z1", "w1", "z2", "w2"):
        p.add_argument(f"--{name}", type=bidisk_arg, required=True, help="x1,y1,x2,y2")
    p.add_argument("--limit", type=int, help="stop after this many witnesses")
    p.add_argument("--out")
    add_search_flags(p)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("distance", help="hyperbolic distance between two points")
    p.add_argument("--z", type=hpoint_arg, required=True)
    p.add_argument("--w", type=hpoint_arg, required=True)
    p.set_defaults(func=cmd_distance)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0) and EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, GeometryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
