"""Command-line interface.

Subcommands: verify-theorem1 (recompute the nine reference sextics),
padic (Monte Carlo over a p-adic measure), real (Monte Carlo over the real
interpolation family), plot-curve (render a curve CSV as an SVG), and count
(count lines on one surface from a JSON file).

Exit codes: 0 success, 2 invalid arguments, 3 verification failure,
4 unrecoverable solver failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .blowup import verify_line_count_table
from .errors import CubicLinesError
from .experiments import (
    MeasureSpec,
    PADIC_MEASURES,
    run_padic_experiment,
    run_real_experiment,
    write_curve,
    write_distribution,
)
from .sampling import DEFAULT_PRECISION
from .surfaces import CubicSurface, count_padic_lines

# corners of the probability simplex drawn as a flattened tetrahedron:
# 3 and 7 on the base, 15 on top, 27 pulled towards the centroid
_SIMPLEX_CORNERS = {
    3: (0.0, 0.0),
    7: (1.0, 0.0),
    15: (0.5, 0.8660254),
    27: (0.5, 0.2886751),
}


def _lambda_grid(text: str) -> list[float]:
    try:
        a, b, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected a:b:step") from None
    if step <= 0 or b < a:
        raise argparse.ArgumentTypeError("need a <= b and step > 0")
    grid = []
    k = 0
    while True:
        lam = round(a + k * step, 10)
        if lam > b + 1e-9:
            break
        grid.append(lam)
        k += 1
    return grid


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cubiclines",
        description="Count lines on cubic surfaces over Q_p and R.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser(
        "verify-theorem1",
        help="recompute the nine reference sextics and their line counts",
    )
    verify.add_argument("--p", type=int, default=7)

    padic = sub.add_parser("padic", help="Monte Carlo over a p-adic measure")
    padic.add_argument("--measure", choices=PADIC_MEASURES, required=True)
    padic.add_argument("--p", type=int, default=7)
    padic.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    padic.add_argument("--samples", type=int, default=10000)
    padic.add_argument("--seed", type=int, default=0)
    padic.add_argument("--workers", type=int, default=1)
    padic.add_argument("--out", default=None)

    real = sub.add_parser("real", help="Monte Carlo over the real family")
    which = real.add_mutually_exclusive_group(required=True)
    which.add_argument("--lambda", dest="lam", type=float, default=None)
    which.add_argument("--lambda-grid", dest="grid", type=_lambda_grid, default=None)
    real.add_argument("--samples", type=int, default=10000)
    real.add_argument("--seed", type=int, default=0)
    real.add_argument("--workers", type=int, default=1)
    real.add_argument("--out", default=None)

    plot = sub.add_parser("plot-curve", help="render a curve CSV as an SVG")
    plot.add_argument("--in", dest="infile", required=True)
    plot.add_argument("--out", required=True)

    count = sub.add_parser("count", help="count lines on one surface")
    count.add_argument("--surface", required=True, help="JSON file with p and coeffs")
    count.add_argument("--p", type=int, default=None)
    return parser


def _cmd_verify(args) -> int:
    try:
        rows = verify_line_count_table(args.p)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ok = 0
    for row in rows:
        status = "ok" if row.ok else "FAIL"
        pat = row.found_pattern
        print(
            f"{row.label:>10}: pattern ({pat.linear},{pat.quadratic})"
            f" lines {row.found_count:>2} expected {row.expected_count:>2}  {status}"
        )
        ok += row.ok
    print(f"passed {ok}/{len(rows)}")
    return 0 if ok == len(rows) else 3


def _cmd_padic(args) -> int:
    try:
        spec = MeasureSpec(kind=args.measure, p=args.p, precision=args.precision)
        dist = run_padic_experiment(spec, args.samples, args.seed, args.workers)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"measure {spec.kind}  p={spec.p}  N={args.precision}"
          f"  samples={dist.n_samples}  seed={dist.seed}")
    for count in spec.support:
        print(f"  {count:>2}: {dist.probabilities.get(count, 0.0):.5f}")
    print(f"mean {dist.mean:.5f}  failures {dist.n_failures}", end="")
    print(f"  resamples {dist.n_resamples}" if spec.kind == "blowup" else "")
    if args.out:
        write_distribution(dist, args.out)
        print(f"wrote {args.out} and {args.out}.meta.json")
    return 0


def _cmd_real(args) -> int:
    lambdas = args.grid if args.grid is not None else [args.lam]
    try:
        points = run_real_experiment(lambdas, args.samples, args.seed, args.workers)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for pt in points:
        probs = "  ".join(
            f"pi{c}={q:.5f}" for c, q in zip((3, 7, 15, 27), pt.probabilities)
        )
        print(f"lambda={pt.lam:.5f}  {probs}  mean={pt.mean:.5f}"
              f"  failures={pt.n_failures}")
    if args.out:
        write_curve(points, args.seed, args.out)
        print(f"wrote {args.out} and {args.out}.meta.json")
    return 0


def _read_curve_csv(path) -> list[dict]:
    import csv

    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    needed = {"lambda", "pi3", "pi7", "pi15", "pi27"}
    if not rows or not needed <= set(rows[0]):
        raise ValueError(f"{path} is not a curve CSV (columns {sorted(needed)})")
    return rows


def _cmd_plot(args) -> int:
    try:
        rows = _read_curve_csv(args.infile)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    width, height, margin = 520, 500, 40
    scale = width - 2 * margin

    def place(row):
        x = y = 0.0
        for count, (cx, cy) in _SIMPLEX_CORNERS.items():
            q = float(row[f"pi{count}"])
            x += q * cx
            y += q * cy
        return margin + x * scale, height - margin - y * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    corners = [place({f"pi{c}": 1.0 if c == k else 0.0 for c in _SIMPLEX_CORNERS})
               for k in _SIMPLEX_CORNERS]
    edge = " ".join(f"{x:.1f},{y:.1f}" for x, y in corners[:3])
    parts.append(f'<polygon points="{edge}" fill="none" stroke="#bbb"/>')
    for (x, y), k in zip(corners, _SIMPLEX_CORNERS):
        parts.append(f'<text x="{x:.1f}" y="{y - 6:.1f}" font-size="13"'
                     f' text-anchor="middle">{k}</text>')
    path = " ".join(f"{x:.1f},{y:.1f}" for x, y in (place(r) for r in rows))
    parts.append(f'<polyline points="{path}" fill="none" stroke="#d22" stroke-width="1.5"/>')
    for row in rows:
        x, y = place(row)
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="2.5" fill="#d22">'
                     f'<title>lambda={row["lambda"]}</title></circle>')
    parts.append("</svg>")
    with open(args.out, "w") as fh:
        fh.write("\n".join(parts) + "\n")
    print(f"wrote {args.out}")
    return 0


def _cmd_count(args) -> int:
    try:
        with open(args.surface) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    p = data.get("p")
    precision = data.get("precision", data.get("N"))
    coeffs = data.get("coeffs")
    if args.p is not None:
        if p is not None and p != args.p:
            print(f"error: --p {args.p} disagrees with the file's p={p}",
                  file=sys.stderr)
            return 2
        p = args.p
    try:
        if p is None or coeffs is None:
            raise ValueError("surface JSON needs p and coeffs")
        surface = CubicSurface(int(p), tuple(int(c) for c in coeffs),
                               None if precision is None else int(precision))
    except (TypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        print(count_padic_lines(surface))
    except CubicLinesError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 4
    return 0


_COMMANDS = {
    "verify-theorem1": _cmd_verify,
    "padic": _cmd_padic,
    "real": _cmd_real,
    "plot-curve": _cmd_plot,
    "count": _cmd_count,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
