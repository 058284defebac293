"""Command line front end.

Subcommands: point (quantities at one x), sweep (delimited table over a
grid), verify (self-check battery), protocol (dense-coding tables at x=1),
figures (render PNGs from a sweep table).

Printing convention: every numeric value is written with 12 digits after
the decimal point, and sweeps with the same seed are byte-identical no
matter how many worker threads run. Each grid point derives its own
optimizer seed from (seed, row index), so parallel execution cannot change
any printed digit.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__, capacities, figures, protocols, sdpbound, verify
from .errors import DomainError

QUANTITIES = ("chi_star", "c_ea", "q1_lower", "q_sdp", "q_flag")


def _fmt(value: float) -> str:
    return f"{value:.12f}"


def _check_range(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x out of range [0, 1]: {x:g}")
    return float(x)


def _parse_quantities(text: str):
    names = [tok.strip() for tok in text.split(",") if tok.strip()]
    if not names:
        raise DomainError("empty quantity list")
    for name in names:
        if name not in QUANTITIES:
            raise DomainError(
                f"unknown quantity {name!r} (choose from {', '.join(QUANTITIES)})"
            )
    return [q for q in QUANTITIES if q in names]


def compute_point(x: float, quantities, seed, starts: int) -> dict:
    """One row of results; seed may be an int or a word sequence."""
    row = {"x": x}
    for name in quantities:
        if name == "chi_star":
            row[name] = capacities.chi_star(x)
        elif name == "c_ea":
            row[name] = capacities.c_ea(x)
        elif name == "q1_lower":
            row[name] = capacities.q1_lower(x, starts=starts, seed=seed).best_value
        elif name == "q_sdp":
            row[name] = sdpbound.q_gamma(x)
        elif name == "q_flag":
            row[name] = sdpbound.q_flag(x)
    return row


def _worker_count(points: int) -> int:
    raw = os.environ.get("QCL_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            raise DomainError(f"QCL_THREADS must be an integer, got {raw!r}") from None
    else:
        cap = os.cpu_count() or 1
    return max(1, min(points, cap))


def sweep_rows(x_min, x_max, steps, quantities, seed, starts):
    """Rows in x order; per-row seeds are (seed, index) so results do not
    depend on the number of workers."""
    if steps < 1:
        raise DomainError(f"steps must be positive, got {steps}")
    _check_range(x_min)
    _check_range(x_max)
    if x_max < x_min:
        raise DomainError(f"x range is inverted: [{x_min:g}, {x_max:g}]")
    if steps == 1:
        grid = [x_min]
    else:
        grid = [x_min + (x_max - x_min) * i / (steps - 1) for i in range(steps)]

    def job(i):
        return compute_point(grid[i], quantities, [seed, i], starts)

    workers = _worker_count(len(grid))
    if workers == 1:
        return [job(i) for i in range(len(grid))]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, range(len(grid))))


def format_rows(rows, quantities, fmt: str) -> str:
    cols = ["x"] + list(quantities)
    if fmt == "csv":
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in cols))
        return "\n".join(lines) + "\n"
    if fmt == "json":
        payload = [{c: float(_fmt(row[c])) for c in cols} for row in rows]
        return json.dumps(payload, indent=2) + "\n"
    raise DomainError(f"unknown format {fmt!r} (choose csv or json)")


def _write_out(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="ascii") as handle:
        handle.write(text)


def cmd_point(args, channel_factory=None) -> int:
    x = _check_range(args.x)
    quantities = _parse_quantities(args.quantities)
    row = compute_point(x, quantities, args.seed, args.starts)
    print(", ".join(f"{name}={_fmt(row[name])}" for name in quantities))
    return 0


def cmd_sweep(args, channel_factory=None) -> int:
    quantities = _parse_quantities(args.quantities)
    rows = sweep_rows(args.x_min, args.x_max, args.steps, quantities, args.seed, args.starts)
    _write_out(format_rows(rows, quantities, args.format), args.out)
    return 0


def cmd_verify(args, channel_factory=None) -> int:
    results = verify.run_checks(args.level, channel_factory=channel_factory)
    failed = 0
    for res in results:
        print(f"{'PASS' if res.passed else 'FAIL'} {res.name}: {res.detail}")
        failed += 0 if res.passed else 1
    print(f"{len(results)} checks run at level {args.level}, {failed} failed")
    return 1 if failed else 0


def cmd_protocol(args, channel_factory=None) -> int:
    result = protocols.protocol_by_name(args.name)
    joint = result.joint_distribution
    messages = joint.shape[0]
    print(f"protocol: {result.protocol_name}")
    print("conditional P(outcome | message):")
    for n in range(messages):
        cells = " ".join(f"{messages * joint[n, p]:.6f}" for p in range(joint.shape[1]))
        print(f"  message {n}: {cells}")
    gap = capacities.c_ea(1.0) - result.mutual_information
    print(f"mutual_information={_fmt(result.mutual_information)}")
    print(f"gap_to_c_ea={_fmt(gap)}")
    return 0


def cmd_figures(args, channel_factory=None) -> int:
    import csv as csv_mod

    with open(args.source, newline="", encoding="ascii") as handle:
        records = list(csv_mod.DictReader(handle))
    if not records:
        raise DomainError(f"{args.source} holds no data rows")
    prefix = args.out
    if prefix is None:
        base, _ = os.path.splitext(args.source)
        prefix = base
    for path in figures.render_all(records, prefix):
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcl",
        description="Capacity bounds for the identity-to-Landau-Streater qutrit family.",
    )
    parser.add_argument("--version", action="version", version=f"qcl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    point = sub.add_parser("point", help="print quantities at a single x")
    point.add_argument("--x", type=float, required=True)
    point.add_argument("--quantities", default=",".join(QUANTITIES))
    point.add_argument("--seed", type=int, default=42)
    point.add_argument("--starts", type=int, default=50)
    point.set_defaults(func=cmd_point)

    sweep = sub.add_parser("sweep", help="tabulate quantities over an x grid")
    sweep.add_argument("--x-min", type=float, default=0.0)
    sweep.add_argument("--x-max", type=float, default=1.0)
    sweep.add_argument("--steps", type=int, default=101)
    sweep.add_argument("--quantities", default=",".join(QUANTITIES))
    sweep.add_argument("--seed", type=int, default=42)
    sweep.add_argument("--starts", type=int, default=50)
    sweep.add_argument("--out", default=None, help="output path (default stdout)")
    sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    sweep.set_defaults(func=cmd_sweep)

    ver = sub.add_parser("verify", help="run the self-check battery")
    ver.add_argument("--level", choices=("quick", "full"), default="quick")
    ver.set_defaults(func=cmd_verify)

    proto = sub.add_parser("protocol", help="dense-coding tables at x = 1")
    proto.add_argument("--name", choices=("phase", "bell"), default="phase")
    proto.set_defaults(func=cmd_protocol)

    figs = sub.add_parser("figures", help="render PNGs from a sweep CSV")
    figs.add_argument("--from", dest="source", required=True, help="sweep CSV path")
    figs.add_argument("--out", default=None, help="output prefix (default: CSV stem)")
    figs.set_defaults(func=cmd_figures)

    return parser


def main(argv=None, channel_factory=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args, channel_factory)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
