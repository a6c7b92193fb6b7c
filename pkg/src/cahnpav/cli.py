"""Command-line interface: single runs, convergence sweeps, scheme comparisons.

Exit codes: 0 success, 2 configuration error, 3 a baseline scheme diverged
(an expected physical outcome for the conditionally stable baselines, not a
tool failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import parse_config
from .diagnostics import fit_convergence_order
from .errors import SolverError
from .output import write_history_csv
from .problems import desk_scale_drop_spec, manufactured_spec, full_scale_drop_spec, with_dt
from .runner import run_simulation
from .schemes import SchemeKind

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3

PAV_NAMES = [k.value for k in SchemeKind if k.is_pav]
ALL_NAMES = [k.value for k in SchemeKind]


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cahnpav",
        description="Energy-stable pseudo-spectral Cahn-Hilliard solver",
    )
    sub = parser.add_subparsers(required=True)

    p_run = sub.add_parser("run", help="run a single simulation from a JSON config")
    p_run.add_argument("--config", required=True, type=Path, help="path to the JSON config")
    p_run.set_defaults(handler=cmd_run)

    p_conv = sub.add_parser("convergence", help="manufactured-solution time-step sweep")
    p_conv.add_argument("--scheme", required=True, choices=PAV_NAMES)
    p_conv.add_argument("--dts", required=True, help="comma-separated step sizes, e.g. 0.1,0.05,0.025")
    p_conv.add_argument("--output-dir", type=Path, default=Path("out"))
    p_conv.set_defaults(handler=cmd_convergence)

    p_cmp = sub.add_parser("compare", help="run several schemes on the drop benchmark")
    p_cmp.add_argument("--schemes", required=True, help=f"comma-separated subset of {','.join(ALL_NAMES)}")
    p_cmp.add_argument("--dt", required=True, type=float)
    p_cmp.add_argument("--steps", required=True, type=int)
    p_cmp.add_argument("--problem", choices=["desk", "paper"], default="desk")
    p_cmp.add_argument("--output-dir", type=Path, default=Path("out"))
    p_cmp.set_defaults(handler=cmd_compare)

    return parser


def cmd_run(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    config = parse_config(text)  # SolverError -> exit 2 via main()

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run_simulation(
        config.problem,
        config.scheme,
        history_every=config.history_every,
        snapshot_every=config.snapshot_every,
        output_dir=out,
        dealias=config.dealias,
    )
    write_history_csv(result.history, out / "history.csv")
    if result.diverged:
        print(
            f"{config.scheme.value} diverged at step {result.diverged_step}; "
            f"history up to the last stable step written to {out / 'history.csv'}",
            file=sys.stderr,
        )
        return EXIT_DIVERGED
    print(f"completed {result.final_state.step} steps; history in {out / 'history.csv'}")
    return EXIT_OK


def cmd_convergence(args) -> int:
    try:
        dts = sorted({float(v) for v in args.dts.split(",") if v.strip()}, reverse=True)
    except ValueError as exc:
        print(f"error: dts: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if len(dts) < 3 or any(dt <= 0 for dt in dts):
        print("error: dts: need at least 3 positive step sizes", file=sys.stderr)
        return EXIT_CONFIG
    scheme = SchemeKind(args.scheme)

    base = manufactured_spec()
    rows = []
    for dt in dts:
        result = run_simulation(
            with_dt(base, dt),
            scheme,
            history_every=10**9,  # only the initial and final records matter
            exact_history=True,
        )
        final = result.history[-1]
        rows.append((dt, final.linf_err, final.l2_err))
        print(f"dt={dt:.6g}  linf={final.linf_err:.6e}  l2={final.l2_err:.6e}")

    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"convergence_{scheme.value}.csv"
    lines = ["dt,linf_err,l2_err"]
    lines += [f"{format(dt, '.17g')},{format(li, '.17g')},{format(l2, '.17g')}" for dt, li, l2 in rows]
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    slope_linf = fit_convergence_order([r[0] for r in rows], [r[1] for r in rows])
    slope_l2 = fit_convergence_order([r[0] for r in rows], [r[2] for r in rows])
    print(f"scheme {scheme.value}: fitted slope linf={slope_linf:.3f} l2={slope_l2:.3f}")
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_compare(args) -> int:
    names = [s.strip() for s in args.schemes.split(",") if s.strip()]
    schemes = []
    for name in names:
        try:
            schemes.append(SchemeKind(name))
        except ValueError:
            print(f"error: schemes: unknown scheme {name!r}", file=sys.stderr)
            return EXIT_CONFIG
    if not schemes:
        print("error: schemes: empty list", file=sys.stderr)
        return EXIT_CONFIG
    if args.dt <= 0:
        print(f"error: dt: must be positive, got {args.dt}", file=sys.stderr)
        return EXIT_CONFIG
    if args.steps < 1:
        print(f"error: steps: must be >= 1, got {args.steps}", file=sys.stderr)
        return EXIT_CONFIG

    problem = desk_scale_drop_spec() if args.problem == "desk" else full_scale_drop_spec()
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)

    any_diverged = False
    for scheme in schemes:
        result = run_simulation(problem, scheme, dt=args.dt, n_steps=args.steps)
        path = out / f"history_{scheme.value}.csv"
        write_history_csv(result.history, path)
        if result.diverged:
            any_diverged = True
            print(f"{scheme.value}: DIVERGED at step {result.diverged_step} ({path})")
        else:
            final = result.history[-1]
            print(f"{scheme.value}: {final.step} steps, E={final.energy:.6g} ({path})")
    return EXIT_DIVERGED if any_diverged else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
