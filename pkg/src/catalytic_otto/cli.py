"""Command-line harness: single cycles, sweeps, regime maps, search, checks.

Energies are in units of omega_h (fixed to 1). Exit codes: 0 success,
1 usage error, 2 runtime or infeasibility error, 3 invariant-suite failure.
"""
from __future__ import annotations

import argparse
import concurrent.futures
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .catalysis import CyclicityError, check_cyclicity
from .protocol import (
    PERMUTATIONS,
    TRANSPOSITIONS,
    EnumerationCapError,
    ProtocolError,
    d_otto_protocol,
    protocol_lines,
    read_protocol,
)
from .search import EFFICIENCY, OBJECTIVES, SearchTask, external_swap_census, optimize
from .state import Catalyst, DomainError, ThermalQubit
from .svg import tradeoff_svg
from .thermo import MAX_EFFICIENCY, MAX_WORK, MIN_WORK, engine_regime, laws_check, run_cycle

SWEEP_HEADER = "d,omega_h,omega_c,beta_h,beta_c,Q_h,Q_c,W,eta,eta_carnot,engine_mode"
REGIME_HEADER = "omega_ratio,beta_ratio,engine_dims"
SWEEP_VARIABLES = ("d", "omega_ratio", "beta_ratio", "beta_h_omega_h")


class UsageError(Exception):
    pass


class RuntimeFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def write_text(path, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise RuntimeFailure(f"cannot write {path}: {exc}") from None


def _qubits(omega_c, beta_h, beta_c):
    try:
        return ThermalQubit(float(beta_h), 1.0), ThermalQubit(float(beta_c), float(omega_c))
    except DomainError as exc:
        raise UsageError(str(exc)) from None


# cycle

def cmd_cycle(args) -> dict:
    hot, cold = _qubits(args.omega_c, args.beta_h, args.beta_c)
    if args.d < 1:
        raise UsageError("--d must be >= 1")
    try:
        if args.protocol == "d-otto":
            proto = d_otto_protocol(args.d)
        else:
            proto = read_protocol(args.protocol, args.d)
    except OSError as exc:
        raise UsageError(f"cannot read protocol file: {exc}") from None
    except ProtocolError as exc:
        raise RuntimeFailure(f"invalid protocol: {exc}") from None

    choice = {"max-work": MAX_WORK, "max-eff": MAX_EFFICIENCY,
              "max-efficiency": MAX_EFFICIENCY}[args.fixed_point]
    if args.catalyst:
        try:
            choice = np.array([float(x) for x in args.catalyst.split(",")])
            Catalyst(choice)
        except (ValueError, DomainError) as exc:
            raise UsageError(f"bad --catalyst: {exc}") from None
    try:
        result = run_cycle(proto, hot, cold, choice)
    except (ProtocolError, CyclicityError, DomainError) as exc:
        raise RuntimeFailure(str(exc)) from None

    laws = laws_check(result, hot, cold)
    residuals = laws.as_dict()
    residuals["cyclicity"] = check_cyclicity(proto, hot, cold, Catalyst(result.catalyst)).residual
    record = result.as_dict()
    record["residuals"] = residuals
    return record


# sweep

@dataclass
class SweepSpec:
    variable: str
    values: list
    d: int = 1
    omega_ratio: float = 0.5
    beta_ratio: float = 10.0
    beta_h_omega_h: float = 0.3

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise UsageError(f"sweep variable must be one of {SWEEP_VARIABLES}")
        if not self.values:
            raise UsageError("sweep needs at least one value")

    def points(self):
        for value in self.values:
            params = {"d": self.d, "omega_ratio": self.omega_ratio,
                      "beta_ratio": self.beta_ratio, "beta_h_omega_h": self.beta_h_omega_h}
            params[self.variable] = value
            d = params["d"]
            if int(d) != d or d < 1:
                raise UsageError(f"catalyst dimension must be a positive integer, got {d}")
            if params["omega_ratio"] <= 0 or params["beta_h_omega_h"] <= 0:
                raise UsageError("omega_ratio and beta_h_omega_h must be positive")
            if params["beta_ratio"] <= 1:
                raise UsageError("beta_ratio must exceed 1")
            yield int(d), params["omega_ratio"], params["beta_h_omega_h"], \
                params["beta_ratio"] * params["beta_h_omega_h"]


def sweep_row(point) -> tuple:
    d, omega_c, beta_h, beta_c = point
    hot, cold = ThermalQubit(beta_h, 1.0), ThermalQubit(beta_c, omega_c)
    res = run_cycle(d_otto_protocol(d), hot, cold, MAX_WORK)
    engine = int(res.W > MIN_WORK)
    return (d, 1.0, omega_c, beta_h, beta_c, res.Q_h, res.Q_c, res.W, res.eta, res.eta_carnot, engine)


def sweep_rows(spec: SweepSpec, jobs: int = 1) -> list[tuple]:
    points = list(spec.points())
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_row, points))
    return [sweep_row(p) for p in points]


def render_csv(header: str, rows) -> str:
    out = io.StringIO()
    out.write(header + "\n")
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")
    return out.getvalue()


def _parse_values(args) -> list:
    if args.values and args.range:
        raise UsageError("give either --values or --range")
    conv = int if args.vary == "d" else float
    try:
        if args.values:
            return [conv(x) for x in args.values.split(",")]
        if args.range:
            lo, hi, steps = args.range.split(",")
            steps = int(steps)
            if steps < 1:
                raise ValueError("steps must be >= 1")
            if args.vary == "d":
                return list(range(int(lo), int(hi) + 1))
            return [float(x) for x in np.linspace(float(lo), float(hi), steps)]
    except ValueError as exc:
        raise UsageError(f"bad sweep values: {exc}") from None
    raise UsageError("sweep needs --values or --range")


def cmd_sweep(args) -> str:
    spec = SweepSpec(args.vary, _parse_values(args), args.d, args.omega_ratio,
                     args.beta_ratio, args.beta_h_omega_h)
    rows = sweep_rows(spec, args.jobs)
    text = render_csv(SWEEP_HEADER, rows)
    write_text(args.out, text)
    if args.svg:
        pts = [(r[8], r[7]) for r in rows if r[10] == 1]
        title = f"d-Otto trade-off, sweep over {args.vary}"
        write_text(args.svg, tradeoff_svg(pts, title=title))
    return text


# regime map

def _regime_row(args) -> list[tuple]:
    r_omega, betas, d_max = args
    cells = []
    for r_beta in betas:
        hot, cold = ThermalQubit(1.0, 1.0), ThermalQubit(r_beta, r_omega)
        dims = [d for d in range(1, d_max + 1) if engine_regime(d, hot, cold)]
        cells.append((r_omega, r_beta, ";".join(str(d) for d in dims)))
    return cells


def regime_cells(resolution: int, d_max: int, beta_cap: float, jobs: int = 1) -> list[tuple]:
    """Cells in grid order: omega ratio d_max*(i+1)/res, beta ratio on [1, cap]."""
    betas = [float(b) for b in np.linspace(1.0, beta_cap, resolution)]
    work = [(d_max * (i + 1) / resolution, betas, d_max) for i in range(resolution)]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_regime_row, work))
    else:
        rows = [_regime_row(w) for w in work]
    return [cell for row in rows for cell in row]


def cmd_regime_map(args) -> str:
    if args.resolution < 2 or args.d_max < 1 or args.beta_cap <= 1:
        raise UsageError("need --resolution >= 2, --d-max >= 1, --beta-cap > 1")
    text = render_csv(REGIME_HEADER, regime_cells(args.resolution, args.d_max, args.beta_cap, args.jobs))
    write_text(args.out, text)
    return text


# search

def engine_record(engine) -> dict:
    rec = engine.result.as_dict()
    rec["protocol"] = protocol_lines(engine.protocol)
    rec["external_swaps"] = engine.external_swaps
    rec["laws_ok"] = engine.laws.ok
    return rec


def cmd_search(args) -> dict:
    hot, cold = _qubits(args.omega_c, args.beta_h, args.beta_c)
    try:
        if args.census:
            rows = external_swap_census(args.d, hot, cold, external_only=args.external_only,
                                        jobs=args.jobs, force=args.force)
            return {"d": args.d, "external_only": args.external_only,
                    "census": [vars(r) for r in rows.values()]}
        task = SearchTask(args.d, hot, cold, mode=args.mode, objective=args.objective,
                          external_swaps=args.external_swaps, external_only=args.external_only,
                          top=args.top, force=args.force, jobs=args.jobs)
        result = optimize(task)
    except EnumerationCapError as exc:
        raise UsageError(str(exc)) from None
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    return {
        "d": args.d,
        "mode": args.mode,
        "objective": args.objective,
        "scanned": result.scanned,
        "engines_found": result.engines_found,
        "engines": [engine_record(e) for e in result.engines],
    }


# check

def cmd_check(args) -> int:
    from . import checks

    failed = False
    for fam in checks.run_checks(args.grid):
        status = "PASS" if fam.passed else "FAIL"
        print(f"[{status}] {fam.name}: {fam.detail} ({fam.checked} cases, {fam.seconds:.2f} s)")
        failed |= not fam.passed
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="catalytic-otto", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, bath=True):
        p.add_argument("--config", help="key=value file; command-line flags take precedence")
        if bath:
            p.add_argument("--omega-c", type=float, default=0.5)
            p.add_argument("--beta-h", type=float, default=0.3)
            p.add_argument("--beta-c", type=float, default=3.0)

    p = sub.add_parser("cycle", help="run one engine cycle and print a JSON record")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--protocol", default="d-otto", help="'d-otto' or a protocol file")
    p.add_argument("--fixed-point", choices=("max-work", "max-eff", "max-efficiency"),
                   default="max-work")
    p.add_argument("--catalyst", help="comma-separated catalyst distribution to use instead")

    p = sub.add_parser("sweep", help="d-Otto sweep over one parameter, CSV output")
    common(p, bath=False)
    p.add_argument("--vary", choices=SWEEP_VARIABLES, required=True)
    p.add_argument("--values", help="comma-separated values")
    p.add_argument("--range", help="from,to,steps")
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--omega-ratio", type=float, default=0.5)
    p.add_argument("--beta-ratio", type=float, default=10.0)
    p.add_argument("--beta-h-omega-h", type=float, default=0.3)
    p.add_argument("--out", default="-")
    p.add_argument("--svg")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("regime-map", help="engine dimensions per (omega, beta) ratio cell")
    common(p, bath=False)
    p.add_argument("--resolution", type=int, default=50)
    p.add_argument("--d-max", type=int, default=4)
    p.add_argument("--beta-cap", type=float, default=10.0)
    p.add_argument("--out", default="-")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("search", help="exhaustive protocol search, JSON output")
    common(p)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--mode", choices=(TRANSPOSITIONS, PERMUTATIONS), default=TRANSPOSITIONS)
    p.add_argument("--objective", choices=OBJECTIVES, default=EFFICIENCY)
    p.add_argument("--top", type=int, default=10)
    p.add_argument("--external-swaps", type=int)
    p.add_argument("--external-only", action="store_true",
                   help="only protocols without internal swaps")
    p.add_argument("--census", action="store_true", help="report best engine per external-swap count")
    p.add_argument("--force", action="store_true", help="lift the dimension cap")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="-")

    p = sub.add_parser("check", help="run the invariant suite")
    common(p, bath=False)
    p.add_argument("--grid", choices=("small", "default"), default="default")
    return parser


def read_config(path) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in read_config(args.config).items():
            action = actions.get(key)
            if action is None or key in ("config", "help"):
                raise UsageError(f"unknown config key {key!r} for {args.command}")
            if isinstance(action, argparse._StoreTrueAction):
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                conv = action.type or str
                try:
                    defaults[key] = conv(value)
                except ValueError as exc:
                    raise UsageError(f"config {key}: {exc}") from None
                if action.choices is not None and defaults[key] not in action.choices:
                    raise UsageError(f"config {key}: {value!r} not in {list(action.choices)}")
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
        if args.command == "cycle":
            print(json.dumps(cmd_cycle(args)))
        elif args.command == "sweep":
            cmd_sweep(args)
        elif args.command == "regime-map":
            cmd_regime_map(args)
        elif args.command == "search":
            write_text(args.out, json.dumps(cmd_search(args), indent=2) + "\n")
        elif args.command == "check":
            return cmd_check(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
