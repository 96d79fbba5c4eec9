"""Command-line front end.

Subcommands: ``graph``, ``unitary``, ``sweep``, ``lindblad``, ``verify``.
Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error. Settings resolve as command-line flag > ``--config`` file > default.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import closed_form as cf
from .dynamics import loglog_slope, plan, probability_trace, trace_maximum
from .exceptions import InvalidSpecError, InvariantViolation
from .export import density_csv, fmt, svg_plot, table_csv, trace_csv
from .graphs import (
    GraphFamilySpec,
    adjacency,
    balanced_leaf_state,
    basis_state,
    build_cayley,
    cayley_branch_state,
    phased_leaf_state,
    to_dot,
    to_json,
    validate_state,
)
from .open_system import (
    build_lindblad_set,
    cumulative_center_probability,
    evolve_density,
    pure_density,
)
from .spectral import (
    analytic_spectrum_spider2,
    analytic_spectrum_spider3,
    analytic_spectrum_star,
    eigh,
)

log = logging.getLogger("treewalk")

VERIFY_TOL = 1e-10
DEFAULT_OMEGAS = "0,0.01,0.02,0.03,0.04,0.05"


class UsageError(Exception):
    pass


def _float_list(text):
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a comma-separated number list: {text!r}") from None


def _int_list(text):
    try:
        return [int(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"not a comma-separated integer list: {text!r}") from None


def read_config(path) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.lstrip("-").replace("-", "_")] = value
    return out


def _common(p):
    p.add_argument("--config", help="flat key=value file with defaults")
    p.add_argument("--family", choices=["star", "spider", "cayley", "cycle"], default="spider")
    p.add_argument("--branches", type=int, default=3)
    p.add_argument("--length", type=int, default=2)
    p.add_argument("--coord", type=int, default=3)
    p.add_argument("--levels", type=int, default=2)
    p.add_argument("--central-hopping", type=float, default=None)
    p.add_argument("--off-hopping", type=float, default=None)
    p.add_argument("--generator", choices=["adjacency", "laplacian"], default="adjacency")
    p.add_argument("--state", default="basis:1",
                   help="basis:<v> | balanced | phased | cayley-branch | file:<path>")
    p.add_argument("--tmax", type=float, default=10 * math.pi)
    p.add_argument("--dt", type=float, default=math.pi / 1000)
    p.add_argument("--omega", default=None, help="comma-separated values in [0, 1]")
    p.add_argument("--dissipator", choices=["paper", "standard"], default="paper")
    p.add_argument("--vertices", default=None, help="comma-separated 1-based vertices")
    p.add_argument("--cumulative", action="store_true")
    p.add_argument("--out-csv")
    p.add_argument("--out-dot")
    p.add_argument("--out-json")
    p.add_argument("--out-svg")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treewalk", description="Quantum walks on weighted tree graphs"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("graph", help="build a graph and export DOT / JSON")
    _common(p)
    p = sub.add_parser("unitary", help="unitary probability traces")
    _common(p)
    p = sub.add_parser("sweep", help="center-probability sweep over J, omega or branches")
    _common(p)
    p.add_argument("--param", choices=["J", "omega", "branches"], default="J")
    p.add_argument("--values", required=False, default=None)
    p.add_argument("--trace-dir", default=None, help="directory for per-value trace CSVs")
    p.add_argument("--log-scale", action="store_true", help="log-log summary plot")
    p = sub.add_parser("lindblad", help="quantum stochastic walk (Lindblad + RK4)")
    _common(p)
    p.add_argument("--subsample", type=int, default=1)
    p = sub.add_parser("verify", help="closed forms and mappings against numerics")
    _common(p)
    p.add_argument("--j-values", default="1,2,3,10")
    return parser


# -- resolution ---------------------------------------------------------------


def resolve_spec(args, default_J=1.0) -> GraphFamilySpec:
    J = args.central_hopping if args.central_hopping is not None else default_J
    if args.family == "cayley":
        return GraphFamilySpec("cayley", args.coord, args.levels, J, args.off_hopping)
    if args.family == "star":
        return GraphFamilySpec("star", args.branches, 1, J)
    if args.family == "cycle":
        return GraphFamilySpec("cycle", args.branches, 1, 1.0, args.off_hopping)
    return GraphFamilySpec("spider", args.branches, args.length, J, args.off_hopping)


def resolve_state(text, g):
    text = str(text)
    if text.startswith("basis:"):
        return basis_state(g, int(text.split(":", 1)[1]))
    if text == "balanced":
        return balanced_leaf_state(g)
    if text == "phased":
        return phased_leaf_state(g)
    if text == "cayley-branch":
        return cayley_branch_state(g)
    if text.startswith("file:"):
        lines = Path(text[5:]).read_text().split()
        amps = [complex(s.replace("i", "j")) for s in lines]
        return validate_state(amps, g.num_vertices)
    raise UsageError(f"unknown state {text!r}")


def resolve_times(args):
    if not args.tmax > 0:
        raise UsageError("--tmax must be positive")
    if not 0 < args.dt <= args.tmax:
        raise UsageError("--dt must satisfy 0 < dt <= tmax")
    # the spectral path can hit tmax exactly; dt only fixes the point count
    steps = max(1, int(round(args.tmax / args.dt)))
    return np.linspace(0.0, args.tmax, steps + 1)


def resolve_omegas(args):
    omegas = _float_list(args.omega if args.omega is not None else DEFAULT_OMEGAS)
    for w in omegas:
        if not 0.0 <= w <= 1.0:
            raise UsageError(f"omega must lie in [0, 1], got {w}")
    if not omegas:
        raise UsageError("no omega values given")
    return omegas


def resolved_config(args) -> dict:
    skip = {"verbose"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def _write(path, text):
    # one writer per output file
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _suffixed(path, tag):
    if path is None:
        return None
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{tag}{p.suffix}"))


def _tag(value):
    return ("%g" % value).replace(".", "p").replace("-", "m")


# -- subcommands ---------------------------------------------------------------


def cmd_graph(args):
    g = resolve_spec(args).build()
    cfg = resolved_config(args)
    dot = "".join(f"// {k}={cfg[k]}\n" for k in sorted(cfg)) + to_dot(g)
    if args.out_dot is None and args.out_json is None:
        _write(None, dot)
    if args.out_dot:
        _write(args.out_dot, dot)
    if args.out_json:
        _write(args.out_json, "".join(f"# {k}={cfg[k]}\n" for k in sorted(cfg)) + to_json(g) + "\n")
    return 0


def _vertices(args, g):
    if args.vertices:
        return _int_list(args.vertices)
    c = g.center
    return [1, c] if c and c != 1 else [1]


def cmd_unitary(args):
    spec = resolve_spec(args)
    g = spec.build()
    times = resolve_times(args)
    p = plan(g, args.generator, resolve_state(args.state, g))
    series = probability_trace(p, _vertices(args, g), times, cumulative=args.cumulative)
    cfg = resolved_config(args)
    _write(args.out_csv, trace_csv(series, cfg))
    if args.out_svg:
        curves = [(f"P_{v} (J={spec.central_hopping:g})", times, series.probability(v))
                  for v in series.vertices]
        _write(args.out_svg, svg_plot(curves, "t", "probability", config=cfg))
    return 0


def _lindblad_run(g, omega, args, psi0):
    lset = build_lindblad_set(g, omega)
    return evolve_density(g, lset, pure_density(psi0), args.dt, args.tmax, args.dissipator)


def cmd_sweep(args):
    if args.values is None:
        raise UsageError("sweep needs --values")
    values = _float_list(args.values)
    if not values:
        raise UsageError("sweep needs at least one value")
    cfg = resolved_config(args)
    times = resolve_times(args)

    def one(value):
        a = argparse.Namespace(**vars(args))
        if args.param == "J":
            a.central_hopping = value
        elif args.param == "branches":
            if value != int(value):
                raise UsageError("branch counts must be integers")
            a.branches = int(value)
            a.coord = int(value)
        g = resolve_spec(a, default_J=10.0 if args.param == "omega" else 1.0).build()
        psi0 = resolve_state(args.state, g)
        if args.param == "omega":
            if not 0.0 <= value <= 1.0:
                raise UsageError(f"omega must lie in [0, 1], got {value}")
            run = _lindblad_run(g, value, a, psi0)
            series = run.series
            p_center = series.probability(g.center)
            return value, float(p_center.max()), cumulative_center_probability(
                series, float(series.times[-1]), g.center), series, g.center
        p = plan(g, args.generator, psi0)
        series = probability_trace(p, [g.center], times)
        _, pmax = trace_maximum(p, g.center, times)
        return value, pmax, None, series, g.center

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        results = list(pool.map(one, values))

    slope = float("nan")
    if args.param != "omega" and all(v > 0 for v in values) and len(values) > 1:
        slope = loglog_slope([(v, pm) for v, pm, *_ in results])
    if args.param == "omega":
        cols = ["value", "max_P_center", "Omega"]
        rows = [(v, pm, om) for v, pm, om, *_ in results]
    else:
        cols = ["value", "max_P_center", "slope"]
        rows = [(v, pm, slope) for v, pm, *_ in results]
    _write(args.out_csv, table_csv(cols, rows, cfg))
    if args.trace_dir:
        for v, _, _, series, _ in results:
            _write(str(Path(args.trace_dir) / f"trace_{args.param}_{_tag(v)}.csv"),
                   trace_csv(series, {**cfg, "value": fmt(v)}))
    if args.out_svg:
        if args.log_scale:
            curves = [("max P_center", values, [pm for _, pm, *_ in results])]
            svg = svg_plot(curves, args.param, "max P_center", log_x=True, log_y=True, config=cfg)
        else:
            curves = [(f"{args.param}={v:g}", s.times, s.probability(c))
                      for v, _, _, s, c in results]
            svg = svg_plot(curves, "t", "P_center", config=cfg)
        _write(args.out_svg, svg)
    if args.out_csv is not None and not math.isnan(slope):
        print(f"log-log slope: {slope:.6g}")
    return 0


def cmd_lindblad(args):
    omegas = resolve_omegas(args)
    resolve_times(args)
    spec = resolve_spec(args, default_J=10.0)
    g = spec.build()
    psi0 = resolve_state(args.state, g)
    cfg = resolved_config(args)

    def one(omega):
        return omega, _lindblad_run(g, omega, args, psi0)

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        runs = list(pool.map(one, omegas))

    c = g.center or g.num_vertices
    rows = []
    for omega, run in runs:
        tau = float(run.series.times[-1])
        rows.append((omega, cumulative_center_probability(run.series, tau, c),
                     float(run.trace_errors.max())))
        run_cfg = {**cfg, "omega_run": fmt(omega), "J": fmt(spec.central_hopping),
                   "dt": fmt(args.dt), "dissipator_form": args.dissipator}
        path = args.out_csv if len(runs) == 1 else _suffixed(args.out_csv, f"omega{_tag(omega)}")
        if path is not None:
            _write(path, density_csv(run, run_cfg, args.subsample))
    print(f"dissipator form: {args.dissipator}")
    print(f"{'omega':>8} {'Omega(tau)':>12} {'max trace err':>14}")
    for omega, om, terr in rows:
        print(f"{omega:8.4g} {om:12.6g} {terr:14.3e}")
    if args.out_svg:
        curves = [(f"omega={w:g}", r.series.times, r.series.probability(c)) for w, r in runs]
        _write(args.out_svg, svg_plot(curves, "t", f"P_{c}", config=cfg))
    return 0


def _verify_cases(args):
    """Yield ``(name, max deviation, csv rows or None)`` for each check."""
    n = args.branches
    L = 1 if args.family == "star" else args.length
    if args.family not in ("star", "spider") or L not in (1, 2, 3):
        raise UsageError("verify supports --family star or spider with --length 1, 2 or 3")
    times = resolve_times(args)
    for J in _float_list(args.j_values):
        g = GraphFamilySpec("spider" if L > 1 else "star", n, L, J).build()
        c = g.center
        p = plan(g, "adjacency", basis_state(g, 1))
        numeric = probability_trace(p, [c], times).probabilities[0]
        if L == 1:
            exact = cf.star_center_prob(n, J, times)
            approx = exact
            analytic = analytic_spectrum_star(n, J)
        elif L == 2:
            exact = cf.spider2_center_prob(n, J, times)
            approx = cf.spider2_center_prob_large_J(n, J, times)
            analytic = analytic_spectrum_spider2(n, J)
        else:
            exact = cf.spider3_center_prob(n, J, times)
            approx = cf.spider3_center_prob_large_J(n, J, times)
            analytic = analytic_spectrum_spider3(n, J)
        rows = np.vstack([times, exact, numeric, approx, np.abs(exact - numeric)]).T
        yield f"closed form vs numeric  J={J:g}", float(np.abs(exact - numeric).max()), (J, rows)
        spectrum = eigh(adjacency(g)).eigenvalues
        yield f"analytic vs eigh spectrum J={J:g}", float(np.abs(spectrum - analytic).max()), None
        if n == 3 and L in (2, 3):
            cay = build_cayley(3, L, J)
            pc = plan(cay, "adjacency", cayley_branch_state(cay))
            mapped = probability_trace(pc, [cay.center], times).probabilities[0]
            yield (f"C_{{3,{L}}} vs S_{{3,{L}}} center  J={J:g}",
                   float(np.abs(mapped - numeric).max()), None)


def cmd_verify(args):
    cfg = resolved_config(args)
    failed = []
    csv_rows = []
    print(f"{'check':<40} {'max |dev|':>12} {'tol':>8}  result")
    for name, dev, rows in _verify_cases(args):
        ok = dev < VERIFY_TOL
        print(f"{name:<40} {dev:12.6g} {VERIFY_TOL:8.0e}  {'PASS' if ok else 'FAIL'}")
        if not ok:
            failed.append(name)
        if rows is not None:
            csv_rows.append(rows)
    if args.out_csv:
        cols = ["t", "exact", "numeric", "approx", "abs_err"]
        for J, rows in csv_rows:
            path = args.out_csv if len(csv_rows) == 1 else _suffixed(args.out_csv, f"J{_tag(J)}")
            _write(path, table_csv(cols, rows, {**cfg, "J": fmt(J)}))
    if failed:
        print("verification failed: " + "; ".join(failed), file=sys.stderr)
        return 1
    return 0


COMMANDS = {
    "graph": cmd_graph,
    "unitary": cmd_unitary,
    "sweep": cmd_sweep,
    "lindblad": cmd_lindblad,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            cfg = read_config(known.config)
        except (OSError, UsageError) as exc:
            print(f"treewalk: {exc}", file=sys.stderr)
            return 2
        subs = [sub for action in parser._subparsers._group_actions
                for sub in action.choices.values()]
        unknown = set(cfg) - {a.dest for sub in subs for a in sub._actions}
        if unknown:
            print(f"treewalk: unknown config keys {sorted(unknown)}", file=sys.stderr)
            return 2
        for sub in subs:
            dests = {a.dest for a in sub._actions}
            flags = {a.dest for a in sub._actions if isinstance(a, argparse._StoreTrueAction)}
            sub.set_defaults(**{
                k: (str(v).lower() in ("1", "true", "yes", "on")) if k in flags else v
                for k, v in cfg.items() if k in dests
            })
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    # argparse does not check choices on defaults, which is where config values land
    sub = parser._subparsers._group_actions[0].choices[args.command]
    for action in sub._actions:
        value = getattr(args, action.dest, None)
        if action.choices is not None and value is not None and value not in action.choices:
            print(f"treewalk {args.command}: invalid {action.dest} {value!r}; "
                  f"choose from {sorted(action.choices)}", file=sys.stderr)
            return 2
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, InvalidSpecError, OSError) as exc:
        print(f"treewalk {args.command}: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"treewalk {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
