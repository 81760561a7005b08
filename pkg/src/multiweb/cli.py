"""Command-line entry point: ``multiweb <subcommand> [options]``.

Exit codes: 0 success, 2 validation error, 3 resource limit, 4 no
convergence, 5 verification failure.  Errors are reported on stderr as a
single JSON object.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cycle as cy
from . import io
from .errors import InvalidArgument, MultiwebError
from .fibonacci import lucas
from .gauge import solve_critical_gauge
from .graph import graph_from_json, make_complete_bipartite, make_cycle, make_path, recognize
from .laplacian import gaussian_law
from .polynomial import exact_covariance, log_partition_function, partition_function_exact
from .tiles import DEFAULT_TILE_CAP, count_tiles, enumerate_tiles, incidence_matrix
from .window import enumerate_local_configs, local_law

VERIFY_FAILED = 5
DEFAULT_TOL = 1e-12
DEFAULT_MAX_STATES = 10**8


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _report_error("UsageError", message, 2)
        self.exit(2)


def _report_error(kind: str, message: str, code: int) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")


# option parsing helpers

def _number(text: str):
    """Exact Fraction for integers and p/q, float otherwise."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        try:
            return float(text)
        except ValueError:
            raise InvalidArgument(f"not a number: {text!r}") from None


def load_graph(args):
    if args.L is not None and args.graph is not None:
        raise InvalidArgument("give either --L or --graph, not both")
    if args.L is not None:
        return make_cycle(args.L)
    if args.graph is None:
        raise InvalidArgument("a graph is required (--graph or --L)")
    source = args.graph
    if ":" in source and not Path(source).exists():
        family, _, param = source.partition(":")
        try:
            values = [int(p) for p in param.split(",")]
        except ValueError:
            raise InvalidArgument(f"bad graph parameter in {source!r}") from None
        builders = {"cycle": make_cycle, "path": make_path, "bipartite": make_complete_bipartite}
        if family not in builders:
            raise InvalidArgument(f"unknown graph family {family!r}; use cycle, path or bipartite")
        return builders[family](*values)
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidArgument(f"cannot read graph file {source!r}: {exc.strerror}") from None
    return graph_from_json(text)


def load_weights(args, T: int):
    """None for uniform weights, else a list of T positive numbers."""
    if args.weights is None:
        return None
    try:
        data = json.loads(Path(args.weights).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidArgument(f"cannot read weights {args.weights!r}: {exc}") from None
    if isinstance(data, list):
        if len(data) != T:
            raise InvalidArgument(f"weights list has {len(data)} entries, expected {T}")
        values = [_number(str(x)) for x in data]
    elif isinstance(data, dict):
        values = [Fraction(1)] * T
        for key, value in data.items():
            t = int(key)
            if not 0 <= t < T:
                raise InvalidArgument(f"weight key {key!r} is not a tile index below {T}")
            values[t] = _number(str(value))
    else:
        raise InvalidArgument("weights must be a JSON list or an object mapping tile index to weight")
    if any(v <= 0 for v in values):
        raise InvalidArgument("weights must be positive")
    return values


def load_alpha(args, graph, D) -> list:
    """Density for v_1..v_V.  ``critical`` is the density of the uniform tile distribution."""
    V = graph.vertex_count
    source = args.alpha or "critical"
    if source == "critical":
        if recognize(graph) and recognize(graph)[0] == "cycle" and V % 2 == 1 and V >= 3:
            return [cy.alpha_hat(V)] * V
        T = D.shape[1]
        return [Fraction(int(s), T) for s in D[1:].sum(axis=1)]
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidArgument(f"cannot read density vector {source!r}: {exc}") from None
        if not isinstance(data, list) or len(data) != V:
            raise InvalidArgument(f"density vector must be a JSON list of {V} numbers")
        return [_number(str(x)) for x in data]
    return [_number(source)] * V


def load_multiplicities(args, graph, D) -> tuple[int, ...]:
    if args.n is not None:
        n = tuple(int(x) for x in args.n.split(","))
        if len(n) != graph.vertex_count:
            raise InvalidArgument(f"--n needs {graph.vertex_count} entries")
        return n
    if args.N is None:
        raise InvalidArgument("--N is required")
    alpha = load_alpha(args, graph, D)
    n = []
    for a in alpha:
        value = Fraction(a) * args.N if isinstance(a, Fraction) else a * args.N
        if Fraction(value).denominator != 1:
            raise InvalidArgument(f"N * alpha = {value} is not an integer; pass --n or choose N")
        n.append(int(value))
    return tuple(n)


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(args, obj) -> None:
    sys.stdout.write(io.to_json(obj))


def _plot(args, fn, *a, **kw):
    if args.no_plot:
        return None
    from . import figures
    return getattr(figures, fn)(*a, **kw)


def _tile_label(tile, graph) -> str:
    return "{" + ",".join(f"{graph.edges[e][0]}{graph.edges[e][1]}" for e in tile.edges) + "}"


# subcommands

def cmd_tiles(args) -> int:
    graph = load_graph(args)
    if args.count_only:
        _emit(args, {"vertex_count": graph.vertex_count, "tiles": count_tiles(graph, args.cap)})
        return 0
    tiles = enumerate_tiles(graph, args.cap)
    rows = [{"index": k, "size": t.size, "edges": [list(graph.edges[e]) for e in t.edges]}
            for k, t in enumerate(tiles)]
    if args.format == "csv":
        csv_rows = [{"index": r["index"], "size": r["size"], "edges": _tile_label(t, graph)}
                    for r, t in zip(rows, tiles)]
        sys.stdout.write(io.table_to_csv(csv_rows, ["index", "size", "edges"]))
    else:
        _emit(args, {"vertex_count": graph.vertex_count, "count": len(tiles), "tiles": rows})
    return 0


def cmd_zexact(args) -> int:
    graph = load_graph(args)
    tiles = enumerate_tiles(graph, args.cap)
    D = incidence_matrix(tiles)
    w = load_weights(args, len(tiles))
    if args.N is None:
        raise InvalidArgument("zexact needs --N")
    N = args.N
    n = load_multiplicities(args, graph, D)
    exact = w is None or all(isinstance(x, Fraction) for x in w)
    Z = partition_function_exact(tiles, w, n, N, exact=exact, max_states=args.max_states)
    if not Z:
        log_z = None
    elif exact:
        Z = Fraction(Z)
        log_z = math.log(Z.numerator) - math.log(Z.denominator)
    else:
        log_z = log_partition_function(tiles, w, n, N, max_states=args.max_states)
    out = {"N": N, "n": list(n), "tiles": len(tiles), "Z": str(Z) if exact else Z, "log_Z": log_z}
    if args.moments and Z:
        mean, cov = exact_covariance(tiles, w, n, N, exact=exact, max_states=args.max_states)
        out["mean"] = [str(x) if exact else x for x in mean]
        out["covariance"] = [[str(x) if exact else x for x in row] for row in cov]
        if args.out:
            stem = _out_dir(args) / "zexact"
            io.write_matrix_csv(stem.with_suffix(".cov.csv"), np.array(cov, dtype=float))
    _emit(args, out)
    return 0


def _gauge(args, graph):
    tiles = enumerate_tiles(graph, args.cap)
    D = incidence_matrix(tiles)
    w = load_weights(args, len(tiles))
    alpha = load_alpha(args, graph, D)
    wf = None if w is None else [float(x) for x in w]
    g = solve_critical_gauge(D, wf, [float(a) for a in alpha], tol=args.tol)
    return tiles, D, alpha, g


def cmd_gauge(args) -> int:
    graph = load_graph(args)
    tiles, D, alpha, g = _gauge(args, graph)
    _emit(args, {"alpha": [str(a) if isinstance(a, Fraction) else a for a in alpha],
                 "x": g.x, "w_prime": g.critical_weights, "sigma": g.sigma,
                 "residuals": g.residuals(), "iterations": g.iterations})
    return 0


def cmd_cov(args) -> int:
    graph = load_graph(args)
    tiles, D, alpha, g = _gauge(args, graph)
    N = float(args.N) if args.N is not None else 1.0
    law = gaussian_law(D, g.critical_weights, N)
    law.check(D)
    labels = [_tile_label(t, graph) for t in tiles]
    out = _out_dir(args)
    csv_path = io.write_matrix_csv(out / "cov.csv", law.covariance)
    meta = {"vertex_count": graph.vertex_count, "tiles": len(tiles), "N": N,
            "order": "size-then-lex", "tile_labels": labels, "mean": law.mean}
    io.write_json(out / "cov.json", meta)
    png = _plot(args, "plot_matrix", out / "cov.png", law.covariance,
                f"Cov(X) / N, {len(tiles)} tiles", labels)
    _emit(args, {"csv": str(csv_path), "json": str(out / "cov.json"), "png": png and str(png)})
    return 0


def cmd_cycle(args) -> int:
    if args.L is None:
        raise InvalidArgument("cycle needs --L")
    L = args.L
    if L < 3 or L % 2 == 0:
        raise InvalidArgument(f"cycle needs an odd L >= 3, got {L}")
    action = args.action
    if action == "alpha-hat":
        a = cy.alpha_hat(L)
        if args.format == "json":
            _emit(args, {"L": L, "alpha_hat": str(a), "value": float(a)})
        else:
            print(a)
            print(float(a))
        return 0
    out = _out_dir(args)
    if action == "cov":
        tiles = enumerate_tiles(make_cycle(L), args.cap)
        D = incidence_matrix(tiles)
        N = float(args.N) if args.N is not None else 1.0
        law = gaussian_law(D, np.full(len(tiles), 1.0 / len(tiles)), N)
        law.check(D)
        stem = out / f"cycle{L}_cov"
        io.write_matrix_csv(stem.with_suffix(".csv"), law.covariance)
        io.write_json(stem.with_suffix(".json"), {"L": L, "tiles": len(tiles), "order": "size-then-lex",
                                                  "N": N, "alpha_hat": cy.alpha_hat(L)})
        labels = [_tile_label(t, make_cycle(L)) for t in tiles]
        _plot(args, "plot_matrix", stem.with_suffix(".png"), law.covariance,
              f"cycle L = {L}: Cov(X) / N", labels)
        _emit(args, {"L": L, "tiles": len(tiles), "order": "size-then-lex",
                     "csv": str(stem.with_suffix(".csv"))})
    elif action == "curves":
        top = (L - 1) / L
        grid = np.linspace(top / args.points, top, args.points, endpoint=False)
        rows = cy.tile_probability_curves(L, grid, tol=args.tol)
        stem = out / f"cycle{L}_curves"
        io.write_table_csv(stem.with_suffix(".csv"), rows, ["alpha", "size", "probability", "x0", "x1"])
        _plot(args, "plot_tile_probabilities", stem.with_suffix(".png"), rows, L, cy.alpha_hat(L))
        _emit(args, {"L": L, "rows": len(rows), "csv": str(stem.with_suffix(".csv"))})
    elif action == "inverse":
        inv = cy.inverse_laplacian_closed(L)
        stem = out / f"cycle{L}_inverse"
        io.write_matrix_csv(stem.with_suffix(".csv"), inv,
                            [f"v{k}" for k in range(L + 1)], [f"v{k}" for k in range(L + 1)])
        _plot(args, "plot_matrix", stem.with_suffix(".png"), inv, f"cycle L = {L}: inverse Laplacian")
        _emit(args, {"L": L, "csv": str(stem.with_suffix(".csv"))})
    elif action == "closed-forms":
        entries = cy.inverse_laplacian_entries(L)
        audit = cy.eigenvalue_audit(L)
        doc = {
            "L": L,
            "tiles": lucas(L),
            "alpha_hat": cy.alpha_hat(L),
            "sigma_at_alpha_hat": math.log(lucas(L)),
            "size_counts": cy.size_counts(L),
            "delta_00": cy.delta_00(L),
            "delta_0v": cy.delta_0v(L),
            "circulant_entries": cy.circulant_entries(L),
            "lambda_0": cy.lambda_0(L),
            "eigenvalue_audit": audit,
            "root_of_unity_sums": [cy.root_of_unity_sum(L, l) for l in range(L)],
            "g_L": [cy.g_L(L, l) for l in range(L)],
            "inverse_laplacian": entries,
        }
        io.write_json(out / f"cycle{L}_closed_forms.json", doc)
        _emit(args, doc)
    return 0


def cmd_window(args) -> int:
    L = args.L if args.L is not None else 31
    N = float(args.N) if args.N is not None else 1.0
    law = local_law(L, N, start=args.start)
    configs = enumerate_local_configs()
    labels = [c.label() for c in configs]
    out = _out_dir(args)
    stem = out / f"window{L}_cov"
    io.write_matrix_csv(stem.with_suffix(".csv"), law.covariance, labels, labels)
    io.write_json(stem.with_suffix(".json"), {
        "L": L, "N": N, "start": args.start,
        "configurations": [{"index": j, "edges": list(c.edges), "f": c.f, "epsilon": c.epsilon}
                           for j, c in enumerate(configs)],
        "mean": law.mean,
    })
    _plot(args, "plot_matrix", stem.with_suffix(".png"), law.covariance,
          f"cycle L = {L}: Cov(S) / N", labels)
    _emit(args, {"L": L, "configurations": len(configs), "csv": str(stem.with_suffix(".csv"))})
    return 0


def cmd_sample(args) -> int:
    from .sampler import ChainConfig, empirical_vs_gaussian, heat_bath_sample, write_frames

    graph = load_graph(args)
    tiles = enumerate_tiles(graph, args.cap)
    D = incidence_matrix(tiles)
    if args.N is None:
        raise InvalidArgument("sample needs --N")
    n = load_multiplicities(args, graph, D)
    w = load_weights(args, len(tiles))
    wf = None if w is None else [float(x) for x in w]
    alpha = [x / args.N for x in n]
    g = solve_critical_gauge(D, wf, alpha, tol=args.tol)
    law = gaussian_law(D, g.critical_weights, args.N)
    cfg = ChainConfig(seed=args.seed, sweeps=args.sweeps, burn_in=args.burn_in, thinning=args.thinning,
                      debug=args.debug)
    runs = heat_bath_sample(tiles, wf, n, args.N, cfg, chains=args.chains, keep_states=bool(args.frames))
    report = empirical_vs_gaussian(runs, law, threshold=args.threshold)
    report.update({"seed": args.seed, "N": args.N, "n": list(n), "sweeps": args.sweeps,
                   "burn_in": args.burn_in, "thinning": args.thinning})
    report["rhat_ok"] = report["split_rhat_max"] <= 1.05
    report["passed"] = report["passed"] and report["rhat_ok"]
    out = _out_dir(args)
    io.write_json(out / "sample_report.json", report)
    if args.frames:
        write_frames(args.frames, np.concatenate([r.states for r in runs]))
    summary = {k: report[k] for k in ("rng", "samples", "chains", "max_z_mean", "max_z_cov",
                                      "split_rhat_max", "passed")}
    summary["flags"] = len(report["flags"])
    _emit(args, summary)
    return 0 if report["passed"] else VERIFY_FAILED


def cmd_verify(args) -> int:
    from .verify import run_checks

    results = run_checks(quick=args.quick)
    for r in results:
        status = "PASS" if r["passed"] else "FAIL"
        print(f"{status}  {r['check']}  ({r['detail']}; {r['seconds']} s)")
    if args.out:
        io.write_json(_out_dir(args) / "verify.json", results)
    ok = all(r["passed"] for r in results)
    print(f"{sum(r['passed'] for r in results)}/{len(results)} checks passed")
    return 0 if ok else VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="cycle:L, path:n, bipartite:a,b, or a JSON graph file")
    common.add_argument("--L", type=int, help="odd cycle length (shorthand for --graph cycle:L)")
    common.add_argument("--N", type=int, help="number of colors")
    common.add_argument("--n", help="vertex multiplicities, comma separated")
    common.add_argument("--alpha", help="uniform density value, 'critical', or a JSON vector file")
    common.add_argument("--weights", help="JSON list or {tile index: weight} map; default uniform")
    common.add_argument("--out", help="output directory (default: current directory)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Newton residual tolerance")
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="cap on partition-function DP states")
    common.add_argument("--cap", type=int, default=DEFAULT_TILE_CAP, help="cap on enumerated tiles")
    common.add_argument("--format", choices=["csv", "json"], help="stdout format (default json; alpha-hat prints plain text)")
    common.add_argument("--no-plot", action="store_true", help="skip PNG figures")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="multiweb", description="Colored multiwebs on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("tiles", parents=[common], help="enumerate or count tiles")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_tiles)
    p = sub.add_parser("zexact", parents=[common], help="exact partition function and moments")
    p.add_argument("--moments", action="store_true")
    p.set_defaults(func=cmd_zexact)
    sub.add_parser("gauge", parents=[common], help="critical gauge and growth rate").set_defaults(func=cmd_gauge)
    sub.add_parser("cov", parents=[common], help="Gaussian law of tile counts").set_defaults(func=cmd_cov)
    p = sub.add_parser("cycle", parents=[common], help="odd-cycle closed forms")
    p.add_argument("action", choices=["alpha-hat", "cov", "curves", "closed-forms", "inverse"])
    p.add_argument("--points", type=int, default=200, help="alpha grid size for curves")
    p.set_defaults(func=cmd_cycle)
    p = sub.add_parser("window", parents=[common], help="five-vertex window law")
    p.add_argument("--start", type=int, default=1)
    p.set_defaults(func=cmd_window)
    p = sub.add_parser("sample", parents=[common], help="heat-bath sampler report")
    p.add_argument("--chains", type=int, default=4)
    p.add_argument("--sweeps", type=int, default=25_200)
    p.add_argument("--burn-in", type=int, default=200)
    p.add_argument("--thinning", type=int, default=1)
    p.add_argument("--threshold", type=float, default=5.0, help="flag level in standard errors")
    p.add_argument("--frames", help="write raw samples as binary frames to this file")
    p.add_argument("--debug", action="store_true", help="validate every emitted sample")
    p.set_defaults(func=cmd_sample)
    p = sub.add_parser("verify", parents=[common], help="cross-oracle invariant suite")
    p.add_argument("--quick", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except MultiwebError as exc:
        _report_error(type(exc).__name__, str(exc), exc.exit_code)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
