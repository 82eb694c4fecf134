"""Command-line interface: generate, build, verify, query and benchmark."""
from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction

import numpy as np

from . import budgets
from . import graph as G
from .errors import InputError, OracleCapError
from .hopset import HopsetParams, cfr_build
from .io import format_augment, format_graph, read_augment, read_graph, write_text
from .parexec import CostMeter, barrier_units, set_workers
from .pipelines import approx_sssp, reach
from .report import Report
from .search import UNREACHED, bfs
from .shortcut import BuildParams, build_shortcut, folklore_shortcut
from .verify import density_sweep, verify_hopset, verify_shortcut

EXIT_FAILED = 1
EXIT_INPUT = 2


class CheckFailed(Exception):
    def __init__(self, props):
        self.props = props
        super().__init__(", ".join(props))


def _onoff(s):
    if s not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return s == "on"


def _fraction(s):
    try:
        f = Fraction(s).limit_denominator(10**6)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {s}") from None
    if not 0 < f < 1:
        raise argparse.ArgumentTypeError("eps must lie in (0, 1)")
    return f


def _common(p):
    p.add_argument("--preset", choices=("desk", "paper"), default="desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rho", type=int, default=None, help="override the rho preset formula")
    p.add_argument("--eps", type=_fraction, default=Fraction(1, 4))
    p.add_argument("--tc-prune", type=_onoff, default=True, metavar="on|off")
    p.add_argument("--trunc-prune", type=_onoff, default=True, metavar="on|off")
    p.add_argument("--oracle-cap", type=int, default=512)
    p.add_argument("--pairs-sample", type=int, default=512)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--weight-exponent", type=int, default=4, help="reject W above n**this")


def build_parser():
    ap = argparse.ArgumentParser(prog="hopsets", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic graph")
    _common(p)
    p.add_argument("--kind", choices=("dag", "spined", "layered", "path", "digraph"), default="dag")
    p.add_argument("--n", type=int, default=64)
    p.add_argument("--m", type=int, default=256)
    p.add_argument("--layers", type=int, default=64)
    p.add_argument("--width", type=int, default=4)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--wmax", type=int, default=0, help="random weights in [1, wmax]; 0 = unweighted")
    p.add_argument("-o", "--output")

    p = sub.add_parser("build-shortcut", help="shortcut set for a digraph")
    _common(p)
    p.add_argument("input")
    p.add_argument("-o", "--output")

    p = sub.add_parser("build-hopset", help="(1+eps)-hopset for a weighted digraph")
    _common(p)
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--parallel", action="store_true", help="build on rounded graphs (needs --h0)")
    p.add_argument("--h0", type=int, default=None)

    p = sub.add_parser("verify", help="check an augment set against its graph")
    _common(p)
    p.add_argument("input")
    p.add_argument("augment")

    p = sub.add_parser("reach", help="reachable set via parallel BFS on G ∪ H")
    _common(p)
    p.add_argument("input")
    p.add_argument("--source", type=int, default=0)

    p = sub.add_parser("sssp", help="(1+eps)-approximate distances from a source")
    _common(p)
    p.add_argument("input")
    p.add_argument("--source", type=int, default=0)
    p.add_argument("--h0", type=int, default=None, help="hopbound for the rounded searches")

    p = sub.add_parser("bench", help="density sweep table")
    _common(p)
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--densities", default="n,n^1.5,n^2",
                   help="comma list of edge counts; 'n^x' means round(n**x)")
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--builder", choices=("jls", "folklore"), default="jls")
    p.add_argument("--sample", type=int, default=None, help="folklore sample size (default sqrt(n))")
    return ap


def _config(rep, args, extra=()):
    for key in ("command", "preset", "seed", "rho", "eps", "tc_prune", "trunc_prune",
                "oracle_cap", "pairs_sample", "format") + tuple(extra):
        rep.add(f"config.{key}", getattr(args, key))


def _shortcut_params(args, g):
    return BuildParams.for_graph(g.n, g.m, preset=args.preset, seed=args.seed, rho=args.rho)


def _hopset_params(args, g, **kw):
    return HopsetParams.for_graph(g.n, g.m, preset=args.preset, seed=args.seed, eps=args.eps,
                                  rho=args.rho, **kw)


def _emit_text(path, text, out):
    if path:
        write_text(path, text)
    else:
        out.write(text)


def _trace(rep, trace):
    for r, subs, piv, ball, prunes, added in trace.rows():
        rep.add(f"level.{r}", [subs, piv, ball, prunes, added])


def cmd_generate(args, out):
    kind = args.kind
    if kind == "dag":
        g = G.gen_random_dag(args.n, args.m, args.seed)
    elif kind == "spined":
        g = G.gen_spined_dag(args.n, args.m, args.seed)
    elif kind == "layered":
        g = G.gen_layered(args.layers, args.width, args.density, args.seed)
    elif kind == "path":
        g = G.gen_path(args.n)
    else:
        g = G.gen_random_digraph(args.n, args.m, args.seed)
    if args.wmax > 0:
        g = G.randomize_weights(g, args.wmax, args.seed)
    _emit_text(args.output, format_graph(g), out)
    return None


def cmd_build_shortcut(args, out):
    g = read_graph(args.input, args.weight_exponent)
    params = _shortcut_params(args, g)
    meter = CostMeter(barrier_units(g.n))
    h, trace = build_shortcut(g, params, args.tc_prune, meter)
    rep = Report()
    _config(rep, args)
    rep.update("params.", dict(k=params.k, rho=params.rho, sample_c=params.sample_c,
                               tc_threshold_c=params.tc_threshold_c, omega=params.omega,
                               repeats=params.repeats))
    rep.update("", dict(n=g.n, m=g.m, scc_count=trace.notes["scc_count"], size_H=len(h),
                        work=meter.work, span=meter.span, tc_prune_work=meter.phases.get("tc_prune", 0),
                        depth=trace.depth))
    _trace(rep, trace)
    budget = budgets.shortcut_size_budget(g.n, params.rho)
    rep.add("size_budget", round(budget))
    rep.add("size_within_budget", len(h) <= budget)
    if args.output:
        write_text(args.output, format_augment(g.n, h))
    return rep, ([] if len(h) <= budget else ["size_within_budget"])


def _weighted(g):
    if g.weighted:
        return g
    return G.WDiGraph(g.n, g._src, g._dst, np.ones(g.m, dtype=np.int64))


def cmd_build_hopset(args, out):
    g = _weighted(read_graph(args.input, args.weight_exponent))
    params = _hopset_params(args, g, parallel=args.parallel, h0=args.h0)
    meter = CostMeter(barrier_units(g.n))
    h, trace = cfr_build(g, params, args.trunc_prune, meter)
    rep = Report()
    _config(rep, args, ("parallel", "h0"))
    rep.update("params.", dict(k=params.k, lam=params.lam, L=params.L, kc=params.kc,
                               eta_min=params.eta_min, eta_max=params.eta_max,
                               sigma_max=params.sigma_max, rho=params.rho, rounds=params.rounds))
    rep.update("", dict(n=g.n, m=g.m, W=g.W, mode=trace.notes["mode"], guesses=trace.notes["guesses"],
                        size_H=len(h), work=meter.work, span=meter.span,
                        trunc_prune_work=meter.phases.get("trunc_prune", 0), depth=trace.depth))
    _trace(rep, trace)
    budget = budgets.hopset_size_budget(g.n, params.rho, params.eps)
    rep.add("size_budget", round(budget))
    rep.add("size_within_budget", len(h) <= budget)
    if args.output:
        write_text(args.output, format_augment(g.n, h))
    return rep, ([] if len(h) <= budget else ["size_within_budget"])


def cmd_verify(args, out):
    n, h = read_augment(args.augment)
    g = read_graph(args.input, args.weight_exponent)
    if n != g.n:
        raise InputError(f"augment set is for n={n}, graph has n={g.n}")
    rep = Report()
    _config(rep, args)
    if h.weighted:
        r = verify_hopset(_weighted(g), h, args.eps, args.oracle_cap, args.pairs_sample, args.seed)
    else:
        r = verify_shortcut(g, h, args.oracle_cap, args.pairs_sample, args.seed)
    for key in ("mode", "edges_valid", "reach_preserved", "dist_preserved", "beta_meas", "worst_pair",
                "size_H", "eps_used", "pairs_checked"):
        rep.add(key, getattr(r, key))
    failed = r.failures()
    rep.add("failed", failed or "none")
    return rep, failed


def cmd_reach(args, out):
    g = read_graph(args.input, args.weight_exponent)
    if not 0 <= args.source < g.n:
        raise InputError(f"source {args.source} outside [0, {g.n})")
    res = reach(g, args.source, _shortcut_params(args, g), args.tc_prune, barrier_units(g.n))
    plain = bfs(g, args.source).reached()
    matches = bool(np.array_equal(np.flatnonzero(plain), res.reachable))
    rep = Report()
    _config(rep, args, ("source",))
    rep.update("", dict(n=g.n, m=g.m, size_H=res.size_H, reachable_count=int(res.reachable.size),
                        reachable=res.reachable, levels=res.levels,
                        build_work=res.build.work, build_span=res.build.span,
                        query_work=res.query.work, query_span=res.query.span, matches_bfs=matches))
    return rep, ([] if matches else ["matches_bfs"])


def cmd_sssp(args, out):
    g = _weighted(read_graph(args.input, args.weight_exponent))
    if not 0 <= args.source < g.n:
        raise InputError(f"source {args.source} outside [0, {g.n})")
    oracle = g.n <= args.oracle_cap
    res = approx_sssp(g, args.source, _hopset_params(args, g), args.trunc_prune, args.h0,
                      barrier_units(g.n), with_oracle=oracle)
    rep = Report()
    _config(rep, args, ("source", "h0"))
    dist = ["inf" if d == UNREACHED else int(d) for d in res.dist.tolist()]
    rep.update("", dict(n=g.n, m=g.m, size_H=res.size_H, h0=res.h0, guesses=res.guesses, dist=dist,
                        build_work=res.build.work, build_span=res.build.span,
                        query_work=res.query.work, query_span=res.query.span))
    failed = []
    if oracle:
        ratio = res.max_ratio()
        rep.add("max_ratio", ratio)
        rep.add("max_ratio_float", float(ratio))
        rep.add("consistent", res.consistent())
        if ratio > 1 + args.eps:
            failed.append("sssp_ratio")
        if not res.consistent():
            failed.append("sssp_consistent")
    else:
        rep.add("max_ratio", "skipped (n above oracle cap)")
    return rep, failed


def _densities(spec, n):
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if tok == "n":
            out.append(n)
        elif tok.startswith("n^"):
            out.append(round(n ** float(tok[2:])))
        else:
            out.append(int(tok))
    return out


def cmd_bench(args, out):
    n = args.n
    dens = _densities(args.densities, n)
    if args.builder == "jls":
        def builder(g, seed, meter):
            params = BuildParams.for_graph(g.n, g.m, preset=args.preset, seed=seed, rho=args.rho)
            return build_shortcut(g, params, args.tc_prune, meter)[0]
    else:
        size = args.sample if args.sample is not None else int(round(n ** 0.5))

        def builder(g, seed, meter):
            return folklore_shortcut(g, size, seed, meter)
    seeds = [args.seed + i for i in range(args.seeds)]
    rows = density_sweep(n, dens, builder, seeds, args.oracle_cap, args.pairs_sample)
    rep = Report()
    _config(rep, args, ("n", "densities", "seeds", "builder"))
    rep.add("columns", ["m_requested", "m", "median_beta", "median_size_H", "median_work", "median_span", "mode"])
    for i, r in enumerate(rows):
        rep.add(f"row.{i}", [r.density, r.m, r.beta_meas, r.size_H, r.work, r.span, r.mode])
    return rep, []


COMMANDS = {
    "generate": cmd_generate, "build-shortcut": cmd_build_shortcut, "build-hopset": cmd_build_hopset,
    "verify": cmd_verify, "reach": cmd_reach, "sssp": cmd_sssp, "bench": cmd_bench,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    set_workers(args.threads)
    start = time.perf_counter()
    try:
        result = COMMANDS[args.command](args, out)
    except (InputError, OracleCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        set_workers(1)
    print(f"# wall_seconds={time.perf_counter() - start:.3f} (advisory)", file=sys.stderr)
    if result is None:
        return 0
    rep, failed = result
    out.write(rep.render(args.format))
    if failed:
        print(f"failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
