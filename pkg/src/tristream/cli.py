"""Command-line front door: graph generation, stream materialization, trial
execution, and report emission.

Exit codes: 0 ok, 2 usage/configuration error, 3 validation error.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import edge_arrival as ea
from .evaluate import ALGO_NAMES, build_algo_spec, run_trials
from .graphs import (
    GraphError,
    complete_graph,
    enumerate_triangles,
    gnp_graph,
    load_graph,
    planted_graph,
    write_graph,
)
from .sampling import make_rng
from .streams import (
    AL,
    EA,
    VA,
    StreamError,
    make_al_stream,
    make_ea_stream,
    make_va_stream,
    read_stream,
    validate_stream,
    write_stream,
)

USAGE_ERROR = 2
VALIDATION_ERROR = 3

_MODELS = {"ea": EA, "va": VA, "al": AL}


class CliError(Exception):
    def __init__(self, message: str, code: int = USAGE_ERROR):
        super().__init__(message)
        self.code = code


def _parse_kind(kind: str, rng):
    parts = kind.split(":")
    try:
        if parts[0] == "complete" and len(parts) == 2:
            return complete_graph(int(parts[1]))
        if parts[0] == "gnp" and len(parts) == 3:
            return gnp_graph(int(parts[1]), float(parts[2]), rng)
        if parts[0] == "planted" and len(parts) == 4:
            return planted_graph(int(parts[1]), float(parts[2]), int(parts[3]), rng)
    except (ValueError, GraphError) as exc:
        raise CliError(f"bad generator parameters in {kind!r}: {exc}") from exc
    raise CliError(
        f"unknown generator {kind!r}; expected complete:n, gnp:n:p, or planted:n:p:k"
    )


def cmd_gen(args) -> int:
    g = _parse_kind(args.kind, make_rng(args.seed))
    write_graph(g, args.out)
    T = len(enumerate_triangles(g))
    print(f"gen {args.kind}: n={g.n} m={g.m} T={T} -> {args.out}")
    return 0


def _model(name: str) -> str:
    key = name.lower()
    if key not in _MODELS:
        raise CliError(f"unknown model {name!r}; expected one of ea, va, al")
    return _MODELS[key]


def cmd_stream(args) -> int:
    g = load_graph(args.graph)
    model = _model(args.model)
    rng = make_rng(args.seed)
    if model == EA:
        s = make_ea_stream(g, rng)
    elif model == VA:
        s = make_va_stream(g, rng)
    else:
        s = make_al_stream(g, rng)
    problem = validate_stream(s, g)
    if problem is not None:
        raise CliError(f"generated stream failed validation: {problem}", VALIDATION_ERROR)
    write_stream(s, args.out, g.n, g.m)
    print(f"stream {model}: {len(s.items)} items -> {args.out}")
    return 0


def cmd_run(args) -> int:
    g = load_graph(args.graph)
    model = _model(args.model)
    if args.algo not in ALGO_NAMES:
        raise CliError(f"unknown algorithm {args.algo!r}; expected one of {ALGO_NAMES}")
    if args.algo.startswith("al") and model != AL:
        raise CliError(f"{args.algo} requires --model al, got {args.model}")
    if args.algo.startswith("ea") and model == AL:
        raise CliError(
            f"{args.algo} rejects AL streams (each edge arrives twice there); "
            "use --model ea or --model va"
        )

    T = args.T
    if T is None:
        T = max(1, len(enumerate_triangles(g)))
    overrides = {}
    for name in ("tau3", "tau1", "kappa", "p"):
        val = getattr(args, name)
        if val is not None:
            overrides[name] = val

    spec = build_algo_spec(
        args.algo,
        g,
        epsilon=args.epsilon,
        T=T,
        model=model,
        instances=args.instances,
        c_inst=args.c_inst,
        c_F=args.c_F,
        **overrides,
    ) if args.algo.startswith("al") else build_algo_spec(
        args.algo,
        g,
        T=T,
        model=model,
        instances=args.instances,
        c_inst=args.c_inst,
    )

    if args.algo in ("ea1", "ea3"):
        bound = (
            ea.ea1_space_bound(g.m, T) if args.algo == "ea1" else ea.ea3_space_bound(g.m, T)
        )
        count = args.instances or ea.instance_count(bound, g.n, args.c_inst)
        if args.instances is None:
            print(
                f"instances: ceil({args.c_inst} * {bound:.4g} * ln {g.n}) = {count}"
            )
        if count > args.max_instances:
            raise CliError(
                f"refusing to run: {count} instances exceeds the ceiling "
                f"{args.max_instances} (raise --max-instances to override)"
            )

    report = run_trials(spec, g, args.trials, args.seed, stream_policy=args.stream_policy)
    text = report.serialize()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    print(
        f"run {args.algo} on {args.graph}: {report.successes}/{report.trials} successes"
        f" (rate {report.success_rate:.4f}),"
        f" l1 {'NA' if report.empirical_l1 is None else format(report.empirical_l1, '.4f')},"
        f" peak space {report.space_max}"
    )
    return 0


def cmd_check(args) -> int:
    g = load_graph(args.graph)
    T = len(enumerate_triangles(g))
    max_T = math.floor(g.m ** 1.5)
    print(f"check {args.graph}: n={g.n} m={g.m} T={T} (bound m^1.5={max_T})")
    if T > max_T:
        raise CliError("triangle count exceeds the m^1.5 bound", VALIDATION_ERROR)
    if args.stream:
        s = read_stream(args.stream)
        problem = validate_stream(s, g)
        if problem is not None:
            raise CliError(f"invalid {s.model} stream: {problem}", VALIDATION_ERROR)
        print(f"check {args.stream}: valid {s.model} stream, {len(s.items)} items")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tristream",
        description="Streaming triangle samplers with an exact oracle harness.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen", help="generate a graph file")
    p.add_argument("--kind", required=True, help="complete:n | gnp:n:p | planted:n:p:k")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stream", help="materialize an arrival stream")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", required=True, help="ea | va | al")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stream)

    p = sub.add_parser("run", help="run trials of one algorithm")
    p.add_argument("--graph", required=True)
    p.add_argument("--model", required=True, help="ea | va | al")
    p.add_argument("--algo", required=True, help="|".join(ALGO_NAMES))
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--T", type=int, default=None, help="promised triangle count (default: exact)")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--max-instances", type=int, default=1_000_000)
    p.add_argument("--c-F", dest="c_F", type=float, default=4.0)
    p.add_argument("--c-inst", dest="c_inst", type=float, default=4.0)
    p.add_argument("--tau3", type=float, default=None)
    p.add_argument("--tau1", type=float, default=None)
    p.add_argument("--kappa", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--stream-policy", choices=("fresh", "frozen"), default="fresh")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="oracle counts and stream validation")
    p.add_argument("--graph", required=True)
    p.add_argument("--stream", default=None)
    p.set_defaults(func=cmd_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (GraphError, StreamError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_ERROR
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
