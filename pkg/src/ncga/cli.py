"""Command-line entry point: ``ncga {generate,inspect,run,experiment,ttest}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .harness import (ALGORITHMS, ExperimentSpec, paired_t_test, records_from_csv,
                      records_to_csv, run_experiment, run_one, write_outputs)
from .layout import build_layout, search_space_log10
from .netgraph import (GeneratorParams, make_canonical, make_cascade, make_random_acyclic,
                       parse_network, serialize_network)


def _read_network(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return parse_network(text)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    if args.kind == "canonical":
        net = make_canonical(args.which)
        comment = f"canonical network {args.which}"
    elif args.kind == "cascade":
        net = make_cascade(args.copies)
        comment = f"cascade of {args.copies} B' copies"
    else:
        params = GeneratorParams(args.nodes, args.edges, args.layers, args.sinks, args.rate, args.seed)
        net = make_random_acyclic(params)
        comment = f"random layered network {params}"
    _emit(serialize_network(net, comment), args.output)
    return 0


def cmd_inspect(args) -> int:
    net = _read_network(args.network)
    layout = build_layout(net)
    bls, bts = search_space_log10(layout)
    avg = layout.genotype_length / layout.block_count if layout.block_count else 0.0
    print("network,genotype_length,blocks,avg_block_length,log10_space_bls,log10_space_bts")
    print(f"{Path(args.network).stem},{layout.genotype_length},{layout.block_count},"
          f"{avg:.2f},{bls:.2f},{bts:.2f}")
    return 0


def cmd_run(args) -> int:
    net = _read_network(args.network)
    algo = args.algo
    if algo == "ncga":
        algo = f"ncga_{args.encoding}"
    if algo not in ALGORITHMS:
        raise SystemExit(f"unknown algorithm {algo!r}")
    overrides = {k: v for k, v in {
        "population_size": args.pop, "max_generations": args.gens,
        "tournament_size": args.tourn, "mixing_ratio": args.mix, "swap_prob": args.swap,
        "mutation_rate": args.mut, "budget": args.budget,
    }.items() if v is not None}
    record = run_one(net, Path(args.network).stem, algo, 0, args.seed, overrides)
    sys.stdout.write(records_to_csv([record], header=not args.no_header))
    return 0


def cmd_experiment(args) -> int:
    spec = ExperimentSpec.load(args.spec)
    if args.workers:
        spec.workers = args.workers
    result = run_experiment(spec)
    write_outputs(spec, result)
    if not spec.records_path:
        sys.stdout.write(records_to_csv(result.records))
    for row in result.summary:
        print(f"{row.network:>10} {row.algorithm:>10}  {row.mean:.2f}({row.std:.2f})  n={row.n}",
              file=sys.stderr)
    return 0


def cmd_ttest(args) -> int:
    def column(path):
        records = records_from_csv(Path(path).read_text(encoding="utf-8"))
        records.sort(key=lambda r: (r.network, r.seed))
        return [getattr(r, args.column) for r in records]

    res = paired_t_test(column(args.a), column(args.b))
    print("t,df,p")
    print(f"{res.t:.6g},{res.df},{res.p:.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ncga", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--output", help="file to write (default: stdout)")
    g = sub.add_parser("generate", help="write a network file")
    gsub = g.add_subparsers(dest="kind", required=True)
    c = gsub.add_parser("canonical", parents=[out])
    c.add_argument("which", choices=["B", "B_prime"])
    c = gsub.add_parser("cascade", parents=[out])
    c.add_argument("copies", type=int)
    r = gsub.add_parser("random", parents=[out])
    r.add_argument("--nodes", type=int, required=True)
    r.add_argument("--edges", type=int, required=True)
    r.add_argument("--layers", type=int, required=True)
    r.add_argument("--sinks", type=int, required=True)
    r.add_argument("--rate", type=int, default=2)
    r.add_argument("--seed", type=int, default=0)
    g.set_defaults(func=cmd_generate)

    i = sub.add_parser("inspect", help="print block count, genotype length and search-space sizes")
    i.add_argument("network")
    i.set_defaults(func=cmd_inspect)

    r = sub.add_parser("run", help="one seeded run, printed as a CSV record")
    r.add_argument("network")
    r.add_argument("--algo", default="ncga",
                   help="ncga (with --encoding), minimal1, minimal2, exhaustive, or ncga_<enc>")
    r.add_argument("--encoding", choices=["bls", "bts", "mhd"], default="bts")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--pop", type=int)
    r.add_argument("--gens", type=int)
    r.add_argument("--tourn", type=int)
    r.add_argument("--mix", type=float)
    r.add_argument("--swap", type=float)
    r.add_argument("--mut", type=float)
    r.add_argument("--budget", type=int)
    r.add_argument("--no-header", action="store_true")
    r.set_defaults(func=cmd_run)

    e = sub.add_parser("experiment", help="run a JSON experiment spec")
    e.add_argument("spec")
    e.add_argument("--workers", type=int)
    e.set_defaults(func=cmd_experiment)

    t = sub.add_parser("ttest", help="paired t-test between two record CSVs")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("--column", default="best_after_sweep")
    t.set_defaults(func=cmd_ttest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"ncga: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
