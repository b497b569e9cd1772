"""Run a JSON experiment file and print the per-(network, algorithm) summary.

    python scripts/run_experiment.py experiments/cascades.json
"""

import argparse

from ncga.harness import ExperimentSpec, paired_t_test, run_experiment, write_outputs


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("spec")
    ap.add_argument("--runs", type=int, help="override the number of runs per cell")
    ap.add_argument("--workers", type=int)
    args = ap.parse_args()

    spec = ExperimentSpec.load(args.spec)
    if args.runs:
        spec.runs = args.runs
    if args.workers:
        spec.workers = args.workers
    result = run_experiment(spec)
    write_outputs(spec, result)

    print(f"{'network':<14}{'algorithm':<12}{'mean(std)':>14}{'before sweep':>16}")
    for row in result.summary:
        print(f"{row.network:<14}{row.algorithm:<12}{f'{row.mean:.2f}({row.std:.2f})':>14}"
              f"{f'{row.mean_before_sweep:.2f}({row.std_before_sweep:.2f})':>16}")

    # paired comparison of the two GA encodings, matched by seed
    by = {}
    for r in result.records:
        by.setdefault((r.network, r.algorithm), {})[r.seed] = r.best_after_sweep
    for net in dict.fromkeys(r.network for r in result.records):
        a, b = by.get((net, "ncga_bls")), by.get((net, "ncga_bts"))
        if a and b and len(a) > 1:
            seeds = sorted(set(a) & set(b))
            res = paired_t_test([a[s] for s in seeds], [b[s] for s in seeds])
            print(f"{net}: BLS vs BTS paired t={res.t:.3g} df={res.df} p={res.p:.3g}")


if __name__ == "__main__":
    main()
