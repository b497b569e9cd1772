"""Print genotype length, block count and search-space sizes for the cascade networks."""

import argparse

from ncga import build_layout, make_cascade, make_random_acyclic, search_space_log10
from ncga.netgraph import CODING_LIKE, I50_LIKE, I75_LIKE


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--random", action="store_true", help="also list the random presets")
    args = ap.parse_args()

    nets = [(f"II-{c}", make_cascade(c)) for c in (3, 7, 15, 31)]
    if args.random:
        nets += [("I50-like", make_random_acyclic(I50_LIKE)),
                 ("I75-like", make_random_acyclic(I75_LIKE)),
                 ("coding-like", make_random_acyclic(CODING_LIKE))]
    print(f"{'network':<12}{'length':>8}{'blocks':>8}{'avg k':>8}{'log10 BLS':>11}{'log10 BTS':>11}")
    for name, net in nets:
        layout = build_layout(net)
        bls, bts = search_space_log10(layout)
        avg = layout.genotype_length / layout.block_count
        print(f"{name:<12}{layout.genotype_length:>8}{layout.block_count:>8}{avg:>8.2f}"
              f"{bls:>11.2f}{bts:>11.2f}")


if __name__ == "__main__":
    main()
