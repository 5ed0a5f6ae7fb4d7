#!/usr/bin/env python3
"""Generate the bundled weighted contact graph (data/contact_graph.tsv).

People belong to groups (think classes or teams). Each person makes a
Poisson number of within-group and cross-group acquaintances; every
acquaintance carries a heavy-tailed number of repeated contacts. Repeated
draws of the same pair add up. Output is an undirected edge list.

    python3 tools/make_contact_graph.py [--seed 20240501] [-o data/contact_graph.tsv]
"""

import argparse
import math
import random


def poisson(rng, lam):
    # Knuth; lam is small here
    limit, k, p = math.exp(-lam), 0, 1.0
    while True:
        p *= rng.random()
        if p <= limit:
            return k
        k += 1


def contacts(rng, mu, sigma):
    return max(1, int(round(rng.lognormvariate(mu, sigma))))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nodes", type=int, default=1000)
    ap.add_argument("--groups", type=int, default=25)
    ap.add_argument("--within", type=float, default=4.0, help="mean within-group acquaintances per person")
    ap.add_argument("--across", type=float, default=1.0, help="mean cross-group acquaintances per person")
    ap.add_argument("--seed", type=int, default=20240501)
    ap.add_argument("-o", "--output", default="data/contact_graph.tsv")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    group = [i % args.groups for i in range(args.nodes)]
    members = [[] for _ in range(args.groups)]
    for v, g in enumerate(group):
        members[g].append(v)

    weight = {}

    def add(a, b, w):
        if a == b:
            return
        key = (min(a, b), max(a, b))
        weight[key] = weight.get(key, 0) + w

    for v in range(args.nodes):
        for _ in range(poisson(rng, args.within)):
            add(v, rng.choice(members[group[v]]), contacts(rng, 2.0, 1.2))
        for _ in range(poisson(rng, args.across)):
            add(v, rng.randrange(args.nodes), contacts(rng, 0.5, 1.0))

    with open(args.output, "w") as out:
        out.write("# synthetic contact graph: %d people, %d groups, seed %d\n" % (args.nodes, args.groups, args.seed))
        for (a, b), w in sorted(weight.items()):
            out.write("p%04d\tp%04d\t%d\n" % (a, b, w))


if __name__ == "__main__":
    main()
