#!/usr/bin/env python3
"""Generate a synthetic bilateral-factor dataset with two planted blocs.

Writes a raw dataset CSV (both directions for every pair) and a matching
ally/enemy evaluation set. Output is fully determined by --seed.

    tools/make_synthetic_dataset.py --nations 30 --seed 7 \
        --out data/synthetic30.csv --pairs-out data/synthetic30_pairs.csv
"""

import argparse
import itertools
import math
import random

HEADER = ("source,target,export,import,religious_conflicts,diplomatic,war,border,"
          "icj_case,peace_treaty,exchange_rate_ratio")

SYLLABLES = ["al", "bor", "cas", "dor", "el", "fen", "gal", "hy", "ir", "jor", "kel", "lu",
             "mar", "nor", "ost", "pel", "quin", "ros", "sel", "tar", "ul", "ver", "wes", "zan"]
SUFFIXES = ["ia", "land", "avia", "mark", "stan", "ora", "eth", "uria"]


def nation_names(count, rng):
    names = set()
    # a few fixed names exercise whitespace and diacritic normalization
    fixed = ["Östmark", "San Velaro", "Nová Brena"]
    out = fixed[:count]
    names.update(n.lower() for n in out)
    while len(out) < count:
        name = rng.choice(SYLLABLES).capitalize() + rng.choice(SYLLABLES) + rng.choice(SUFFIXES)
        if name.lower() not in names:
            names.add(name.lower())
            out.append(name)
    return out


def generate(count, seed, noise):
    rng = random.Random(seed)
    names = nation_names(count, rng)
    bloc = {n: (i % 2) for i, n in enumerate(names)}
    rate = {n: math.exp(rng.gauss(0.0, 1.5)) for n in names}
    gdp = {n: math.exp(rng.gauss(22.0, 1.5)) for n in names}

    rows = {}
    relation = {}
    for a, b in itertools.combinations(names, 2):
        friendly = bloc[a] == bloc[b]
        if rng.random() < noise:
            friendly = not friendly
        relation[(a, b)] = friendly
        if friendly:
            religious = rng.choice([0, 0, 0, 1])
            diplomatic = 1 if rng.random() < 0.9 else 0
            war = 1 if rng.random() < 0.03 else 0
            border = rng.choice([0, 1, 2, 2])
            icj = 1 if rng.random() < 0.05 else 0
            treaty = 1 if rng.random() < 0.4 else 0
            trade_scale = 1.0
        else:
            religious = rng.choice([1, 2, 3, 4])
            diplomatic = 1 if rng.random() < 0.3 else 0
            war = 1 if rng.random() < 0.5 else 0
            border = rng.choice([-1, -1, 0])
            icj = 1 if rng.random() < 0.4 else 0
            treaty = 1 if rng.random() < 0.1 else 0
            trade_scale = 0.05
        shared = dict(religious=religious, diplomatic=diplomatic, war=war, border=border,
                      icj=icj, treaty=treaty)
        trade_ab = trade_scale * math.sqrt(gdp[a] * gdp[b]) * 1e-3 * rng.uniform(0.2, 1.0)
        trade_ba = trade_scale * math.sqrt(gdp[a] * gdp[b]) * 1e-3 * rng.uniform(0.2, 1.0)
        rows[(a, b)] = dict(shared, export=trade_ab, imp=trade_ba, fx=rate[a] / rate[b])
        rows[(b, a)] = dict(shared, export=trade_ba, imp=trade_ab, fx=rate[b] / rate[a])
    return names, bloc, rows, relation


def write_dataset(path, names, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write(HEADER + "\n")
        for a in names:
            for b in names:
                if a == b:
                    continue
                r = rows[(a, b)]
                f.write(f"{a},{b},{r['export']:.2f},{r['imp']:.2f},{r['religious']},{r['diplomatic']},"
                        f"{r['war']},{r['border']},{r['icj']},{r['treaty']},{r['fx']:.6g}\n")


def write_pairs(path, names, relation, count, seed):
    rng = random.Random(seed + 1)
    pairs = sorted(relation)
    chosen = rng.sample(pairs, min(count, len(pairs)))
    with open(path, "w", encoding="utf-8") as f:
        f.write("a,b,relation\n")
        for a, b in chosen:
            f.write(f"{a},{b},{'ally' if relation[(a, b)] else 'enemy'}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--nations", type=int, default=30)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--noise", type=float, default=0.1, help="probability a pair contradicts its blocs")
    ap.add_argument("--pairs", type=int, default=24, help="size of the evaluation set")
    ap.add_argument("--out", required=True)
    ap.add_argument("--pairs-out", required=True)
    args = ap.parse_args()
    names, _, rows, relation = generate(args.nations, args.seed, args.noise)
    write_dataset(args.out, names, rows)
    write_pairs(args.pairs_out, names, relation, args.pairs, args.seed)


if __name__ == "__main__":
    main()
