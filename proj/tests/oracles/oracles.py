#!/usr/bin/env python3
"""Independent reference computations for the frozen expectations in the C++ tests.

Run: python3 tests/oracles/oracles.py   (porter table needs nltk)
"""
import itertools
import json
import math
import statistics
from collections import Counter

MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed):
        self.s = seed & MASK

    def next(self):
        self.s = (self.s + 0x9E3779B97F4A7C15) & MASK
        z = self.s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self, bound):
        threshold = ((1 << 64) - bound) % bound
        while True:
            r = self.next()
            if r >= threshold:
                return r % bound


def sample(ids, n, seed):
    idx = list(range(len(ids)))
    rng = SplitMix64(seed)
    for i in range(n):
        j = i + rng.uniform(len(ids) - i)
        idx[i], idx[j] = idx[j], idx[i]
    return [ids[k] for k in idx[:n]]


def random_pairs(pairs, n, seed):
    pool, owners = [], {}
    for k, (a, b) in enumerate(pairs):
        for s in (a, b):
            if s not in owners:
                pool.append(s)
                owners[s] = set()
            owners[s].add(k)
    ok = lambda i, j: i != j and not (owners[pool[i]] & owners[pool[j]])
    admissible = {frozenset((i, j)) for i in range(len(pool)) for j in range(len(pool)) if ok(i, j)}
    rng, used, out = SplitMix64(seed), set(), []
    while len(out) < n:
        i, j = rng.uniform(len(pool)), rng.uniform(len(pool))
        key = frozenset((i, j))
        if key not in admissible or key in used:
            continue
        used.add(key)
        out.append((pool[i], pool[j]))
    return out, len(admissible)


def chrf(ref, hyp, max_n, beta):
    ref, hyp = "".join(ref.split()), "".join(hyp.split())
    ps, rs = [], []
    for n in range(1, max_n + 1):
        r = Counter(ref[i:i + n] for i in range(len(ref) - n + 1))
        h = Counter(hyp[i:i + n] for i in range(len(hyp) - n + 1))
        if not r and not h:
            continue
        m = sum((r & h).values())
        ps.append(m / sum(h.values()) if h else 0.0)
        rs.append(m / sum(r.values()) if r else 0.0)
    p, r = sum(ps) / len(ps), sum(rs) / len(rs)
    if p == 0 and r == 0:
        return 0.0
    return (1 + beta**2) * p * r / (beta**2 * p + r)


def minmaxmean(vecs):
    cols = list(zip(*vecs))
    return [min(c) for c in cols] + [max(c) for c in cols] + [sum(c) / len(c) for c in cols]


def cosine_distance(u, v):
    d = sum(x * y for x, y in zip(u, v))
    return 1 - d / math.sqrt(sum(x * x for x in u) * sum(y * y for y in v))


def pearson(x, y):
    mx, my = sum(x) / len(x), sum(y) / len(y)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def inversions(order, ref):
    pos = [ref.index(d) for d in order]
    return sum(1 for i in range(len(pos)) for j in range(i + 1, len(pos)) if pos[i] > pos[j])


def spearman(order, ref):
    n = len(order)
    d2 = sum((k - ref.index(d)) ** 2 for k, d in enumerate(order))
    return 1 - 6 * d2 / (n * (n * n - 1))


def fixture_report(root):
    manifest = json.load(open(f"{root}/manifest.json"))
    ctx = {}
    for line in open(f"{root}/contextual.jsonl"):
        rec = json.loads(line)
        ctx[rec["id"]] = rec
    kinds, pairs = {}, {}
    for e in manifest["datasets"]:
        kinds[e["dataset_id"]] = e["kind"]
        pairs[e["dataset_id"]] = [json.loads(l) for l in open(f"{root}/{e['path']}") if l.strip()]
    ids = list(kinds)

    def overlap(p):
        a, b = set(p["a"].lower().split()), set(p["b"].lower().split())
        return len(a & b) / len(a | b)

    def l2(p):
        rec = ctx.get(f"{p['id']}")
        return math.dist(rec["sent_a"], rec["sent_b"])

    human = {d: statistics.mean(statistics.mean(p["scores"]) for p in pairs[d]) for d in ids}
    human_order = sorted(ids, key=lambda d: (-human[d], d))
    out = {"human_means": human, "human_order": human_order}
    rnd = [d for d in ids if kinds[d] == "random"]
    human_v = (max(human[d] for d in rnd) - min(human[d] for d in rnd)) / (max(human.values()) - min(human.values()))
    out["human_variability"] = human_v
    orders = {}
    for name, fn, sign in (("word_overlap", overlap, 1), ("elmo_l2", l2, -1)):
        vals = {d: [fn(p) for p in pairs[d]] for d in ids}
        means = {d: statistics.mean(v) for d, v in vals.items()}
        stds = {d: statistics.stdev(v) for d, v in vals.items()}
        order = sorted(ids, key=lambda d: (-sign * means[d], d))
        orders[name] = order
        viol = [(r, o) for r in rnd for o in ids if kinds[o] != "random" and sign * means[r] > sign * means[o]]
        v = (max(means[d] for d in rnd) - min(means[d] for d in rnd)) / (max(means.values()) - min(means.values()))
        px = [sign * x for d in ids for x in vals[d]]
        py = [statistics.mean(p["scores"]) for d in ids for p in pairs[d]]
        out[name] = {
            "means": means, "stds": stds, "order": order, "violations": viol, "variability": v,
            "pearson": pearson([sign * means[d] for d in ids], [human[d] for d in ids]),
            "pearson_pair_level": pearson(px, py),
            "spearman": spearman(order, human_order),
            "kendall": 1 - 4 * inversions(order, human_order) / (len(ids) * (len(ids) - 1)),
            "swaps": inversions(order, human_order),
            "coincidence": sum(1 for a, b in zip(order, human_order) if a == b),
        }
    out["order_corr_word_overlap_elmo"] = spearman(orders["word_overlap"], orders["elmo_l2"])
    return out


def bubble_swaps(seq):
    seq, swaps = list(seq), 0
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                swaps += 1
    return swaps


def main():
    rng = SplitMix64(0)
    print("splitmix seed 0:", [hex(rng.next()) for _ in range(3)])
    rng = SplitMix64(17)
    print("splitmix seed 17 uniform(10):", [rng.uniform(10) for _ in range(8)])
    print("sample n=2 of p1..p4 seed 17:", sample(["p1", "p2", "p3", "p4"], 2, 17))
    three = [("the cat sat", "a cat was sitting"), ("dogs bark loudly", "the dog is barking"),
             ("it rained today", "there was rain today")]
    out, cap = random_pairs(three, 3, 5)
    print("random pairs seed 5:", out, "capacity", cap)
    print("chrf abcd/abce n=2 b=1:", chrf("abcd", "abce", 2, 1.0))
    table = {"x": (1.0, 2.0), "y": (3.0, 0.0), "z": (0.0, 1.0), "w": (2.0, 2.0)}
    u, v = minmaxmean([table["x"], table["y"]]), minmaxmean([table["z"], table["w"]])
    print("minmaxmean(x y):", u, "minmaxmean(z w):", v, "cosine distance:", repr(cosine_distance(u, v)))
    print("bubble swaps reversal n=4:", bubble_swaps([4, 3, 2, 1]))
    print("pearson (1,2),(2,1),(3,3):", pearson([1, 2, 3], [2, 1, 3]))
    print(json.dumps(fixture_report("tests/fixtures/synthetic"), indent=1))
    try:
        from nltk.stem.porter import PorterStemmer
        st = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
        words = open("tests/fixtures/porter_words.txt").read().split()
        print("porter:", json.dumps({w: st.stem(w) for w in words}))
    except ImportError:
        print("porter: nltk not installed")


if __name__ == "__main__":
    main()
