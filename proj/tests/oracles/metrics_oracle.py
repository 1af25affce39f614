"""Reference MRR@10 / nDCG@10 / MAP@1000 over generated fixtures.

Writes tests/support/metric_fixtures.inc: one entry per fixture with the
ranked doc ids, the judgments, the relevance threshold and the expected
values (nan = query skipped).
"""
import math
import random
from pathlib import Path

rng = random.Random(20240611)


def mrr(ranking, qrels, thr, k=10):
    if not any(g >= thr for g in qrels.values()):
        return math.nan
    for rank, doc in enumerate(ranking[:k], start=1):
        if qrels.get(doc, 0) >= thr:
            return 1.0 / rank
    return 0.0


def ndcg(ranking, qrels, k=10):
    grades = sorted((g for g in qrels.values() if g > 0), reverse=True)
    if not grades:
        return math.nan
    dcg = sum((2 ** qrels.get(d, 0) - 1) / math.log2(r + 1)
              for r, d in enumerate(ranking[:k], start=1))
    idcg = sum((2 ** g - 1) / math.log2(r + 1)
               for r, g in enumerate(grades[:k], start=1))
    return dcg / idcg


def ap(ranking, qrels, thr, k=1000):
    rel = {d for d, g in qrels.items() if g >= thr}
    if not rel:
        return math.nan
    hits, total = 0, 0.0
    for r, d in enumerate(ranking[:k], start=1):
        if d in rel:
            hits += 1
            total += hits / r
    return total / len(rel)


fixtures = []

# Hand-shaped cases first.
fixtures.append((["d1", "d2", "d3"], {"d2": 1}, 1))
fixtures.append((["d1", "d2", "d3"], {"d9": 1}, 1))
fixtures.append((["a", "b", "c", "d"], {"a": 0, "b": 0}, 1))
fixtures.append(([f"p{i}" for i in range(12)], {"p10": 1}, 1))
fixtures.append((["x", "y", "z"], {"x": 3, "y": 2, "z": 1}, 1))
fixtures.append((["z", "y", "x"], {"x": 3, "y": 2, "z": 1}, 1))
fixtures.append((["x", "y", "z"], {"x": 1, "y": 2, "w": 3}, 2))
fixtures.append(([str(i) for i in range(1, 1011)], {"3": 1, "999": 2, "1005": 1}, 1))

while len(fixtures) < 32:
    n = rng.randint(1, 40)
    pool = [f"D{j}" for j in range(60)]
    rng.shuffle(pool)
    ranking = pool[:n]
    qrels = {}
    for d in rng.sample(pool, rng.randint(1, 8)):
        qrels[d] = rng.choice([0, 0, 1, 1, 2, 3])
    fixtures.append((ranking, qrels, rng.choice([1, 1, 2])))


def num(x):
    return "kSkip" if math.isnan(x) else repr(x)


lines = ["// Generated by tests/oracles/metrics_oracle.py; do not edit.\n"]
for ranking, qrels, thr in fixtures:
    judged = " ".join(f"{d}:{g}" for d, g in qrels.items())
    lines.append(
        f'{{"{" ".join(ranking)}", "{judged}", {thr}, '
        f"{num(mrr(ranking, qrels, thr))}, {num(ndcg(ranking, qrels))}, {num(ap(ranking, qrels, thr))}}},\n")

out = Path(__file__).resolve().parent.parent / "support" / "metric_fixtures.inc"
out.write_text("".join(lines))
print(f"{len(fixtures)} fixtures -> {out}")
