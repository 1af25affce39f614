"""Paired two-sided t-test reference values from scipy.stats.ttest_rel.

Writes tests/support/ttest_fixtures.inc with (a, b, t, p).
"""
import random
from pathlib import Path

from scipy import stats

rng = random.Random(7)
fixtures = []

fixtures.append(([0.9, 0.8, 0.7, 0.6, 0.5], [0.85, 0.8, 0.6, 0.65, 0.4]))
fixtures.append(([1.0, 0.5, 0.333333, 0.25, 0.0, 1.0, 0.5, 1.0], [0.5, 0.5, 1.0, 0.2, 0.0, 1.0, 0.333333, 0.25]))
a = [rng.random() for _ in range(30)]
fixtures.append((a, [x - 0.1 + rng.gauss(0, 0.02) for x in a]))
a = [rng.random() for _ in range(50)]
fixtures.append((a, [rng.random() for _ in range(50)]))
a = [rng.choice([0.0, 0.1, 0.25, 0.5, 1.0]) for _ in range(200)]
fixtures.append((a, [min(1.0, x + rng.choice([0.0, 0.05, 0.05, -0.05])) for x in a]))


def vec(xs):
    return "{" + ", ".join(repr(x) for x in xs) + "}"


lines = ["// Generated by tests/oracles/ttest_oracle.py; do not edit.\n"]
for a, b in fixtures:
    res = stats.ttest_rel(a, b)
    lines.append(f"{{{vec(a)},\n {vec(b)},\n {float(res.statistic)!r}, {float(res.pvalue)!r}}},\n")
    print(len(a), float(res.statistic), float(res.pvalue))

out = Path(__file__).resolve().parent.parent / "support" / "ttest_fixtures.inc"
out.write_text("".join(lines))
