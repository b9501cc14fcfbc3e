#!/usr/bin/env python3
"""Writes the synthetic 25-node network and its scenario file.

Nodes sit on a jittered 5x5 grid (about 60 km spacing) with two-way roads
between grid neighbours and on a few diagonals. Gravity weights are random in
[1, 10]. Electricity prices follow the case-study assignment: 0.12 at nodes
6-8, 11-13 and 16, 0.20 at 10, 14 and 21-25, 0.30 elsewhere. The scenario
uses gravity demand with 15000 trips/day and a 2250-trip peak hour.

Usage: make_synthetic25.py [output_dir]
"""

import math
import pathlib
import random
import sys

SEED = 20190101
SPACING = 60.0
JITTER = 12.0
DAILY_TRIPS = 15000.0
PEAK_TRIPS = 2250.0
HORIZON = 24
PEAK_HOUR = 8


def price(node):
    if node in (6, 7, 8, 11, 12, 13, 16):
        return 0.12
    if node in (10, 14, 21, 22, 23, 24, 25):
        return 0.20
    return 0.30


def main():
    out = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parent.parent / "data")
    rng = random.Random(SEED)

    pos = {}
    for n in range(1, 26):
        r, c = divmod(n - 1, 5)
        pos[n] = (c * SPACING + rng.uniform(-JITTER, JITTER), r * SPACING + rng.uniform(-JITTER, JITTER))
    weights = {n: round(rng.uniform(1.0, 10.0), 2) for n in pos}

    edges = set()
    for n in pos:
        r, c = divmod(n - 1, 5)
        if c < 4:
            edges.add((n, n + 1))
        if r < 4:
            edges.add((n, n + 5))
        if r < 4 and c < 4 and rng.random() < 0.3:
            edges.add((n, n + 6))

    def km(a, b):
        (xa, ya), (xb, yb) = pos[a], pos[b]
        return round(math.hypot(xa - xb, ya - yb) * 1.15, 1)

    lines = ["# Synthetic 25-node network (jittered grid), generated by tools/make_synthetic25.py"]
    for n in pos:
        lines.append(f"node n{n} {weights[n]} {price(n)}")
    for a, b in sorted(edges):
        d = km(a, b)
        lines.append(f"arc n{a} n{b} {d}")
        lines.append(f"arc n{b} n{a} {d}")
    (out / "synthetic25.net").write_text("\n".join(lines) + "\n")

    # One peak hour scaled by m over a flat profile: m / (T - 1 + m) = peak / daily.
    share = PEAK_TRIPS / DAILY_TRIPS
    multiplier = share * (HORIZON - 1) / (1.0 - share)
    scenario = f"""# Synthetic case-study scenario: 25 nodes, 600 OD pairs, gravity demand.
network: synthetic25.net
horizon: {HORIZON}
gravity:
  daily_total: {DAILY_TRIPS:g}
  beta: 2
  peak_hour: {PEAK_HOUR}
  peak_multiplier: {multiplier!r}
paths:
  k: 150
  gap: 0.0001
solver:
  warmup_node_limit: 1
"""
    (out / "synthetic25.yaml").write_text(scenario)


if __name__ == "__main__":
    main()
