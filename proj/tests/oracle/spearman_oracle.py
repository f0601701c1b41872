#!/usr/bin/env python3
"""Standalone Spearman oracle.

Ranks are built from explicit rank tables (tie groups share their mean rank) with exact rational
arithmetic; only the final square root is floating point. Shares no code with the C++ library.

  spearman_oracle.py pairs FILE            FILE: JSON [{"x": [...], "y": [...]}, ...]; prints JSON rhos
  spearman_oracle.py report PRICES SIGNALS... [--lag K]
                                           prints ticker,channel,rho,n_days for every series
  spearman_oracle.py selftest              cross-checks against scipy when it is installed
"""
import argparse
import csv
import json
import math
import random
import sys
from collections import defaultdict
from fractions import Fraction


def rank_table(values):
    table = {}
    ordered = sorted(values)
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1] == ordered[i]:
            j += 1
        table[ordered[i]] = Fraction(i + 1 + j + 1, 2)
        i = j + 1
    return [table[v] for v in values]


def spearman(x, y):
    if len(x) != len(y):
        raise ValueError("length mismatch")
    if len(x) < 3:
        raise ValueError("need at least 3 points")
    rx, ry = rank_table(x), rank_table(y)
    n = len(x)
    mx, my = sum(rx) / n, sum(ry) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    sxx = sum((a - mx) ** 2 for a in rx)
    syy = sum((b - my) ** 2 for b in ry)
    if sxx == 0 or syy == 0:
        raise ValueError("constant series")
    return float(sxy) / math.sqrt(float(sxx * syy))


def load_returns(path):
    closes = defaultdict(list)
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            closes[row["ticker"]].append((row["date"], float(row["close"])))
    returns = {}
    for ticker, rows in closes.items():
        rows.sort()
        returns[ticker] = [(rows[i][0], (rows[i][1] - rows[i - 1][1]) / rows[i - 1][1]) for i in range(1, len(rows))]
    return returns


def load_signals(paths):
    series = defaultdict(list)
    for p in paths:
        with open(p, newline="") as f:
            for row in csv.DictReader(f):
                series[(row["ticker"], row["channel"])].append((row["date"], float(row["value"])))
    return series


def report(prices, signal_files, lag):
    returns = load_returns(prices)
    out = []
    for (ticker, channel), sig in sorted(load_signals(signal_files).items()):
        rets = returns.get(ticker, [])
        pos = {d: i for i, (d, _) in enumerate(rets)}
        xs, ys = [], []
        for d, v in sorted(sig):
            if d in pos and 0 <= pos[d] + lag < len(rets):
                xs.append(v)
                ys.append(rets[pos[d] + lag][1])
        rho = ""
        if len(xs) >= 3 and len(set(xs)) > 1 and len(set(ys)) > 1:
            rho = repr(spearman(xs, ys))
        out.append(f"{ticker},{channel},{rho},{len(xs)}")
    return out


def selftest():
    rng = random.Random(1)
    assert abs(spearman([1, 2, 2, 4], [1, 3, 2, 4]) - 3 / math.sqrt(10)) < 1e-15
    assert spearman([1, 2, 3], [10, 20, 30]) == 1.0
    assert spearman([1, 2, 3], [3, 2, 1]) == -1.0
    try:
        from scipy.stats import spearmanr
    except ImportError:
        print("scipy not installed; closed-form checks only")
        return 0
    worst = 0.0
    for trial in range(300):
        n = rng.randint(3, 200)
        if trial % 2:
            x = [rng.randint(0, 5) for _ in range(n)]
            y = [rng.randint(0, 5) for _ in range(n)]
        else:
            x = [rng.uniform(-1, 1) for _ in range(n)]
            y = [rng.uniform(-1, 1) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        worst = max(worst, abs(spearman(x, y) - spearmanr(x, y).correlation))
    print(f"max |oracle - scipy| = {worst:.3e}")
    return 0 if worst < 1e-12 else 1


def main():
    ap = argparse.ArgumentParser()
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("pairs")
    p.add_argument("file")
    r = sub.add_parser("report")
    r.add_argument("prices")
    r.add_argument("signals", nargs="+")
    r.add_argument("--lag", type=int, default=0)
    sub.add_parser("selftest")
    args = ap.parse_args()
    if args.cmd == "pairs":
        with open(args.file) as f:
            pairs = json.load(f)
        print(json.dumps([spearman(p["x"], p["y"]) for p in pairs]))
    elif args.cmd == "report":
        print("\n".join(report(args.prices, args.signals, args.lag)))
    else:
        return selftest()
    return 0


if __name__ == "__main__":
    sys.exit(main())
