"""Compiled vs pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick] [--csv out.csv]

Each kernel runs on the same inputs under both backends; the table shows
the best of ``--repeat`` wall-clock times and the speedup. Outputs of the
two backends are compared too, so a mismatch shows up here before it
shows up in a certificate.
"""

import argparse
import cmath
import csv
import math
import random
import sys
import time

from poscert import kernels


def best_time(fn, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(quick):
    rng = random.Random(1)
    h = 1e5 if quick else 1e6
    yield "negative_index_ratio", f"h={h:g}", lambda k: k.negative_index_ratio(h, int(4 * h) + 16)

    n = 16 if quick else 40
    coeffs = [complex(rng.randint(-9, 9)) for _ in range(n)] + [1 + 0j]
    radius = 1.0 + max(abs(c) for c in coeffs[:-1])
    start = [radius * cmath.exp(1j * (2 * math.pi * j / n + 0.4)) for j in range(n)]
    yield "aberth", f"degree {n}", lambda k: k.aberth(coeffs, start, 200, 1e-14)[1]

    a = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(300 if quick else 1500)]
    b = [rng.randint(-10 ** 6, 10 ** 6) for _ in range(300 if quick else 1500)]
    yield "convolve", f"{len(a)} x {len(b)}", lambda k: k.convolve(a, b)

    seq = [rng.choice((-1, 0, 1)) * rng.randint(1, 100) for _ in range(10 ** 5 if quick else 10 ** 6)]
    yield "sign_changes", f"{len(seq)} terms", lambda k: k.sign_changes(seq)

    m, w = (40, 80) if quick else (120, 240)
    base = [[rng.randint(-20, 20) for _ in range(w)] for _ in range(m)]

    def pivots(k):
        rows = [list(r) for r in base]
        d = 1
        for step in range(min(m, 25)):
            col = step
            r = next((i for i in range(step, m) if rows[i][col] != 0), None)
            if r is None:
                continue
            d = k.fraction_free_pivot(rows, r, col, d)
        return rows[0][-1], d

    yield "fraction_free_pivot", f"{m}x{w}, 25 pivots", pivots


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--csv", default=None, help="also write the table as CSV")
    args = ap.parse_args(argv)

    if kernels.compiled is None:
        print("compiled kernels not built; only the pure-Python times are shown", file=sys.stderr)
    rows = []
    print(f"{'kernel':<22} {'input':<22} {'python s':>10} {'cython s':>10} {'speedup':>8}  same")
    for name, label, fn in cases(args.quick):
        t_py, out_py = best_time(lambda: fn(kernels.pure), args.repeat)
        if kernels.compiled is not None:
            t_c, out_c = best_time(lambda: fn(kernels.compiled), args.repeat)
            same = out_c == out_py
            speed = t_py / t_c if t_c > 0 else math.inf
            print(f"{name:<22} {label:<22} {t_py:>10.4f} {t_c:>10.4f} {speed:>7.1f}x  {same}")
        else:
            t_c, speed, same = None, None, None
            print(f"{name:<22} {label:<22} {t_py:>10.4f} {'-':>10} {'-':>8}  -")
        rows.append({"kernel": name, "input": label, "python_s": t_py, "cython_s": t_c,
                     "speedup": speed, "same_output": same})
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
