"""Timing and accuracy harness; writes bench_<suite>.csv and error_<suite>.csv."""

import sys

from skewexp import bench

sizes = [int(x) for x in sys.argv[1].split(",")] if len(sys.argv) > 1 else [16, 64, 256]

for suite in ("dexp_skew", "dexpinv_skew", "expm"):
    recs = bench.bench_suite(suite, sizes, trials=5)
    with open(f"bench_{suite}.csv", "w", newline="") as fh:
        bench.write_records(recs, fh)
    means = bench.summarize(recs)
    for (f, n, stage), v in sorted(means.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if stage == "compute":
            print(f"{suite:13s} {f:12s} n={n:4d} compute {v * 1e3:9.3f} ms")

for suite in ("expm", "dexp", "dexpinv"):
    rows = bench.error_suite(suite, [n for n in sizes if n <= 100] or [50])
    with open(f"error_{suite}.csv", "w") as fh:
        fh.write("formula,n,trial,error\n")
        fh.writelines(f"{f},{n},{t},{e!r}\n" for f, n, t, e in rows)
    for f, n, _, e in rows:
        print(f"error {suite:8s} {f:12s} n={n:4d} {e:.1e}")
