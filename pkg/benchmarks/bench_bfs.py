"""Compare the compiled BFS kernel against the pure-Python fallback.

Runs the SL2 diameter scan with each backend and prints per-q timings.
The pure backend is forced with LOGDIAM_PURE=1 in a subprocess so the
import-time backend selection is exercised the same way users hit it.

Usage: python3 benchmarks/bench_bfs.py [--q 2..40]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = """
import json, sys, time
from logdiam.backend import kernel_for
from logdiam.cayley import diameter
from logdiam.matmod import standard_sl2_genset

spec = standard_sl2_genset()
qs = json.loads(sys.argv[1])
rows = []
for q in qs:
    rec = diameter(spec, q)
    rows.append({"q": q, "diam": rec.diameter, "order": rec.order, "ms": rec.ms})
print(json.dumps({"kernel": kernel_for(qs[-1], 4).NAME, "rows": rows}))
"""


def run(qs, pure):
    env = dict(os.environ)
    if pure:
        env["LOGDIAM_PURE"] = "1"
    else:
        env.pop("LOGDIAM_PURE", None)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(qs)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", default="2..40", help="modulus range lo..hi")
    args = ap.parse_args()
    lo, hi = (int(v) for v in args.q.split(".."))
    qs = list(range(lo, hi + 1))

    compiled = run(qs, pure=False)
    pure = run(qs, pure=True)
    if compiled["kernel"] == pure["kernel"]:
        print("note: compiled kernel unavailable; comparing python to itself")

    print(f"{'q':>4} {'order':>9} {'diam':>5} "
          f"{compiled['kernel']:>10} ms {pure['kernel']:>10} ms {'speedup':>8}")
    tot_c = tot_p = 0.0
    for rc, rp in zip(compiled["rows"], pure["rows"]):
        assert (rc["diam"], rc["order"]) == (rp["diam"], rp["order"]), (
            f"backend disagreement at q={rc['q']}"
        )
        tot_c += rc["ms"]
        tot_p += rp["ms"]
        speed = rp["ms"] / rc["ms"] if rc["ms"] else float("inf")
        print(f"{rc['q']:>4} {rc['order']:>9} {rc['diam']:>5} "
              f"{rc['ms']:>13.1f} {rp['ms']:>13.1f} {speed:>7.1f}x")
    print(f"totals: {compiled['kernel']} {tot_c:.0f} ms, "
          f"{pure['kernel']} {tot_p:.0f} ms, "
          f"overall speedup {tot_p / tot_c:.1f}x")


if __name__ == "__main__":
    main()
