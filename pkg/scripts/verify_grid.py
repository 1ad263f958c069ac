"""Run the random-sample divisibility check over a grid of (n, d, q)."""

import argparse
import time
from dataclasses import dataclass, field

from cibound.errors import InsufficientSmoothSamples
from cibound.grouporbit import verify_divisibility


@dataclass
class GridConfig:
    cases: list = field(default_factory=lambda: [(1, 3, 7), (1, 4, 5), (1, 5, 3), (2, 3, 5), (2, 4, 3), (2, 3, 4)])
    samples: int = 20
    seed: int = 0
    workers: int = 1


def parse_case(text):
    n, d, q = (int(x) for x in text.split(","))
    return n, d, q


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--case", type=parse_case, action="append", help="n,d,q (repeatable)")
    ap.add_argument("--samples", type=int, default=GridConfig.samples)
    ap.add_argument("--seed", type=int, default=GridConfig.seed)
    ap.add_argument("--workers", type=int, default=GridConfig.workers)
    args = ap.parse_args(argv)
    cfg = GridConfig(samples=args.samples, seed=args.seed, workers=args.workers)
    if args.case:
        cfg.cases = args.case
    for n, d, q in cfg.cases:
        t0 = time.perf_counter()
        try:
            reports = verify_divisibility(n, d, q, cfg.samples, cfg.seed, workers=cfg.workers)
            status = "all divide"
        except InsufficientSmoothSamples as exc:
            reports, status = exc.reports, "too few smooth samples"
        tested = [r for r in reports if r.status == "tested"]
        gl = sorted({r.linear_order for r in tested})
        pgl = sorted({r.projective_order for r in tested})
        print(f"n={n} d={d} q={q}: {len(tested)}/{len(reports)} smooth, {status}; "
              f"GL orders {gl}, PGL orders {pgl}  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
