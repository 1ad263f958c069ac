"""Stabilizer orders of the named corpus forms against both bounds."""

import argparse
import json
import time
from dataclasses import asdict, dataclass

from cibound.bounds import divisibility_verdict, projective_bound, vector_bound
from cibound.cli import load_corpus
from cibound.grouporbit import stabilizer_pair
from cibound.resultant import is_singular


@dataclass
class Row:
    name: str
    field: str
    n: int
    d: int
    smooth: str
    gl_order: int
    pgl_order: int
    gl_divides: bool | None
    pgl_divides: bool | None
    seconds: float


DEFAULT = ["three-points", "klein-quartic", "fermat-quartic-gf9", "char3-cubic", "fermat-d3-n2", "fermat-d4-n2"]


def run(name, entry, budget):
    t0 = time.perf_counter()
    f = entry.parse()[0]
    smooth = is_singular(f, None).verdict.value
    lin, proj = stabilizer_pair(f, budget, with_generators=False)
    p = f.field.characteristic
    gl_ok = pgl_ok = None
    if f.d >= 3:
        gl_ok = divisibility_verdict(lin.stabilizer_order, p, vector_bound(f.n, f.d)).divides
        pgl_ok = divisibility_verdict(proj.stabilizer_order, p, projective_bound(f.n, f.d)).divides
    return Row(name, f.field.spec, f.n, f.d, smooth, lin.stabilizer_order, proj.stabilizer_order,
               gl_ok, pgl_ok, round(time.perf_counter() - t0, 3))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("names", nargs="*", default=DEFAULT)
    ap.add_argument("--budget", type=int, default=5_000_000)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    corpus = load_corpus()
    rows = [run(name, corpus[name], args.budget) for name in args.names]
    if args.json:
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return
    for r in rows:
        print(f"{r.name:<20} {r.field:<9} |Stab_GL| = {r.gl_order:<6} |Stab_PGL| = {r.pgl_order:<6} "
              f"{r.smooth:<9} GL divides: {r.gl_divides}  PGL divides: {r.pgl_divides}  ({r.seconds} s)")


if __name__ == "__main__":
    main()
