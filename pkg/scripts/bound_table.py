"""Print both bounds over a grid of (n, d), with the specialization check."""

import argparse

from cibound.bounds import SPECIALIZED, projective_bound, vector_bound


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=4)
    ap.add_argument("--d-max", type=int, default=8)
    args = ap.parse_args(argv)
    special = {n: fn for n, fn in SPECIALIZED.values()}
    print(f"{'n':>2} {'d':>3} {'vector (GL)':>28} {'projective (PGL)':>28}  specialized")
    for n in range(1, args.n_max + 1):
        for d in range(3, args.d_max + 1):
            proj = projective_bound(n, d)
            check = ""
            if n in special:
                check = "ok" if special[n](d) == proj else "MISMATCH"
            print(f"{n:>2} {d:>3} {vector_bound(n, d):>28} {proj:>28}  {check}")


if __name__ == "__main__":
    main()
