"""Compare the compiled and numpy kernels on representative workloads.

    python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from sumset_lab import kernels
from sumset_lab.constructions import gen_geometric, gen_random, gen_ruzsa
from sumset_lab.extractor import plunnecke_large_subset, stability_analyze
from sumset_lab.group import GroupSpec
from sumset_lab.shadow import lexmin_embedding
from sumset_lab.sumsets import PointSet, iterated_sumset


def _workloads():
    ruzsa = gen_ruzsa(5, 25)
    rnd = gen_random(6, 0.5, 36, seed=1)
    rng = np.random.default_rng(0)
    scattered = PointSet(GroupSpec.integers(2), rng.integers(-10 ** 6, 10 ** 6, (300, 2)).tolist())
    small = PointSet(GroupSpec.integers(), ([int(v)] for v in rng.choice(60, 16, replace=False)))
    return [
        ("3A, ruzsa m=5 K=25 (dense)", lambda: iterated_sumset(ruzsa, 3)),
        ("3A, random cube in (Z/n)^3", lambda: iterated_sumset(rnd, 3)),
        ("2A, 300 scattered points (hash)", lambda: iterated_sumset(scattered, 2)),
        ("lex-min 3-embedding, ruzsa", lambda: lexmin_embedding(ruzsa, 3)),
        ("large subset, |A|=16, exact", lambda: plunnecke_large_subset(small, 2, 0.4, "exact")),
        ("stability window, geometric 14", lambda: stability_analyze(gen_geometric(14))),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = [b for b in ("cython", "python") if b in kernels.BACKENDS]
    print(f"{'workload':<34}" + "".join(f"{n:>12}" for n in names) + "     speedup")
    for title, fn in _workloads():
        times = {}
        for name in names:
            prev = kernels.use_backend(name)
            try:
                best = float("inf")
                for _ in range(args.repeat):
                    t0 = time.perf_counter()
                    fn()
                    best = min(best, time.perf_counter() - t0)
            finally:
                kernels.use_backend(prev)
            times[name] = best
        row = f"{title:<34}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if len(names) == 2:
            row += f"  {times['python'] / times['cython']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
