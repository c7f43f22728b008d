"""Survey self-intertwiner spaces over permutation unitaries.

For each candidate u the script computes the bounded-level space of
fixed points of x -> u shift(x) u* and tallies its dimension; candidates
whose basis leaves the core are printed, since those are exactly the
seeds for perturbations like the w_cp counterexample.

Run as:  python scripts/search_intertwiners.py --k 2 [--samples N] [--jobs J]
"""

import argparse
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import permutations

from cuntzcalc.algebra import membership
from cuntzcalc.exprio import render
from cuntzcalc.intertwine import intertwiner_space
from cuntzcalc.sampling import permutation_unitary


@dataclass(frozen=True)
class SearchConfig:
    n: int = 2
    k: int = 2
    level: int = 2
    samples: int = None  # None = exhaustive (k <= 3 only)
    seed: int = 0
    jobs: int = 1
    show: int = 10


def candidate_perms(cfg):
    size = cfg.n ** cfg.k
    if cfg.samples is None:
        if cfg.k > 3:
            raise SystemExit("exhaustive search is limited to k <= 3; pass --samples")
        return list(permutations(range(size)))
    rng = random.Random(cfg.seed)
    out = []
    for _ in range(cfg.samples):
        p = list(range(size))
        rng.shuffle(p)
        out.append(tuple(p))
    return out


def survey_one(payload):
    cfg, perm = payload
    u = permutation_unitary(cfg.n, cfg.k, perm)
    report = intertwiner_space(u, cfg.level)
    non_core = sum(1 for b in report.basis if not membership(b, "F"))
    return perm, report.dimension, non_core


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--k", type=int, default=2, help="permutation level")
    ap.add_argument("--level", type=int, default=2, help="intertwiner space level")
    ap.add_argument("--samples", type=int, help="random sample count")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--show", type=int, default=10, help="max flagged candidates to print")
    args = ap.parse_args()
    cfg = SearchConfig(args.n, args.k, args.level, args.samples,
                       args.seed, args.jobs, args.show)

    perms = candidate_perms(cfg)
    payloads = [(cfg, p) for p in perms]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(survey_one, payloads, chunksize=16))
    else:
        results = [survey_one(p) for p in payloads]

    dims = {}
    flagged = []
    for perm, dim, non_core in results:
        dims[dim] = dims.get(dim, 0) + 1
        if non_core:
            flagged.append((perm, dim, non_core))

    print(f"candidates: {len(results)} (n={cfg.n}, k={cfg.k}, level={cfg.level})")
    print("dimension histogram: "
          + ", ".join(f"{d} -> {c}" for d, c in sorted(dims.items())))
    print(f"candidates with non-core fixed points: {len(flagged)}")
    for perm, dim, non_core in flagged[:cfg.show]:
        u = permutation_unitary(cfg.n, cfg.k, perm)
        print(f"  perm {perm}: dim {dim}, {non_core} non-core" )
        print(f"    u = {render(u)}")


if __name__ == "__main__":
    main()
