"""Covering numbers, orders and dimension over every topology on a few points."""

from __future__ import annotations

import argparse
import collections
import time
from dataclasses import dataclass

from entropy_spaces import topo


@dataclass
class Config:
    points: int = 3
    check_oracle: bool = True


def survey(cfg: Config) -> dict:
    t0 = time.perf_counter()
    tops = topo.all_topologies(cfg.points)
    dims = collections.Counter()
    covers = mismatches = 0
    for T in tops:
        dims[topo.covering_dimension(T)] += 1
        for c in topo.irredundant_covers(T):
            covers += 1
            if cfg.check_oracle:
                mismatches += topo.cover_N(T, c) != topo.brute_force_N(T, c)
                mismatches += topo.cover_D(T, c) != topo.brute_force_D(T, c)
    return {
        "topologies": len(tops),
        "irredundant covers": covers,
        "dimension histogram": dict(sorted(dims.items())),
        "oracle mismatches": mismatches if cfg.check_oracle else "skipped",
        "seconds": round(time.perf_counter() - t0, 3),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=Config.points)
    ap.add_argument("--no-oracle", dest="check_oracle", action="store_false")
    cfg = Config(**vars(ap.parse_args()))
    for k, v in survey(cfg).items():
        print(f"{k:>20}: {v}")


if __name__ == "__main__":
    main()
