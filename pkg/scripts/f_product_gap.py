"""How fast the log-sum-exp product of two full shifts approaches the larger entropy."""

from __future__ import annotations

import argparse
import math
from dataclasses import dataclass

from entropy_spaces import symbolic as sy
from entropy_spaces.constructions import f_product_map, f_product_space
from entropy_spaces.entropy import entropy_relative


@dataclass
class Config:
    k1: int = 2
    k2: int = 3
    horizon: int = 40


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k1", type=int, default=Config.k1)
    ap.add_argument("--k2", type=int, default=Config.k2)
    ap.add_argument("--horizon", type=int, default=Config.horizon)
    cfg = Config(**vars(ap.parse_args()))
    a, b = sy.full_shift(cfg.k1), sy.full_shift(cfg.k2)
    sa, sb = sy.sft_space(a), sy.sft_space(b)
    F = f_product_space(sa, sb)
    lam = f_product_map(sy.shift_preimage_map(a), sy.shift_preimage_map(b))
    w = sy.window(0, 0)
    est = entropy_relative(F, lam, (w, w), cfg.horizon)
    top = math.log(max(cfg.k1, cfg.k2))
    for n, q in enumerate(est.quotients, start=1):
        if n in (1, 2, 5) or n % 10 == 0:
            print(f"n={n:>3}  q_n={q:.10f}  q_n - max={q - top:.3e}")
    print(f"reported h = {est.value:.10f} ({est.label}, {est.reason})")


if __name__ == "__main__":
    main()
