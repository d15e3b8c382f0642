"""Finite-horizon quotients of SFT entropies against the Perron root."""

from __future__ import annotations

import argparse
from dataclasses import dataclass

from entropy_spaces import symbolic as sy
from entropy_spaces.entropy import entropy_relative


@dataclass
class Config:
    horizon: int = 64
    every: int = 8
    matrix: str = "golden"


SHIFTS = {
    "golden": sy.golden_mean,
    "full2": lambda: sy.full_shift(2),
    "three-state": lambda: sy.Sft(3, ((1, 1, 0), (0, 0, 1), (1, 1, 0)), True, "three-state"),
}


def run(cfg: Config) -> list[tuple[int, int, float, float]]:
    sft = SHIFTS[cfg.matrix]()
    est = entropy_relative(sy.sft_space(sft), sy.shift_preimage_map(sft), sy.window(0, 0), cfg.horizon)
    limit = sy.perron_log(sft)
    rows = []
    for n in range(cfg.every, cfg.horizon + 1, cfg.every):
        rows.append((n, sy.count_words(sft, n), est.running_inf[n - 1], est.running_inf[n - 1] - limit))
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--horizon", type=int, default=Config.horizon)
    ap.add_argument("--every", type=int, default=Config.every)
    ap.add_argument("--matrix", choices=sorted(SHIFTS), default=Config.matrix)
    cfg = Config(**vars(ap.parse_args()))
    print(f"{'n':>4} {'words':>22} {'inf q_k':>12} {'gap':>10}")
    for n, w, q, gap in run(cfg):
        print(f"{n:>4} {w:>22} {q:>12.8f} {gap:>10.2e}")


if __name__ == "__main__":
    main()
