"""Print the (1,1) pullback coefficients against Q' order by order."""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from polydiagrams.analysis import pullback_check
from polydiagrams.exact import format_rational


@dataclass
class PullbackConfig:
    order: int = 20


def main(cfg: PullbackConfig) -> int:
    rep = pullback_check(cfg.order)
    print(f"epsilon = {rep.epsilon}")
    for nu, p, q, ok in rep.orders:
        print(f"nu={nu:3d}  pullback={format_rational(p):>12}  Q'={format_rational(q):>12}  {'ok' if ok else 'MISMATCH'}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=PullbackConfig.order)
    raise SystemExit(main(PullbackConfig(ap.parse_args().order)))
