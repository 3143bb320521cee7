"""Write CSV tables of P, Q and N for small surface types."""
from __future__ import annotations

import argparse
import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

from polydiagrams.counts import Engine, count, is_unstable
from polydiagrams.exact import format_rational


@dataclass
class TableConfig:
    out_dir: Path = Path("results/tables")
    surfaces: List[Tuple[int, int]] = field(default_factory=lambda: [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (2, 1)])
    max_entry: int = 6
    families: Tuple[str, ...] = ("P", "Q", "N")


def run(cfg: TableConfig) -> List[Path]:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    engine = Engine()
    written = []
    for family in cfg.families:
        for g, n in cfg.surfaces:
            if family == "N" and is_unstable(g, n):
                continue
            path = cfg.out_dir / f"{family}_{g}_{n}.csv"
            with path.open("w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow([f"mu{i + 1}" for i in range(n)] + ["value"])
                for mu in itertools.product(range(cfg.max_entry + 1), repeat=n):
                    w.writerow(list(mu) + [format_rational(count(family, g, n, mu, engine=engine))])
            written.append(path)
    return written


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=TableConfig.out_dir)
    ap.add_argument("--max", type=int, default=TableConfig.max_entry)
    a = ap.parse_args()
    for p in run(TableConfig(out_dir=a.out_dir, max_entry=a.max)):
        print(p)
