"""Fit Q and N quasi-polynomials and dump reports plus intersection tables as JSON."""
from __future__ import annotations

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Tuple

from polydiagrams.analysis import fit_quasipoly, intersection_numbers, qn_top_check
from polydiagrams.counts import Engine


@dataclass
class FitConfig:
    out_dir: Path = Path("results/fits")
    surfaces: List[Tuple[int, int]] = field(default_factory=lambda: [(0, 3), (1, 1), (0, 4), (1, 2), (2, 1)])


def run(cfg: FitConfig) -> dict:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    engine = Engine()
    summary = {}
    for g, n in cfg.surfaces:
        reports = {fam: fit_quasipoly(fam, g, n, engine, strict=False) for fam in ("Q", "N")}
        for fam, rep in reports.items():
            (cfg.out_dir / f"{fam}_{g}_{n}.json").write_text(json.dumps(rep.to_json(), indent=2) + "\n")
        table = intersection_numbers(g, n, "Q", engine, reports["Q"])
        ok, diffs = qn_top_check(g, n, engine, reports["Q"], reports["N"])
        summary[f"{g},{n}"] = {
            "Q_pass": reports["Q"].passed,
            "N_pass": reports["N"].passed,
            "top_ratio_ok": ok,
            "intersections": table.to_json(),
        }
    (cfg.out_dir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return summary


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=FitConfig.out_dir)
    a = ap.parse_args()
    for key, row in run(FitConfig(out_dir=a.out_dir)).items():
        vals = ", ".join(f"{e['d']}={e['value']}" for e in row["intersections"])
        print(f"({key}) Q:{row['Q_pass']} N:{row['N_pass']} ratio:{row['top_ratio_ok']}  {vals}")
