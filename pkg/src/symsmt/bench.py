"""Benchmark harness: every instance under every mode, with a non-overlap summary."""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

from .ast import Script
from .parser import parse_file
from .solver import SCHEMA_VERSION, SolveConfig, solve

DEFAULT_TIMEOUT = 5.0


@dataclass
class BenchRow:
    file: str
    mode: str
    status: str
    wall: float
    stats: Dict[str, object] = field(default_factory=dict)


@dataclass
class BenchReport:
    rows: List[BenchRow]
    modes: List[str]

    @property
    def files(self) -> List[str]:
        return sorted({r.file for r in self.rows})

    def solved(self) -> Dict[str, int]:
        return {m: sum(1 for r in self.rows if r.mode == m and r.status != "unknown") for m in self.modes}

    def timeouts(self) -> int:
        return sum(1 for r in self.rows if r.status == "unknown")

    def non_overlap(self) -> Dict[str, Dict[str, int]]:
        """``[a][b]``: instances solved by mode a but not by mode b."""
        ok = {m: {r.file for r in self.rows if r.mode == m and r.status != "unknown"} for m in self.modes}
        return {a: {b: len(ok[a] - ok[b]) for b in self.modes if b != a} for a in self.modes}

    def summary(self) -> Dict[str, object]:
        return {"instances": len(self.files), "solved": self.solved(),
                "non_overlap": self.non_overlap(), "timeouts": self.timeouts()}

    def to_json(self) -> Dict[str, object]:
        return {
            "schema": SCHEMA_VERSION,
            "summary": self.summary(),
            "rows": [{"file": r.file, "mode": r.mode, "status": r.status, "wall": r.wall, "stats": r.stats}
                     for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["file", "mode", "status", "wall", "skeleton_models_tried", "conflict_clauses",
                    "symmetries_accepted", "sbp_clauses"])
        for r in self.rows:
            s = _flat_stats(r.stats)
            w.writerow([r.file, r.mode, r.status, f"{r.wall:.6f}", s.get("skeleton_models_tried", ""),
                        s.get("conflict_clauses", ""), s.get("symmetries_accepted", ""), s.get("sbp_clauses", "")])
        return buf.getvalue()


def _flat_stats(stats: Dict[str, object]) -> Dict[str, object]:
    # hybrid rows nest the per-phase stats; report the phase that answered
    if "phase1" in stats:
        phase = stats.get("answered_in_phase") or 1
        return stats.get(f"phase{phase}", stats["phase1"])
    return stats


def _run_one(job: Tuple[str, Script, SolveConfig]) -> BenchRow:
    name, script, config = job
    t0 = time.perf_counter()
    res = solve(script, config)
    return BenchRow(name, config.mode.value, res.status.value, time.perf_counter() - t0, res.stats)


def run_bench(instances: Iterable[Tuple[str, Script]], modes: Sequence[str] = ("plain", "sym", "hybrid"),
              timeout: float = DEFAULT_TIMEOUT, config: SolveConfig | None = None, jobs: int = 1) -> BenchReport:
    base = config or SolveConfig()
    work = []
    for name, script in instances:
        for m in modes:
            work.append((name, script, replace(base, mode=m, total_deadline=timeout)))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            rows = list(ex.map(_run_one, work))
    else:
        rows = [_run_one(w) for w in work]
    return BenchReport(rows, list(modes))


def load_corpus(path: str | Path) -> List[Tuple[str, Script]]:
    p = Path(path)
    files = sorted(p.glob("*.smt2")) if p.is_dir() else [p]
    return [(f.name, parse_file(f)) for f in files]


def write_report(report: BenchReport, json_path=None, csv_path=None) -> None:
    if json_path:
        Path(json_path).write_text(json.dumps(report.to_json(), indent=2))
    if csv_path:
        Path(csv_path).write_text(report.to_csv())
