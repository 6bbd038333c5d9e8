"""Benchmark both modes over the boolean-function datasets.

Produces the same table the `rumix bench` subcommand writes, with the
shipped published reference numbers merged in for comparison (those
columns are reported results, not computed here).
"""

import json
from pathlib import Path

from rumix import BenchmarkEntry, benchmark

HERE = Path(__file__).resolve().parent
MANIFEST = HERE.parent / "benchmarks" / "boolean_functions.json"

doc = json.loads(MANIFEST.read_text())
entries = [BenchmarkEntry(d["name"], str(MANIFEST.parent / d["path"]))
           for d in doc["datasets"]]

table = benchmark(
    entries,
    modes=("rumc", "racer"),
    k=10, seed=1,
    published_columns=doc["published"],
    progress=lambda name, mode, rep: print(
        f"  {name} [{mode}]: {rep.mean_accuracy_pct:.2f} "
        f"({rep.wall_time:.1f}s)"),
)

print()
print(table.to_markdown())
