"""
File formats and the command line
=================================

Write a benchmark to disk, then run detection and evaluation through the
``specf`` command, exactly as a shell user would.
"""

import json
import tempfile
from pathlib import Path

from specf.cli import main

# %%
work = Path(tempfile.mkdtemp(prefix="specf-demo-"))
main(["gen", "--n", "120", "--k", "4", "--p-in", "0.3", "--p-out", "0.02",
      "--an", "0.05", "--theta", "0.2", "--seed", "11", "--out", str(work / "bench")])  # fmt: skip
print(sorted(p.name for p in (work / "bench").iterdir()))
print((work / "bench" / "edges.tsv").read_text().splitlines()[:3])

# %%
b = work / "bench"
main(["detect", "--graph", str(b / "edges.tsv"), "--signal", str(b / "signal.csv"),
      "--partition", str(b / "partition.tsv"), "--out", str(work / "report.json")])  # fmt: skip
main(["eval", "--report", str(work / "report.json"), "--labels", str(b / "labels.csv"), "--out", str(work / "eval")])

# %%
print(json.dumps(json.loads((work / "eval" / "metrics.json").read_text()), indent=2))
print("outputs in", work)
