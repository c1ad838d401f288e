"""Seeded parameter sweeps over synthetic benchmarks.

Every (cell, seed) run is independent. Graph, signal and anomaly seeds are
derived from the base seed and the cell's graph parameters only, so all
matrix modes, anomaly fractions and intensities of one seed index share the
same graph and normal signal; comparisons across those axes are paired.
"""

from __future__ import annotations

import csv
import io
import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .detector import DetectionConfig, run_specf
from .errors import InputError
from .evaluation import evaluate
from .generators import AnomalySpec, PlantedGraphSpec, generate_normal_signal, generate_planted_graph, inject_anomalies

METRICS = ("auc_roc", "ap", "precision", "recall", "f1")
COLUMNS = (
    "row_type", "n", "k", "p_in", "p_out", "mu", "an", "theta", "matrix", "seed",
    "graph_seed", "anomaly_seed", "runs", *METRICS, *(f"{m}_std" for m in METRICS),
    "k_used", "flagged", "error",
)  # fmt: skip


def derive_seed(*entropy) -> int:
    return int(np.random.SeedSequence([int(e) for e in entropy]).generate_state(1)[0])


@dataclass(frozen=True)
class SweepConfig:
    """Grid of benchmark parameters; one run per (cell, seed)."""

    n: tuple
    k: tuple
    edge_probs: tuple
    an: tuple
    theta: tuple
    matrix: tuple = ("adjacency", "expanded")
    seeds: int = 10
    base_seed: int = 0
    output: str = "sweep-out"

    def __post_init__(self):
        for name in ("n", "k", "edge_probs", "an", "theta", "matrix"):
            values = tuple(getattr(self, name))
            if not values:
                raise InputError(f"sweep list {name!r} is empty")
            object.__setattr__(self, name, values)
        object.__setattr__(self, "edge_probs", tuple((float(a), float(b)) for a, b in self.edge_probs))
        for p_in, p_out in self.edge_probs:
            if not 0 <= p_out < p_in <= 1:
                raise InputError(f"need 0 <= p_out < p_in <= 1, got [{p_in}, {p_out}]")
        if self.seeds < 1:
            raise InputError("seeds per cell must be >= 1")
        for m in self.matrix:
            if m not in ("adjacency", "expanded"):
                raise InputError(f"unknown matrix mode {m!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        """Build from a parsed JSON config.

        ``edge_probs`` is a list of ``[p_in, p_out]`` pairs. Alternatively give
        a scalar ``p_in`` and a list ``mu``; each ``mu`` becomes the pair with
        ``p_out = p_in * mu / (1 - mu)``.
        """
        d = dict(d)
        if "edge_probs" not in d:
            if "mu" not in d or "p_in" not in d:
                raise InputError("sweep config needs 'edge_probs' or both 'p_in' and 'mu'")
            p_in = float(d.pop("p_in"))
            mus = d.pop("mu")
            if not isinstance(mus, list) or not mus:
                raise InputError("sweep list 'mu' is empty")
            d["edge_probs"] = [(p_in, p_in * m / (1 - m)) for m in mus]
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(d) - known
        if unknown:
            raise InputError(f"unknown sweep config keys: {sorted(unknown)}")
        missing = {"n", "k", "edge_probs", "an", "theta"} - set(d)
        if missing:
            raise InputError(f"sweep config missing keys: {sorted(missing)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise InputError(f"bad sweep config: {exc}") from None

    def cells(self):
        """Sorted parameter cells ``(n, k, p_in, p_out, an, theta, matrix)``."""
        return sorted(
            (n, k, pi, po, an, th, m)
            for n, k, (pi, po), an, th, m in itertools.product(
                self.n, self.k, self.edge_probs, self.an, self.theta, self.matrix
            )
        )

    def tasks(self):
        return [(cell, s, self.base_seed) for cell in self.cells() for s in range(self.seeds)]


def run_task(task) -> dict:
    """Generate one benchmark and score one detection on it; failures are captured in the row."""
    (n, k, p_in, p_out, an, theta, matrix), s, base = task
    graph_seed = derive_seed(base, n, k, round(p_in * 1e9), round(p_out * 1e9), s, 1)
    anomaly_seed = derive_seed(base, n, k, round(p_in * 1e9), round(p_out * 1e9), s, 2)
    row = {
        "row_type": "run", "n": n, "k": k, "p_in": p_in, "p_out": p_out, "mu": p_out / (p_in + p_out),
        "an": an, "theta": theta, "matrix": matrix, "seed": s, "graph_seed": graph_seed,
        "anomaly_seed": anomaly_seed, "runs": 1, "error": "",
    }  # fmt: skip
    try:
        g, p = generate_planted_graph(PlantedGraphSpec(n, k, p_in, p_out, graph_seed))
        signal = generate_normal_signal(g, p, graph_seed)
        b, labels = inject_anomalies(g, signal, p, AnomalySpec(an, theta, anomaly_seed))
        report = run_specf(g, b, p, DetectionConfig(matrix_mode=matrix))
        metrics = evaluate(report.scores, report.flags, labels)
        row.update({m: metrics[m] for m in METRICS})
        row["k_used"] = report.k_used
        row["flagged"] = int(report.flags.sum())
    except Exception as exc:  # recorded in-row; the sweep carries on
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def aggregate(rows):
    out = []
    for key, group in itertools.groupby(rows, key=lambda r: tuple(r[c] for c in ("n", "k", "p_in", "p_out", "an", "theta", "matrix"))):
        group = list(group)
        ok = [r for r in group if not r["error"]]
        agg = dict(zip(("n", "k", "p_in", "p_out", "an", "theta", "matrix"), key))
        agg.update(row_type="aggregate", mu=group[0]["mu"], runs=len(ok))
        failed = len(group) - len(ok)
        agg["error"] = f"{failed} failed runs" if failed else ""
        for m in METRICS:
            vals = np.array([r[m] for r in ok], dtype=float)
            agg[m] = float(vals.mean()) if vals.size else ""
            agg[f"{m}_std"] = float(vals.std()) if vals.size else ""
        out.append(agg)
    return out


def run_sweep(cfg: SweepConfig, jobs: int = 1):
    """Run every (cell, seed) and return ``(run_rows, aggregate_rows)`` in canonical order."""
    tasks = cfg.tasks()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        rows = [run_task(t) for t in tasks]
    rows.sort(key=lambda r: (r["n"], r["k"], r["p_in"], r["p_out"], r["an"], r["theta"], r["matrix"], r["seed"]))
    return rows, aggregate(rows)


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else str(v)


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\r\n", restval="")
    w.writeheader()
    for r in rows:
        w.writerow({c: _fmt(r.get(c, "")) for c in COLUMNS})
    return buf.getvalue()


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("SPECF_JOBS", "1")))
    except ValueError:
        return 1
