"""Sensor time series to graph signals.

Sensors become nodes of a graph whose edges carry pairwise Pearson
correlations above a threshold. Each pair of consecutive windows becomes one
graph signal whose value at a sensor is the DTW distance between that
sensor's two windows.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .detector import DetectionConfig, DetectionReport, prepare
from .errors import InputError
from .graph import Graph, Partition


@dataclass(frozen=True)
class MultiSeries:
    """Readings of several sensors on a shared clock; rows are sensors."""

    series: np.ndarray
    sample_period: float = 1.0

    def __post_init__(self):
        x = np.array(self.series, dtype=float)
        if x.ndim != 2 or x.shape[0] < 2 or x.shape[1] < 2:
            raise InputError(f"need at least 2 sensors and 2 time steps, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise InputError("series contain non-finite values")
        if not self.sample_period > 0:
            raise InputError("sample_period must be positive")
        x.setflags(write=False)
        object.__setattr__(self, "series", x)

    @property
    def n_sensors(self) -> int:
        return self.series.shape[0]

    @property
    def n_steps(self) -> int:
        return self.series.shape[1]


@dataclass(frozen=True)
class WindowPlan:
    window_len: int
    stride: Optional[int] = None

    def __post_init__(self):
        if self.window_len < 2:
            raise InputError("window_len must be at least 2")
        if self.stride is None:
            object.__setattr__(self, "stride", self.window_len)
        if self.stride < 1:
            raise InputError("stride must be at least 1")

    @classmethod
    def from_seconds(cls, seconds: float = 30.0, sample_period: float = 1.0, stride_seconds=None):
        """Plan with windows of ``seconds`` (rounded to whole steps)."""
        length = int(round(seconds / sample_period))
        stride = None if stride_seconds is None else int(round(stride_seconds / sample_period))
        return cls(length, stride)


def pearson_matrix(x: np.ndarray) -> np.ndarray:
    """Row-wise Pearson correlations; a constant row correlates 0 with everything."""
    x = np.asarray(x, dtype=float)
    centered = x - x.mean(axis=1, keepdims=True)
    norms = np.sqrt(np.sum(centered**2, axis=1))
    ok = norms > 0
    unit = np.zeros_like(centered)
    unit[ok] = centered[ok] / norms[ok, None]
    r = np.clip(unit @ unit.T, -1.0, 1.0)
    np.fill_diagonal(r, 0.0)
    return r


def correlation_graph(ms: MultiSeries, threshold: float = 0.5) -> Graph:
    """Graph over sensors with an edge of weight ``r_ij`` wherever ``r_ij > threshold``."""
    r = pearson_matrix(ms.series)
    iu, ju = np.triu_indices(ms.n_sensors, 1)
    keep = r[iu, ju] > threshold
    g = Graph(ms.n_sensors, tuple((int(i), int(j), float(r[i, j])) for i, j in zip(iu[keep], ju[keep])))
    if g.m == 0:
        warnings.warn(f"no sensor pair correlates above {threshold}; the graph has no edges", stacklevel=2)
    return g


def dtw_distance(a, b) -> float:
    """Dynamic time warping distance with absolute-difference local cost.

    Unnormalised cumulative cost of the cheapest monotone alignment; no
    warping window.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise InputError("DTW needs nonempty sequences")
    cost = np.abs(a[:, None] - b[None, :])
    acc = np.full((a.size + 1, b.size + 1), np.inf)
    acc[0, 0] = 0.0
    for p in range(a.size):
        row, prev = acc[p + 1], acc[p]
        for q in range(b.size):
            row[q + 1] = cost[p, q] + min(prev[q + 1], row[q], prev[q])
    return float(acc[-1, -1])


@dataclass(frozen=True)
class WindowSignal:
    """DTW signal for windows ``index`` and ``index + 1``, covering steps ``[start, stop)``."""

    index: int
    start: int
    stop: int
    values: np.ndarray


def window_signals(ms: MultiSeries, plan: WindowPlan) -> list[WindowSignal]:
    """One DTW signal per pair of consecutive full windows."""
    w, stride = plan.window_len, plan.stride
    if ms.n_steps < w:
        raise InputError(f"series has {ms.n_steps} steps, shorter than one window of {w}")
    n_windows = (ms.n_steps - w) // stride + 1
    if n_windows < 2:
        raise InputError(f"series of {ms.n_steps} steps yields fewer than two windows of {w}")
    out = []
    for t in range(n_windows - 1):
        s0, s1 = t * stride, (t + 1) * stride
        values = np.array([dtw_distance(row[s0 : s0 + w], row[s1 : s1 + w]) for row in ms.series])
        out.append(WindowSignal(t, s0, s1 + w, values))
    return out


@dataclass(frozen=True)
class WindowedDetection:
    windows: list
    reports: list[DetectionReport]

    @property
    def flags(self) -> np.ndarray:
        """Boolean matrix, rows = window pairs, columns = sensors."""
        return np.array([r.flags for r in self.reports], dtype=bool).reshape(len(self.reports), -1)

    @property
    def union(self) -> np.ndarray:
        """Sensors flagged in at least one window pair."""
        return self.flags.any(axis=0)


def windowed_detection(
    ms: MultiSeries,
    plan: WindowPlan,
    p: Partition,
    cfg: DetectionConfig = DetectionConfig(),
    graph: Optional[Graph] = None,
    threshold: float = 0.5,
    jobs: int = 1,
) -> WindowedDetection:
    """Run the detector on every consecutive window pair over a fixed sensor graph.

    The graph defaults to :func:`correlation_graph` of the full series. It is
    decomposed once and reused for every window.
    """
    g = correlation_graph(ms, threshold) if graph is None else graph
    if g.n != ms.n_sensors:
        raise InputError(f"graph has {g.n} nodes but there are {ms.n_sensors} sensors")
    prepared = prepare(g, p, cfg)
    signals = window_signals(ms, plan)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda ws: prepared.detect(ws.values), signals))
    else:
        reports = [prepared.detect(ws.values) for ws in signals]
    return WindowedDetection(signals, reports)
