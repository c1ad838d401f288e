"""Community-contextual anomaly detection by low-pass graph filtering.

The pipeline: build a matrix for the graph (plain adjacency or the
community-expanded matrix), take its Laplacian spectrum, keep the ``k``
lowest graph frequencies of the signal, and score every node by how much the
filter had to move it. Nodes whose score exceeds ``mean + 2 std`` of their
own community are flagged.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .errors import DisconnectedGraphError, InputError
from .graph import EXPANDED_WEIGHTS, Graph, Partition, adjacency_matrix, connected, expanded_matrix, laplacian
from .spectral import (
    FilterResponse,
    Spectrum,
    apply_filter,
    eig_sym,
    estimate_k_eigengap,
    fit_polynomial_filter,
    gft,
    ideal_lowpass,
    igft,
)

MATRIX_MODES = ("adjacency", "expanded")
FILTER_MODES = ("ideal", "polynomial")

#: Scores at or below this fraction of ``max |b|`` are rounding noise and set to 0.
SCORE_FLOOR = 1e-9


@dataclass(frozen=True)
class DetectionConfig:
    """Detector settings.

    Parameters
    ----------
    matrix_mode : {"expanded", "adjacency"}
    k : int or {"partition", "eigengap"}
        Cut-off index. ``"partition"`` uses the number of communities,
        ``"eigengap"`` estimates it from the Laplacian spectrum.
    filter_mode : {"ideal", "polynomial"}
    poly_degree : int, optional
        Polynomial degree; defaults to ``min(n - 1, 20)``.
    threshold_multiplier : float
        Number of community standard deviations above the mean a score must
        exceed to be flagged.
    weights : (float, float, float)
        Expanded-matrix weights.
    """

    matrix_mode: str = "expanded"
    k: Union[int, str] = "partition"
    filter_mode: str = "ideal"
    poly_degree: Optional[int] = None
    threshold_multiplier: float = 2.0
    weights: tuple = EXPANDED_WEIGHTS

    def __post_init__(self):
        if self.matrix_mode not in MATRIX_MODES:
            raise InputError(f"matrix_mode must be one of {MATRIX_MODES}, got {self.matrix_mode!r}")
        if self.filter_mode not in FILTER_MODES:
            raise InputError(f"filter_mode must be one of {FILTER_MODES}, got {self.filter_mode!r}")
        if isinstance(self.k, str):
            if self.k not in ("partition", "eigengap"):
                raise InputError(f"k must be an integer, 'partition' or 'eigengap', got {self.k!r}")
        elif isinstance(self.k, bool) or int(self.k) != self.k or self.k < 1:
            raise InputError(f"fixed k must be a positive integer, got {self.k!r}")
        if self.poly_degree is not None and self.poly_degree < 0:
            raise InputError("poly_degree must be >= 0")
        if not (math.isfinite(self.threshold_multiplier) and self.threshold_multiplier >= 0):
            raise InputError("threshold_multiplier must be finite and nonnegative")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    def to_dict(self) -> dict:
        return {
            "matrix_mode": self.matrix_mode,
            "k": self.k,
            "filter_mode": self.filter_mode,
            "poly_degree": self.poly_degree,
            "threshold_multiplier": self.threshold_multiplier,
            "weights": list(self.weights),
        }


@dataclass(frozen=True)
class DetectionReport:
    """Result of one detection run.

    ``thresholds`` maps community id to the max-normalised threshold
    ``(mean + m * std) / max``; ``inf`` marks communities whose scores are all
    zero.
    """

    scores: np.ndarray
    flags: np.ndarray
    filtered: np.ndarray
    k_used: int
    thresholds: dict
    config: DetectionConfig

    @property
    def anomalous_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.flags)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "k_used": int(self.k_used),
            "scores": [float(x) for x in self.scores],
            "flags": [bool(x) for x in self.flags],
            "thresholds": {
                str(c): (None if math.isinf(t) else float(t)) for c, t in sorted(self.thresholds.items())
            },
            "filtered": [float(x) for x in self.filtered],
        }

    def to_json(self, indent=2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def abnormality(b, b_filtered) -> np.ndarray:
    """Elementwise ``|b - b_filtered|``."""
    b = np.asarray(b, dtype=float)
    bf = np.asarray(b_filtered, dtype=float)
    if b.shape != bf.shape:
        raise InputError(f"signal shapes differ: {b.shape} vs {bf.shape}")
    return np.abs(b - bf)


def _community_stats(values: np.ndarray):
    mean = values.sum() / values.size
    std = math.sqrt(float(np.sum((values - mean) ** 2)) / values.size)
    return float(mean), std


def community_threshold(y, p: Partition, community: int, multiplier: float = 2.0) -> float:
    """Max-normalised threshold ``(mean + multiplier * std) / max`` of one community.

    Uses the population standard deviation. Returns ``inf`` when every score
    in the community is zero.
    """
    y = np.asarray(y, dtype=float)
    vals = y[p.assignment == community]
    if vals.size == 0:
        raise InputError(f"community {community} is empty")
    top = float(vals.max())
    if top == 0:
        return math.inf
    if vals.min() == top:
        return 1.0
    mean, std = _community_stats(vals)
    return (mean + multiplier * std) / top


def flag_anomalies(y, p: Partition, multiplier: float = 2.0) -> np.ndarray:
    """Flag nodes whose score strictly exceeds ``mean + multiplier * std`` of their community.

    This is the same decision as ``y_i / max > threshold`` on the normalised
    scale, evaluated without the division. Communities whose scores are all
    equal (including singletons and all-zero) flag nothing.
    """
    y = np.asarray(y, dtype=float)
    if y.shape != (p.n,):
        raise InputError(f"score vector has shape {y.shape}, partition covers {p.n} nodes")
    flags = np.zeros(p.n, dtype=bool)
    for c in range(p.k):
        idx = p.members(c)
        vals = y[idx]
        if vals.max() == vals.min():
            continue
        mean, std = _community_stats(vals)
        flags[idx] = vals > mean + multiplier * std
    return flags


@dataclass(frozen=True)
class PreparedFilter:
    """Spectrum and filter response for one (graph, partition, config); reusable across signals."""

    spectrum: Spectrum
    response: FilterResponse
    k_used: int
    partition: Partition
    config: DetectionConfig = field(repr=False)

    def filter(self, b) -> np.ndarray:
        """Low-pass filtered copy of signal ``b``."""
        return lowpass_reconstruct(b, self.spectrum, self.response)

    def detect(self, b) -> DetectionReport:
        b = np.asarray(b, dtype=float)
        if b.shape != (self.spectrum.n,):
            raise InputError(f"signal has shape {b.shape}, graph has {self.spectrum.n} nodes")
        if not np.all(np.isfinite(b)):
            raise InputError("signal has non-finite entries")
        filtered = self.filter(b)
        y = abnormality(b, filtered)
        y[y <= SCORE_FLOOR * np.max(np.abs(b))] = 0.0
        m = self.config.threshold_multiplier
        return DetectionReport(
            scores=y,
            flags=flag_anomalies(y, self.partition, m),
            filtered=filtered,
            k_used=self.k_used,
            thresholds={c: community_threshold(y, self.partition, c, m) for c in range(self.partition.k)},
            config=self.config,
        )


def lowpass_reconstruct(b, spec: Spectrum, fr: FilterResponse) -> np.ndarray:
    """``igft(apply_filter(gft(b)))``."""
    return igft(apply_filter(gft(b, spec), fr), spec)


def graph_matrix(g: Graph, p: Partition, cfg: DetectionConfig) -> np.ndarray:
    if cfg.matrix_mode == "adjacency":
        return adjacency_matrix(g)
    return expanded_matrix(g, p, cfg.weights)


def prepare(g: Graph, p: Partition, cfg: DetectionConfig = DetectionConfig()) -> PreparedFilter:
    """Validate inputs, decompose the Laplacian and design the filter."""
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} nodes but graph has {g.n}")
    if g.n < 2:
        raise InputError("detection needs at least two nodes")
    if not connected(g):
        raise DisconnectedGraphError("graph is not connected; detection requires a single component")
    spec = eig_sym(laplacian(graph_matrix(g, p, cfg)))
    n = g.n
    if cfg.k == "partition":
        k = p.k
    elif cfg.k == "eigengap":
        k = estimate_k_eigengap(spec)
    else:
        k = int(cfg.k)
    if not 1 <= k <= n:
        raise InputError(f"cut-off k = {k} outside [1, {n}]")
    fr = ideal_lowpass(spec, k)
    if cfg.filter_mode == "polynomial":
        degree = cfg.poly_degree if cfg.poly_degree is not None else min(n - 1, 20)
        if degree > n - 1:
            raise InputError(f"poly_degree {degree} exceeds n - 1 = {n - 1}")
        fr = fit_polynomial_filter(spec, fr.alphas, degree)
    return PreparedFilter(spec, fr, k, p, cfg)


def run_specf(g: Graph, b, p: Partition, cfg: DetectionConfig = DetectionConfig()) -> DetectionReport:
    """Detect community-contextual anomalies in signal ``b`` on graph ``g``.

    Parameters
    ----------
    g : Graph
        Must be connected.
    b : array_like
        One value per node.
    p : Partition
        Community of each node.
    cfg : DetectionConfig

    Returns
    -------
    DetectionReport
    """
    return prepare(g, p, cfg).detect(b)
