"""Synthetic attributed-network benchmarks.

* :func:`generate_planted_graph` draws a connected planted-partition graph.
* :func:`generate_normal_signal` spreads per-community seed values from
  community heads through the graph so that nodes of one community end up
  with similar values.
* :func:`inject_anomalies` lifts a random subset of nodes above the maximum
  of their own community.

All randomness comes from ``numpy.random.Generator`` (PCG64) seeded through
``numpy.random.SeedSequence``; :data:`RNG_ALGORITHM` is written into run
metadata.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DisconnectedGraphError, InputError
from .graph import EXPANDED_WEIGHTS, Graph, Partition, connected, expanded_matrix

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence"
MAX_CONNECT_ATTEMPTS = 100

INTER_RATE = 0.1
INTRA_MIN_RATE = 0.25
DECAY = 0.95


def make_rng(*entropy) -> np.random.Generator:
    """Generator seeded from a sequence of nonnegative integers."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(e) for e in entropy])))


@dataclass(frozen=True)
class PlantedGraphSpec:
    n: int
    k: int
    p_in: float
    p_out: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.k > self.n:
            raise InputError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if not (0 <= self.p_out < self.p_in <= 1):
            raise InputError(f"need 0 <= p_out < p_in <= 1, got p_in={self.p_in}, p_out={self.p_out}")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")

    @property
    def mu(self) -> float:
        """Mixing ratio ``p_out / (p_in + p_out)`` reported as metadata."""
        return self.p_out / (self.p_in + self.p_out)


@dataclass(frozen=True)
class AnomalySpec:
    an: float
    theta: float
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.an <= 1:
            raise InputError(f"anomaly fraction must lie in (0, 1], got {self.an}")
        if not 0 < self.theta <= 1:
            raise InputError(f"anomaly intensity must lie in (0, 1], got {self.theta}")
        if self.seed < 0:
            raise InputError("seed must be nonnegative")

    def count(self, n: int) -> int:
        """Number of nodes to corrupt: ``round(an * n)``, half up, at least 1."""
        return max(1, int(np.floor(self.an * n + 0.5)))


def community_sizes(n: int, k: int) -> list[int]:
    base, extra = divmod(n, k)
    return [base + (1 if c < extra else 0) for c in range(k)]


def generate_planted_graph(spec: PlantedGraphSpec) -> tuple[Graph, Partition]:
    """Sample a connected planted-partition graph.

    Communities are contiguous blocks of node ids with sizes differing by at
    most one (the first ``n % k`` communities get the extra node). A
    disconnected draw is rejected and redrawn from a derived seed, up to
    :data:`MAX_CONNECT_ATTEMPTS` times.

    Raises
    ------
    DisconnectedGraphError
        If no connected graph was drawn within the attempt cap.
    """
    n, k = spec.n, spec.k
    assignment = np.repeat(np.arange(k), community_sizes(n, k))
    part = Partition(assignment)
    iu, ju = np.triu_indices(n, 1)
    prob = np.where(assignment[iu] == assignment[ju], spec.p_in, spec.p_out)
    for attempt in range(MAX_CONNECT_ATTEMPTS):
        rng = make_rng(spec.seed, attempt)
        keep = rng.random(iu.size) < prob
        g = Graph(n, tuple((int(i), int(j), 1.0) for i, j in zip(iu[keep], ju[keep])))
        if connected(g):
            return g, part
    raise DisconnectedGraphError(
        f"no connected graph after {MAX_CONNECT_ATTEMPTS} attempts "
        f"(n={n}, k={k}, p_in={spec.p_in}, p_out={spec.p_out})"
    )


def community_base_signal(g: Graph, p: Partition) -> np.ndarray:
    """Seed value of each community, indexed by community id.

    Communities are ranked ascending by their number of inter-community edge
    endpoints (ties by id); the community at rank ``i`` gets that count times
    ``i + 1``.
    """
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} nodes but graph has {g.n}")
    c = p.assignment
    totals = np.zeros(p.k, dtype=np.int64)
    for i, j, _ in g.edges:
        if c[i] != c[j]:
            totals[c[i]] += 1
            totals[c[j]] += 1
    order = np.lexsort((np.arange(p.k), totals))
    s = np.zeros(p.k)
    for rank, comm in enumerate(order):
        s[comm] = totals[comm] * (rank + 1)
    return s


def choose_heads(g: Graph, p: Partition, rng: np.random.Generator) -> np.ndarray:
    """Highest-degree node of each community; ties broken uniformly at random."""
    deg = g.degrees()
    heads = np.empty(p.k, dtype=np.int64)
    for comm in range(p.k):
        members = p.members(comm)
        best = members[deg[members] == deg[members].max()]
        heads[comm] = best[0] if best.size == 1 else rng.choice(best)
    return heads


def transfer_rate(deg_i: int, deg_j: int, same_community: bool) -> float:
    """Fraction of node ``i``'s value passed to neighbour ``j`` in one step."""
    if not same_community:
        return INTER_RATE
    return max(INTRA_MIN_RATE, deg_i / (deg_j + deg_i))


def spread_from_heads(g: Graph, p: Partition, head_values: Sequence[float], heads: Sequence[int]) -> np.ndarray:
    """Raw propagated values before smoothing.

    Processing order is a FIFO queue that starts with the heads sorted by id;
    a node enters the queue the first time a processed neighbour reaches it.
    When node ``i`` is processed, each neighbour ``j`` (ascending id) receives
    ``transfer_rate(deg_i, deg_j, same) * x_i``, and ``x_i`` decays by 5%
    after every such transfer.
    """
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} nodes but graph has {g.n}")
    head_values = np.asarray(head_values, dtype=float)
    heads = np.asarray(heads, dtype=np.int64)
    if heads.shape != (p.k,) or head_values.shape != (p.k,):
        raise InputError(f"need one head and one head value per community ({p.k})")
    if np.any(p.assignment[heads] != np.arange(p.k)):
        raise InputError("each head must belong to its own community")
    c = p.assignment
    deg = g.degrees()
    x = np.zeros(g.n)
    marked = np.ones(g.n, dtype=bool)
    x[heads] = head_values
    marked[heads] = False
    queue = deque(np.sort(heads).tolist())
    while queue:
        i = queue.popleft()
        for j in g.neighbors(i):
            x[j] += x[i] * transfer_rate(deg[i], deg[j], c[i] == c[j])
            x[i] *= DECAY
            if marked[j]:
                marked[j] = False
                queue.append(j)
    return x


def propagate_signal(
    g: Graph,
    p: Partition,
    head_values: Sequence[float],
    heads: Sequence[int],
    weights: Sequence[float] = EXPANDED_WEIGHTS,
) -> np.ndarray:
    """Spread head values (:func:`spread_from_heads`) and smooth them.

    The value at each node is the expanded-matrix weighted average of the
    spread values at all other nodes.
    """
    x = spread_from_heads(g, p, head_values, heads)
    w = expanded_matrix(g, p, weights)
    totals = w.sum(axis=1)
    if np.any(totals == 0):
        raise InputError("a node has no expanded-matrix weight; graph must be connected")
    return (w @ x) / totals


def generate_normal_signal(g: Graph, p: Partition, seed: int = 0) -> np.ndarray:
    """Normal benchmark signal with community-coherent values.

    Heads are the highest-degree node of each community (seeded random
    tie-break) and start from :func:`community_base_signal`.
    """
    rng = make_rng(seed)
    heads = choose_heads(g, p, rng)
    return propagate_signal(g, p, community_base_signal(g, p), heads)


def inject_anomalies(g: Graph, s, p: Partition, spec: AnomalySpec) -> tuple[np.ndarray, np.ndarray]:
    """Corrupt a random subset of nodes.

    Each selected node ``i`` gets ``max(s over its community) * (1 + tax)``
    with ``tax`` uniform in ``[theta / 2, theta]``.

    Returns
    -------
    b : ndarray
        Anomalous signal.
    labels : ndarray of bool
        True exactly at the corrupted nodes.
    """
    s = np.asarray(s, dtype=float)
    if s.shape != (g.n,) or p.n != g.n:
        raise InputError("signal, graph and partition sizes differ")
    rng = make_rng(spec.seed)
    count = spec.count(g.n)
    chosen = np.sort(rng.choice(g.n, size=count, replace=False))
    u = rng.random(count)
    tax = spec.theta / 2 + u * (spec.theta / 2)
    cmax = np.array([s[p.members(comm)].max() for comm in range(p.k)])
    b = s.copy()
    b[chosen] = cmax[p.assignment[chosen]] * (1 + tax)
    labels = np.zeros(g.n, dtype=bool)
    labels[chosen] = True
    return b, labels


@dataclass(frozen=True)
class Benchmark:
    graph: Graph
    partition: Partition
    signal: np.ndarray
    anomalous: np.ndarray
    labels: np.ndarray
    metadata: dict


def make_benchmark(
    graph_spec: PlantedGraphSpec,
    anomaly_spec: AnomalySpec,
    signal_seed: Optional[int] = None,
) -> Benchmark:
    """Planted graph, normal signal and injected anomalies in one call."""
    g, p = generate_planted_graph(graph_spec)
    signal_seed = graph_spec.seed if signal_seed is None else signal_seed
    s = generate_normal_signal(g, p, signal_seed)
    b, labels = inject_anomalies(g, s, p, anomaly_spec)
    meta = {
        "rng": RNG_ALGORITHM,
        "graph": {
            "n": graph_spec.n,
            "k": graph_spec.k,
            "p_in": graph_spec.p_in,
            "p_out": graph_spec.p_out,
            "mu": graph_spec.mu,
            "seed": graph_spec.seed,
            "edges": g.m,
        },
        "signal": {"seed": signal_seed},
        "anomalies": {
            "an": anomaly_spec.an,
            "theta": anomaly_spec.theta,
            "seed": anomaly_spec.seed,
            "count": int(labels.sum()),
        },
    }
    return Benchmark(g, p, s, b, labels, meta)
