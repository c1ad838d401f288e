"""Graph, partition and matrix-construction primitives.

Matrices are plain dense ``numpy.ndarray`` objects. Graphs and partitions are
frozen dataclasses whose array fields are marked read-only.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

#: Default weights of the community-expanded matrix: adjacent and same
#: community, adjacent across communities, non-adjacent and same community.
EXPANDED_WEIGHTS = (5.0, 3.0, 1.0)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Graph:
    """Undirected weighted simple graph on nodes ``0..n-1``.

    Edges are stored canonically as ``(i, j, w)`` with ``i < j``, sorted.
    Use :meth:`from_edges` to build one from arbitrary input; the constructor
    validates but does not reorder.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...] = ()
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise InputError(f"node count must be a nonnegative integer, got {self.n!r}")
        seen = set()
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        prev = None
        for e in self.edges:
            i, j, w = e
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InputError(f"edge {e} references a node outside [0, {self.n})")
            if i == j:
                raise InputError(f"self-loop on node {i}")
            if i > j:
                raise InputError(f"edge {e} is not canonical (expected i < j)")
            if (i, j) in seen:
                raise InputError(f"duplicate edge ({i}, {j})")
            if not (np.isfinite(w) and w > 0):
                raise InputError(f"edge ({i}, {j}) has non-positive or non-finite weight {w}")
            if prev is not None and (i, j) < prev:
                raise InputError("edges are not sorted")
            prev = (i, j)
            seen.add((i, j))
            nbrs[i].append(j)
            nbrs[j].append(i)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(a)) for a in nbrs))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence]) -> "Graph":
        """Build a graph from ``(i, j)`` or ``(i, j, w)`` items in any order.

        Each unordered pair may appear once; ``(j, i)`` after ``(i, j)`` counts
        as a duplicate. Missing weights default to 1.0.
        """
        canon = {}
        for e in edges:
            if len(e) == 2:
                i, j, w = e[0], e[1], 1.0
            elif len(e) == 3:
                i, j, w = e
            else:
                raise InputError(f"edge must have 2 or 3 fields, got {e!r}")
            i, j = int(i), int(j)
            if i == j:
                raise InputError(f"self-loop on node {i}")
            key = (min(i, j), max(i, j))
            if key in canon:
                raise InputError(f"duplicate edge {key}")
            canon[key] = float(w)
        return cls(int(n), tuple((i, j, w) for (i, j), w in sorted(canon.items())))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Sorted neighbour ids of node ``i``."""
        return self._adj[i]

    def degrees(self) -> np.ndarray:
        """Number of neighbours of each node (unweighted degree)."""
        return np.array([len(a) for a in self._adj], dtype=int)


@dataclass(frozen=True)
class Partition:
    """Assignment of every node to one of ``k`` nonempty communities ``0..k-1``."""

    assignment: np.ndarray

    def __post_init__(self):
        a = np.array(self.assignment)
        if a.ndim != 1 or a.size == 0:
            raise InputError("partition must be a nonempty 1-d sequence")
        if not np.issubdtype(a.dtype, np.integer):
            if not np.all(np.equal(np.mod(a, 1), 0)):
                raise InputError("community ids must be integers")
        a = a.astype(np.int64)
        if a.min() < 0:
            raise InputError("community ids must be nonnegative")
        present = np.unique(a)
        if not np.array_equal(present, np.arange(present.size)):
            raise InputError("community ids must be contiguous 0..k-1 with no empty community")
        object.__setattr__(self, "assignment", _readonly(a))

    @classmethod
    def from_labels(cls, labels: Sequence) -> "Partition":
        """Relabel arbitrary hashable community labels to ``0..k-1`` by first appearance."""
        ids: dict = {}
        return cls(np.array([ids.setdefault(c, len(ids)) for c in labels], dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.assignment.size)

    @property
    def k(self) -> int:
        return int(self.assignment.max()) + 1

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == c)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.assignment, other.assignment)

    def __hash__(self):
        return hash(self.assignment.tobytes())


def _check_partition(g: Graph, p: Partition):
    if p.n != g.n:
        raise InputError(f"partition covers {p.n} nodes but graph has {g.n}")


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense weighted adjacency matrix with zero diagonal."""
    a = np.zeros((g.n, g.n))
    if g.edges:
        i, j, w = (np.array(c) for c in zip(*g.edges))
        a[i.astype(int), j.astype(int)] = w
        a[j.astype(int), i.astype(int)] = w
    return a


def expanded_matrix(g: Graph, p: Partition, weights: Sequence[float] = EXPANDED_WEIGHTS) -> np.ndarray:
    """Community-expanded adjacency matrix.

    Entry ``(i, j)`` is ``weights[0]`` when ``i`` and ``j`` are neighbours in the
    same community, ``weights[1]`` when they are neighbours in different
    communities, ``weights[2]`` when they are not neighbours but share a
    community, and 0 otherwise. Edge weights of ``g`` are ignored; only
    adjacency matters.

    Parameters
    ----------
    g : Graph
    p : Partition
        Must cover every node of ``g``.
    weights : (float, float, float), optional
        Override for the default ``(5, 3, 1)``.
    """
    _check_partition(g, p)
    same_adj, cross_adj, same_far = (float(x) for x in weights)
    c = p.assignment
    same = c[:, None] == c[None, :]
    adj = adjacency_matrix(g) != 0
    w = np.where(same, same_far, 0.0)
    w[adj & same] = same_adj
    w[adj & ~same] = cross_adj
    np.fill_diagonal(w, 0.0)
    return w


def check_symmetric(m: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Return ``m`` as a float array after checking it is square, finite and symmetric."""
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.T), initial=0.0) > rtol * scale:
        raise InputError("matrix is not symmetric")
    return m


def laplacian(m: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian ``D - M`` where ``D`` holds the row sums of ``M``."""
    m = check_symmetric(m)
    off = m.copy()
    np.fill_diagonal(off, 0.0)
    if np.any(off < 0):
        raise InputError("matrix has a negative off-diagonal entry")
    if np.any(np.diag(m) != 0):
        raise InputError("matrix must have a zero diagonal")
    return np.diag(m.sum(axis=1)) - m


def connected(g: Graph) -> bool:
    """True iff ``g`` has exactly one connected component (BFS from node 0)."""
    if g.n == 0:
        return False
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.neighbors(u):
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return bool(seen.all())
