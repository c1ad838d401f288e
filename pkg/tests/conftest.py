import numpy as np
import pytest
from hypothesis import strategies as st

from specf.generators import PlantedGraphSpec, generate_planted_graph
from specf.graph import Graph, Partition


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@pytest.fixture
def p2():
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture
def planted60():
    return generate_planted_graph(PlantedGraphSpec(60, 3, 0.4, 0.05, seed=0))


@st.composite
def connected_graphs(draw, min_n=3, max_n=24):
    """Random connected graph: a random spanning tree plus extra random edges."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    edges = {}
    for pos in range(1, n):
        a, b = int(order[pos]), int(order[rng.integers(pos)])
        edges[(min(a, b), max(a, b))] = float(rng.uniform(0.5, 2.0))
    extra = rng.random((n, n)) < draw(st.floats(0.0, 0.5))
    for i, j in zip(*np.nonzero(np.triu(extra, 1))):
        edges.setdefault((int(i), int(j)), float(rng.uniform(0.5, 2.0)))
    k = draw(st.integers(1, max(1, n // 3)))
    assignment = np.r_[np.arange(k), rng.integers(0, k, n - k)]
    rng.shuffle(assignment)
    return Graph.from_edges(n, [(i, j, w) for (i, j), w in edges.items()]), Partition(assignment)


def validate_schema(doc, name):
    """Validate ``doc`` against a shipped schema, resolving sibling ``$ref``s."""
    import jsonschema
    from referencing import Registry, Resource

    from specf.io import load_schema

    names = ("report", "metrics", "metadata", "sweep_config", "sweep_summary", "ts_window", "ts_summary")
    registry = Registry().with_resources(
        (f"{n}.schema.json", Resource.from_contents(load_schema(n))) for n in names
    )
    jsonschema.Draft202012Validator(load_schema(name), registry=registry).validate(doc)
