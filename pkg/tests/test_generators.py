import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specf.errors import DisconnectedGraphError, InputError
from specf.generators import (
    AnomalySpec,
    PlantedGraphSpec,
    community_base_signal,
    community_sizes,
    generate_normal_signal,
    generate_planted_graph,
    inject_anomalies,
    make_benchmark,
    propagate_signal,
    spread_from_heads,
    transfer_rate,
)
from specf.graph import Graph, Partition, adjacency_matrix

from conftest import connected_graphs


def test_planted_needs_bridges():
    with pytest.raises(DisconnectedGraphError):
        generate_planted_graph(PlantedGraphSpec(6, 2, 1.0, 0.0, seed=1))
    g, p = generate_planted_graph(PlantedGraphSpec(6, 2, 1.0, 0.5, seed=1))
    a = adjacency_matrix(g)
    np.testing.assert_array_equal(p.assignment, [0, 0, 0, 1, 1, 1])
    assert np.all(a[:3, :3] + np.eye(3) == 1) and np.all(a[3:, 3:] + np.eye(3) == 1)
    assert a[:3, 3:].sum() >= 1


def test_planted_single_community_is_complete():
    g, p = generate_planted_graph(PlantedGraphSpec(7, 1, 1.0, 0.0, seed=3))
    assert g.m == 21 and p.k == 1


def test_planted_deterministic_and_balanced():
    spec = PlantedGraphSpec(53, 5, 0.3, 0.02, seed=11)
    g1, p1 = generate_planted_graph(spec)
    g2, p2 = generate_planted_graph(spec)
    assert g1.edges == g2.edges and p1 == p2
    assert community_sizes(53, 5) == [11, 11, 11, 10, 10]
    assert np.bincount(p1.assignment).tolist() == [11, 11, 11, 10, 10]
    g3, _ = generate_planted_graph(PlantedGraphSpec(53, 5, 0.3, 0.02, seed=12))
    assert g3.edges != g1.edges


@pytest.mark.parametrize(
    "args", [(5, 6, 0.5, 0.1), (5, 2, 0.1, 0.1), (5, 2, 0.5, -0.1), (5, 2, 1.5, 0.1), (0, 1, 0.5, 0.1)]
)
def test_planted_spec_validation(args):
    with pytest.raises(InputError):
        PlantedGraphSpec(*args)


def test_mu_metadata():
    assert PlantedGraphSpec(10, 2, 0.2, 0.05).mu == pytest.approx(0.2)


def test_base_signal_two_communities():
    # 4 inter-community edges; both communities total 4
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5), (0, 5)])
    np.testing.assert_array_equal(community_base_signal(g, Partition([0, 0, 0, 1, 1, 1])), [4, 8])


def test_base_signal_single_community():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    np.testing.assert_array_equal(community_base_signal(g, Partition([0, 0, 0])), [0])


def test_base_signal_path_of_communities():
    # communities 0 - 1 - 2 joined by 2 and 3 edges
    edges = [(0, 1), (2, 3), (4, 5), (0, 2), (1, 3), (2, 4), (3, 5), (3, 4)]
    g = Graph.from_edges(6, edges)
    p = Partition([0, 0, 1, 1, 2, 2])
    comm = p.assignment
    totals = {c: 0 for c in range(3)}
    for i, j, _ in g.edges:
        if comm[i] != comm[j]:
            totals[comm[i]] += 1
            totals[comm[j]] += 1
    assert totals == {0: 2, 1: 5, 2: 3}
    ranked = sorted(totals, key=lambda c: (totals[c], c))
    expected = [0] * 3
    for rank, c in enumerate(ranked):
        expected[c] = totals[c] * (rank + 1)
    np.testing.assert_array_equal(community_base_signal(g, p), expected)
    np.testing.assert_array_equal(expected, [2, 15, 6])


def test_two_node_trace():
    g = Graph.from_edges(2, [(0, 1)])
    p = Partition([0, 0])
    np.testing.assert_array_equal(spread_from_heads(g, p, [10.0], [0]), [12.0, 4.75])
    np.testing.assert_array_equal(propagate_signal(g, p, [10.0], [0]), [4.75, 12.0])
    np.testing.assert_array_equal(propagate_signal(g, p, [10.0], [1]), [12.0, 4.75])


def test_transfer_rates():
    assert transfer_rate(3, 3, False) == 0.1
    assert transfer_rate(1, 3, True) == 0.25
    assert transfer_rate(1, 9, True) == 0.25
    assert transfer_rate(2, 6, True) == 0.25
    assert transfer_rate(2, 2, True) == 0.5
    assert transfer_rate(3, 1, True) == 0.75


def test_star_trace_uses_rate_floor():
    # head 0 is the hub (degree 3), leaves have degree 1
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    x = spread_from_heads(g, Partition([0, 0, 0, 0]), [100.0], [0])
    # hub pays 0.75 of its current value to each leaf, decaying 5% after each
    hub = 100.0
    leaves = []
    for _ in range(3):
        leaves.append(0.75 * hub)
        hub *= 0.95
    # each leaf then returns max(0.25, 1/4) = 0.25 of its value and decays once
    for v in leaves:
        hub += 0.25 * v
    np.testing.assert_allclose(x, [hub] + [0.95 * v for v in leaves], rtol=1e-14)


def test_heads_must_match_communities():
    g = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(InputError):
        spread_from_heads(g, Partition([0, 1]), [1.0, 2.0], [1, 0])


def test_normal_signal_deterministic(planted60):
    g, p = planted60
    a = generate_normal_signal(g, p, 5)
    np.testing.assert_array_equal(a, generate_normal_signal(g, p, 5))
    assert np.all(np.isfinite(a)) and np.all(a >= 0)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(min_n=3, max_n=30), st.integers(0, 2**31))
def test_normal_signal_nonnegative(gp, seed):
    g, p = gp
    s = generate_normal_signal(g, p, seed)
    assert np.all(np.isfinite(s)) and np.all(s >= 0)


def test_signal_is_community_coherent():
    ratios = []
    for seed in range(10):
        g, p = generate_planted_graph(PlantedGraphSpec(200, 5, 0.25, 0.02, seed))
        s = generate_normal_signal(g, p, seed)
        intra = np.mean([s[p.members(c)].std() / s[p.members(c)].mean() for c in range(p.k)])
        ratios.append(intra / (s.std() / s.mean()))
    assert np.median(ratios) < 1


def test_injection_range_example():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    p = Partition([0, 0, 1, 1])
    s = np.array([100.0, 40.0, 7.0, 3.0])
    for seed in range(50):
        b, labels = inject_anomalies(g, s, p, AnomalySpec(0.25, 0.1, seed))
        (i,) = np.flatnonzero(labels)
        top = 100.0 if i < 2 else 7.0
        assert top * 1.05 <= b[i] <= top * 1.10


def test_injection_small_theta_limit():
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    s = np.array([1.0, 2.0, 3.0])
    b, labels = inject_anomalies(g, s, Partition([0, 0, 0]), AnomalySpec(0.01, 1e-12, 4))
    assert labels.sum() == 1
    assert b[labels][0] == pytest.approx(3.0, abs=1e-9)


def test_injection_count():
    assert AnomalySpec(0.05, 0.1).count(500) == 25
    assert AnomalySpec(0.001, 0.1).count(500) == 1
    assert AnomalySpec(0.005, 0.1).count(500) == 3  # 2.5 rounds half up
    g, p = generate_planted_graph(PlantedGraphSpec(500, 10, 0.2, 0.02, 0))
    _, labels = inject_anomalies(g, np.ones(500), p, AnomalySpec(0.05, 0.1, 0))
    assert labels.sum() == 25


@pytest.mark.parametrize("an, theta", [(0, 0.1), (1.2, 0.1), (0.1, 0), (0.1, 1.5)])
def test_anomaly_spec_validation(an, theta):
    with pytest.raises(InputError):
        AnomalySpec(an, theta)


@settings(max_examples=60, deadline=None)
@given(
    connected_graphs(min_n=3, max_n=30),
    st.floats(0.01, 1.0),
    st.floats(1e-6, 1.0),
    st.integers(0, 2**31),
)
def test_injection_properties(gp, an, theta, seed):
    g, p = gp
    s = generate_normal_signal(g, p, seed) + 1.0
    b, labels = inject_anomalies(g, s, p, AnomalySpec(an, theta, seed))
    assert labels.sum() == AnomalySpec(an, theta).count(g.n)
    np.testing.assert_array_equal(b[~labels], s[~labels])
    cmax = np.array([s[p.members(c)].max() for c in range(p.k)])[p.assignment]
    lab = labels
    assert np.all(b[lab] >= cmax[lab] * (1 + theta / 2))
    assert np.all(b[lab] <= cmax[lab] * (1 + theta))
    assert np.all(b[lab] > cmax[lab])
    b2, labels2 = inject_anomalies(g, s, p, AnomalySpec(an, theta, seed))
    np.testing.assert_array_equal(b, b2)
    np.testing.assert_array_equal(labels, labels2)


def test_benchmark_metadata():
    bm = make_benchmark(PlantedGraphSpec(40, 2, 0.4, 0.05, 3), AnomalySpec(0.1, 0.1, 9))
    assert bm.metadata["graph"]["mu"] == pytest.approx(0.05 / 0.45)
    assert bm.metadata["anomalies"]["count"] == 4 == bm.labels.sum()
    assert "PCG64" in bm.metadata["rng"]
