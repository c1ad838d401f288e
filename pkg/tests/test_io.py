import json

import jsonschema
import numpy as np
import pytest

from specf import io as fio
from specf.errors import InputError
from specf.graph import Graph, Partition


def write(tmp_path, name, text, newline="\n"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8", newline=newline)
    return path


def test_edge_list_numeric_labels(tmp_path):
    path = write(tmp_path, "e.tsv", "# comment\n0\t1\n1\t2\t2.5  # trailing\n\n3 0\n")
    g, index = fio.read_edge_list(path)
    assert g.n == 4 and len(index) == 4
    assert g.edges == ((0, 1, 1.0), (0, 3, 1.0), (1, 2, 2.5))


def test_edge_list_string_labels(tmp_path):
    path = write(tmp_path, "e.tsv", "b\ta\na\tc\n")
    g, index = fio.read_edge_list(path)
    assert index.labels == ["b", "a", "c"]
    assert g.edges == ((0, 1, 1.0), (1, 2, 1.0))


@pytest.mark.parametrize(
    "text",
    ["0\t1\t2\t3\n", "0\t1\tx\n", "0\t0\n", "0\t1\n1\t0\n", "0\t1\t-1\n"],
    ids=["fields", "weight", "loop", "duplicate", "negative"],
)
def test_edge_list_errors(tmp_path, text):
    with pytest.raises(InputError):
        fio.read_edge_list(write(tmp_path, "e.tsv", text))


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        fio.read_edge_list(tmp_path / "nope.tsv")


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_edges(5, [(0, 1, 0.1), (1, 4, 3.0), (2, 3, 1.0)])
    fio.write_edge_list(tmp_path / "g.tsv", g)
    back, _ = fio.read_edge_list(tmp_path / "g.tsv")
    assert back == g


def test_partition_round_trip_and_relabel(tmp_path):
    p = Partition([0, 1, 1, 2, 0])
    fio.write_partition(tmp_path / "p.tsv", p)
    back, _ = fio.read_partition(tmp_path / "p.tsv")
    assert back == p
    sparse = write(tmp_path, "q.tsv", "0\t10\n1\t30\n2\t10\n")
    assert list(fio.read_partition(sparse)[0].assignment) == [0, 1, 0]


def test_partition_against_index(tmp_path):
    g, index = fio.read_edge_list(write(tmp_path, "e.tsv", "x\ty\ny\tz\n"))
    p, _ = fio.read_partition(write(tmp_path, "p.tsv", "z\tB\nx\tA\ny\tA\n"), index)
    assert list(p.assignment) == [0, 0, 1]
    with pytest.raises(InputError):
        fio.read_partition(write(tmp_path, "p2.tsv", "x\tA\ny\tA\n"), index)
    with pytest.raises(InputError):
        fio.read_partition(write(tmp_path, "p3.tsv", "x\tA\nx\tB\ny\tA\nz\tA\n"), index)


def test_signal_and_labels_round_trip(tmp_path):
    values = np.array([0.1, -2.0, 1e-300, 3.0])
    fio.write_signal(tmp_path / "s.csv", values)
    assert (tmp_path / "s.csv").read_bytes().startswith(b"node,value\r\n")
    np.testing.assert_array_equal(fio.read_signal(tmp_path / "s.csv"), values)
    flags = np.array([True, False, False, True])
    fio.write_labels(tmp_path / "l.csv", flags)
    np.testing.assert_array_equal(fio.read_labels(tmp_path / "l.csv"), flags)


@pytest.mark.parametrize(
    "name, text",
    [
        ("s.csv", "node,val\n0,1\n"),
        ("s.csv", "node,value\n0,abc\n"),
        ("s.csv", "node,value\n0,1\n0,2\n"),
        ("s.csv", "node,value\n0,nan\n"),
        ("l.csv", "node,label\n0,2\n"),
    ],
)
def test_node_csv_errors(tmp_path, name, text):
    path = write(tmp_path, name, text)
    reader = fio.read_signal if "value" in text else fio.read_labels
    with pytest.raises(InputError):
        reader(path)


def test_signal_missing_nodes(tmp_path):
    _, index = fio.read_edge_list(write(tmp_path, "e.tsv", "0\t1\n1\t2\n"))
    with pytest.raises(InputError):
        fio.read_signal(write(tmp_path, "s.csv", "node,value\n0,1\n2,1\n"), index)


def test_multiseries_round_trip(tmp_path):
    x = np.random.default_rng(0).normal(size=(3, 7))
    fio.write_multiseries(tmp_path / "m.csv", x)
    np.testing.assert_array_equal(fio.read_multiseries(tmp_path / "m.csv"), x)
    with pytest.raises(InputError):
        fio.read_multiseries(write(tmp_path, "bad.csv", "a,b\n1,2\n"))
    with pytest.raises(InputError):
        fio.read_multiseries(write(tmp_path, "rag.csv", "sensor_0,sensor_1\n1,2\n3\n"))


def test_dump_json_rejects_nan():
    assert fio.dump_json({"a": 1}).endswith("}\n")
    with pytest.raises(ValueError):
        fio.dump_json({"a": float("nan")})


def test_atomic_write_creates_parent(tmp_path):
    target = tmp_path / "a" / "b.txt"
    fio.atomic_write_text(target, "x")
    assert target.read_text() == "x"
    assert [p.name for p in target.parent.iterdir()] == ["b.txt"]


@pytest.mark.parametrize(
    "name", ["report", "metrics", "metadata", "sweep_config", "sweep_summary", "ts_window", "ts_summary"]
)
def test_schemas_are_valid(name):
    schema = fio.load_schema(name)
    jsonschema.Draft202012Validator.check_schema(schema)
    json.dumps(schema)
