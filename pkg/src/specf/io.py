"""Plain-text file formats.

Edge list
    ``src<TAB>dst[<TAB>weight]`` per line, ``#`` starts a comment.
Partition
    ``node<TAB>community`` per line.
Signal / labels
    CSV with header ``node,value`` / ``node,label``.
Multi-sensor series
    CSV with header ``sensor_0,...,sensor_{m-1}``, one row per time step.

Node labels in edge-list and partition files may be arbitrary strings. If
every label is a nonnegative integer the integers are used as node ids
(``n = max + 1``); otherwise labels get ids in order of first appearance.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputError
from .graph import Graph, Partition


def _data_lines(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split("\t") if "\t" in line else line.split()


class NodeIndex:
    """Bidirectional map between external node labels and dense ids."""

    def __init__(self, labels):
        self.labels = list(labels)
        self._ids = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._ids) != len(self.labels):
            raise InputError("node labels are not unique")

    @classmethod
    def from_tokens(cls, tokens):
        tokens = list(dict.fromkeys(tokens))
        if tokens and all(t.isdigit() for t in tokens):
            n = max(int(t) for t in tokens) + 1
            return cls([str(i) for i in range(n)])
        return cls(tokens)

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, label) -> int:
        try:
            return self._ids[label]
        except KeyError:
            raise InputError(f"unknown node label {label!r}") from None


def read_edge_list(path, index: NodeIndex = None) -> tuple[Graph, NodeIndex]:
    """Parse an edge-list file. Duplicate pairs are an error, not merged."""
    rows = []
    for lineno, fields in _data_lines(path):
        if len(fields) not in (2, 3):
            raise InputError(f"{path}:{lineno}: expected 2 or 3 fields, got {len(fields)}")
        try:
            w = float(fields[2]) if len(fields) == 3 else 1.0
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad weight {fields[2]!r}") from None
        rows.append((fields[0], fields[1], w, lineno))
    if index is None:
        index = NodeIndex.from_tokens(t for r in rows for t in r[:2])
    try:
        g = Graph.from_edges(len(index), [(index[a], index[b], w) for a, b, w, _ in rows])
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    return g, index


def write_edge_list(path, g: Graph):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# n={g.n} m={g.m}\n")
        for i, j, w in g.edges:
            fh.write(f"{i}\t{j}\t{w!r}\n")


def read_partition(path, index: NodeIndex = None) -> tuple[Partition, NodeIndex]:
    """Parse a partition file; every node of ``index`` must be assigned exactly once."""
    pairs = []
    for lineno, fields in _data_lines(path):
        if len(fields) != 2:
            raise InputError(f"{path}:{lineno}: expected 2 fields, got {len(fields)}")
        pairs.append((fields[0], fields[1]))
    if index is None:
        index = NodeIndex.from_tokens(a for a, _ in pairs)
    comm = [None] * len(index)
    for node, c in pairs:
        i = index[node]
        if comm[i] is not None:
            raise InputError(f"{path}: node {node!r} assigned twice")
        comm[i] = c
    missing = [index.labels[i] for i, c in enumerate(comm) if c is None]
    if missing:
        raise InputError(f"{path}: nodes without a community: {missing[:5]}")
    if all(c.isdigit() for c in comm):
        ids = sorted({int(c) for c in comm})
        remap = {c: r for r, c in enumerate(ids)}
        return Partition(np.array([remap[int(c)] for c in comm])), index
    return Partition.from_labels(comm), index


def write_partition(path, p: Partition):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for i, c in enumerate(p.assignment):
            fh.write(f"{i}\t{c}\n")


def _read_node_csv(path, column, index, parse):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or [h.strip() for h in rows[0]] != ["node", column]:
        raise InputError(f"{path}: expected header 'node,{column}'")
    body = [r for r in rows[1:] if r]
    if index is None:
        index = NodeIndex.from_tokens(r[0].strip() for r in body)
    out = [None] * len(index)
    for lineno, r in enumerate(body, 2):
        if len(r) != 2:
            raise InputError(f"{path}:{lineno}: expected 2 fields")
        i = index[r[0].strip()]
        if out[i] is not None:
            raise InputError(f"{path}:{lineno}: node {r[0]!r} repeated")
        try:
            out[i] = parse(r[1].strip())
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad {column} {r[1]!r}") from None
    if any(v is None for v in out):
        raise InputError(f"{path}: {sum(v is None for v in out)} nodes missing")
    return out, index


def _parse_label(text):
    if text not in ("0", "1"):
        raise ValueError(text)
    return text == "1"


def read_signal(path, index: NodeIndex = None) -> np.ndarray:
    values, _ = _read_node_csv(path, "value", index, float)
    arr = np.array(values, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{path}: non-finite signal value")
    return arr


def read_labels(path, index: NodeIndex = None) -> np.ndarray:
    values, _ = _read_node_csv(path, "label", index, _parse_label)
    return np.array(values, dtype=bool)


def write_signal(path, values, labels=None):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["node", "value"])
        for i, v in enumerate(values):
            w.writerow([labels[i] if labels else i, repr(float(v))])


def write_labels(path, flags, labels=None):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["node", "label"])
        for i, v in enumerate(flags):
            w.writerow([labels[i] if labels else i, int(bool(v))])


def read_multiseries(path) -> np.ndarray:
    """Sensor readings as an array with one row per sensor."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = [r for r in csv.reader(fh) if r]
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if header != [f"sensor_{i}" for i in range(len(header))]:
        raise InputError(f"{path}: header must be sensor_0..sensor_{{m-1}}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise InputError(f"{path}: ragged rows")
    return data.T


def write_multiseries(path, series):
    series = np.asarray(series, dtype=float)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow([f"sensor_{i}" for i in range(series.shape[0])])
        for row in series.T:
            w.writerow([repr(float(v)) for v in row])


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def atomic_write_text(path, text: str):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def read_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read JSON from {path}: {exc}") from exc


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package, e.g. ``load_schema("report")``."""
    from importlib.resources import files

    return json.loads(files("specf").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8"))
