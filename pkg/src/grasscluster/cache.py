"""Exchange-graph cache files.

A cache is a sequence of length-prefixed UTF-8 records. Each record is its
byte length in decimal on one line, followed by the payload and a newline.
The first record is a JSON header; the rest are tab-separated lines:

    C <coefficient id>
    I <initial cluster id>
    V <variable id> <canonical polynomial text>
    S <depth> <cluster ids> <matrix rows>
    E <seed index> <neighbour indices>

Seeds are listed in discovery order and referenced by index. Matrix rows are
separated by ``;`` and entries by ``,``; a missing neighbour is ``-``.
"""

from __future__ import annotations

import io
import json

from .cluster import ExchangeGraph, ExploreResult, SeedRecord, VariableRegistry, cluster_key
from .laurent import VarId, parse_poly

SCHEMA = "grasscluster.graph/1"
MAGIC = "grasscluster-cache"


class CacheFormatError(ValueError):
    """The file is not a readable cache of this schema."""


def _write_record(out, payload):
    data = payload.encode("utf-8")
    out.write(f"{len(data)}\n".encode("ascii"))
    out.write(data)
    out.write(b"\n")


def _read_records(buf):
    pos = 0
    while pos < len(buf):
        nl = buf.index(b"\n", pos)
        size = int(buf[pos:nl])
        start = nl + 1
        payload = buf[start : start + size]
        if len(payload) != size or buf[start + size : start + size + 1] != b"\n":
            raise CacheFormatError("truncated record")
        yield payload.decode("utf-8")
        pos = start + size + 1


def dump_exploration(result, manifest=None):
    """Serialize an :class:`ExploreResult` to bytes."""
    graph, reg = result.graph, result.variables
    out = io.BytesIO()
    header = {
        "magic": MAGIC,
        "schema": SCHEMA,
        "k": reg.k,
        "n": reg.n,
        "closed": result.closed,
        "stats": result.stats,
        "seeds": len(graph),
        "variables": len(reg),
        "manifest": manifest,
    }
    _write_record(out, json.dumps(header, sort_keys=True))
    for c in graph.coefficients:
        _write_record(out, "C\t" + c.text())
    for v in reg.initial:
        _write_record(out, "I\t" + v.text())
    for v in reg.mutable:
        _write_record(out, f"V\t{v.text()}\t{reg.value(v).text()}")
    index = {key: i for i, key in enumerate(graph.order)}
    for key in graph.order:
        rec = graph.seeds[key]
        rows = ";".join(",".join(str(b) for b in row) for row in rec.entries)
        _write_record(out, f"S\t{rec.depth}\t{' '.join(v.text() for v in rec.cluster)}\t{rows}")
    for key in graph.order:
        nbrs = " ".join("-" if x is None else str(index[x]) for x in graph.edges[key])
        _write_record(out, f"E\t{index[key]}\t{nbrs}")
    return out.getvalue()


def load_exploration(data):
    """Rebuild an :class:`ExploreResult` from :func:`dump_exploration` bytes."""
    records = _read_records(data)
    try:
        header = json.loads(next(records))
    except (StopIteration, ValueError) as exc:
        raise CacheFormatError("missing header") from exc
    if header.get("magic") != MAGIC or header.get("schema") != SCHEMA:
        raise CacheFormatError(f"unsupported cache schema {header.get('schema')!r}")
    k, n = header["k"], header["n"]
    coeffs, initial, variables, seeds, edges = [], [], [], [], {}
    for rec in records:
        kind, _, rest = rec.partition("\t")
        if kind == "C":
            coeffs.append(VarId.parse(rest, n))
        elif kind == "I":
            initial.append(VarId.parse(rest, n))
        elif kind == "V":
            name, text = rest.split("\t")
            variables.append((VarId.parse(name, n), parse_poly(text, n)))
        elif kind == "S":
            depth, cluster, rows = rest.split("\t")
            ids = tuple(VarId.parse(t, n) for t in cluster.split())
            entries = tuple(tuple(int(b) for b in row.split(",")) for row in rows.split(";"))
            seeds.append(SeedRecord(ids, entries, int(depth)))
        elif kind == "E":
            i, nbrs = rest.split("\t")
            edges[int(i)] = [None if t == "-" else int(t) for t in nbrs.split()]
        else:
            raise CacheFormatError(f"unknown record kind {kind!r}")
    reg = VariableRegistry(initial, coeffs, k, n)
    for v, poly in variables:
        if v not in reg:
            reg._store(poly, v)
            reg.mutable.append(v)
            if v.kind == VarId.ANON:
                reg._next_anon = max(reg._next_anon, v.payload + 1)
        elif reg.value(v) != poly:
            raise CacheFormatError(f"{v.text()} disagrees with the initial cluster")
    for v, _ in variables:
        reg.fingerprints[reg.fingerprinter.of_poly(reg.value(v))] = v
    graph = ExchangeGraph(tuple(coeffs), k, n)
    keys = [cluster_key(s.cluster) for s in seeds]
    for key, s in zip(keys, seeds):
        graph.add(key, s)
    for i, nbrs in edges.items():
        graph.edges[keys[i]] = [None if j is None else keys[j] for j in nbrs]
    return ExploreResult(graph, reg, header["closed"], header["stats"])


def write_cache(path, result, manifest=None):
    with open(path, "wb") as fh:
        fh.write(dump_exploration(result, manifest))


def read_cache(path):
    with open(path, "rb") as fh:
        return load_exploration(fh.read())
