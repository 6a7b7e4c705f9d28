"""Text formats: base-graph and bundle files, presets, graph exports and
coloring certificates."""

from __future__ import annotations

import json
import re
from pathlib import Path

from .coloring import Coloring
from .core import (
    K2_BUNDLES,
    BaseGraph,
    Bundle,
    ExplicitGraph,
    complete_graph,
    cycle_graph,
    full_bundle,
    graph_from_edges,
    jr_bundle,
    jstar_bundle,
    make_base_graph,
    make_bundle,
    matching_bundle,
    mirror_bundle,
    path_graph,
)

EXPORT_FORMATS = ("dot", "graph6", "edgelist", "json")


class ParseError(ValueError):
    """Malformed input file or unknown preset."""


def _data_lines(text: str) -> list[str]:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    return lines


def _pairs(lines: list[str], where: str) -> list[tuple[int, int]]:
    out = []
    for line in lines:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{where}: expected 'i j', got {line!r}")
        try:
            out.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(f"{where}: non-integer entry in {line!r}") from exc
    return out


def _header(lines: list[str], where: str) -> int:
    if not lines:
        raise ParseError(f"{where}: empty file")
    try:
        return int(lines[0])
    except ValueError as exc:
        raise ParseError(f"{where}: first line must be the vertex count") from exc


def parse_base_graph(text: str, where: str = "base graph") -> BaseGraph:
    lines = _data_lines(text)
    n = _header(lines, where)
    try:
        return make_base_graph(n, _pairs(lines[1:], where))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def parse_bundle(text: str, where: str = "bundle") -> Bundle:
    lines = _data_lines(text)
    n = _header(lines, where)
    body = lines[1:]
    symmetrize = bool(body) and body[0].lower() == "symmetrize"
    if symmetrize:
        body = body[1:]
    try:
        return make_bundle(n, _pairs(body, where), symmetrize=symmetrize)
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc


def format_base_graph(base: BaseGraph) -> str:
    return "".join([f"{base.n}\n"] + [f"{i} {j}\n" for i, j in base.edges])


def format_bundle(bundle: Bundle) -> str:
    return "".join([f"{bundle.n}\n"] + [f"{i} {j}\n" for i, j in bundle.pairs])


_SIZED = re.compile(r"^(kn|cn|pn|en):(\d+)$")


def load_base(source: str) -> BaseGraph:
    """A base graph from a preset (``kn:4``, ``cn:5``, ``pn:3``, ``en:3``) or a file path."""
    name = source.removeprefix("preset:")
    m = _SIZED.match(name)
    if m:
        kind, n = m.group(1), int(m.group(2))
        try:
            if kind == "kn":
                return complete_graph(n)
            if kind == "cn":
                return cycle_graph(n)
            if kind == "pn":
                return path_graph(n)
            return make_base_graph(n, [])
        except ValueError as exc:
            raise ParseError(f"preset {source!r}: {exc}") from exc
    if source.startswith("preset:"):
        raise ParseError(f"unknown base preset {source!r}")
    path = Path(source)
    if not path.is_file():
        raise ParseError(f"base graph {source!r} is neither a preset nor a readable file")
    return parse_base_graph(path.read_text(encoding="utf-8"), where=source)


def load_bundle(source: str, n: int, base: BaseGraph | None = None) -> Bundle:
    """A bundle from a preset or a file path.

    Presets: ``matching``, ``full``, ``jstar``, ``empty``, ``jr:<r>``,
    ``mirror`` (needs the base graph) and ``j1``..``j8`` (n = 2 only).
    """
    name = source.removeprefix("preset:")
    try:
        if name == "matching":
            return matching_bundle(n)
        if name == "full":
            return full_bundle(n)
        if name == "jstar":
            return jstar_bundle(n)
        if name == "empty":
            return make_bundle(n, [])
        if name.startswith("jr:"):
            return jr_bundle(n, int(name[3:]))
        if name == "mirror":
            if base is None:
                raise ParseError("the mirror preset needs a base graph")
            return mirror_bundle(base)
        if name in K2_BUNDLES:
            if n != 2:
                raise ParseError(f"preset {name} is defined for n=2 only, not n={n}")
            return make_bundle(2, K2_BUNDLES[name])
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(f"preset {source!r}: {exc}") from exc
    if source.startswith("preset:"):
        raise ParseError(f"unknown bundle preset {source!r}")
    path = Path(source)
    if not path.is_file():
        raise ParseError(f"bundle {source!r} is neither a preset nor a readable file")
    bundle = parse_bundle(path.read_text(encoding="utf-8"), where=source)
    if bundle.n != n:
        raise ParseError(f"bundle {source!r} has side {bundle.n}, base graph has {n} vertices")
    return bundle


# ----------------------------------------------------------------- graph6


def _graph6_size(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)])
    return bytes([126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)])


def encode_graph6(vertex_count: int, edges) -> bytes:
    """Standard graph6 encoding without the optional ``>>graph6<<`` header."""
    bits = bytearray()
    adj = set()
    for a, b in edges:
        adj.add((min(a, b), max(a, b)))
    for j in range(1, vertex_count):
        for i in range(j):
            bits.append(1 if (i, j) in adj else 0)
    while len(bits) % 6:
        bits.append(0)
    body = bytes(
        63 + sum(bits[p + q] << (5 - q) for q in range(6)) for p in range(0, len(bits), 6)
    )
    return _graph6_size(vertex_count) + body


def decode_graph6(data: bytes) -> tuple[int, list[tuple[int, int]]]:
    data = data.strip()
    if data.startswith(b">>graph6<<"):
        data = data[len(b">>graph6<<"):]
    if not data:
        raise ParseError("empty graph6 string")
    if any(not 63 <= c <= 126 for c in data):
        raise ParseError("graph6 byte out of range 63..126")
    if data[0] != 126:
        n, pos = data[0] - 63, 1
    elif len(data) > 1 and data[1] == 126:
        n = 0
        for c in data[2:8]:
            n = n << 6 | (c - 63)
        pos = 8
    else:
        n = 0
        for c in data[1:4]:
            n = n << 6 | (c - 63)
        pos = 4
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[pos:]
    if len(body) != need:
        raise ParseError(f"graph6 body has {len(body)} bytes, expected {need}")
    edges = []
    idx = 0
    for j in range(1, n):
        for i in range(j):
            byte, off = divmod(idx, 6)
            if (body[byte] - 63) >> (5 - off) & 1:
                edges.append((i, j))
            idx += 1
    return n, sorted(edges)


# ----------------------------------------------------------------- exports


def export_graph(graph: ExplicitGraph, fmt: str) -> bytes:
    if fmt == "graph6":
        return encode_graph6(graph.vertex_count, graph.edge_list()) + b"\n"
    if fmt == "edgelist":
        return "".join(f"{a} {b}\n" for a, b in graph.edge_list()).encode()
    if fmt == "dot":
        lines = ["graph G {"]
        for v in range(graph.vertex_count):
            label = ".".join(str(c) for c in graph.decode(v))
            lines.append(f'  {v} [label="{label}"];')
        lines += [f"  {a} -- {b};" for a, b in graph.edge_list()]
        lines.append("}")
        return ("\n".join(lines) + "\n").encode()
    if fmt == "json":
        doc = {
            "n": graph.n,
            "k": graph.k,
            "vertex_count": graph.vertex_count,
            "edges": [list(e) for e in graph.edge_list()],
        }
        return (json.dumps(doc) + "\n").encode()
    raise ValueError(f"unsupported format {fmt!r}; choose from {', '.join(EXPORT_FORMATS)}")


def parse_edgelist(data: bytes, vertex_count: int) -> ExplicitGraph:
    edges = _pairs(_data_lines(data.decode()), "edge list")
    return graph_from_edges(vertex_count, edges)


_DOT_EDGE = re.compile(r"^\s*(\d+)\s*--\s*(\d+)\s*;")
_DOT_NODE = re.compile(r'^\s*(\d+)\s*\[label="([^"]*)"\];')


def parse_dot(data: bytes) -> tuple[dict[int, str], list[tuple[int, int]]]:
    """Read back the node labels and edges of a DOT export."""
    labels: dict[int, str] = {}
    edges = []
    for line in data.decode().splitlines():
        if m := _DOT_EDGE.match(line):
            edges.append((int(m.group(1)), int(m.group(2))))
        elif m := _DOT_NODE.match(line):
            labels[int(m.group(1))] = m.group(2)
    return labels, edges


# ----------------------------------------------------------------- certificates


def format_certificate(coloring: Coloring) -> str:
    lines = [f"palette {coloring.palette}"]
    lines += [f"{v} {c}" for v, c in enumerate(coloring.colors)]
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Coloring:
    lines = _data_lines(text)
    if not lines or not lines[0].startswith("palette"):
        raise ParseError("certificate must start with 'palette p'")
    try:
        palette = int(lines[0].split()[1])
    except (IndexError, ValueError) as exc:
        raise ParseError("bad palette line") from exc
    entries = dict(_pairs(lines[1:], "certificate"))
    if sorted(entries) != list(range(len(entries))):
        raise ParseError("certificate vertices must be exactly 0..N-1")
    return Coloring(palette, tuple(entries[v] for v in range(len(entries))))
