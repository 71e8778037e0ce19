"""Immutable simple graphs with string vertex labels.

Vertex labels are opaque printable tokens (no whitespace).  Combining
operations relabel their inputs apart by appending ``#i`` with the part
index, so derived labels never collide with each other.

An optional provenance map records, per vertex, which construction role
produced it (branch copy, replicated path interior, ...).  Provenance is
carried metadata: two graphs with equal vertex and edge sets compare
equal regardless of it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

log = logging.getLogger("minorbench")

Edge = tuple[str, str]


class GraphError(ValueError):
    """Domain error: malformed graph value or violated precondition."""


class ParseError(GraphError):
    """Input text could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def edge(u: str, v: str) -> Edge:
    """Normalized edge: endpoints sorted, self-loops rejected."""
    if u == v:
        raise GraphError(f"self-loop at {u!r}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """An immutable finite simple graph."""

    vertices: frozenset[str]
    edges: frozenset[Edge]
    provenance: Mapping[str, str] | None = field(default=None, compare=False)

    def __post_init__(self):
        for v in self.vertices:
            if not v or any(c.isspace() for c in v):
                raise GraphError(f"bad vertex label {v!r}")
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop at {u!r}")
            if u > v:
                raise GraphError(f"edge {e!r} not normalized")
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"edge {e!r} has endpoint outside vertex set")
        if self.provenance is not None:
            if set(self.provenance) != set(self.vertices):
                raise GraphError("provenance must cover every vertex exactly once")

    @staticmethod
    def build(vertices: Iterable[str], edges: Iterable[tuple[str, str]],
              provenance: Mapping[str, str] | None = None) -> "Graph":
        """Normalizing constructor; adds edge endpoints to the vertex set."""
        vs = set(vertices)
        es = set()
        for u, v in edges:
            es.add(edge(u, v))
            vs.add(u)
            vs.add(v)
        prov = dict(provenance) if provenance is not None else None
        return Graph(frozenset(vs), frozenset(es), prov)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    # -- basic queries -------------------------------------------------

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def neighbors(self, v: str) -> set[str]:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return {w for e in self.edges if v in e for w in e if w != v}

    def degree(self, v: str) -> int:
        if v not in self.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, u: str, v: str) -> bool:
        return edge(u, v) in self.edges

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def induced(self, vs: Iterable[str]) -> "Graph":
        """Subgraph induced on the given vertices (provenance restricted)."""
        keep = set(vs)
        unknown = keep - self.vertices
        if unknown:
            raise GraphError(f"unknown vertices {sorted(unknown)!r}")
        prov = None
        if self.provenance is not None:
            prov = {v: self.provenance[v] for v in keep}
        return Graph(frozenset(keep),
                     frozenset(e for e in self.edges if e[0] in keep and e[1] in keep),
                     prov)

    def edge_subgraph(self, es: Iterable[Edge]) -> "Graph":
        """Subgraph consisting of the given edges and their endpoints."""
        keep = set(es)
        bad = keep - self.edges
        if bad:
            raise GraphError(f"edges not in graph: {sorted(bad)!r}")
        vs = {x for e in keep for x in e}
        return Graph(frozenset(vs), frozenset(keep), None)

    def is_connected(self) -> bool:
        if len(self.vertices) <= 1:
            return True
        adj = self.adjacency()
        start = min(self.vertices)
        seen = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)


# -- external formats ---------------------------------------------------

def parse_graph(text: str) -> Graph:
    """Parse the plain edge-list format.

    First significant line is ``n m``, followed by n vertex-label lines
    and m ``u v`` edge lines.  Blank lines and lines starting with ``#``
    are ignored; ``#`` elsewhere is part of a label, never a comment.
    """
    lines: list[tuple[int, str]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((i, stripped))
    if not lines:
        raise ParseError("empty input")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"expected 'n m' header, got {header!r}", lineno)
    n, m = int(parts[0]), int(parts[1])
    if len(lines) != 1 + n + m:
        raise ParseError(
            f"expected {n} vertex lines and {m} edge lines, got {len(lines) - 1}",
            lineno)
    vertices: list[str] = []
    seen: set[str] = set()
    for lineno, tok in lines[1:1 + n]:
        if len(tok.split()) != 1:
            raise ParseError(f"expected a single vertex label, got {tok!r}", lineno)
        if tok in seen:
            raise ParseError(f"duplicate vertex {tok!r}", lineno)
        seen.add(tok)
        vertices.append(tok)
    edges: set[Edge] = set()
    for lineno, ln in lines[1 + n:]:
        toks = ln.split()
        if len(toks) != 2:
            raise ParseError(f"expected 'u v', got {ln!r}", lineno)
        u, v = toks
        if u not in seen or v not in seen:
            raise ParseError(f"edge endpoint not declared: {ln!r}", lineno)
        if u == v:
            raise ParseError(f"self-loop {ln!r}", lineno)
        e = edge(u, v)
        if e in edges:
            raise ParseError(f"duplicate edge {ln!r}", lineno)
        edges.add(e)
    return Graph(frozenset(vertices), frozenset(edges))


def serialize(g: Graph, format: str = "edge-list") -> str:
    """Render a graph as edge-list or DOT text."""
    if format == "edge-list":
        out = [f"{len(g.vertices)} {len(g.edges)}"]
        out.extend(g.sorted_vertices())
        out.extend(f"{u} {v}" for u, v in g.sorted_edges())
        return "\n".join(out) + "\n"
    if format == "dot":
        out = ["graph {"]
        for v in g.sorted_vertices():
            if g.provenance is not None:
                role = g.provenance[v].replace('"', "'")
                out.append(f'  "{v}" [role="{role}"];')
            else:
                out.append(f'  "{v}";')
        for u, v in g.sorted_edges():
            out.append(f'  "{u}" -- "{v}";')
        out.append("}")
        return "\n".join(out) + "\n"
    raise GraphError(f"unknown format {format!r}")


def parse_graph6(text: str) -> Graph:
    """Decode a single graph6 line (vertices are named 0..n-1)."""
    s = text.strip()
    if s.startswith(">>graph6<<"):
        s = s[len(">>graph6<<"):]
    if not s:
        raise ParseError("empty graph6 input")
    data = [ord(c) - 63 for c in s]
    if any(b < 0 or b > 63 for b in data):
        raise ParseError("graph6 byte out of range")
    if data[0] == 63:
        if len(data) < 4:
            raise ParseError("truncated graph6 size")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        n = data[0]
        body = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) < need:
        raise ParseError("truncated graph6 bit data")
    bits: list[int] = []
    for b in body[:need]:
        for k in range(5, -1, -1):
            bits.append((b >> k) & 1)
    vertices = [str(i) for i in range(n)]
    edges = set()
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.add(edge(str(i), str(j)))
            idx += 1
    return Graph(frozenset(vertices), frozenset(edges))


# -- operations ----------------------------------------------------------

def delete_edges(g: Graph, x: Iterable[Edge]) -> Graph:
    """Same vertices, edges minus x.  x must be a subset of the edges."""
    xs = {edge(u, v) for u, v in x}
    missing = xs - g.edges
    if missing:
        raise GraphError(f"cannot delete absent edges {sorted(missing)!r}")
    return Graph(g.vertices, g.edges - xs,
                 dict(g.provenance) if g.provenance is not None else None)


def derived_label(base: str, i: int) -> str:
    return f"{base}#{i}"


def disjoint_union_with_identifications(
        parts: list[Graph],
        identify: Iterable[frozenset[str]] = ()) -> Graph:
    """Disjoint union of the parts, then merge each identification group.

    Part i is relabeled by appending ``#i`` to every vertex first; the
    identification groups refer to these relabeled names.  Each group is
    merged to a single vertex (its lexicographically smallest member)
    inheriting all incident edges.  Groups must be pairwise disjoint.
    Accidental parallel edges are collapsed with a warning.
    """
    return relabeled_union(parts, identify)[0]


def relabeled_union(
        parts: list[Graph],
        identify: Iterable[frozenset[str]] = ()
) -> tuple[Graph, dict[tuple[int, str], str]]:
    """Union as above, plus the map (part index, old label) -> final label."""
    if not parts:
        raise GraphError("need at least one part")
    vertices: set[str] = set()
    edges: set[Edge] = set()
    any_prov = any(p.provenance is not None for p in parts)
    prov: dict[str, str] = {}
    for i, part in enumerate(parts):
        for v in part.vertices:
            nv = derived_label(v, i)
            vertices.add(nv)
            if any_prov:
                if part.provenance is not None:
                    prov[nv] = part.provenance[v]
                else:
                    prov[nv] = f"part{i}"
        for u, v in part.edges:
            edges.add(edge(derived_label(u, i), derived_label(v, i)))

    groups = [frozenset(gp) for gp in identify]
    seen_members: set[str] = set()
    rename: dict[str, str] = {}
    for gp in groups:
        if len(gp) < 2:
            raise GraphError("identification group needs at least two vertices")
        unknown = gp - vertices
        if unknown:
            raise GraphError(f"identification of unknown vertices {sorted(unknown)!r}")
        if gp & seen_members:
            raise GraphError("identification groups must be pairwise disjoint")
        seen_members |= gp
        target = min(gp)
        for v in gp:
            rename[v] = target
        if any_prov:
            tags = sorted({prov[v] for v in gp})
            prov[target] = "&".join(tags)

    new_vertices = {rename.get(v, v) for v in vertices}
    new_edges: set[Edge] = set()
    dropped = 0
    for u, v in edges:
        nu, nv = rename.get(u, u), rename.get(v, v)
        if nu == nv:
            raise GraphError(f"identification collapses edge {u!r}--{v!r} to a loop")
        e = edge(nu, nv)
        if e in new_edges:
            dropped += 1
        new_edges.add(e)
    if dropped:
        log.warning("union collapsed %d parallel edge(s)", dropped)
    final_of = {(i, v): rename.get(derived_label(v, i), derived_label(v, i))
                for i, part in enumerate(parts) for v in part.vertices}
    if any_prov:
        prov = {v: t for v, t in prov.items() if v in new_vertices}
        return Graph(frozenset(new_vertices), frozenset(new_edges), prov), final_of
    return Graph(frozenset(new_vertices), frozenset(new_edges)), final_of


def connected_components(g: Graph) -> list[Graph]:
    """Induced connected components, sorted by smallest vertex label."""
    adj = g.adjacency()
    unseen = set(g.vertices)
    comps = []
    while unseen:
        start = min(unseen)
        comp = {start}
        stack = [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        unseen -= comp
        comps.append(g.induced(comp))
    comps.sort(key=lambda c: min(c.vertices))
    return comps
