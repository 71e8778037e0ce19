"""Structural decompositions: blocks, cutvertices, segments, shapes.

A *branch vertex* of a subgraph g relative to a context graph is a
vertex of g whose context degree is at least 3.  A *segment* is a
maximal chain of g-edges whose interior vertices are non-branch and
have g-degree 2; segments are what the gadget builder replicates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import Edge, Graph, GraphError, connected_components, edge
from .embed import is_minor

__all__ = [
    "Block", "BlockCutTree", "MinorPredicate", "Segment", "Shape",
    "block_cut_tree", "branch_vertices", "choose_leaf_block",
    "classify_shape", "connected_components", "minimal_subtree",
    "segment_decomposition",
]


@dataclass(frozen=True)
class Block:
    """A block of the host: maximal 2-connected subgraph or bridge."""

    id: int
    graph: Graph
    is_trivial: bool  # exactly one edge

    def sort_key(self):
        return (tuple(self.graph.sorted_vertices()), tuple(self.graph.sorted_edges()))


@dataclass(frozen=True)
class BlockCutTree:
    """Bipartite incidence tree between blocks and cutvertices.

    ``links`` holds (block id, cutvertex label) pairs.  A restriction
    produced by minimal_subtree keeps the original block ids.
    """

    host: Graph
    blocks: tuple[Block, ...]
    cutvertices: frozenset[str]
    links: frozenset[tuple[int, str]]

    def block_by_id(self, bid: int) -> Block:
        for b in self.blocks:
            if b.id == bid:
                return b
        raise GraphError(f"no block with id {bid}")

    def block_ids(self) -> list[int]:
        return [b.id for b in self.blocks]

    def tree_degree(self, bid: int) -> int:
        return sum(1 for b, _ in self.links if b == bid)


def block_cut_tree(g: Graph) -> BlockCutTree:
    """Blocks and cutvertices of a connected host.

    A single-vertex host yields one edgeless block.  Every edge of the
    host lies in exactly one block; two blocks share at most one vertex.
    """
    if not g.vertices:
        raise GraphError("empty graph has no block structure")
    if not g.is_connected():
        raise GraphError("block_cut_tree requires a connected graph")
    if len(g.vertices) == 1:
        only = Graph(g.vertices, frozenset())
        return BlockCutTree(g, (Block(0, only, False),), frozenset(), frozenset())

    adj = {v: sorted(ns) for v, ns in g.adjacency().items()}
    root = min(g.vertices)
    disc: dict[str, int] = {root: 0}
    low: dict[str, int] = {root: 0}
    clock = 1
    estack: list[Edge] = []
    block_edge_sets: list[set[Edge]] = []
    cutvx: set[str] = set()
    root_children = 0

    stack: list[tuple[str, str | None, Iterable[str]]] = [(root, None, iter(adj[root]))]
    while stack:
        v, parent, it = stack[-1]
        advanced = False
        for w in it:
            if w == parent:
                continue
            if w in disc:
                if disc[w] < disc[v]:
                    estack.append(edge(v, w))
                    low[v] = min(low[v], disc[w])
                continue
            estack.append(edge(v, w))
            disc[w] = low[w] = clock
            clock += 1
            if v == root:
                root_children += 1
            stack.append((w, v, iter(adj[w])))
            advanced = True
            break
        if advanced:
            continue
        stack.pop()
        if parent is None:
            continue
        low[parent] = min(low[parent], low[v])
        if low[v] >= disc[parent]:
            blk: set[Edge] = set()
            closing = edge(parent, v)
            while True:
                e = estack.pop()
                blk.add(e)
                if e == closing:
                    break
            block_edge_sets.append(blk)
            if parent != root:
                cutvx.add(parent)
    if root_children >= 2:
        cutvx.add(root)
    if estack:
        raise GraphError("internal error: unassigned edges after block scan")

    raw = [g.edge_subgraph(es) for es in block_edge_sets]
    raw.sort(key=lambda b: (tuple(b.sorted_vertices()), tuple(b.sorted_edges())))
    blocks = tuple(Block(i, bg, len(bg.edges) == 1) for i, bg in enumerate(raw))
    links = frozenset((b.id, c) for b in blocks for c in sorted(cutvx)
                      if c in b.graph.vertices)
    return BlockCutTree(g, blocks, frozenset(cutvx), links)


def minimal_subtree(t: BlockCutTree, marked: Iterable[int]) -> BlockCutTree:
    """Smallest subtree of the block-cut tree spanning the marked blocks."""
    want = set(marked)
    known = set(t.block_ids())
    unknown = want - known
    if unknown:
        raise GraphError(f"unknown block ids {sorted(unknown)!r}")
    if not want:
        raise GraphError("need at least one marked block")

    nodes: set[tuple[str, object]] = {("b", b.id) for b in t.blocks}
    nodes |= {("c", c) for c in t.cutvertices}
    nbrs: dict[tuple[str, object], set[tuple[str, object]]] = {x: set() for x in nodes}
    for bid, c in t.links:
        nbrs[("b", bid)].add(("c", c))
        nbrs[("c", c)].add(("b", bid))

    # prune unmarked leaves until fixpoint
    changed = True
    while changed:
        changed = False
        for x in sorted(nodes, key=repr):
            if x[0] == "b" and x[1] in want:
                continue
            if len(nbrs[x] & nodes) <= 1:
                nodes.discard(x)
                changed = True

    keep_blocks = tuple(b for b in t.blocks if ("b", b.id) in nodes)
    keep_cuts = frozenset(c for c in t.cutvertices if ("c", c) in nodes)
    keep_links = frozenset((bid, c) for bid, c in t.links
                           if ("b", bid) in nodes and ("c", c) in nodes)
    return BlockCutTree(t.host, keep_blocks, keep_cuts, keep_links)


def choose_leaf_block(t: BlockCutTree) -> Block:
    """A block that is a leaf of the tree; smallest label order breaks ties."""
    if not t.blocks:
        raise GraphError("empty block tree")
    leaves = [b for b in t.blocks if t.tree_degree(b.id) <= 1]
    if not leaves:
        raise GraphError("internal error: tree without leaf blocks")
    return min(leaves, key=Block.sort_key)


def branch_vertices(g: Graph, ctx: Graph) -> frozenset[str]:
    """Vertices of g whose degree in the context graph is at least 3."""
    if not g.vertices <= ctx.vertices:
        raise GraphError("subgraph vertices must lie in the context graph")
    if not g.edges <= ctx.edges:
        raise GraphError("subgraph edges must lie in the context graph")
    return frozenset(v for v in g.vertices if ctx.degree(v) >= 3)


@dataclass(frozen=True)
class Segment:
    """One replicable chain of g.

    kind 'between': ends = (a, b) branch vertices, a <= b, interior
    ordered from a.  kind 'pendant': ends = (branch, tip) where the tip
    has g-degree 1 and context degree at most 2; interior excludes the
    tip.  kind 'closed': ends = (a,), a cycle attached at one branch
    vertex.  length counts edges.
    """

    kind: str
    ends: tuple[str, ...]
    interior: tuple[str, ...]
    length: int

    def sort_key(self):
        rank = {"between": 0, "closed": 1, "pendant": 2}[self.kind]
        return (rank, self.ends, self.interior)


def segment_decomposition(g: Graph, ctx: Graph) -> list[Segment]:
    """Split the edges of g into segments between branch vertices."""
    branch = branch_vertices(g, ctx)
    if not g.is_connected():
        raise GraphError("segment decomposition requires a connected graph")
    if not branch:
        raise GraphError("no branch vertices: nothing to decompose against")
    adj = {v: sorted(ns) for v, ns in g.adjacency().items()}
    visited: set[Edge] = set()
    segments: list[Segment] = []

    for b in sorted(branch):
        for nb in adj[b]:
            if edge(b, nb) in visited:
                continue
            interior: list[str] = []
            prev, cur = b, nb
            chain_edges = [edge(b, nb)]
            while cur not in branch and g.degree(cur) == 2:
                interior.append(cur)
                nxt = [w for w in adj[cur] if w != prev][0]
                chain_edges.append(edge(cur, nxt))
                prev, cur = cur, nxt
            visited.update(chain_edges)
            if cur in branch:
                if cur == b:
                    fwd = tuple(interior)
                    rev = tuple(reversed(interior))
                    segments.append(Segment("closed", (b,), min(fwd, rev),
                                            len(interior) + 1))
                else:
                    a, z = sorted((b, cur))
                    inner = tuple(interior) if a == b else tuple(reversed(interior))
                    segments.append(Segment("between", (a, z), inner,
                                            len(interior) + 1))
            else:
                # non-branch, degree != 2 can only be a tip of g-degree 1
                segments.append(Segment("pendant", (b, cur), tuple(interior),
                                        len(interior) + 1))
    if visited != g.edges:
        raise GraphError("internal error: segment walk missed edges")
    segments.sort(key=Segment.sort_key)
    return segments


class Shape(enum.Enum):
    CYCLE = "Cycle"
    PATH = "Path"
    ISOLATED_VERTEX = "IsolatedVertex"
    HAS_DEGREE3_VERTEX = "HasDegree3Vertex"

    @property
    def label(self) -> str:
        return self.value


def classify_shape(g: Graph) -> Shape:
    """Classify a connected graph by maximum degree at most 2 or not."""
    if not g.vertices:
        raise GraphError("cannot classify the empty graph")
    if not g.is_connected():
        raise GraphError("classification requires a connected graph")
    degrees = [g.degree(v) for v in g.sorted_vertices()]
    if len(degrees) == 1:
        return Shape.ISOLATED_VERTEX
    if any(d >= 3 for d in degrees):
        return Shape.HAS_DEGREE3_VERTEX
    if all(d == 2 for d in degrees):
        return Shape.CYCLE
    return Shape.PATH


@dataclass(frozen=True)
class MinorPredicate:
    """Hereditary-style property 'contains ``target`` as a minor'."""

    name: str
    target: Graph

    def holds(self, g: Graph) -> bool:
        return is_minor(self.target, g, force=True)
