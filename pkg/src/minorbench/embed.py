"""Expansion search: finding models of one graph as a minor of another.

An expansion model assigns every pattern vertex a branch set (disjoint,
connected subsets of the host) and every pattern edge a distinct host
edge joining the two branch sets.  The searcher enumerates branch sets
for pattern vertices in decreasing degree order, growing candidate sets
from high-degree host anchors, and is exhaustive: a ``NONE`` result is a
proof that no model exists.

The naive oracle at the bottom re-decides the same question by raw
enumeration of vertex-subset partitions and shares no code with the
searcher; it exists so the two can be played against each other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterator, Mapping

from .graph import Edge, Graph, GraphError, connected_components, edge

DEFAULT_NODE_BUDGET = 10**7
EXACT_HOST_GUARD = 12  # largest host is_minor() accepts without force
ORACLE_HOST_GUARD = 8


class BudgetExceeded(Exception):
    """Raised internally when a node budget runs out."""

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


class NodeCounter:
    """Counts search-node expansions against an optional cap."""

    __slots__ = ("nodes", "cap")

    def __init__(self, cap: int | None = DEFAULT_NODE_BUDGET):
        self.nodes = 0
        self.cap = cap

    def spend(self, k: int = 1):
        self.nodes += k
        if self.cap is not None and self.nodes > self.cap:
            raise BudgetExceeded(self.nodes)


@dataclass(frozen=True)
class MinorEmbedding:
    """Branch sets plus an injective pattern-edge to host-edge map."""

    branch_sets: Mapping[str, frozenset[str]]
    edge_images: Mapping[Edge, Edge]

    def used_vertices(self) -> frozenset[str]:
        out: set[str] = set()
        for bs in self.branch_sets.values():
            out |= bs
        return frozenset(out)

    def to_json_obj(self) -> dict:
        return {
            "branch_sets": {u: sorted(bs) for u, bs in sorted(self.branch_sets.items())},
            "edge_images": [[list(he), list(ge)]
                            for he, ge in sorted(self.edge_images.items())],
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "MinorEmbedding":
        bs = {u: frozenset(vs) for u, vs in obj["branch_sets"].items()}
        ei = {(he[0], he[1]): (ge[0], ge[1]) for he, ge in obj["edge_images"]}
        return MinorEmbedding(bs, ei)


@dataclass(frozen=True)
class EmbeddingConstraints:
    """Optional restrictions on where branch sets may live.

    must_contain pins a host vertex into a pattern vertex's branch set;
    allowed_region confines a branch set; forbidden_region excludes
    host vertices from it.
    """

    must_contain: Mapping[str, str] = field(default_factory=dict)
    allowed_region: Mapping[str, frozenset[str]] = field(default_factory=dict)
    forbidden_region: Mapping[str, frozenset[str]] = field(default_factory=dict)


class SearchStatus(enum.Enum):
    FOUND = "found"
    NONE = "none"
    BUDGET = "budget-exhausted"


@dataclass(frozen=True)
class SearchResult:
    status: SearchStatus
    embedding: MinorEmbedding | None
    nodes: int


def _check_constraints(h: Graph, g: Graph, c: EmbeddingConstraints):
    for u in c.must_contain:
        if u not in h.vertices:
            raise GraphError(f"constraint on unknown pattern vertex {u!r}")
        if c.must_contain[u] not in g.vertices:
            raise GraphError(f"constraint pins unknown host vertex {c.must_contain[u]!r}")
    for m in (c.allowed_region, c.forbidden_region):
        for u, region in m.items():
            if u not in h.vertices:
                raise GraphError(f"constraint on unknown pattern vertex {u!r}")
            unknown = set(region) - g.vertices
            if unknown:
                raise GraphError(f"constraint region outside host: {sorted(unknown)!r}")


def _connected_sets_from(root: str, allowed: frozenset[str],
                         adj: dict[str, frozenset[str]],
                         max_size: int) -> Iterator[frozenset[str]]:
    """All connected subsets of ``allowed`` containing root, each once.

    Candidates already branched on are banned for later siblings, which
    makes every subset reachable along exactly one path.
    """
    def rec(S: frozenset[str], cand: frozenset[str],
            banned: frozenset[str]) -> Iterator[frozenset[str]]:
        yield S
        if len(S) >= max_size:
            return
        new_banned = set(banned)
        for v in sorted(cand - banned):
            S2 = S | {v}
            cand2 = (cand | (adj[v] & allowed)) - S2 - frozenset(new_banned)
            yield from rec(S2, cand2, frozenset(new_banned))
            new_banned.add(v)

    if root not in allowed or max_size < 1:
        return
    yield from rec(frozenset([root]), adj[root] & allowed, frozenset())


def enumerate_expansions(h: Graph, g: Graph,
                         constraints: EmbeddingConstraints | None = None,
                         counter: NodeCounter | None = None
                         ) -> Iterator[MinorEmbedding]:
    """Yield every expansion model of h in g in a fixed canonical order."""
    c = constraints or EmbeddingConstraints()
    _check_constraints(h, g, c)
    if counter is None:
        counter = NodeCounter(cap=None)
    if not h.vertices:
        yield MinorEmbedding({}, {})
        return
    if len(h.vertices) > len(g.vertices):
        return

    adj = {v: frozenset(ns) for v, ns in g.adjacency().items()}
    gdeg = {v: len(adj[v]) for v in g.vertices}
    h_adj = h.adjacency()
    order = sorted(h.vertices, key=lambda u: (-h.degree(u), u))
    pos = {u: i for i, u in enumerate(order)}

    allowed: dict[str, frozenset[str]] = {}
    for u in order:
        region = frozenset(c.allowed_region.get(u, g.vertices))
        region -= frozenset(c.forbidden_region.get(u, frozenset()))
        must = c.must_contain.get(u)
        if must is not None and must not in region:
            return  # pinned vertex outside its own region: unsatisfiable
        allowed[u] = region

    placed: dict[str, frozenset[str]] = {}
    used: set[str] = set()
    ng = len(g.vertices)
    nh = len(order)

    def crossing_edges(A: frozenset[str], B: frozenset[str]) -> list[Edge]:
        out = []
        for a in A:
            for b in adj[a] & B:
                out.append(edge(a, b))
        return sorted(set(out))

    def candidate_ok(u: str, B: frozenset[str]) -> bool:
        unplaced = []
        for w in h_adj[u]:
            if w in placed:
                hit = False
                for a in B:
                    if adj[a] & placed[w]:
                        hit = True
                        break
                if not hit:
                    return False
            else:
                unplaced.append(w)
        if unplaced:
            reach: set[str] = set()
            for a in B:
                reach |= adj[a]
            reach -= used
            reach -= B
            if len(reach) < len(unplaced):
                return False
            for w in unplaced:
                if not (reach & allowed[w]):
                    return False
        return True

    def candidates(u: str, free: frozenset[str], max_size: int
                   ) -> Iterator[frozenset[str]]:
        must = c.must_contain.get(u)
        if must is not None:
            yield from _connected_sets_from(must, free, adj, max_size)
            return
        roots = sorted(free, key=lambda v: (-gdeg[v], v))
        shrink = set(free)
        for r in roots:
            yield from _connected_sets_from(r, frozenset(shrink), adj, max_size)
            shrink.discard(r)

    def build() -> MinorEmbedding:
        images: dict[Edge, Edge] = {}
        for he in h.sorted_edges():
            u, w = he
            images[he] = crossing_edges(placed[u], placed[w])[0]
        return MinorEmbedding(dict(placed), images)

    def rec(i: int) -> Iterator[MinorEmbedding]:
        if i == nh:
            yield build()
            return
        u = order[i]
        max_size = ng - len(used) - (nh - i - 1)
        if max_size < 1:
            return
        free = allowed[u] - frozenset(used)
        for B in candidates(u, free, max_size):
            counter.spend()
            if not candidate_ok(u, B):
                continue
            placed[u] = B
            used.update(B)
            yield from rec(i + 1)
            used.difference_update(B)
            del placed[u]

    yield from rec(0)


def find_expansion(h: Graph, g: Graph,
                   constraints: EmbeddingConstraints | None = None,
                   node_budget: int | None = DEFAULT_NODE_BUDGET) -> SearchResult:
    """First expansion model of h in g, or proof of absence, or budget stop."""
    counter = NodeCounter(cap=node_budget)
    gen = enumerate_expansions(h, g, constraints, counter)
    try:
        emb = next(gen)
    except StopIteration:
        return SearchResult(SearchStatus.NONE, None, counter.nodes)
    except BudgetExceeded:
        return SearchResult(SearchStatus.BUDGET, None, counter.nodes)
    return SearchResult(SearchStatus.FOUND, emb, counter.nodes)


def verify_embedding(h: Graph, g: Graph, m: MinorEmbedding) -> bool:
    """Re-check every model invariant; False on any malformation."""
    try:
        if set(m.branch_sets) != set(h.vertices):
            return False
        seen: set[str] = set()
        for u, bs in m.branch_sets.items():
            if not bs or not bs <= g.vertices:
                return False
            if bs & seen:
                return False
            seen |= bs
            if not g.induced(bs).is_connected():
                return False
        if set(m.edge_images) != set(h.edges):
            return False
        values = list(m.edge_images.values())
        if len(set(values)) != len(values):
            return False
        for (u, w), ge in m.edge_images.items():
            if ge not in g.edges:
                return False
            a, b = ge
            bu, bw = m.branch_sets[u], m.branch_sets[w]
            if not ((a in bu and b in bw) or (a in bw and b in bu)):
                return False
        return True
    except Exception:
        return False


def is_minor(h: Graph, g: Graph, force: bool = False) -> bool:
    """Exact minor test by exhaustive search; guarded by host size."""
    if len(g.vertices) > EXACT_HOST_GUARD and not force:
        raise GraphError(
            f"host has {len(g.vertices)} vertices, over the exact-search guard "
            f"({EXACT_HOST_GUARD}); pass force=True to run anyway")
    res = find_expansion(h, g, None, node_budget=None)
    return res.status is SearchStatus.FOUND


def naive_is_minor_oracle(h: Graph, g: Graph) -> bool:
    """Decide the minor question by brute partition enumeration.

    Enumerates every subset of host vertices, every partition of it into
    as many blocks as the pattern has vertices, and every assignment of
    pattern vertices to blocks.  Deliberately written from scratch: it
    shares no search machinery with find_expansion.
    """
    if len(g.vertices) > ORACLE_HOST_GUARD:
        raise GraphError(f"oracle is limited to hosts with at most "
                         f"{ORACLE_HOST_GUARD} vertices")
    hverts = sorted(h.vertices)
    nh = len(hverts)
    if nh == 0:
        return True
    gverts = sorted(g.vertices)
    if nh > len(gverts):
        return False
    gadj: dict[str, set[str]] = {v: set() for v in gverts}
    for u, v in g.edges:
        gadj[u].add(v)
        gadj[v].add(u)
    hedges = [tuple(e) for e in h.sorted_edges()]

    def connected(block: list[str]) -> bool:
        todo = [block[0]]
        inside = set(block)
        got = {block[0]}
        while todo:
            for w in gadj[todo.pop()]:
                if w in inside and w not in got:
                    got.add(w)
                    todo.append(w)
        return len(got) == len(inside)

    def blocks_linked(a: list[str], b: list[str]) -> bool:
        bset = set(b)
        return any(gadj[x] & bset for x in a)

    def partitions(items: list[str], k: int) -> Iterator[list[list[str]]]:
        blocks: list[list[str]] = []

        def rec(i: int) -> Iterator[list[list[str]]]:
            if len(blocks) + (len(items) - i) < k:
                return
            if i == len(items):
                if len(blocks) == k:
                    yield [list(b) for b in blocks]
                return
            x = items[i]
            for b in blocks:
                b.append(x)
                yield from rec(i + 1)
                b.pop()
            if len(blocks) < k:
                blocks.append([x])
                yield from rec(i + 1)
                blocks.pop()

        return rec(0)

    for size in range(nh, len(gverts) + 1):
        for subset in combinations(gverts, size):
            for blocks in partitions(list(subset), nh):
                if not all(connected(b) for b in blocks):
                    continue
                for perm in permutations(range(nh)):
                    assign = {hverts[i]: blocks[perm[i]] for i in range(nh)}
                    if all(blocks_linked(assign[u], assign[w]) for u, w in hedges):
                        return True
    return False


def partition_components(h: Graph, anchor: Graph,
                         force: bool = False) -> tuple[list[Graph], list[Graph]]:
    """Split the other components of h by whether the anchor embeds in them.

    Returns (lacking, containing): components without an anchor minor,
    then components with one.  The anchor component itself is excluded
    by identity, not by isomorphism.
    """
    comps = connected_components(h)
    if anchor not in comps:
        raise GraphError("anchor is not a component of the graph")
    lacking: list[Graph] = []
    containing: list[Graph] = []
    for comp in comps:
        if comp.vertices == anchor.vertices:
            continue
        if is_minor(anchor, comp, force=force):
            containing.append(comp)
        else:
            lacking.append(comp)
    return lacking, containing


# -- expansion footprints (for packing and locality scans) ---------------

def _spanning_trees(vs: frozenset[str], g: Graph) -> list[frozenset[Edge]]:
    """Every spanning tree of the induced subgraph on vs."""
    if len(vs) == 1:
        return [frozenset()]
    inner = sorted(e for e in g.edges if e[0] in vs and e[1] in vs)
    n = len(vs)
    out = []
    for combo in combinations(inner, n - 1):
        parent = {v: v for v in vs}

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for u, v in combo:
            ru, rv = find(u), find(v)
            if ru == rv:
                ok = False
                break
            parent[ru] = rv
        if ok:
            out.append(frozenset(combo))
    return out


def iter_expansion_footprints(h: Graph, g: Graph, counter: NodeCounter,
                              constraints: EmbeddingConstraints | None = None
                              ) -> Iterator[tuple[MinorEmbedding, frozenset[Edge]]]:
    """Yield (model, edge footprint) for every minimal expansion subgraph.

    A minimal expansion subgraph is a spanning tree per branch set plus
    one host edge per pattern edge; every subgraph of g containing an
    h minor contains one of these.  Footprints are deduplicated.
    """
    seen: set[frozenset[Edge]] = set()
    for emb in enumerate_expansions(h, g, constraints, counter):
        hverts = sorted(emb.branch_sets)
        tree_choices = [_spanning_trees(emb.branch_sets[u], g) for u in hverts]
        hedges = h.sorted_edges()
        image_choices = []
        for u, w in hedges:
            bu, bw = emb.branch_sets[u], emb.branch_sets[w]
            cands = sorted(e for e in g.edges
                           if (e[0] in bu and e[1] in bw) or (e[0] in bw and e[1] in bu))
            image_choices.append(cands)
        for trees in product(*tree_choices):
            base: set[Edge] = set()
            for t in trees:
                base |= t
            for images in product(*image_choices):
                counter.spend()
                usage = frozenset(base | set(images))
                if usage in seen:
                    continue
                seen.add(usage)
                final = MinorEmbedding(dict(emb.branch_sets),
                                       {he: im for he, im in zip(hedges, images)})
                yield final, usage
