"""Gadget constructions: segment blowups and counterexample assemblies.

The blowup of a subgraph g in a context graph keeps one copy of every
branch vertex and replaces each segment by r parallel copies, so that
deleting any r-1 edges leaves at least one intact copy per segment.

The two assembly builders combine a user-supplied robust core graph
with blowups and raw copies of the remaining material of a host graph,
either per connected component or per block of the block-cut tree.
Provenance tags on the result record which part produced each vertex;
the vertices contributed by the core are retrievable via core_region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .graph import (Graph, GraphError, ParseError, connected_components,
                    parse_graph, relabeled_union)
from .decompose import (Shape, MinorPredicate, block_cut_tree, branch_vertices,
                        choose_leaf_block, classify_shape, minimal_subtree,
                        segment_decomposition)
from .embed import is_minor, partition_components

__all__ = [
    "BuildTrace", "CoreSpec", "assemble_block_counterexample",
    "assemble_component_counterexample", "core_region", "load_core_spec",
    "segment_blowup",
]


def segment_blowup(g: Graph, ctx: Graph, r: int) -> Graph:
    """Replace every segment of g by r parallel copies.

    Branch vertices keep their labels.  A between segment of length l
    becomes r internally disjoint paths of length max(l, 2) joining the
    two branch copies; a pendant segment of length l becomes r paths of
    length l sharing only the branch copy; a closed segment of length l
    becomes r cycles of length max(l, 3) through the branch copy.
    """
    if r < 1:
        raise GraphError("replication count must be at least 1")
    segments = segment_decomposition(g, ctx)
    branch = branch_vertices(g, ctx)

    used: set[str] = set(branch)
    prov: dict[str, str] = {v: f"branch:{v}" for v in branch}
    edges: list[tuple[str, str]] = []

    def fresh(base: str, tag: str) -> str:
        lab = base
        while lab in used:
            lab += "+"
        used.add(lab)
        prov[lab] = tag
        return lab

    for j, seg in enumerate(segments):
        if seg.kind == "between":
            a, b = seg.ends
            span = max(seg.length, 2)
            for i in range(r):
                prev = a
                for k in range(1, span):
                    cur = fresh(f"{a}~{b}.{j}.{i}.{k}",
                                f"path:{a}~{b}.{j}:copy{i}:pos{k}")
                    edges.append((prev, cur))
                    prev = cur
                edges.append((prev, b))
        elif seg.kind == "closed":
            (a,) = seg.ends
            span = max(seg.length, 3)
            for i in range(r):
                prev = a
                for k in range(1, span):
                    cur = fresh(f"{a}~{a}.{j}.{i}.{k}",
                                f"path:{a}~{a}.{j}:copy{i}:pos{k}")
                    edges.append((prev, cur))
                    prev = cur
                edges.append((prev, a))
        else:  # pendant
            a, tip = seg.ends
            for i in range(r):
                prev = a
                for k in range(1, seg.length + 1):
                    cur = fresh(f"{a}~{tip}.{j}.{i}.{k}",
                                f"path:{a}~{tip}.{j}:copy{i}:pos{k}")
                    edges.append((prev, cur))
                    prev = cur
    return Graph.build(used, edges, prov)


@dataclass(frozen=True)
class CoreSpec:
    """Externally supplied robust core graph with its claimed parameters.

    roots maps cutvertex labels of the host's distinguished block to
    vertices of the core; k is the packing bound the core claims to beat
    and r the deletion robustness it claims to survive.
    """

    core: Graph
    roots: Mapping[str, str] = field(default_factory=dict)
    k: int = 1
    r: int = 1

    def __post_init__(self):
        if self.k < 1 or self.r < 1:
            raise GraphError("spec parameters k and r must be positive")
        for s, sp in self.roots.items():
            if sp not in self.core.vertices:
                raise GraphError(f"dangling root target {sp!r}")


def load_core_spec(text: str) -> CoreSpec:
    """Parse a core-spec document: an edge list, root lines, k and r.

    The graph block comes first in the plain edge-list format; the
    remaining lines are ``root s -> s'`` mappings and the two parameter
    lines ``k <int>`` and ``r <int>``, in any order.
    """
    lines: list[tuple[int, str]] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            lines.append((i, stripped))
    if not lines:
        raise ParseError("empty spec document")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"expected 'n m' header, got {header!r}", lineno)
    n, m = int(parts[0]), int(parts[1])
    graph_end = 1 + n + m
    if len(lines) < graph_end:
        raise ParseError("spec graph block is truncated", lineno)
    graph_text = "\n".join(ln for _, ln in lines[:graph_end])
    core = parse_graph(graph_text)

    roots: dict[str, str] = {}
    k: int | None = None
    r: int | None = None
    for lineno, ln in lines[graph_end:]:
        toks = ln.split()
        if toks[0] == "root":
            if len(toks) != 4 or toks[2] != "->":
                raise ParseError(f"expected 'root s -> t', got {ln!r}", lineno)
            s, t = toks[1], toks[3]
            if s in roots:
                raise ParseError(f"duplicate root for {s!r}", lineno)
            if t not in core.vertices:
                raise ParseError(f"dangling root target {t!r}", lineno)
            roots[s] = t
        elif toks[0] == "k" and len(toks) == 2 and toks[1].isdigit():
            k = int(toks[1])
        elif toks[0] == "r" and len(toks) == 2 and toks[1].isdigit():
            r = int(toks[1])
        else:
            raise ParseError(f"unrecognized spec line {ln!r}", lineno)
    if k is None or r is None:
        raise ParseError("spec must define both k and r")
    return CoreSpec(core, roots, k, r)


def _with_tag(g: Graph, prefix: str) -> Graph:
    return Graph(g.vertices, g.edges, {v: f"{prefix}:{v}" for v in g.vertices})


def core_region(g: Graph) -> frozenset[str]:
    """Vertices of an assembly contributed by the core part."""
    if g.provenance is None:
        raise GraphError("graph carries no provenance")
    return frozenset(v for v, tag in g.provenance.items()
                     if any(t.startswith("core:") for t in tag.split("&")))


def assemble_component_counterexample(h: Graph, anchor: Graph,
                                      spec: CoreSpec, r: int,
                                      force: bool = False) -> Graph:
    """Swap the anchor component of h for the core, replicate the rest.

    Components where the anchor is not a minor appear r times verbatim;
    components properly containing an anchor minor are blown up.  All
    parts stay disjoint.  The anchor must have a degree-3 vertex (a
    cycle, path, or single vertex never needs this treatment).
    """
    if r < 1:
        raise GraphError("replication count must be at least 1")
    if spec.roots:
        raise GraphError("component assembly takes a spec without roots")
    if classify_shape(anchor) is not Shape.HAS_DEGREE3_VERTEX:
        raise GraphError("anchor component has maximum degree at most 2")
    lacking, containing = partition_components(h, anchor, force=force)
    for comp in containing:
        if not branch_vertices(comp, h):
            raise GraphError("component to blow up has no branch vertex")
    parts: list[Graph] = [_with_tag(spec.core, "core")]
    for comp in lacking:
        for j in range(r):
            parts.append(_with_tag(comp, f"copy{j}"))
    for comp in containing:
        parts.append(segment_blowup(comp, h, r))
    out, _ = relabeled_union(parts, ())
    return out


@dataclass(frozen=True)
class BuildTrace:
    """Audit record of a block assembly: classifications and gluing."""

    mode: str
    anchor_block: tuple[str, ...]
    predicate_blocks: tuple[tuple[str, ...], ...]
    containing_blocks: tuple[tuple[str, ...], ...]
    chain_blocks: tuple[tuple[str, ...], ...]
    outside_components: tuple[tuple[str, ...], ...]
    trivial_paths: tuple[tuple[str, ...], ...]
    roots: tuple[tuple[str, str], ...]
    identifications: tuple[tuple[str, tuple[str, ...]], ...]
    core_vertices: tuple[str, ...]

    def to_json_obj(self) -> dict:
        return {
            "mode": self.mode,
            "anchor_block": list(self.anchor_block),
            "predicate_blocks": [list(b) for b in self.predicate_blocks],
            "containing_blocks": [list(b) for b in self.containing_blocks],
            "chain_blocks": [list(b) for b in self.chain_blocks],
            "outside_components": [list(d) for d in self.outside_components],
            "trivial_paths": [list(p) for p in self.trivial_paths],
            "roots": [list(p) for p in self.roots],
            "identifications": [[m, list(gp)] for m, gp in self.identifications],
            "core_vertices": list(self.core_vertices),
        }


def assemble_block_counterexample(h: Graph, predicate: MinorPredicate,
                                  spec: CoreSpec, r: int,
                                  force: bool = False
                                  ) -> tuple[Graph, BuildTrace]:
    """Swap a leaf predicate block of h for the core, glue the rest back.

    The distinguished block is a leaf of the minimal block subtree over
    the blocks satisfying the predicate.  Blocks containing it as a
    minor are blown up, as are the non-trivial connecting blocks on the
    subtree between them and paths formed by the trivial ones; material
    hanging outside that subtree is copied r times.  Copies of the same
    host vertex are identified with each other, and the spec roots are
    identified with the copies of their cutvertices.
    """
    if r < 1:
        raise GraphError("replication count must be at least 1")
    if not h.is_connected():
        raise GraphError("block assembly requires a connected host")
    tree = block_cut_tree(h)
    marked = [b.id for b in tree.blocks if predicate.holds(b.graph)]
    if not marked:
        raise GraphError("no block satisfies the predicate")
    anchor = choose_leaf_block(minimal_subtree(tree, marked))
    if anchor.is_trivial or len(anchor.graph.vertices) < 3:
        raise GraphError("chosen block is trivial; nothing to replace")

    cut_in_anchor = frozenset(tree.cutvertices & anchor.graph.vertices)
    if set(spec.roots) != set(cut_in_anchor):
        raise GraphError(
            f"spec roots {sorted(spec.roots)} do not match the cutvertices "
            f"{sorted(cut_in_anchor)} of the chosen block")

    containing = [b for b in tree.blocks
                  if b.id != anchor.id and is_minor(anchor.graph, b.graph, force=force)]
    sub = minimal_subtree(tree, [b.id for b in containing] + [anchor.id])
    sub_ids = set(sub.block_ids())
    chain = [b for b in sub.blocks
             if b.id != anchor.id and b.id not in {c.id for c in containing}]

    outside_blocks = [b for b in tree.blocks if b.id not in sub_ids]
    outside_union = Graph.build(
        {v for b in outside_blocks for v in b.graph.vertices},
        [e for b in outside_blocks for e in b.graph.edges])
    hangers = connected_components(outside_union) if outside_blocks else []

    chain_nontrivial = [b for b in chain if not b.is_trivial]
    chain_trivial = [b for b in chain if b.is_trivial]
    trivial_union = Graph.build(
        {v for b in chain_trivial for v in b.graph.vertices},
        [e for b in chain_trivial for e in b.graph.edges])
    trivial_paths = connected_components(trivial_union) if chain_trivial else []

    sub_vertices = {v for b in sub.blocks for v in b.graph.vertices}

    # parts and, per part, where the copies of original host vertices live
    parts: list[Graph] = [_with_tag(spec.core, "core")]
    copies: list[dict[str, str]] = [dict(spec.roots)]
    for blk in containing:
        parts.append(segment_blowup(blk.graph, h, r))
        copies.append({v: v for v in branch_vertices(blk.graph, h)})
    hanger_attach: list[str] = []
    for d in hangers:
        attach = sorted(d.vertices & sub_vertices)
        if len(attach) != 1:
            raise GraphError("internal error: hanging component without a "
                             "unique attachment vertex")
        hanger_attach.append(attach[0])
        for j in range(r):
            parts.append(_with_tag(d, f"copy{j}"))
            copies.append({attach[0]: attach[0]})
    for blk in chain_nontrivial:
        parts.append(segment_blowup(blk.graph, h, r))
        copies.append({v: v for v in branch_vertices(blk.graph, h)})
    for p in trivial_paths:
        parts.append(segment_blowup(p, h, r))
        copies.append({v: v for v in branch_vertices(p, h)})

    occurrences: dict[str, list[str]] = {}
    for i, table in enumerate(copies):
        for orig, local in table.items():
            occurrences.setdefault(orig, []).append(f"{local}#{i}")
    groups = [frozenset(locs) for orig, locs in sorted(occurrences.items())
              if len(locs) >= 2]
    for attach in hanger_attach:
        if len(occurrences[attach]) < 2:
            raise GraphError("internal error: hanging component attaches at a "
                             "vertex with no copy in the assembly")

    out, final_of = relabeled_union(parts, groups)

    trace = BuildTrace(
        mode="blocks",
        anchor_block=tuple(anchor.graph.sorted_vertices()),
        predicate_blocks=tuple(tuple(tree.block_by_id(i).graph.sorted_vertices())
                               for i in sorted(marked)),
        containing_blocks=tuple(tuple(b.graph.sorted_vertices()) for b in containing),
        chain_blocks=tuple(tuple(b.graph.sorted_vertices()) for b in chain),
        outside_components=tuple(tuple(d.sorted_vertices()) for d in hangers),
        trivial_paths=tuple(tuple(p.sorted_vertices()) for p in trivial_paths),
        roots=tuple(sorted(spec.roots.items())),
        identifications=tuple(sorted((min(gp), tuple(sorted(gp))) for gp in groups)),
        core_vertices=tuple(sorted(final_of[(0, v)] for v in spec.core.vertices)),
    )
    return out, trace
