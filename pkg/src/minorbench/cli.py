"""Command-line front end.

Exit codes: 0 holds / success, 1 refuted (a witness is part of the
report), 2 budget-exhausted, 64 usage errors, 65 unreadable or
malformed inputs and domain errors.

Reports go to stdout as canonical JSON (key-sorted, fixed layout, no
timing fields), so identical invocations produce byte-identical
output; a one-line human summary with wall time goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from time import perf_counter

from .graph import (Graph, GraphError, connected_components, parse_graph,
                    parse_graph6, serialize)
from .decompose import (MinorPredicate, block_cut_tree, branch_vertices,
                        classify_shape, segment_decomposition)
from .embed import (MinorEmbedding, SearchStatus, find_expansion,
                    verify_embedding)
from .gadgets import (assemble_block_counterexample,
                      assemble_component_counterexample, load_core_spec,
                      segment_blowup)
from .verify import (DEFAULT_SEED, Budget, Outcome, Report, canonical_json,
                     check_assembly_robustness, check_branch_count,
                     check_expansion_locality, check_gadget_robustness,
                     check_generic_counterexample, check_hereditary_sampled,
                     graph_json, max_edge_disjoint_packing,
                     min_edge_hitting_set)

USAGE_EXIT = 64
DATA_EXIT = 65


class _Parser(argparse.ArgumentParser):
    """argparse with the usage-error exit remapped to 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str) -> Graph:
    text = _read_text(path)
    if path.endswith(".g6"):
        return parse_graph6(text)
    return parse_graph(text)


def _parse_budget(text: str) -> Budget:
    parts = text.split(":")
    if not 1 <= len(parts) <= 3:
        raise argparse.ArgumentTypeError(
            "budget is NODES[:SUBSETS[:TRIALS]]")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(
            "budget is NODES[:SUBSETS[:TRIALS]]") from None
    if any(n < 1 for n in nums):
        raise argparse.ArgumentTypeError("budget parts must be positive")
    base = Budget()
    return Budget(nums[0],
                  nums[1] if len(nums) > 1 else base.subsets,
                  nums[2] if len(nums) > 2 else base.trials)


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _nonneg_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return n


def _parse_roots(text: str) -> dict[str, str]:
    roots: dict[str, str] = {}
    for pair in text.split(","):
        if pair.count("=") != 1:
            raise GraphError(f"roots entry {pair!r} is not 'pattern=host'")
        u, v = pair.split("=")
        u, v = u.strip(), v.strip()
        if not u or not v:
            raise GraphError(f"roots entry {pair!r} is not 'pattern=host'")
        if u in roots:
            raise GraphError(f"duplicate root for {u!r}")
        roots[u] = v
    return roots


def _parse_region(text: str) -> list[str]:
    if text.startswith("@"):
        return [ln.strip() for ln in _read_text(text[1:]).splitlines()
                if ln.strip()]
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _write_out(text: str, args) -> None:
    out = getattr(args, "output", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_report(rep: Report, args) -> int:
    _write_out(rep.to_json(), args)
    print(f"{rep.check}: {rep.outcome.value} in {rep.elapsed:.2f}s",
          file=sys.stderr)
    return rep.exit_code


def _emit_graph(g: Graph, args) -> int:
    fmt = getattr(args, "format", None) or "edge-list"
    _write_out(serialize(g, fmt), args)
    return 0


def _print_seed(args) -> None:
    print(f"seed: {args.seed}", file=sys.stderr)


# -- inspection commands -----------------------------------------------------

def cmd_components(args) -> int:
    comps = connected_components(_load_graph(args.file))
    if args.format == "json":
        _write_out(canonical_json(
            {"components": [graph_json(c) for c in comps]}), args)
        return 0
    lines = [f"component {i}: n={len(c.vertices)} m={len(c.edges)} "
             f"vertices: {' '.join(c.sorted_vertices())}"
             for i, c in enumerate(comps, start=1)]
    _write_out("\n".join(lines) + "\n", args)
    return 0


def cmd_blocks(args) -> int:
    tree = block_cut_tree(_load_graph(args.file))
    if args.format == "json":
        obj = {
            "blocks": [{"id": b.id, "trivial": b.is_trivial,
                        "vertices": b.graph.sorted_vertices(),
                        "edges": [[u, v] for u, v in b.graph.sorted_edges()]}
                       for b in tree.blocks],
            "cutvertices": sorted(tree.cutvertices),
            "links": [[bid, c] for bid, c in sorted(tree.links)],
        }
        _write_out(canonical_json(obj), args)
        return 0
    lines = []
    for b in tree.blocks:
        kind = "trivial" if b.is_trivial else "2-connected"
        lines.append(f"block {b.id} ({kind}): "
                     f"{' '.join(b.graph.sorted_vertices())}")
    lines.append("cutvertices: " + " ".join(sorted(tree.cutvertices)))
    _write_out("\n".join(lines) + "\n", args)
    return 0


def cmd_segments(args) -> int:
    g = _load_graph(args.file)
    ctx = _load_graph(args.ctx)
    segs = segment_decomposition(g, ctx)
    if args.format == "json":
        obj = {"branch_vertices": sorted(branch_vertices(g, ctx)),
               "segments": [{"kind": s.kind, "ends": list(s.ends),
                             "interior": list(s.interior),
                             "length": s.length} for s in segs]}
        _write_out(canonical_json(obj), args)
        return 0
    lines = []
    for s in segs:
        via = f" via {' '.join(s.interior)}" if s.interior else ""
        lines.append(f"{s.kind} {' '.join(s.ends)} length {s.length}{via}")
    lines.append("branch vertices: " + " ".join(sorted(branch_vertices(g, ctx))))
    _write_out("\n".join(lines) + "\n", args)
    return 0


def cmd_classify(args) -> int:
    comps = connected_components(_load_graph(args.file))
    if not comps:
        raise GraphError("cannot classify the empty graph")
    _write_out("".join(classify_shape(c).label + "\n" for c in comps), args)
    return 0


# -- construction commands ---------------------------------------------------

def cmd_gtimes(args) -> int:
    g = _load_graph(args.file)
    ctx = _load_graph(args.ctx)
    if args.check_branch_count:
        return _emit_report(check_branch_count(g, ctx, args.r), args)
    return _emit_graph(segment_blowup(g, ctx, args.r), args)


def cmd_hstar1(args) -> int:
    h = _load_graph(args.file)
    spec = load_core_spec(_read_text(args.spec))
    anchors = [c for c in connected_components(h)
               if args.anchor in c.vertices]
    if not anchors:
        raise GraphError(f"no component contains vertex {args.anchor!r}")
    out = assemble_component_counterexample(h, anchors[0], spec, args.r,
                                            force=args.force)
    return _emit_graph(out, args)


def cmd_hstar2(args) -> int:
    h = _load_graph(args.file)
    spec = load_core_spec(_read_text(args.spec))
    target = _load_graph(args.predicate)
    pred = MinorPredicate(f"contains-minor:{args.predicate}", target)
    out, trace = assemble_block_counterexample(h, pred, spec, args.r,
                                               force=args.force)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(canonical_json(trace.to_json_obj()))
    return _emit_graph(out, args)


# -- query commands ----------------------------------------------------------

def cmd_minor(args) -> int:
    h = _load_graph(args.pattern)
    g = _load_graph(args.host)
    t0 = perf_counter()
    if args.verify:
        with open(args.verify, encoding="utf-8") as fh:
            obj = json.load(fh)
        if "branch_sets" not in obj:
            details = obj.get("details", {})
            obj = details.get("embedding") or details.get("witness_embedding")
            if obj is None:
                raise GraphError("no embedding found in the witness file")
        try:
            emb = MinorEmbedding.from_json_obj(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError(f"malformed witness: {exc}") from None
        ok = verify_embedding(h, g, emb)
        rep = Report("witness-verify",
                     Outcome.HOLDS if ok else Outcome.REFUTED,
                     {"witness": args.verify}, {"nodes": 0},
                     perf_counter() - t0)
        return _emit_report(rep, args)
    res = find_expansion(h, g, node_budget=args.budget.nodes)
    outcome = {SearchStatus.FOUND: Outcome.HOLDS,
               SearchStatus.NONE: Outcome.REFUTED,
               SearchStatus.BUDGET: Outcome.BUDGET}[res.status]
    details: dict = {"pattern": graph_json(h), "host_vertices": len(g.vertices)}
    if res.embedding is not None:
        details["embedding"] = res.embedding.to_json_obj()
    rep = Report("minor-test", outcome, details, {"nodes": res.nodes},
                 perf_counter() - t0)
    return _emit_report(rep, args)


def cmd_pack(args) -> int:
    h = _load_graph(args.pattern)
    g = _load_graph(args.host)
    t0 = perf_counter()
    res = max_edge_disjoint_packing(h, g, cap=args.cap,
                                    node_budget=args.budget.nodes)
    details = {"count": res.count, "cap": args.cap,
               "witness": [[[u, v] for u, v in sorted(fp)]
                           for fp in res.witness]}
    rep = Report("packing",
                 Outcome.HOLDS if res.exact else Outcome.BUDGET,
                 details, {"nodes": res.nodes}, perf_counter() - t0)
    return _emit_report(rep, args)


def cmd_hit(args) -> int:
    h = _load_graph(args.pattern)
    g = _load_graph(args.host)
    t0 = perf_counter()
    res = min_edge_hitting_set(h, g, bound=args.bound, budget=args.budget)
    if not res.exact:
        outcome = Outcome.BUDGET
    elif res.size is None:
        outcome = Outcome.REFUTED
    else:
        outcome = Outcome.HOLDS
    details = {"size": res.size, "bound": args.bound,
               "hitting_edges": None if res.hitting_edges is None
               else [[u, v] for u, v in res.hitting_edges]}
    rep = Report("hitting", outcome, details,
                 {"nodes": res.nodes, "subsets_checked": res.subsets},
                 perf_counter() - t0)
    return _emit_report(rep, args)


# -- verification commands ---------------------------------------------------

def cmd_robust(args) -> int:
    _print_seed(args)
    if args.gadget and not args.ctx:
        raise GraphError("--gadget only applies together with --ctx")
    if args.roots and not args.host:
        raise GraphError("--roots only applies together with --host")
    if args.ctx:
        g = _load_graph(args.file)
        ctx = _load_graph(args.ctx)
        gadget = _load_graph(args.gadget) if args.gadget else None
        rep = check_gadget_robustness(g, ctx, args.r, args.budget, args.seed,
                                      args.jobs, args.force_sample, gadget)
    else:
        pattern = _load_graph(args.file)
        host = _load_graph(args.host)
        roots = _parse_roots(args.roots) if args.roots else None
        rep = check_assembly_robustness(pattern, host, args.r, roots,
                                        args.budget, args.seed, args.jobs,
                                        args.force_sample)
    return _emit_report(rep, args)


def cmd_locality(args) -> int:
    h = _load_graph(args.pattern)
    hstar = _load_graph(args.host)
    anchor = _load_graph(args.anchor)
    region = _parse_region(args.region)
    rep = check_expansion_locality(h, hstar, anchor, region, args.budget)
    return _emit_report(rep, args)


def cmd_gencheck(args) -> int:
    _print_seed(args)
    anchor = _load_graph(args.anchor)
    spec = load_core_spec(_read_text(args.spec))
    rep = check_generic_counterexample(anchor, spec, args.budget, args.seed,
                                       args.jobs, args.force_sample)
    return _emit_report(rep, args)


def cmd_hereditary(args) -> int:
    _print_seed(args)
    target = _load_graph(args.target)
    corpus = [_load_graph(p) for p in args.corpus]
    pred = MinorPredicate(f"contains-minor:{args.target}", target)
    rep = check_hereditary_sampled(pred, corpus, args.trials, args.steps,
                                   args.seed)
    return _emit_report(rep, args)


# -- wiring -------------------------------------------------------------------

def _add_budget(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=_parse_budget, default=Budget(),
                   metavar="NODES[:SUBSETS[:TRIALS]]",
                   help="search-node / subset-scan / sample limits")


def _add_scan_flags(p: argparse.ArgumentParser) -> None:
    _add_budget(p)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED,
                   help="sampling seed (default %(default)s)")
    p.add_argument("--jobs", type=_positive_int, default=1,
                   help="parallel scan workers (default 1)")
    p.add_argument("--force-sample", action="store_true",
                   help="sample even when exhaustive scanning is feasible")


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", metavar="PATH",
                   help="write to PATH instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="minorbench",
                     description="graph-minor gadget construction and "
                                 "verification workbench")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    p = sub.add_parser("components", help="list connected components")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_output(p)
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("blocks", help="block-cut tree of a connected graph")
    p.add_argument("file")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_output(p)
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("segments",
                       help="segment decomposition against a context graph")
    p.add_argument("file")
    p.add_argument("--ctx", required=True, metavar="CTXFILE")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_output(p)
    p.set_defaults(func=cmd_segments)

    p = sub.add_parser("classify",
                       help="shape of each component (Cycle, Path, ...)")
    p.add_argument("file")
    _add_output(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("gtimes",
                       help="replace every segment by r parallel copies")
    p.add_argument("file")
    p.add_argument("--ctx", required=True, metavar="CTXFILE")
    p.add_argument("-r", type=_positive_int, required=True,
                   help="replication count")
    p.add_argument("--format", choices=["edge-list", "dot"],
                   default="edge-list")
    p.add_argument("--check-branch-count", action="store_true",
                   help="report on the branch-vertex correspondence instead")
    _add_output(p)
    p.set_defaults(func=cmd_gtimes)

    p = sub.add_parser("hstar1",
                       help="assemble the component-level counterexample")
    p.add_argument("file", help="host graph")
    p.add_argument("spec", help="core spec document")
    p.add_argument("--anchor", required=True, metavar="VERTEX",
                   help="any vertex of the anchor component")
    p.add_argument("-r", type=_positive_int, required=True)
    p.add_argument("--force", action="store_true",
                   help="lift the exact-search size guard")
    p.add_argument("--format", choices=["edge-list", "dot"],
                   default="edge-list")
    _add_output(p)
    p.set_defaults(func=cmd_hstar1)

    p = sub.add_parser("hstar2",
                       help="assemble the block-level counterexample")
    p.add_argument("file", help="host graph")
    p.add_argument("spec", help="core spec document")
    p.add_argument("--predicate", required=True, metavar="TARGETFILE",
                   help="block predicate: contains this graph as a minor")
    p.add_argument("-r", type=_positive_int, required=True)
    p.add_argument("--force", action="store_true",
                   help="lift the exact-search size guard")
    p.add_argument("--trace", metavar="PATH",
                   help="also write the build trace as JSON")
    p.add_argument("--format", choices=["edge-list", "dot"],
                   default="edge-list")
    _add_output(p)
    p.set_defaults(func=cmd_hstar2)

    p = sub.add_parser("minor", help="test pattern <= host and emit a model")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("--verify", metavar="WITNESS",
                   help="check a stored embedding instead of searching")
    _add_budget(p)
    _add_output(p)
    p.set_defaults(func=cmd_minor)

    p = sub.add_parser("pack",
                       help="maximum edge-disjoint expansion packing")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("--cap", type=_positive_int, default=None,
                   help="stop once this many disjoint copies are found")
    _add_budget(p)
    _add_output(p)
    p.set_defaults(func=cmd_pack)

    p = sub.add_parser("hit", help="minimum expansion-hitting edge set")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("--bound", type=_nonneg_int, default=None,
                   help="largest hitting-set size to try")
    _add_budget(p)
    _add_output(p)
    p.set_defaults(func=cmd_hit)

    p = sub.add_parser("robust",
                       help="expansions survive all small edge deletions")
    p.add_argument("file", help="pattern graph")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--ctx", metavar="CTXFILE",
                      help="scan the blowup of the pattern in this context")
    mode.add_argument("--host", metavar="HOSTFILE",
                      help="scan this host graph directly")
    p.add_argument("-r", type=_positive_int, required=True,
                   help="deletion radius: all deletions of fewer edges")
    p.add_argument("--gadget", metavar="HOSTFILE",
                   help="with --ctx: scan this prebuilt gadget instead")
    p.add_argument("--roots", metavar="P=H,..",
                   help="with --host: pin pattern vertices to host vertices")
    _add_scan_flags(p)
    _add_output(p)
    p.set_defaults(func=cmd_robust)

    p = sub.add_parser("locality",
                       help="expansions realize the anchor inside a region")
    p.add_argument("pattern")
    p.add_argument("host")
    p.add_argument("anchor", help="anchor subgraph of the pattern")
    p.add_argument("--region", required=True, metavar="V1,V2,..|@FILE",
                   help="host vertices forming the region")
    _add_budget(p)
    _add_output(p)
    p.set_defaults(func=cmd_locality)

    p = sub.add_parser("gencheck",
                       help="core beats the packing bound yet resists "
                            "deletions")
    p.add_argument("anchor", help="anchor pattern graph")
    p.add_argument("spec", help="core spec document")
    _add_scan_flags(p)
    _add_output(p)
    p.set_defaults(func=cmd_gencheck)

    p = sub.add_parser("hereditary",
                       help="minor steps never create the target minor")
    p.add_argument("target", help="target pattern graph")
    p.add_argument("corpus", nargs="+", help="corpus graph files")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--steps", type=_positive_int, default=4,
                   help="maximum minor operations per trial")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _add_output(p)
    p.set_defaults(func=cmd_hereditary)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
