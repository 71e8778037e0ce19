"""Packing, hitting, deletion scans, locality, and report determinism."""

import random

import pytest

from minorbench import (Budget, CoreSpec, Graph, GraphError, MinorEmbedding,
                        MinorPredicate, Outcome, Report, SearchStatus,
                        assemble_block_counterexample,
                        assemble_component_counterexample, canonical_json,
                        check_assembly_robustness, check_branch_count,
                        check_expansion_locality, check_gadget_robustness,
                        check_generic_counterexample,
                        check_hereditary_sampled, connected_components,
                        core_region, delete_edges, find_expansion, graph_json,
                        is_minor, max_edge_disjoint_packing,
                        min_edge_hitting_set, naive_is_minor_oracle,
                        verify_embedding)
from helpers import (complete, graphs_up_to_iso, k5_spec, oracle_min_hitting,
                     p3_star, path_graph, random_connected_graph, random_graph,
                     rooted_spec, tailed_square, triangle_with_tail,
                     two_part_host)


class TestReportPlumbing:
    def test_canonical_json_is_sorted_and_terminated(self):
        s = canonical_json({"b": 1, "a": [2, 1]})
        assert s == '{\n  "a": [\n    2,\n    1\n  ],\n  "b": 1\n}\n'

    def test_graph_json(self):
        g = Graph.build([], [("b", "a")])
        assert graph_json(g) == {"vertices": ["a", "b"], "edges": [["a", "b"]]}

    def test_elapsed_excluded_from_json(self):
        a = Report("x", Outcome.HOLDS, {}, {}, elapsed=0.5)
        b = Report("x", Outcome.HOLDS, {}, {}, elapsed=9.9)
        assert a.to_json() == b.to_json()

    @pytest.mark.parametrize("outcome,code", [
        (Outcome.HOLDS, 0), (Outcome.REFUTED, 1), (Outcome.BUDGET, 2)])
    def test_exit_codes(self, outcome, code):
        assert Report("x", outcome).exit_code == code


class TestPacking:
    def test_triangles_in_k5(self):
        res = max_edge_disjoint_packing(complete("xyz"), complete("12345"))
        assert res.count == 3 and res.exact
        seen = set()
        for fp in res.witness:
            assert not (fp & seen)
            seen |= fp
            host = complete("12345").edge_subgraph(fp)
            assert is_minor(complete("xyz"), host)

    def test_k4_in_k5(self):
        res = max_edge_disjoint_packing(complete("wxyz"), complete("12345"))
        assert res.count == 1 and res.exact

    def test_triangle_in_k4(self):
        res = max_edge_disjoint_packing(complete("xyz"), complete("pqst"))
        assert res.count == 1 and res.exact

    def test_two_disjoint_triangles(self):
        host = Graph.build([], [("a", "b"), ("b", "c"), ("a", "c"),
                                ("p", "q"), ("q", "r"), ("p", "r")])
        res = max_edge_disjoint_packing(complete("xyz"), host)
        assert res.count == 2

    def test_absent_pattern_packs_zero(self):
        res = max_edge_disjoint_packing(complete("xyz"), path_graph("abcd"))
        assert res.count == 0 and res.witness == () and res.exact

    def test_cap_stops_early(self):
        res = max_edge_disjoint_packing(complete("xyz"), complete("12345"),
                                        cap=1)
        assert res.count == 1

    def test_rejects_edgeless_pattern(self):
        with pytest.raises(GraphError):
            max_edge_disjoint_packing(Graph.build("ab", []), complete("xy"))

    def test_budget_marks_inexact(self):
        res = max_edge_disjoint_packing(complete("xyz"), complete("12345"),
                                        node_budget=3)
        assert not res.exact


class TestHitting:
    def test_triangle_in_k4_needs_three(self):
        res = min_edge_hitting_set(complete("xyz"), complete("pqst"))
        assert res.size == 3 and res.exact
        assert len(res.hitting_edges) == 3
        rest = delete_edges(complete("pqst"), res.hitting_edges)
        assert not naive_is_minor_oracle(complete("xyz"), rest)

    def test_triangle_in_k5_needs_six(self):
        res = min_edge_hitting_set(complete("xyz"), complete("12345"))
        assert res.size == 6 and res.exact

    def test_absent_pattern_hit_by_nothing(self):
        res = min_edge_hitting_set(complete("xyz"), path_graph("abcd"))
        assert res.size == 0 and res.hitting_edges == ()

    def test_bound_below_answer(self):
        res = min_edge_hitting_set(complete("xyz"), complete("pqst"), bound=2)
        assert res.size is None and res.exact

    def test_subset_budget_marks_inexact(self):
        res = min_edge_hitting_set(complete("xyz"), complete("12345"),
                                   budget=Budget(subsets=2))
        assert res.size is None and not res.exact

    def test_deterministic(self):
        a = min_edge_hitting_set(complete("xyz"), complete("pqst"))
        b = min_edge_hitting_set(complete("xyz"), complete("pqst"))
        assert a == b

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_independent_oracle(self, seed):
        rng = random.Random(seed)
        host = random_graph(rng, 5, rng.uniform(0.3, 0.9))
        pattern = complete("xyz") if seed % 2 else path_graph("xyz")
        res = min_edge_hitting_set(pattern, host)
        assert res.exact
        assert res.size == oracle_min_hitting(pattern, host)

    def test_rejects_edgeless_pattern(self):
        with pytest.raises(GraphError):
            min_edge_hitting_set(Graph.build("ab", []), complete("xy"))


class TestGadgetRobustness:
    def test_tailed_square_r3_exhaustive(self):
        g, ctx = tailed_square()
        rep = check_gadget_robustness(g, ctx, 3)
        assert rep.outcome is Outcome.HOLDS
        assert rep.details["mode"] == "exhaustive"
        assert rep.details["deletion_size"] == 2
        assert rep.details["host_edges"] == 18
        assert rep.stats["subsets_checked"] == 153
        assert rep.stats["subsets_planned"] == 153

    def test_thinned_gadget_refuted_with_reverifiable_witness(self):
        g, ctx = p3_star()
        thinned = Graph.build(["b", "a0", "c0"], [("b", "a0"), ("b", "c0")])
        rep = check_gadget_robustness(g, ctx, 2, gadget=thinned)
        assert rep.outcome is Outcome.REFUTED
        assert rep.exit_code == 1
        assert rep.details["witness_deletion"] == [["a0", "b"]]
        X = [tuple(e) for e in rep.details["witness_deletion"]]
        res = find_expansion(g, delete_edges(thinned, X))
        assert res.status is SearchStatus.NONE

    def test_sampled_mode_is_seed_deterministic(self):
        g, ctx = tailed_square()
        b = Budget(subsets=10, trials=15)
        rep1 = check_gadget_robustness(g, ctx, 3, budget=b, seed=7)
        rep2 = check_gadget_robustness(g, ctx, 3, budget=b, seed=7)
        assert rep1.details["mode"] == "sampled"
        assert rep1.stats["subsets_planned"] == 15
        assert rep1.outcome is Outcome.HOLDS
        assert rep1.to_json() == rep2.to_json()

    def test_force_sample_flag(self):
        g, ctx = tailed_square()
        rep = check_gadget_robustness(g, ctx, 2, budget=Budget(trials=5),
                                      force_sample=True)
        assert rep.details["mode"] == "sampled"

    def test_worker_count_does_not_change_the_report(self):
        g, ctx = tailed_square()
        serial = check_gadget_robustness(g, ctx, 2)
        parallel = check_gadget_robustness(g, ctx, 2, jobs=2)
        assert serial.to_json() == parallel.to_json()

    def test_node_budget_exhaustion(self):
        g, ctx = tailed_square()
        rep = check_gadget_robustness(g, ctx, 2, budget=Budget(nodes=1))
        assert rep.outcome is Outcome.BUDGET
        assert rep.exit_code == 2
        assert "stopped_at" in rep.details

    def test_rejects_bad_parameters(self):
        g, ctx = tailed_square()
        with pytest.raises(GraphError):
            check_gadget_robustness(g, ctx, 0)
        with pytest.raises(GraphError):
            check_gadget_robustness(g, ctx, 2, jobs=0)


class TestAssemblyRobustness:
    def test_component_assembly_survives_single_deletions(self):
        h = two_part_host()
        anchor = connected_components(h)[0]
        hstar = assemble_component_counterexample(h, anchor, k5_spec(), 2)
        rep = check_assembly_robustness(h, hstar, 2)
        assert rep.outcome is Outcome.HOLDS
        assert rep.stats["subsets_checked"] == 12

    def test_rooted_scan_holds_on_block_assembly(self):
        h = triangle_with_tail()
        pred = MinorPredicate("contains-K3", complete("xyz"))
        hstar, trace = assemble_block_counterexample(h, pred, rooted_spec(), 2)
        roots = {"s": "s#1"}
        rep = check_assembly_robustness(h, hstar, 2, roots=roots)
        assert rep.outcome is Outcome.HOLDS
        assert rep.details["roots"] == {"s": "s#1"}
        assert rep.stats["subsets_checked"] == 12

    def test_rooted_scan_refuted_when_pin_is_cut_off(self):
        rep = check_assembly_robustness(path_graph("ab"), path_graph("pqr"),
                                        2, roots={"a": "p"})
        assert rep.outcome is Outcome.REFUTED
        assert rep.details["witness_deletion"] == [["p", "q"]]

    def test_rejects_unknown_root_names(self):
        with pytest.raises(GraphError):
            check_assembly_robustness(path_graph("ab"), path_graph("pq"),
                                      2, roots={"zz": "p"})
        with pytest.raises(GraphError):
            check_assembly_robustness(path_graph("ab"), path_graph("pq"),
                                      2, roots={"a": "zz"})


class TestGenericCounterexample:
    def test_k4_against_k5_core_holds(self):
        rep = check_generic_counterexample(complete("pqst"), k5_spec())
        assert rep.outcome is Outcome.HOLDS
        assert rep.details["packing_found"] == 1
        assert rep.details["packing_bound"] == 4
        assert rep.stats["subsets_checked"] == 10

    def test_refuted_when_packing_reaches_bound(self):
        spec = CoreSpec(complete("12345"), {}, k=3, r=2)
        rep = check_generic_counterexample(complete("xyz"), spec)
        assert rep.outcome is Outcome.REFUTED
        assert rep.details["packing_found"] == 3
        assert len(rep.details["packing_witness"]) == 3

    def test_budget_when_packing_inexact(self):
        spec = CoreSpec(complete("12345"), {}, k=4, r=2)
        rep = check_generic_counterexample(complete("pqst"), spec,
                                           budget=Budget(nodes=2))
        assert rep.outcome is Outcome.BUDGET

    def test_rejects_roots_outside_anchor(self):
        spec = CoreSpec(complete("12345"), {"zz": "1"}, k=4, r=2)
        with pytest.raises(GraphError):
            check_generic_counterexample(complete("pqst"), spec)


class TestExpansionLocality:
    def test_component_assembly_fast_path(self):
        h = two_part_host()
        anchor = connected_components(h)[0]
        hstar = assemble_component_counterexample(h, anchor, k5_spec(), 2)
        rep = check_expansion_locality(h, hstar, anchor, core_region(hstar))
        assert rep.outcome is Outcome.HOLDS
        assert rep.stats["footprints"] == 110
        assert rep.stats["restricted_searches"] == 0

    def test_block_assembly_restricted_path(self):
        h = triangle_with_tail()
        pred = MinorPredicate("contains-K3", complete("xyz"))
        hstar, _ = assemble_block_counterexample(h, pred, rooted_spec(), 2)
        anchor = h.induced("bcs")
        rep = check_expansion_locality(h, hstar, anchor, core_region(hstar))
        assert rep.outcome is Outcome.HOLDS
        assert rep.stats["restricted_searches"] > 0

    def test_refuted_when_region_misses_the_anchor(self):
        h = Graph.build([], [("p", "q"), ("p", "s"), ("p", "t"), ("q", "s"),
                             ("q", "t"), ("s", "t"), ("y", "z")])
        bad = Graph.build([], [("e1", "e2"), ("e1", "e3"), ("e1", "e4"),
                               ("e2", "e3"), ("e2", "e4"), ("e3", "e4"),
                               ("f1", "f2")])
        anchor = connected_components(h)[0]
        rep = check_expansion_locality(h, bad, anchor, ["f1", "f2"])
        assert rep.outcome is Outcome.REFUTED
        emb = MinorEmbedding.from_json_obj(rep.details["witness_embedding"])
        assert verify_embedding(h, bad, emb)
        assert rep.details["witness_footprint"]

    def test_budget_outcome(self):
        h = two_part_host()
        anchor = connected_components(h)[0]
        hstar = assemble_component_counterexample(h, anchor, k5_spec(), 2)
        rep = check_expansion_locality(h, hstar, anchor, core_region(hstar),
                                       budget=Budget(nodes=2))
        assert rep.outcome is Outcome.BUDGET

    def test_rejects_bad_anchor_and_region(self):
        h = complete("ab")
        with pytest.raises(GraphError):
            check_expansion_locality(h, complete("pq"), complete("xy"),
                                     ["p"])
        with pytest.raises(GraphError):
            check_expansion_locality(h, complete("pq"), h, ["zz"])


class TestBranchCount:
    def test_tailed_square(self):
        g, ctx = tailed_square()
        rep = check_branch_count(g, ctx, 3)
        assert rep.outcome is Outcome.HOLDS
        assert rep.details["expected"] == ["v", "w"]
        assert rep.details["count"] == 2
        assert rep.details["blowup_vertices"] == 14
        assert rep.details["blowup_edges"] == 18

    def test_rejects_small_replication(self):
        g, ctx = tailed_square()
        with pytest.raises(GraphError):
            check_branch_count(g, ctx, 2)

    @pytest.mark.parametrize("seed", range(20))
    def test_seeded_instances(self, seed):
        rng = random.Random(seed)
        g = random_connected_graph(rng, rng.randint(2, 7), extra=3)
        extra = [(v, f"x{i}") for i, v in enumerate(g.sorted_vertices())
                 if rng.random() < 0.5]
        ctx = Graph.build([], list(g.edges) + extra) if extra else g
        if not any(ctx.degree(v) >= 3 for v in g.vertices):
            return
        rep = check_branch_count(g, ctx, rng.choice([3, 4]))
        assert rep.outcome is Outcome.HOLDS


class TestHereditary:
    def test_holds_on_small_corpus(self):
        pred = MinorPredicate("contains-K3", complete("xyz"))
        rep = check_hereditary_sampled(pred, list(graphs_up_to_iso(4)),
                                       trials=60, steps=4, seed=5)
        assert rep.outcome is Outcome.HOLDS
        assert rep.stats["checked"] + rep.stats["skipped"] == 60

    def test_seed_deterministic(self):
        pred = MinorPredicate("contains-K3", complete("xyz"))
        corpus = list(graphs_up_to_iso(4))
        a = check_hereditary_sampled(pred, corpus, trials=30, seed=9)
        b = check_hereditary_sampled(pred, corpus, trials=30, seed=9)
        assert a.to_json() == b.to_json()

    def test_rejects_empty_corpus(self):
        pred = MinorPredicate("contains-K3", complete("xyz"))
        with pytest.raises(GraphError):
            check_hereditary_sampled(pred, [])
