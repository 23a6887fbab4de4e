from itertools import permutations

import pytest

from designbench import grammar as gr
from designbench.domains import SetDomain, TypeDomain
from conftest import load_fixture_bytes
from oracles import brute_force_isomorphic, enumerate_designs


@pytest.fixture(scope="module")
def shaft():
    return gr.parse_grammar(load_fixture_bytes("shaft.grammar.json"))


@pytest.fixture(scope="module")
def gearbox():
    return gr.parse_grammar(load_fixture_bytes("gearbox.grammar.json"))


def section(node_id, shape="ungrooved", diameter=1, length=1):
    return gr.GraphNode.make(node_id, "section",
                             {"shape": shape, "diameter": diameter, "length": length})


def shaft_design(*nodes_and_edges):
    nodes, edges = nodes_and_edges
    return gr.Design(tuple(nodes), tuple(edges))


def three_section_shaft():
    end = gr.GraphNode.make("e", "end", {"finished": False})
    nodes = [section("a"), section("b"), section("c"), end]
    edges = [gr.GraphEdge("a", "b", "next"), gr.GraphEdge("b", "c", "next"),
             gr.GraphEdge("c", "e", "next")]
    return gr.Design(tuple(nodes), tuple(edges))


def brute_force_embeddings(rule: gr.Rule, design: gr.Design) -> int:
    """Count injective label/predicate/edge-respecting node embeddings."""
    lhs = rule.lhs
    count = 0
    ids = [n.id for n in design.nodes]
    for perm in permutations(ids, len(lhs.nodes)):
        mapping = dict(zip((n.id for n in lhs.nodes), perm))
        ok = True
        for pattern in lhs.nodes:
            node = design.node(mapping[pattern.id])
            if node.label != pattern.label:
                ok = False
                break
            attrs = node.attr_map()
            if not all(p.attr in attrs and p.holds(attrs[p.attr])
                       for p in pattern.predicates):
                ok = False
                break
        if not ok:
            continue
        for edge in lhs.edges:
            if not any(
                e.source == mapping[edge.source] and e.target == mapping[edge.target]
                and e.label == edge.label
                for e in design.edges
            ):
                ok = False
                break
        if ok:
            count += 1
    return count


class TestFindMatches:
    def test_single_node_lhs_counts_label_occurrences(self, shaft):
        rule = shaft.rule("groove_section")
        matches = gr.find_matches(rule, three_section_shaft())
        assert len(matches) == 3

    def test_absent_label_gives_no_match(self, shaft):
        rule = shaft.rule("groove_section")
        only_end = gr.Design((gr.GraphNode.make("e", "end", {"finished": False}),))
        assert gr.find_matches(rule, only_end) == []

    def test_two_node_chain_in_three_node_chain(self):
        vocab = gr.Vocabulary.make({"part": {}}, ["next"])
        lhs = gr.PatternGraph(
            (gr.PatternNode("x", "part"), gr.PatternNode("y", "part")),
            (gr.PatternEdge("x", "y", "next"),),
        )
        rule = gr.Rule("chain", lhs, gr.RhsGraph((gr.RhsNode.make("x", "part"),
                                                  gr.RhsNode.make("y", "part"))),
                       anchors=(("x", "x"), ("y", "y")))
        design = gr.Design(
            tuple(gr.GraphNode.make(i, "part") for i in "abc"),
            (gr.GraphEdge("a", "b", "next"), gr.GraphEdge("b", "c", "next")),
        )
        matches = gr.find_matches(rule, design)
        assert len(matches) == 2
        assert len(matches) == brute_force_embeddings(rule, design)

    def test_match_counts_agree_with_brute_force(self, shaft):
        designs = [g.design for g in gr.generate(shaft, 2, 50).designs]
        for rule in shaft.rules:
            for design in designs:
                assert len(gr.find_matches(rule, design)) == \
                    brute_force_embeddings(rule, design)

    def test_matches_are_deterministically_ordered(self, shaft):
        rule = shaft.rule("groove_section")
        design = three_section_shaft()
        assert gr.find_matches(rule, design) == gr.find_matches(rule, design)


class TestApply:
    def test_add_section_grows_shaft(self, shaft):
        rule = shaft.rule("add_section")
        match = gr.find_matches(rule, shaft.axiom)[0]
        grown = gr.apply(rule, shaft.axiom, match, shaft.vocabulary)
        assert sum(1 for n in grown.nodes if n.label == "section") == 2
        assert not shaft.vocabulary.check_design(grown)

    def test_groove_section_updates_attribute(self, shaft):
        rule = shaft.rule("groove_section")
        match = gr.find_matches(rule, shaft.axiom)[0]
        grooved = gr.apply(rule, shaft.axiom, match, shaft.vocabulary)
        assert grooved.node("s1").get("shape") == "grooved"
        assert grooved.node("s1").get("diameter") == 1  # untouched attrs survive

    def test_rule_then_inverse_restores_design(self, shaft):
        vocab = shaft.vocabulary
        groove = shaft.rule("groove_section")
        ungroove = gr.Rule(
            "ungroove_section",
            lhs=gr.PatternGraph((gr.PatternNode(
                "s", "section", (gr.AttrPredicate("shape", "eq", "grooved"),)),)),
            rhs=gr.RhsGraph((gr.RhsNode.make("s", "section", {"shape": "ungrooved"}),)),
            anchors=(("s", "s"),),
        )
        match = gr.find_matches(groove, shaft.axiom)[0]
        grooved = gr.apply(groove, shaft.axiom, match, vocab)
        back_match = gr.find_matches(ungroove, grooved)[0]
        assert gr.apply(ungroove, grooved, back_match, vocab) == shaft.axiom

    def test_stale_match_rejected(self, shaft):
        groove = shaft.rule("groove_section")
        match = gr.find_matches(groove, shaft.axiom)[0]
        grooved = gr.apply(groove, shaft.axiom, match, shaft.vocabulary)
        with pytest.raises(gr.StaleMatchError):
            gr.apply(groove, grooved, match)  # predicate no longer holds

    def test_dangling_edge_rejected(self):
        vocab = gr.Vocabulary.make({"part": {}}, ["next"])
        delete = gr.Rule(
            "delete_part",
            lhs=gr.PatternGraph((gr.PatternNode("x", "part"),)),
            rhs=gr.RhsGraph(()),
            anchors=(),
        )
        design = gr.Design(
            (gr.GraphNode.make("a", "part"), gr.GraphNode.make("b", "part")),
            (gr.GraphEdge("a", "b", "next"),),
        )
        match = gr.find_matches(delete, design)[0]
        with pytest.raises(gr.DanglingEdgeError):
            gr.apply(delete, design, match, vocab)

    def test_node_removal_takes_matched_edges(self):
        vocab = gr.Vocabulary.make({"part": {}}, ["next"])
        contract = gr.Rule(
            "drop_tail",
            lhs=gr.PatternGraph(
                (gr.PatternNode("x", "part"), gr.PatternNode("y", "part")),
                (gr.PatternEdge("x", "y", "next"),),
            ),
            rhs=gr.RhsGraph((gr.RhsNode.make("x", "part"),)),
            anchors=(("x", "x"),),
        )
        design = gr.Design(
            (gr.GraphNode.make("a", "part"), gr.GraphNode.make("b", "part")),
            (gr.GraphEdge("a", "b", "next"),),
        )
        match = gr.find_matches(contract, design)[0]
        shrunk = gr.apply(contract, design, match, vocab)
        assert shrunk.node_ids() == {"a"}
        assert shrunk.edges == ()

    def test_matched_edge_between_anchors_is_consumed(self):
        vocab = gr.Vocabulary.make({"part": {}}, ["next"])
        unlink = gr.Rule(
            "unlink",
            lhs=gr.PatternGraph(
                (gr.PatternNode("x", "part"), gr.PatternNode("y", "part")),
                (gr.PatternEdge("x", "y", "next"),),
            ),
            rhs=gr.RhsGraph((gr.RhsNode.make("x", "part"), gr.RhsNode.make("y", "part"))),
            anchors=(("x", "x"), ("y", "y")),
        )
        design = gr.Design(
            (gr.GraphNode.make("a", "part"), gr.GraphNode.make("b", "part")),
            (gr.GraphEdge("a", "b", "next"), gr.GraphEdge("a", "b", "next")),
        )
        match = gr.find_matches(unlink, design)[0]
        cut = gr.apply(unlink, design, match, vocab)
        # exactly the matched instance disappears; the parallel one survives
        assert cut.edges == (gr.GraphEdge("a", "b", "next"),)
        assert cut.node_ids() == {"a", "b"}

    def test_copy_expression_moves_attribute(self):
        vocab = gr.Vocabulary.make({"cell": {"v": TypeDomain("int")}}, ["next"])
        rule = gr.Rule(
            "duplicate",
            lhs=gr.PatternGraph((gr.PatternNode("x", "cell"),)),
            rhs=gr.RhsGraph(
                (gr.RhsNode.make("x", "cell"),
                 gr.RhsNode.make("y", "cell", {"v": gr.CopyAttr("x", "v")})),
                (gr.PatternEdge("x", "y", "next"),),
            ),
            anchors=(("x", "x"),),
        )
        design = gr.Design((gr.GraphNode.make("a", "cell", {"v": 41}),))
        match = gr.find_matches(rule, design)[0]
        grown = gr.apply(rule, design, match, vocab)
        new_node = next(n for n in grown.nodes if n.id != "a")
        assert new_node.get("v") == 41


class TestCanonicalForm:
    def test_renamed_designs_share_canonical_form(self, shaft):
        design = three_section_shaft()
        renamed = gr.Design(
            tuple(gr.GraphNode(f"z_{n.id}", n.label, n.attrs) for n in design.nodes),
            tuple(gr.GraphEdge(f"z_{e.source}", f"z_{e.target}", e.label)
                  for e in design.edges),
        )
        assert gr.canonical_form(design) == gr.canonical_form(renamed)

    def test_attribute_difference_changes_form(self):
        plain = gr.Design((section("a"),))
        grooved = gr.Design((section("a", shape="grooved"),))
        assert gr.canonical_form(plain) != gr.canonical_form(grooved)

    def test_agrees_with_brute_force_isomorphism(self, shaft, gearbox):
        pool = [g.design for g in gr.generate(shaft, 2, 50).designs]
        pool += [g.design for g in gr.generate(gearbox, 2, 50).designs]
        small = [d for d in pool if len(d.nodes) <= 8]
        assert len(small) >= 20
        for i, a in enumerate(small):
            for b in small[i:]:
                assert (gr.canonical_form(a) == gr.canonical_form(b)) == \
                    brute_force_isomorphic(a, b)

    def test_symmetric_multigraph_pair(self):
        # two parallel edges vs a single edge: multiplicity must matter
        single = gr.Design(
            (gr.GraphNode.make("a", "part"), gr.GraphNode.make("b", "part")),
            (gr.GraphEdge("a", "b", "next"),),
        )
        double = gr.Design(
            single.nodes, single.edges + (gr.GraphEdge("a", "b", "next"),)
        )
        assert gr.canonical_form(single) != gr.canonical_form(double)


class TestGenerate:
    def test_zero_rules_yields_axiom(self, shaft):
        bare = gr.Grammar(shaft.vocabulary, (), shaft.axiom)
        result = gr.generate(bare, 3, 100)
        assert len(result) == 1
        assert result.designs[0].design == shaft.axiom

    def test_budget_of_one_yields_axiom_only(self, shaft):
        result = gr.generate(shaft, 3, 1)
        assert len(result) == 1
        assert result.designs[0].design == shaft.axiom

    def test_zero_limits_rejected(self, shaft):
        with pytest.raises(ValueError):
            gr.generate(shaft, 0, 10)
        with pytest.raises(ValueError):
            gr.generate(shaft, 3, 0)

    def test_depth_three_design_count_regression(self, shaft):
        # independently confirmed by the brute-force derivation enumerator
        # in test_acceptance (criterion 4)
        assert len(gr.generate(shaft, 3, 10_000)) == 56

    def test_generated_designs_validate_and_replay(self, shaft):
        result = gr.generate(shaft, 3, 10_000)
        for entry in result.designs:
            assert not shaft.vocabulary.check_design(entry.design)
            assert gr.replay(shaft, entry.derivation) == entry.design

    def test_no_duplicate_canonical_forms(self, shaft):
        forms = gr.generate(shaft, 3, 10_000).canonical_forms()
        assert len(forms) == len(set(forms))

    def test_generation_is_deterministic(self, gearbox):
        first = gr.generate(gearbox, 2, 200)
        second = gr.generate(gearbox, 2, 200)
        assert first.canonical_forms() == second.canonical_forms()
        assert [g.design for g in first.designs] == [g.design for g in second.designs]

    def test_matches_brute_force_enumeration_at_depth_two(self, shaft):
        expected = enumerate_designs(shaft, 2)
        got = gr.generate(shaft, 2, 10_000)
        assert len(got) == len(expected)
        for entry in got.designs:
            assert any(brute_force_isomorphic(entry.design, d) for d in expected)


class TestModify:
    def test_remove_then_readd_restores_generation(self, shaft):
        index = [r.name for r in shaft.rules].index("widen_section")
        rule = shaft.rule("widen_section")
        edited = gr.add_rule(gr.remove_rule(shaft, "widen_section"), rule, index)
        assert gr.generate(edited, 2, 10_000).canonical_forms() == \
            gr.generate(shaft, 2, 10_000).canonical_forms()

    def test_never_matching_rule_changes_nothing(self, shaft):
        noop = gr.Rule(
            "impossible",
            lhs=gr.PatternGraph((gr.PatternNode(
                "s", "section",
                (gr.AttrPredicate("diameter", "gt", 99),),
            ),)),
            rhs=gr.RhsGraph((gr.RhsNode.make("s", "section"),)),
            anchors=(("s", "s"),),
        )
        grown = gr.modify(shaft, gr.AddRule(noop))
        assert gr.generate(grown, 2, 10_000).canonical_forms() == \
            gr.generate(shaft, 2, 10_000).canonical_forms()

    def test_removing_all_rules_leaves_axiom(self, shaft):
        bare = shaft
        for rule in shaft.rules:
            bare = gr.modify(bare, gr.RemoveRule(rule.name))
        assert len(gr.generate(bare, 3, 100)) == 1

    def test_unknown_rule_name_rejected(self, shaft):
        with pytest.raises(KeyError):
            gr.remove_rule(shaft, "no_such_rule")

    def test_replace_axiom_validates_against_vocabulary(self, shaft):
        bad = gr.Design((gr.GraphNode.make("x", "mystery"),))
        with pytest.raises(gr.VocabularyError):
            gr.modify(shaft, gr.ReplaceAxiom(bad))

    def test_original_grammar_untouched(self, shaft):
        before = len(shaft.rules)
        gr.remove_rule(shaft, "finish_shaft")
        assert len(shaft.rules) == before


class TestVocabulary:
    def test_axiom_outside_vocabulary_rejected(self):
        vocab = gr.Vocabulary.make({"part": {"size": SetDomain((1, 2))}}, [])
        bad_axiom = gr.Design((gr.GraphNode.make("a", "part", {"size": 99}),))
        with pytest.raises(gr.VocabularyError):
            gr.Grammar(vocab, (), bad_axiom)

    def test_rule_with_undeclared_attribute_rejected(self):
        vocab = gr.Vocabulary.make({"part": {}}, [])
        rule = gr.Rule(
            "bad",
            lhs=gr.PatternGraph((gr.PatternNode(
                "x", "part", (gr.AttrPredicate("ghost", "eq", 1),)),)),
            rhs=gr.RhsGraph((gr.RhsNode.make("x", "part"),)),
            anchors=(("x", "x"),),
        )
        axiom = gr.Design((gr.GraphNode.make("a", "part"),))
        with pytest.raises(gr.VocabularyError):
            gr.Grammar(vocab, (rule,), axiom)

    def test_duplicate_rule_names_rejected(self, shaft):
        with pytest.raises(ValueError):
            gr.Grammar(shaft.vocabulary, shaft.rules + (shaft.rules[0],), shaft.axiom)
