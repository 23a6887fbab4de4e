"""Attributed graph grammars: vocabulary, rewrite rules, bounded generation.

A grammar is a vocabulary (node labels with attribute schemas, edge
labels), an ordered rule list and an axiom design.  Rules rewrite
``lhs -> rhs``: the left side is matched into a design as an injective,
label- and predicate-respecting embedding; anchored nodes survive the
rewrite (with attribute updates) while unanchored matched nodes are
removed.  Every matched edge instance is consumed, so an edge that
should survive between anchored nodes is simply re-added on the right
side; everything the pattern did not touch is left alone.

Edges reaching a removed node from outside the match are a dangling-edge
condition and reject the application instead of being deleted silently;
such violations almost always indicate an authoring error in the rule.

Designs are deduplicated and ordered by :func:`canonical_form`, an exact
isomorphism-respecting certificate (colour refinement plus
individualisation search; fixture-scale graphs keep the worst case
irrelevant).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .domains import (
    Domain,
    Scalar,
    domain_from_dict,
    is_number,
    same_scalar,
)
from .funcstruct import SchemaError


class VocabularyError(ValueError):
    pass


class StaleMatchError(ValueError):
    """The design changed since this match was produced."""


class DanglingEdgeError(ValueError):
    """An edge outside the match would lose an endpoint."""


# ---------------------------------------------------------------------------
# Designs

@dataclass(frozen=True)
class GraphNode:
    id: str
    label: str
    attrs: tuple[tuple[str, Scalar], ...] = ()

    @classmethod
    def make(cls, node_id: str, label: str,
             attrs: Optional[Mapping[str, Scalar]] = None) -> "GraphNode":
        items = tuple(sorted((attrs or {}).items()))
        return cls(node_id, label, items)

    def attr_map(self) -> dict[str, Scalar]:
        return dict(self.attrs)

    def get(self, name: str) -> Scalar:
        for key, value in self.attrs:
            if key == name:
                return value
        raise KeyError(name)


@dataclass(frozen=True)
class GraphEdge:
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Design:
    """An immutable attributed, labelled directed multigraph."""

    nodes: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...] = ()

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(ids) != len(set(ids)):
            raise ValueError("node ids must be unique")

    def node(self, node_id: str) -> GraphNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}


# ---------------------------------------------------------------------------
# Vocabulary

@dataclass(frozen=True)
class Vocabulary:
    """Node labels with per-attribute domains, plus the legal edge labels."""

    node_labels: tuple[tuple[str, tuple[tuple[str, Domain], ...]], ...]
    edge_labels: tuple[str, ...]

    @classmethod
    def make(cls, node_labels: Mapping[str, Mapping[str, Domain]],
             edge_labels: Sequence[str]) -> "Vocabulary":
        packed = tuple(
            (label, tuple(sorted(schema.items())))
            for label, schema in node_labels.items()
        )
        return cls(packed, tuple(edge_labels))

    def schema_of(self, label: str) -> dict[str, Domain]:
        for name, schema in self.node_labels:
            if name == label:
                return dict(schema)
        raise KeyError(label)

    def has_node_label(self, label: str) -> bool:
        return any(name == label for name, _ in self.node_labels)

    def check_design(self, design: Design) -> list[str]:
        """Conformance problems; empty list means the design is valid."""
        problems = []
        for node in design.nodes:
            if not self.has_node_label(node.label):
                problems.append(f"node {node.id!r}: unknown label {node.label!r}")
                continue
            schema = self.schema_of(node.label)
            attrs = node.attr_map()
            for attr, domain in schema.items():
                if attr not in attrs:
                    problems.append(f"node {node.id!r}: missing attribute {attr!r}")
                elif not domain.contains(attrs[attr]):
                    problems.append(
                        f"node {node.id!r}: value {attrs[attr]!r} outside domain of {attr!r}"
                    )
            for attr in attrs:
                if attr not in schema:
                    problems.append(f"node {node.id!r}: undeclared attribute {attr!r}")
        node_ids = design.node_ids()
        for i, edge in enumerate(design.edges):
            if edge.label not in self.edge_labels:
                problems.append(f"edge [{i}]: unknown label {edge.label!r}")
            for endpoint in (edge.source, edge.target):
                if endpoint not in node_ids:
                    problems.append(f"edge [{i}]: unknown endpoint {endpoint!r}")
        return problems

    def require_valid(self, design: Design, context: str) -> None:
        problems = self.check_design(design)
        if problems:
            raise VocabularyError(f"{context}: " + "; ".join(problems))


# ---------------------------------------------------------------------------
# Rules

_PREDICATE_OPS = ("eq", "ne", "lt", "le", "gt", "ge", "in")


@dataclass(frozen=True)
class AttrPredicate:
    attr: str
    op: str  # one of _PREDICATE_OPS
    value: object

    def holds(self, actual: Scalar) -> bool:
        if self.op == "eq":
            return same_scalar(actual, self.value)
        if self.op == "ne":
            return not same_scalar(actual, self.value)
        if self.op == "in":
            return any(same_scalar(actual, v) for v in self.value)  # type: ignore[union-attr]
        if not is_number(actual) or not is_number(self.value):
            return False
        if self.op == "lt":
            return actual < self.value
        if self.op == "le":
            return actual <= self.value
        if self.op == "gt":
            return actual > self.value
        return actual >= self.value


@dataclass(frozen=True)
class PatternNode:
    id: str
    label: str
    predicates: tuple[AttrPredicate, ...] = ()


@dataclass(frozen=True)
class PatternEdge:
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class PatternGraph:
    nodes: tuple[PatternNode, ...]
    edges: tuple[PatternEdge, ...] = ()


@dataclass(frozen=True)
class CopyAttr:
    """Attribute update that copies a value from a matched node."""

    node: str  # lhs pattern node id
    attr: str


AttrExpr = Union[Scalar, CopyAttr]


@dataclass(frozen=True)
class RhsNode:
    id: str
    label: str
    attrs: tuple[tuple[str, AttrExpr], ...] = ()

    @classmethod
    def make(cls, node_id: str, label: str,
             attrs: Optional[Mapping[str, AttrExpr]] = None) -> "RhsNode":
        return cls(node_id, label, tuple(sorted((attrs or {}).items())))


@dataclass(frozen=True)
class RhsGraph:
    nodes: tuple[RhsNode, ...]
    edges: tuple[PatternEdge, ...] = ()


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: PatternGraph
    rhs: RhsGraph
    anchors: tuple[tuple[str, str], ...] = ()  # lhs node id -> rhs node id

    def __post_init__(self):
        lhs_ids = {n.id for n in self.lhs.nodes}
        rhs_ids = {n.id for n in self.rhs.nodes}
        targets = [rhs for _, rhs in self.anchors]
        if len(targets) != len(set(targets)):
            raise ValueError(f"rule {self.name!r}: anchor map must be injective")
        for lhs_id, rhs_id in self.anchors:
            if lhs_id not in lhs_ids:
                raise ValueError(f"rule {self.name!r}: anchor source {lhs_id!r} not in LHS")
            if rhs_id not in rhs_ids:
                raise ValueError(f"rule {self.name!r}: anchor target {rhs_id!r} not in RHS")

    def anchor_map(self) -> dict[str, str]:
        return dict(self.anchors)

    def anchored_rhs_ids(self) -> set[str]:
        return {rhs for _, rhs in self.anchors}


@dataclass(frozen=True)
class Match:
    """An embedding of a rule's LHS into a design.

    ``nodes`` maps lhs node ids to design node ids; ``edges`` gives, for
    each lhs edge (in lhs order), the index of the matched design edge.
    """

    nodes: tuple[tuple[str, str], ...]
    edges: tuple[int, ...] = ()

    def node_map(self) -> dict[str, str]:
        return dict(self.nodes)


@dataclass(frozen=True)
class DerivationStep:
    rule: str
    match: Match


@dataclass(frozen=True)
class Derivation:
    steps: tuple[DerivationStep, ...] = ()


@dataclass(frozen=True)
class Grammar:
    vocabulary: Vocabulary
    rules: tuple[Rule, ...]
    axiom: Design

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(names) != len(set(names)):
            raise ValueError("rule names must be unique")
        self.vocabulary.require_valid(self.axiom, "axiom")
        for rule in self.rules:
            problems = check_rule(self.vocabulary, rule)
            if problems:
                raise VocabularyError(f"rule {rule.name!r}: " + "; ".join(problems))

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(f"unknown rule: {name!r}")


def check_rule(vocab: Vocabulary, rule: Rule) -> list[str]:
    """Static vocabulary conformance of a rule (labels, attrs, anchors)."""
    problems = []
    lhs_by_id = {n.id: n for n in rule.lhs.nodes}
    for node in rule.lhs.nodes:
        if not vocab.has_node_label(node.label):
            problems.append(f"LHS node {node.id!r}: unknown label {node.label!r}")
            continue
        schema = vocab.schema_of(node.label)
        for pred in node.predicates:
            if pred.attr not in schema:
                problems.append(f"LHS node {node.id!r}: undeclared attribute {pred.attr!r}")
            if pred.op not in _PREDICATE_OPS:
                problems.append(f"LHS node {node.id!r}: unknown op {pred.op!r}")
    for edge in rule.lhs.edges:
        if edge.label not in vocab.edge_labels:
            problems.append(f"LHS edge: unknown label {edge.label!r}")
        for endpoint in (edge.source, edge.target):
            if endpoint not in lhs_by_id:
                problems.append(f"LHS edge: unknown endpoint {endpoint!r}")

    rhs_ids = {n.id for n in rule.rhs.nodes}
    for node in rule.rhs.nodes:
        if not vocab.has_node_label(node.label):
            problems.append(f"RHS node {node.id!r}: unknown label {node.label!r}")
            continue
        schema = vocab.schema_of(node.label)
        for attr, expr in node.attrs:
            if attr not in schema:
                problems.append(f"RHS node {node.id!r}: undeclared attribute {attr!r}")
            elif isinstance(expr, CopyAttr):
                if expr.node not in lhs_by_id:
                    problems.append(
                        f"RHS node {node.id!r}: copy references unknown LHS node {expr.node!r}"
                    )
            elif not schema[attr].contains(expr):
                problems.append(
                    f"RHS node {node.id!r}: literal {expr!r} outside domain of {attr!r}"
                )
    for edge in rule.rhs.edges:
        if edge.label not in vocab.edge_labels:
            problems.append(f"RHS edge: unknown label {edge.label!r}")
        for endpoint in (edge.source, edge.target):
            if endpoint not in rhs_ids:
                problems.append(f"RHS edge: unknown endpoint {endpoint!r}")

    anchor = rule.anchor_map()
    rhs_by_id = {n.id: n for n in rule.rhs.nodes}
    new_nodes = rhs_ids - set(anchor.values())
    for rhs_id in sorted(new_nodes):
        node = rhs_by_id[rhs_id]
        if vocab.has_node_label(node.label):
            given = {a for a, _ in node.attrs}
            for attr in vocab.schema_of(node.label):
                if attr not in given:
                    problems.append(
                        f"RHS node {rhs_id!r}: new node must set attribute {attr!r}"
                    )
    return problems


# ---------------------------------------------------------------------------
# Matching

def _node_matches(pattern: PatternNode, node: GraphNode) -> bool:
    if pattern.label != node.label:
        return False
    attrs = node.attr_map()
    for pred in pattern.predicates:
        if pred.attr not in attrs or not pred.holds(attrs[pred.attr]):
            return False
    return True


def find_matches(rule: Rule, design: Design,
                 vocab: Optional[Vocabulary] = None) -> list[Match]:
    """All injective embeddings of the rule's LHS, deterministically ordered.

    Matching is injective homomorphism: unrelated context around the
    match is ignored.  Order follows lhs-node assignment order, then
    matched edge indices, so results are stable run to run.
    """
    if vocab is not None:
        vocab.require_valid(design, "design")
        problems = check_rule(vocab, rule)
        if problems:
            raise VocabularyError(f"rule {rule.name!r}: " + "; ".join(problems))

    lhs_nodes = rule.lhs.nodes
    lhs_edges = rule.lhs.edges
    matches: list[Match] = []

    # Design edge instances grouped per (source, target, label).
    instances: dict[tuple[str, str, str], list[int]] = {}
    for idx, edge in enumerate(design.edges):
        instances.setdefault((edge.source, edge.target, edge.label), []).append(idx)

    assignment: dict[str, str] = {}
    used: set[str] = set()

    def edge_groups() -> Optional[list[tuple[list[int], list[int]]]]:
        """Group lhs edge positions by mapped design triple; None if short."""
        groups: dict[tuple[str, str, str], list[int]] = {}
        for pos, edge in enumerate(lhs_edges):
            triple = (assignment[edge.source], assignment[edge.target], edge.label)
            groups.setdefault(triple, []).append(pos)
        out = []
        for triple, positions in groups.items():
            avail = instances.get(triple, [])
            if len(avail) < len(positions):
                return None
            out.append((positions, avail))
        out.sort(key=lambda pair: pair[0][0])
        return out

    def count_ok() -> bool:
        needed: dict[tuple[str, str, str], int] = {}
        for edge in lhs_edges:
            if edge.source in assignment and edge.target in assignment:
                triple = (assignment[edge.source], assignment[edge.target], edge.label)
                needed[triple] = needed.get(triple, 0) + 1
        return all(len(instances.get(t, [])) >= k for t, k in needed.items())

    def emit_edge_choices() -> None:
        groups = edge_groups()
        if groups is None:
            return
        from itertools import combinations, product

        per_group = [list(combinations(avail, len(positions))) for positions, avail in groups]
        for picks in product(*per_group):
            slot: dict[int, int] = {}
            for (positions, _), chosen in zip(groups, picks):
                for pos, inst in zip(positions, chosen):
                    slot[pos] = inst
            matches.append(
                Match(
                    nodes=tuple((n.id, assignment[n.id]) for n in lhs_nodes),
                    edges=tuple(slot[i] for i in range(len(lhs_edges))),
                )
            )

    def extend(i: int) -> None:
        if i == len(lhs_nodes):
            emit_edge_choices()
            return
        pattern = lhs_nodes[i]
        for node in design.nodes:
            if node.id in used or not _node_matches(pattern, node):
                continue
            assignment[pattern.id] = node.id
            used.add(node.id)
            if count_ok():
                extend(i + 1)
            used.remove(node.id)
            del assignment[pattern.id]

    extend(0)
    return matches


def _verify_match(rule: Rule, design: Design, match: Match) -> None:
    node_map = match.node_map()
    if set(node_map) != {n.id for n in rule.lhs.nodes}:
        raise StaleMatchError("match does not cover the rule's LHS nodes")
    if len(set(node_map.values())) != len(node_map):
        raise StaleMatchError("match is not injective")
    node_ids = design.node_ids()
    for pattern in rule.lhs.nodes:
        target = node_map[pattern.id]
        if target not in node_ids:
            raise StaleMatchError(f"matched node {target!r} is gone")
        if not _node_matches(pattern, design.node(target)):
            raise StaleMatchError(f"node {target!r} no longer satisfies the pattern")
    if len(match.edges) != len(rule.lhs.edges):
        raise StaleMatchError("match does not cover the rule's LHS edges")
    if len(set(match.edges)) != len(match.edges):
        raise StaleMatchError("match reuses a design edge")
    for pattern_edge, idx in zip(rule.lhs.edges, match.edges):
        if not 0 <= idx < len(design.edges):
            raise StaleMatchError(f"matched edge index {idx} is gone")
        actual = design.edges[idx]
        expected = (node_map[pattern_edge.source], node_map[pattern_edge.target],
                    pattern_edge.label)
        if (actual.source, actual.target, actual.label) != expected:
            raise StaleMatchError(f"edge {idx} no longer matches the pattern")


def _fresh_ids(existing: set[str], count: int) -> list[str]:
    out: list[str] = []
    k = 0
    while len(out) < count:
        candidate = f"n{k}"
        if candidate not in existing:
            out.append(candidate)
            existing.add(candidate)
        k += 1
    return out


def _eval_expr(expr: AttrExpr, design: Design, node_map: dict[str, str]) -> Scalar:
    if isinstance(expr, CopyAttr):
        return design.node(node_map[expr.node]).get(expr.attr)
    return expr


def apply(rule: Rule, design: Design, match: Match,
          vocab: Optional[Vocabulary] = None) -> Design:
    """Rewrite ``design`` at ``match``.

    Raises :class:`StaleMatchError` if the match no longer embeds, and
    :class:`DanglingEdgeError` if an unmatched edge touches a node the
    rule removes.
    """
    _verify_match(rule, design, match)
    node_map = match.node_map()
    anchor = rule.anchor_map()

    removed = {node_map[n.id] for n in rule.lhs.nodes if n.id not in anchor}
    matched_edges = set(match.edges)

    for idx, edge in enumerate(design.edges):
        if idx in matched_edges:
            continue
        if edge.source in removed or edge.target in removed:
            raise DanglingEdgeError(
                f"edge {edge.source!r}->{edge.target!r} ({edge.label!r}) would dangle"
            )

    rhs_by_id = {n.id: n for n in rule.rhs.nodes}
    inverse_anchor = {rhs: lhs for lhs, rhs in anchor.items()}

    # Anchored survivors: attribute updates (and possible relabel) in place.
    updates: dict[str, GraphNode] = {}
    for lhs_id, rhs_id in anchor.items():
        design_id = node_map[lhs_id]
        current = design.node(design_id)
        rhs_node = rhs_by_id[rhs_id]
        attrs = current.attr_map()
        for attr, expr in rhs_node.attrs:
            attrs[attr] = _eval_expr(expr, design, node_map)
        updates[design_id] = GraphNode.make(design_id, rhs_node.label, attrs)

    new_rhs_ids = [n.id for n in rule.rhs.nodes if n.id not in inverse_anchor]
    existing_ids = (design.node_ids() - removed) | set(updates)
    fresh = dict(zip(new_rhs_ids, _fresh_ids(set(existing_ids), len(new_rhs_ids))))

    def rhs_to_design_id(rhs_id: str) -> str:
        if rhs_id in inverse_anchor:
            return node_map[inverse_anchor[rhs_id]]
        return fresh[rhs_id]

    nodes: list[GraphNode] = []
    for node in design.nodes:
        if node.id in removed:
            continue
        nodes.append(updates.get(node.id, node))
    for rhs_id in new_rhs_ids:
        rhs_node = rhs_by_id[rhs_id]
        attrs = {attr: _eval_expr(expr, design, node_map) for attr, expr in rhs_node.attrs}
        nodes.append(GraphNode.make(fresh[rhs_id], rhs_node.label, attrs))

    edges: list[GraphEdge] = [
        edge for idx, edge in enumerate(design.edges) if idx not in matched_edges
    ]
    for edge in rule.rhs.edges:
        edges.append(
            GraphEdge(rhs_to_design_id(edge.source), rhs_to_design_id(edge.target),
                      edge.label)
        )

    result = Design(tuple(nodes), tuple(edges))
    if vocab is not None:
        vocab.require_valid(result, f"result of rule {rule.name!r}")
    return result


# ---------------------------------------------------------------------------
# Canonical form

def _attr_colour(node: GraphNode) -> str:
    return json.dumps([node.label, [[k, v] for k, v in node.attrs]], sort_keys=True)


def _refine(n: int, colours: list, out_adj: list[list[tuple[str, int]]],
            in_adj: list[list[tuple[str, int]]]) -> list[int]:
    """Colour refinement; returns stable integer colours (value-ranked)."""
    current = colours
    while True:
        signatures = []
        for i in range(n):
            out_sig = tuple(sorted((lbl, current[j]) for lbl, j in out_adj[i]))
            in_sig = tuple(sorted((lbl, current[j]) for lbl, j in in_adj[i]))
            signatures.append((current[i], out_sig, in_sig))
        ranks = {sig: r for r, sig in enumerate(sorted(set(signatures)))}
        renumbered = [ranks[sig] for sig in signatures]
        if renumbered == current:
            return renumbered
        current = renumbered


def canonical_form(design: Design) -> bytes:
    """A byte string equal for two designs iff they are isomorphic
    (respecting node labels, attributes, edge labels and multiplicity)."""
    nodes = design.nodes
    n = len(nodes)
    index = {node.id: i for i, node in enumerate(nodes)}
    out_adj: list[list[tuple[str, int]]] = [[] for _ in range(n)]
    in_adj: list[list[tuple[str, int]]] = [[] for _ in range(n)]
    for edge in design.edges:
        out_adj[index[edge.source]].append((edge.label, index[edge.target]))
        in_adj[index[edge.target]].append((edge.label, index[edge.source]))

    initial_keys = [_attr_colour(node) for node in nodes]
    ranks = {key: r for r, key in enumerate(sorted(set(initial_keys)))}
    colours = _refine(n, [ranks[k] for k in initial_keys], out_adj, in_adj)

    def certificate(order: list[int]) -> bytes:
        position = {v: p for p, v in enumerate(order)}
        node_part = [json.loads(initial_keys[v]) for v in order]
        edge_part = sorted(
            [position[index[e.source]], position[index[e.target]], e.label]
            for e in design.edges
        )
        return json.dumps({"nodes": node_part, "edges": edge_part},
                          sort_keys=True).encode("utf-8")

    best: Optional[bytes] = None

    def search(colouring: list[int]) -> None:
        nonlocal best
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colouring):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = cells[c]
                break
        if target is None:
            order = sorted(range(n), key=lambda v: colouring[v])
            cert = certificate(order)
            if best is None or cert < best:
                best = cert
            return
        for v in target:
            branched = [(c, 1) for c in colouring]
            branched[v] = (colouring[v], 0)
            ranks_b = {key: r for r, key in enumerate(sorted(set(branched)))}
            search(_refine(n, [ranks_b[key] for key in branched], out_adj, in_adj))

    search(colours)
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# Generation

@dataclass(frozen=True)
class GeneratedDesign:
    design: Design
    derivation: Derivation
    canonical: bytes
    depth: int


@dataclass(frozen=True)
class GenerationResult:
    designs: tuple[GeneratedDesign, ...]

    def __len__(self) -> int:
        return len(self.designs)

    def canonical_forms(self) -> list[bytes]:
        return [g.canonical for g in self.designs]


def generate(grammar: Grammar, max_depth: int, max_designs: int) -> GenerationResult:
    """Breadth-first closure of rule application from the axiom.

    Deduplicated by canonical form; output sorted by canonical form, so
    two runs over equal inputs produce identical sequences.  The axiom
    itself counts against ``max_designs``.
    """
    if max_depth < 1 or max_designs < 1:
        raise ValueError("generation limits must be positive")

    vocab = grammar.vocabulary
    seen: dict[bytes, GeneratedDesign] = {}
    axiom_entry = GeneratedDesign(grammar.axiom, Derivation(), canonical_form(grammar.axiom), 0)
    seen[axiom_entry.canonical] = axiom_entry
    frontier = [axiom_entry]

    for depth in range(1, max_depth + 1):
        if len(seen) >= max_designs:
            break
        next_frontier: list[GeneratedDesign] = []
        for entry in frontier:
            for rule in grammar.rules:
                for match in find_matches(rule, entry.design):
                    try:
                        child = apply(rule, entry.design, match, vocab)
                    except DanglingEdgeError:
                        continue
                    key = canonical_form(child)
                    if key in seen:
                        continue
                    child_entry = GeneratedDesign(
                        child,
                        Derivation((*entry.derivation.steps, DerivationStep(rule.name, match))),
                        key,
                        depth,
                    )
                    seen[key] = child_entry
                    next_frontier.append(child_entry)
                    if len(seen) >= max_designs:
                        break
                if len(seen) >= max_designs:
                    break
            if len(seen) >= max_designs:
                break
        frontier = next_frontier
        if not frontier:
            break

    ordered = tuple(sorted(seen.values(), key=lambda g: g.canonical))
    return GenerationResult(ordered)


def replay(grammar: Grammar, derivation: Derivation) -> Design:
    """Re-run a derivation from the axiom; fresh ids are deterministic,
    so the replayed design equals the generated one exactly."""
    design = grammar.axiom
    for step in derivation.steps:
        design = apply(grammar.rule(step.rule), design, step.match, grammar.vocabulary)
    return design


# ---------------------------------------------------------------------------
# Grammar modification

@dataclass(frozen=True)
class AddRule:
    rule: Rule
    index: Optional[int] = None


@dataclass(frozen=True)
class RemoveRule:
    name: str


@dataclass(frozen=True)
class ReplaceAxiom:
    axiom: Design


GrammarEdit = Union[AddRule, RemoveRule, ReplaceAxiom]


def add_rule(grammar: Grammar, rule: Rule, index: Optional[int] = None) -> Grammar:
    if any(r.name == rule.name for r in grammar.rules):
        raise ValueError(f"rule {rule.name!r} already present")
    rules = list(grammar.rules)
    rules.insert(len(rules) if index is None else index, rule)
    return Grammar(grammar.vocabulary, tuple(rules), grammar.axiom)


def remove_rule(grammar: Grammar, name: str) -> Grammar:
    if not any(r.name == name for r in grammar.rules):
        raise KeyError(f"unknown rule: {name!r}")
    return Grammar(
        grammar.vocabulary,
        tuple(r for r in grammar.rules if r.name != name),
        grammar.axiom,
    )


def replace_axiom(grammar: Grammar, axiom: Design) -> Grammar:
    return Grammar(grammar.vocabulary, grammar.rules, axiom)


def modify(grammar: Grammar, edit: GrammarEdit) -> Grammar:
    if isinstance(edit, AddRule):
        return add_rule(grammar, edit.rule, edit.index)
    if isinstance(edit, RemoveRule):
        return remove_rule(grammar, edit.name)
    return replace_axiom(grammar, edit.axiom)


# ---------------------------------------------------------------------------
# JSON format (.grammar.json) and DOT rendering

def _design_from_dict(doc: object, location: str) -> Design:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    nodes = []
    for i, n in enumerate(doc.get("nodes", [])):
        loc = f"{location}.nodes[{i}]"
        if not isinstance(n, dict) or not isinstance(n.get("id"), str):
            raise SchemaError("node needs a string 'id'", loc)
        if not isinstance(n.get("label"), str):
            raise SchemaError("node needs a string 'label'", f"{loc}.label")
        attrs = n.get("attrs", {})
        if not isinstance(attrs, dict):
            raise SchemaError("'attrs' must be an object", f"{loc}.attrs")
        nodes.append(GraphNode.make(n["id"], n["label"], attrs))
    edges = [_edge_from_dict(e, f"{location}.edges[{i}]")
             for i, e in enumerate(doc.get("edges", []))]
    try:
        return Design(tuple(nodes), tuple(edges))
    except ValueError as exc:
        raise SchemaError(str(exc), location) from exc


def _edge_from_dict(doc: object, location: str) -> GraphEdge:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    for key in ("source", "target", "label"):
        if not isinstance(doc.get(key), str):
            raise SchemaError(f"edge needs a string {key!r}", f"{location}.{key}")
    return GraphEdge(doc["source"], doc["target"], doc["label"])


def _pattern_from_dict(doc: object, location: str) -> PatternGraph:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    nodes = []
    for i, n in enumerate(doc.get("nodes", [])):
        loc = f"{location}.nodes[{i}]"
        if not isinstance(n, dict) or not isinstance(n.get("id"), str) \
                or not isinstance(n.get("label"), str):
            raise SchemaError("pattern node needs string 'id' and 'label'", loc)
        predicates = []
        for j, p in enumerate(n.get("where", [])):
            ploc = f"{loc}.where[{j}]"
            if not isinstance(p, dict) or not isinstance(p.get("attr"), str):
                raise SchemaError("predicate needs a string 'attr'", ploc)
            op = p.get("op", "eq")
            if op not in _PREDICATE_OPS:
                raise SchemaError(f"unknown op {op!r}", f"{ploc}.op")
            predicates.append(AttrPredicate(p["attr"], op, p.get("value")))
        nodes.append(PatternNode(n["id"], n["label"], tuple(predicates)))
    edges = [_edge_from_dict(e, f"{location}.edges[{i}]")
             for i, e in enumerate(doc.get("edges", []))]
    pattern_edges = tuple(PatternEdge(e.source, e.target, e.label) for e in edges)
    return PatternGraph(tuple(nodes), pattern_edges)


def _rhs_from_dict(doc: object, location: str) -> RhsGraph:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    nodes = []
    for i, n in enumerate(doc.get("nodes", [])):
        loc = f"{location}.nodes[{i}]"
        if not isinstance(n, dict) or not isinstance(n.get("id"), str) \
                or not isinstance(n.get("label"), str):
            raise SchemaError("RHS node needs string 'id' and 'label'", loc)
        attrs: dict[str, AttrExpr] = {}
        raw = n.get("attrs", {})
        if not isinstance(raw, dict):
            raise SchemaError("'attrs' must be an object", f"{loc}.attrs")
        for attr, value in raw.items():
            if isinstance(value, dict):
                copy = value.get("copy")
                if not isinstance(copy, dict) or not isinstance(copy.get("node"), str) \
                        or not isinstance(copy.get("attr"), str):
                    raise SchemaError(
                        "expression must be a scalar or {'copy': {'node', 'attr'}}",
                        f"{loc}.attrs.{attr}",
                    )
                attrs[attr] = CopyAttr(copy["node"], copy["attr"])
            else:
                attrs[attr] = value
        nodes.append(RhsNode.make(n["id"], n["label"], attrs))
    edges = [_edge_from_dict(e, f"{location}.edges[{i}]")
             for i, e in enumerate(doc.get("edges", []))]
    pattern_edges = tuple(PatternEdge(e.source, e.target, e.label) for e in edges)
    return RhsGraph(tuple(nodes), pattern_edges)


def grammar_from_dict(doc: object, location: str = "$") -> Grammar:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    vocab_doc = doc.get("vocabulary")
    if not isinstance(vocab_doc, dict):
        raise SchemaError("expected a 'vocabulary' object", f"{location}.vocabulary")
    raw_labels = vocab_doc.get("node_labels")
    if not isinstance(raw_labels, dict):
        raise SchemaError("'node_labels' must be an object", f"{location}.vocabulary.node_labels")
    node_labels: dict[str, dict[str, Domain]] = {}
    for label, schema in raw_labels.items():
        loc = f"{location}.vocabulary.node_labels.{label}"
        if not isinstance(schema, dict):
            raise SchemaError("attribute schema must be an object", loc)
        node_labels[label] = {
            attr: domain_from_dict(d, f"{loc}.{attr}") for attr, d in schema.items()
        }
    edge_labels = vocab_doc.get("edge_labels", [])
    if not isinstance(edge_labels, list) or not all(isinstance(x, str) for x in edge_labels):
        raise SchemaError("'edge_labels' must be an array of strings",
                          f"{location}.vocabulary.edge_labels")
    vocab = Vocabulary.make(node_labels, edge_labels)

    rules = []
    for i, r in enumerate(doc.get("rules", [])):
        loc = f"{location}.rules[{i}]"
        if not isinstance(r, dict) or not isinstance(r.get("name"), str):
            raise SchemaError("rule needs a string 'name'", loc)
        anchors_raw = r.get("anchors", {})
        if not isinstance(anchors_raw, dict):
            raise SchemaError("'anchors' must be an object", f"{loc}.anchors")
        try:
            rule = Rule(
                name=r["name"],
                lhs=_pattern_from_dict(r.get("lhs", {}), f"{loc}.lhs"),
                rhs=_rhs_from_dict(r.get("rhs", {}), f"{loc}.rhs"),
                anchors=tuple(sorted(anchors_raw.items())),
            )
        except ValueError as exc:
            raise SchemaError(str(exc), loc) from exc
        rules.append(rule)

    axiom = _design_from_dict(doc.get("axiom"), f"{location}.axiom")
    try:
        return Grammar(vocab, tuple(rules), axiom)
    except ValueError as exc:
        raise SchemaError(str(exc), location) from exc


def parse_grammar(data: bytes | str) -> Grammar:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return grammar_from_dict(doc)


def design_to_dict(design: Design) -> dict:
    return {
        "nodes": [
            {"id": n.id, "label": n.label, "attrs": {k: v for k, v in n.attrs}}
            for n in design.nodes
        ],
        "edges": [
            {"source": e.source, "target": e.target, "label": e.label}
            for e in design.edges
        ],
    }


def design_to_dot(design: Design, name: str = "design") -> str:
    lines = [f"digraph {json.dumps(name)} {{"]
    for node in design.nodes:
        attr_text = ", ".join(f"{k}={v!r}" for k, v in node.attrs)
        label = node.label if not attr_text else f"{node.label}\\n{attr_text}"
        lines.append(f"  {json.dumps(node.id)} [label={json.dumps(label)}];")
    for edge in design.edges:
        lines.append(
            f"  {json.dumps(edge.source)} -> {json.dumps(edge.target)}"
            f" [label={json.dumps(edge.label)}];"
        )
    lines.append("}")
    return "\n".join(lines)
