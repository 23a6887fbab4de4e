"""Exact synthesis of small Boolean circuits against truth tables.

Two search problems are solved at desk scale:

* gate assignment: given a fixed topology (slots with wired inputs) and
  a complete truth table, find gate types making the circuit match the
  table on every row, or report UNSAT;
* topology generation: additionally search over canonical topologies by
  increasing gate count and return the first satisfiable circuit.

The search is plain backtracking over gate assignments with per-row
propagation (truth vectors are packed into integers, and any slot wired
to a primary output is checked the moment it is assigned).  Every
returned circuit is re-verified row by row through the scalar evaluator
before it is handed back.  UNSAT is a value (``None``), not an error.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterator, Optional, Sequence

from .funcstruct import (
    BoundaryTerminal,
    Flow,
    FunctionStructure,
    FunctionVertex,
    SchemaError,
)

_SLOT_REF = re.compile(r"^s(\d+)$")


class GateType(Enum):
    IDENTITY = "IDENTITY"
    NOT = "NOT"
    AND = "AND"
    OR = "OR"
    XOR = "XOR"

    @property
    def arity(self) -> int:
        return 1 if self in (GateType.IDENTITY, GateType.NOT) else 2


#: Candidate order for the lexicographically-first assignment.
GATE_ORDER = (GateType.IDENTITY, GateType.NOT, GateType.AND, GateType.OR, GateType.XOR)
_UNARY = tuple(g for g in GATE_ORDER if g.arity == 1)
_BINARY = tuple(g for g in GATE_ORDER if g.arity == 2)


@dataclass(frozen=True)
class GateSlot:
    arity: int
    refs: tuple[str, ...]  # primary input names or earlier slot refs ("s0", ...)


@dataclass(frozen=True)
class Topology:
    inputs: tuple[str, ...]
    slots: tuple[GateSlot, ...]
    outputs: tuple[str, ...]  # slot refs

    def __post_init__(self):
        if len(set(self.inputs)) != len(self.inputs):
            raise ValueError("primary input names must be unique")
        for name in self.inputs:
            if not name or _SLOT_REF.match(name):
                raise ValueError(f"illegal primary input name {name!r}")
        if not self.slots:
            raise ValueError("a topology needs at least one gate slot")
        for j, slot in enumerate(self.slots):
            if slot.arity not in (1, 2) or len(slot.refs) != slot.arity:
                raise ValueError(f"slot {j}: arity must be 1 or 2 and match the wiring")
            for ref in slot.refs:
                self._resolve(ref, j)
        if not self.outputs:
            raise ValueError("a topology needs at least one primary output")
        for ref in self.outputs:
            match = _SLOT_REF.match(ref)
            if not match or int(match.group(1)) >= len(self.slots):
                raise ValueError(f"output must reference a gate slot, got {ref!r}")
        unreachable = set(range(len(self.slots))) - self._reachable_slots()
        if unreachable:
            raise ValueError(f"slots unreachable from any output: {sorted(unreachable)}")

    def _resolve(self, ref: str, slot_index: int) -> int:
        """Internal source index: inputs first, then slots."""
        match = _SLOT_REF.match(ref)
        if match:
            j = int(match.group(1))
            if j >= slot_index:
                raise ValueError(
                    f"slot {slot_index}: ref {ref!r} must point to an earlier slot"
                )
            return len(self.inputs) + j
        if ref in self.inputs:
            return self.inputs.index(ref)
        raise ValueError(f"slot {slot_index}: unknown ref {ref!r}")

    def source_indices(self) -> list[tuple[int, ...]]:
        return [tuple(self._resolve(ref, j) for ref in slot.refs)
                for j, slot in enumerate(self.slots)]

    def output_slots(self) -> tuple[int, ...]:
        return tuple(int(_SLOT_REF.match(ref).group(1)) for ref in self.outputs)

    def _reachable_slots(self) -> set[int]:
        n = len(self.inputs)
        seen: set[int] = set()
        stack = list(self.output_slots())
        sources = self.source_indices()
        while stack:
            j = stack.pop()
            if j in seen:
                continue
            seen.add(j)
            for src in sources[j]:
                if src >= n:
                    stack.append(src - n)
        return seen


@dataclass(frozen=True)
class Requirement:
    """A complete truth table: every input row with its expected outputs."""

    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    rows: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    def __post_init__(self):
        n, m = len(self.inputs), len(self.outputs)
        if n < 1 or m < 1:
            raise ValueError("a requirement needs inputs and outputs")
        if len(self.rows) != 2 ** n:
            raise ValueError(f"expected {2 ** n} rows, got {len(self.rows)}")
        seen = set()
        for in_bits, out_bits in self.rows:
            if len(in_bits) != n or len(out_bits) != m:
                raise ValueError("row width does not match the declared names")
            if any(b not in (0, 1) for b in (*in_bits, *out_bits)):
                raise ValueError("rows must contain bits (0 or 1)")
            if in_bits in seen:
                raise ValueError(f"duplicate row for inputs {in_bits}")
            seen.add(in_bits)

    @classmethod
    def from_function(cls, inputs: Sequence[str], outputs: Sequence[str],
                      fn) -> "Requirement":
        n = len(inputs)
        rows = []
        for r in range(2 ** n):
            in_bits = tuple((r >> (n - 1 - i)) & 1 for i in range(n))
            rows.append((in_bits, tuple(fn(*in_bits))))
        return cls(tuple(inputs), tuple(outputs), tuple(rows))

    def _row_index(self, in_bits: tuple[int, ...]) -> int:
        n = len(self.inputs)
        return sum(bit << (n - 1 - i) for i, bit in enumerate(in_bits))

    def input_vectors(self) -> list[int]:
        """Per input, the packed column of its value over all rows."""
        vecs = [0] * len(self.inputs)
        for in_bits, _ in self.rows:
            r = self._row_index(in_bits)
            for i, bit in enumerate(in_bits):
                vecs[i] |= bit << r
        return vecs

    def target_vectors(self) -> list[int]:
        vecs = [0] * len(self.outputs)
        for in_bits, out_bits in self.rows:
            r = self._row_index(in_bits)
            for j, bit in enumerate(out_bits):
                vecs[j] |= bit << r
        return vecs

    def supports(self) -> list[frozenset[int]]:
        """Per output, the set of inputs the table truly depends on."""
        n = len(self.inputs)
        targets = self.target_vectors()
        out = []
        for t in targets:
            support = set()
            for i in range(n):
                flip = 1 << (n - 1 - i)
                if any(((t >> r) & 1) != ((t >> (r ^ flip)) & 1) for r in range(2 ** n)):
                    support.add(i)
            out.append(frozenset(support))
        return out


@dataclass(frozen=True)
class Circuit:
    topology: Topology
    gates: tuple[GateType, ...]

    def __post_init__(self):
        if len(self.gates) != len(self.topology.slots):
            raise ValueError("one gate per slot required")
        for j, (gate, slot) in enumerate(zip(self.gates, self.topology.slots)):
            if gate.arity != slot.arity:
                raise ValueError(f"slot {j}: gate {gate.name} does not fit arity {slot.arity}")


def _gate_value(gate: GateType, operands: Sequence[int]) -> int:
    if gate is GateType.IDENTITY:
        return operands[0]
    if gate is GateType.NOT:
        return 1 - operands[0]
    if gate is GateType.AND:
        return operands[0] & operands[1]
    if gate is GateType.OR:
        return operands[0] | operands[1]
    return operands[0] ^ operands[1]


def evaluate(circuit: Circuit, bits: Sequence[int]) -> tuple[int, ...]:
    """Topological evaluation of one input row."""
    topo = circuit.topology
    if len(bits) != len(topo.inputs):
        raise ValueError(
            f"expected {len(topo.inputs)} input bits, got {len(bits)}"
        )
    if any(b not in (0, 1) for b in bits):
        raise ValueError("input bits must be 0 or 1")
    values = list(bits)
    for gate, sources in zip(circuit.gates, topo.source_indices()):
        values.append(_gate_value(gate, [values[s] for s in sources]))
    n = len(topo.inputs)
    return tuple(values[n + j] for j in topo.output_slots())


def _gate_vector(gate: GateType, operands: Sequence[int], full: int) -> int:
    if gate is GateType.IDENTITY:
        return operands[0]
    if gate is GateType.NOT:
        return operands[0] ^ full
    if gate is GateType.AND:
        return operands[0] & operands[1]
    if gate is GateType.OR:
        return operands[0] | operands[1]
    return operands[0] ^ operands[1]


def _search_assignment(slot_sources: list[tuple[int, ...]], input_vecs: list[int],
                       checked: dict[int, list[int]], full: int) -> Optional[list[GateType]]:
    """Lexicographically-first gate assignment; slots wired to an output
    are compared against their target vector as soon as they get a gate."""
    gate_count = len(slot_sources)
    n = len(input_vecs)
    values = input_vecs + [0] * gate_count
    assignment: list[GateType] = [GateType.IDENTITY] * gate_count

    def backtrack(j: int) -> bool:
        if j == gate_count:
            return True
        sources = slot_sources[j]
        operands = [values[s] for s in sources]
        candidates = _UNARY if len(sources) == 1 else _BINARY
        targets = checked.get(j)
        for gate in candidates:
            vec = _gate_vector(gate, operands, full)
            if targets is not None and any(vec != t for t in targets):
                continue
            values[n + j] = vec
            assignment[j] = gate
            if backtrack(j + 1):
                return True
        return False

    return list(assignment) if backtrack(0) else None


def _verify(circuit: Circuit, requirement: Requirement) -> None:
    # Mandatory post-check through the scalar evaluator; a failure here
    # means a bug in the vectorised search, not a property of the input.
    for in_bits, out_bits in requirement.rows:
        got = evaluate(circuit, in_bits)
        if got != out_bits:
            raise RuntimeError(
                f"synthesised circuit fails verification on row {in_bits}: "
                f"expected {out_bits}, got {got}"
            )


def synthesize_assignment(topology: Topology,
                          requirement: Requirement) -> Optional[Circuit]:
    """Problem 1: fill a fixed topology's slots with gates so the circuit
    realises the table, or return ``None`` (UNSAT)."""
    if len(topology.inputs) != len(requirement.inputs):
        raise ValueError(
            f"topology has {len(topology.inputs)} inputs, "
            f"requirement has {len(requirement.inputs)}"
        )
    if len(topology.outputs) != len(requirement.outputs):
        raise ValueError(
            f"topology has {len(topology.outputs)} outputs, "
            f"requirement has {len(requirement.outputs)}"
        )
    full = (1 << 2 ** len(topology.inputs)) - 1
    targets = requirement.target_vectors()
    checked: dict[int, list[int]] = {}
    for position, slot in enumerate(topology.output_slots()):
        checked.setdefault(slot, []).append(targets[position])

    gates = _search_assignment(topology.source_indices(), requirement.input_vectors(),
                               checked, full)
    if gates is None:
        return None
    circuit = Circuit(topology, tuple(gates))
    _verify(circuit, requirement)
    return circuit


# ---------------------------------------------------------------------------
# Problem 2: canonical topology enumeration

def _ref_choices(n_sources: int) -> list[tuple[int, tuple[int, ...]]]:
    """(arity, refs) choices over ``n_sources`` sources, in canonical order.

    Binary gates in the vocabulary are all commutative, so refs are
    unordered (sorted, repeats allowed).
    """
    choices: list[tuple[int, tuple[int, ...]]] = []
    for a in range(n_sources):
        choices.append((1, (a,)))
    for a in range(n_sources):
        for b in range(a, n_sources):
            choices.append((2, (a, b)))
    return choices


def _enumerate_slot_sequences(n_inputs: int,
                              gate_count: int) -> Iterator[list[tuple[int, ...]]]:
    """Canonical slot sequences: per slot the tuple of source indices.

    Slots are kept sorted by (depth, arity, refs); every abstract
    topology has exactly one such labelling, so no structure is visited
    twice and none is missed.
    """
    slots: list[tuple[int, ...]] = []
    depths: list[int] = []

    def depth_of(source: int) -> int:
        return 0 if source < n_inputs else depths[source - n_inputs]

    def rec(prev_key) -> Iterator[list[tuple[int, ...]]]:
        j = len(slots)
        if j == gate_count:
            yield slots
            return
        for arity, refs in _ref_choices(n_inputs + j):
            depth = 1 + max(depth_of(r) for r in refs)
            key = (depth, arity, refs)
            if key < prev_key:
                continue
            slots.append(refs)
            depths.append(depth)
            yield from rec(key)
            slots.pop()
            depths.pop()

    yield from rec((0, 0, ()))


def _closures(n_inputs: int, slots: list[tuple[int, ...]]) -> list[int]:
    """Per slot, bitmask of primary inputs in its transitive fan-in."""
    out: list[int] = []
    for refs in slots:
        mask = 0
        for r in refs:
            mask |= (1 << r) if r < n_inputs else out[r - n_inputs]
        out.append(mask)
    return out


def _backward_cover(n_inputs: int, slots: list[tuple[int, ...]]) -> list[int]:
    """Per slot, bitmask of slots in its transitive fan-in (itself included)."""
    out: list[int] = []
    for j, refs in enumerate(slots):
        mask = 1 << j
        for r in refs:
            if r >= n_inputs:
                mask |= out[r - n_inputs]
        out.append(mask)
    return out


def _slot_sequence_to_topology(input_names: tuple[str, ...],
                               slots: list[tuple[int, ...]],
                               output_slots: tuple[int, ...]) -> Topology:
    n = len(input_names)

    def ref_name(source: int) -> str:
        return input_names[source] if source < n else f"s{source - n}"

    gate_slots = tuple(
        GateSlot(len(refs), tuple(ref_name(r) for r in refs)) for refs in slots
    )
    return Topology(input_names, gate_slots, tuple(f"s{j}" for j in output_slots))


def synthesize_topology(requirement: Requirement,
                        max_gates: int) -> Optional[Circuit]:
    """Problem 2: search canonical topologies by increasing gate count and
    return the first circuit (with its lexicographically-first gate
    assignment) that realises the table; ``None`` if the bound is hit."""
    if max_gates < 1:
        raise ValueError("max_gates must be at least 1")
    n = len(requirement.inputs)
    m = len(requirement.outputs)
    full = (1 << 2 ** n) - 1
    input_vecs = requirement.input_vectors()
    targets = requirement.target_vectors()
    support_masks = [
        sum(1 << i for i in support) for support in requirement.supports()
    ]

    for gate_count in range(1, max_gates + 1):
        all_slots_mask = (1 << gate_count) - 1
        for slots in _enumerate_slot_sequences(n, gate_count):
            closures = _closures(n, slots)
            cover = _backward_cover(n, slots)
            # Per output position, slots whose fan-in spans the needed inputs.
            candidates = [
                [j for j in range(gate_count) if closures[j] & support_masks[p] == support_masks[p]]
                for p in range(m)
            ]
            if any(not c for c in candidates):
                continue
            # Enumeration refs already use the inputs-then-slots index space.
            slot_sources = [tuple(refs) for refs in slots]
            for output_slots in product(*candidates):
                covered = 0
                for j in output_slots:
                    covered |= cover[j]
                if covered != all_slots_mask:
                    continue
                checked: dict[int, list[int]] = {}
                for position, j in enumerate(output_slots):
                    checked.setdefault(j, []).append(targets[position])
                gates = _search_assignment(slot_sources, input_vecs, checked, full)
                if gates is None:
                    continue
                topology = _slot_sequence_to_topology(
                    requirement.inputs, slots, output_slots
                )
                circuit = Circuit(topology, tuple(gates))
                _verify(circuit, requirement)
                return circuit
    return None


# ---------------------------------------------------------------------------
# Bridge to function structures

def to_function_structure(circuit: Circuit,
                          output_names: Optional[Sequence[str]] = None) -> FunctionStructure:
    """One function vertex per gate, one flow per wire, terminals at the
    boundary; the result is ready for interdependency scoring."""
    topo = circuit.topology
    n = len(topo.inputs)
    if output_names is None:
        output_names = [f"out{j}" for j in range(len(topo.outputs))]
    if len(output_names) != len(topo.outputs):
        raise ValueError("one name per primary output required")

    def signal(source: int) -> str:
        return topo.inputs[source] if source < n else f"s{source - n}"

    vertices = tuple(
        FunctionVertex(id=f"s{j}", label=gate.name)
        for j, gate in enumerate(circuit.gates)
    )
    terminals = [
        BoundaryTerminal(id=f"in_{name}", kind="input", label=name)
        for name in topo.inputs
    ]
    flows = []
    for j, sources in enumerate(topo.source_indices()):
        for src in sources:
            origin = f"in_{signal(src)}" if src < n else f"s{src - n}"
            flows.append(Flow(source=origin, target=f"s{j}", label=signal(src)))
    for name, slot in zip(output_names, topo.output_slots()):
        terminals.append(BoundaryTerminal(id=f"out_{name}", kind="output", label=name))
        flows.append(Flow(source=f"s{slot}", target=f"out_{name}", label=name))
    return FunctionStructure(vertices, tuple(terminals), tuple(flows))


# ---------------------------------------------------------------------------
# JSON formats (.req.json / .topo.json / circuit output)

def requirement_from_dict(doc: object, location: str = "$") -> Requirement:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    for key in ("inputs", "outputs", "rows"):
        if not isinstance(doc.get(key), list):
            raise SchemaError(f"'{key}' must be an array", f"{location}.{key}")
    for key in ("inputs", "outputs"):
        if not all(isinstance(x, str) for x in doc[key]):
            raise SchemaError(f"'{key}' must contain strings", f"{location}.{key}")
    rows = []
    for i, row in enumerate(doc["rows"]):
        loc = f"{location}.rows[{i}]"
        if not isinstance(row, dict) or not isinstance(row.get("in"), list) \
                or not isinstance(row.get("out"), list):
            raise SchemaError("row needs 'in' and 'out' bit arrays", loc)
        rows.append((tuple(row["in"]), tuple(row["out"])))
    try:
        return Requirement(tuple(doc["inputs"]), tuple(doc["outputs"]), tuple(rows))
    except ValueError as exc:
        raise SchemaError(str(exc), location) from exc


def parse_requirement(data: bytes | str) -> Requirement:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return requirement_from_dict(doc)


def topology_from_dict(doc: object, location: str = "$") -> Topology:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    for key in ("inputs", "slots", "outputs"):
        if not isinstance(doc.get(key), list):
            raise SchemaError(f"'{key}' must be an array", f"{location}.{key}")
    slots = []
    for i, slot in enumerate(doc["slots"]):
        loc = f"{location}.slots[{i}]"
        if not isinstance(slot, dict) or not isinstance(slot.get("from"), list):
            raise SchemaError("slot needs a 'from' array", loc)
        refs = slot["from"]
        if not all(isinstance(r, str) for r in refs):
            raise SchemaError("'from' must contain refs (strings)", f"{loc}.from")
        arity = slot.get("arity", len(refs))
        slots.append(GateSlot(arity, tuple(refs)))
    try:
        return Topology(tuple(doc["inputs"]), tuple(slots), tuple(doc["outputs"]))
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), location) from exc


def parse_topology(data: bytes | str) -> Topology:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return topology_from_dict(doc)


def circuit_to_dict(circuit: Circuit) -> dict:
    topo = circuit.topology
    return {
        "inputs": list(topo.inputs),
        "slots": [
            {"arity": slot.arity, "from": list(slot.refs), "gate": gate.name}
            for slot, gate in zip(topo.slots, circuit.gates)
        ],
        "outputs": list(topo.outputs),
    }


def serialize_circuit(circuit: Circuit) -> bytes:
    return (json.dumps(circuit_to_dict(circuit), indent=2, sort_keys=True) + "\n").encode("utf-8")
