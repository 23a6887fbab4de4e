import pytest

from designbench import funcstruct as fs
from designbench import synth
from designbench.synth import GateSlot, GateType, Requirement, Topology
from conftest import load_fixture_bytes
from oracles import chain_sat, pair_sat, reachable_sat


def subtraction_oracle(a, b, bin_):
    """Arithmetic semantics of a 1-bit full subtraction a - b - bin."""
    value = a - b - bin_
    return (value % 2, 1 if value < 0 else 0)


@pytest.fixture(scope="module")
def subtractor_req():
    return synth.parse_requirement(load_fixture_bytes("subtractor.req.json"))


@pytest.fixture(scope="module")
def subtractor_topology():
    return synth.parse_topology(load_fixture_bytes("subtractor.topo.json"))


@pytest.fixture(scope="module")
def subtractor_circuit(subtractor_topology, subtractor_req):
    circuit = synth.synthesize_assignment(subtractor_topology, subtractor_req)
    assert circuit is not None
    return circuit


class TestEvaluate:
    def test_all_zero_row(self, subtractor_circuit):
        assert synth.evaluate(subtractor_circuit, (0, 0, 0)) == (0, 0)

    def test_single_minuend(self, subtractor_circuit):
        assert synth.evaluate(subtractor_circuit, (1, 0, 0)) == subtraction_oracle(1, 0, 0)
        assert synth.evaluate(subtractor_circuit, (1, 0, 0)) == (1, 0)

    def test_borrow_generated(self, subtractor_circuit):
        assert synth.evaluate(subtractor_circuit, (0, 1, 0)) == subtraction_oracle(0, 1, 0)
        assert synth.evaluate(subtractor_circuit, (0, 1, 0)) == (1, 1)

    def test_every_row_matches_arithmetic(self, subtractor_circuit, subtractor_req):
        for (a, b, borrow_in), expected in subtractor_req.rows:
            assert expected == subtraction_oracle(a, b, borrow_in)
            assert synth.evaluate(subtractor_circuit, (a, b, borrow_in)) == expected

    def test_width_mismatch_rejected(self, subtractor_circuit):
        with pytest.raises(ValueError):
            synth.evaluate(subtractor_circuit, (0, 1))


class TestSynthesizeAssignment:
    def test_standard_subtractor_assignment(self, subtractor_circuit):
        names = [g.name for g in subtractor_circuit.gates]
        assert names == ["XOR", "XOR", "NOT", "AND", "NOT", "AND", "OR"]

    def test_single_unary_slot_realises_not(self):
        topo = Topology(("x",), (GateSlot(1, ("x",)),), ("s0",))
        req = Requirement.from_function(("x",), ("y",), lambda x: (1 - x,))
        circuit = synth.synthesize_assignment(topo, req)
        assert circuit is not None
        assert circuit.gates == (GateType.NOT,)

    def test_unary_slot_cannot_depend_on_two_inputs(self):
        topo = Topology(("a", "b"), (GateSlot(1, ("a",)),), ("s0",))
        req = Requirement.from_function(("a", "b"), ("y",), lambda a, b: (a ^ b,))
        assert synth.synthesize_assignment(topo, req) is None

    def test_arity_mismatch_rejected(self, subtractor_topology):
        req = Requirement.from_function(("a", "b"), ("y",), lambda a, b: (a & b,))
        with pytest.raises(ValueError):
            synth.synthesize_assignment(subtractor_topology, req)

    def test_assignment_is_lexicographically_first(self):
        # both IDENTITY and anything later would do for a pass-through slot;
        # IDENTITY must win
        topo = Topology(("x",), (GateSlot(1, ("x",)),), ("s0",))
        req = Requirement.from_function(("x",), ("y",), lambda x: (x,))
        circuit = synth.synthesize_assignment(topo, req)
        assert circuit.gates == (GateType.IDENTITY,)


class TestSynthesizeTopology:
    def test_and_needs_one_gate(self):
        req = Requirement.from_function(("a", "b"), ("y",), lambda a, b: (a & b,))
        circuit = synth.synthesize_topology(req, 1)
        assert circuit is not None
        assert len(circuit.gates) == 1
        assert circuit.gates[0] is GateType.AND

    def test_three_input_parity_unsat_with_one_gate(self):
        req = Requirement.from_function(("a", "b", "c"), ("y",),
                                        lambda a, b, c: (a ^ b ^ c,))
        assert synth.synthesize_topology(req, 1) is None

    def test_full_subtractor_within_seven_gates(self, subtractor_req):
        circuit = synth.synthesize_topology(subtractor_req, 7)
        assert circuit is not None
        assert len(circuit.gates) <= 7
        for in_bits, out_bits in subtractor_req.rows:
            assert synth.evaluate(circuit, in_bits) == out_bits

    def test_subtractor_needs_five_gates(self, subtractor_req):
        # regression: four gates exhaust UNSAT, five suffice
        assert synth.synthesize_topology(subtractor_req, 4) is None
        circuit = synth.synthesize_topology(subtractor_req, 5)
        assert circuit is not None and len(circuit.gates) == 5

    def test_deterministic_result(self):
        req = Requirement.from_function(("a", "b"), ("y",),
                                        lambda a, b: (1 - (a | b),))
        first = synth.synthesize_topology(req, 3)
        second = synth.synthesize_topology(req, 3)
        assert first == second

    def test_verdicts_match_chain_oracle_for_two_inputs(self):
        # all 16 single-output tables over two inputs, bounds 1..3
        for max_gates in (1, 2, 3):
            for table in range(16):
                rows = tuple(
                    (((r >> 1) & 1, r & 1), ((table >> r) & 1,)) for r in range(4)
                )
                req = Requirement(("a", "b"), ("y",), rows)
                target = req.target_vectors()[0]
                got = synth.synthesize_topology(req, max_gates)
                assert (got is not None) == chain_sat(2, target, max_gates), \
                    f"table {table:04b} at max_gates={max_gates}"
                if got is not None:
                    assert len(got.gates) <= max_gates

    def test_verdicts_match_chain_oracle_for_three_inputs_sampled(self):
        import random
        rng = random.Random(5)
        tables = [rng.randrange(256) for _ in range(12)]
        for table in tables:
            rows = tuple(
                (((r >> 2) & 1, (r >> 1) & 1, r & 1), ((table >> r) & 1,))
                for r in range(8)
            )
            req = Requirement(("a", "b", "c"), ("y",), rows)
            target = req.target_vectors()[0]
            got = synth.synthesize_topology(req, 3)
            assert (got is not None) == chain_sat(3, target, 3), f"table {table:08b}"

    def test_verdicts_match_set_oracle_up_to_five_gates(self):
        # includes tables whose minimal realisation takes all five gates,
        # so both the UNSAT-at-4 and SAT-at-5 directions are exercised
        import random
        rng = random.Random(11)
        tables = {23, 41, 151} | {rng.randrange(256) for _ in range(6)}
        for table in sorted(tables):
            rows = tuple(
                (((r >> 2) & 1, (r >> 1) & 1, r & 1), ((table >> r) & 1,))
                for r in range(8)
            )
            req = Requirement(("a", "b", "c"), ("y",), rows)
            target = req.target_vectors()[0]
            for max_gates in (4, 5):
                got = synth.synthesize_topology(req, max_gates)
                assert (got is not None) == reachable_sat(3, target, max_gates), \
                    f"table {table:08b} at max_gates={max_gates}"

    def test_two_output_verdicts_match_pair_oracle(self):
        import random
        rng = random.Random(17)
        sampled = [(rng.randrange(16), rng.randrange(16)) for _ in range(24)]
        sampled += [(6, 8), (6, 6), (9, 1), (15, 0)]
        for t1, t2 in sampled:
            rows = tuple(
                (((r >> 1) & 1, r & 1), ((t1 >> r) & 1, (t2 >> r) & 1))
                for r in range(4)
            )
            req = Requirement(("a", "b"), ("y1", "y2"), rows)
            got = synth.synthesize_topology(req, 3) is not None
            assert got == pair_sat(2, (t1, t2), 3), f"targets ({t1:04b}, {t2:04b})"

    def test_bound_below_one_rejected(self, subtractor_req):
        with pytest.raises(ValueError):
            synth.synthesize_topology(subtractor_req, 0)


class TestToFunctionStructure:
    def test_standard_topology_reproduces_famous_pi(self, subtractor_circuit):
        from fractions import Fraction
        structure = synth.to_function_structure(subtractor_circuit, ("D", "Bout"))
        assert fs.validate(structure).ok
        assert fs.interdependency_index(structure) == Fraction(5, 7)

    def test_single_gate_has_pi_one(self):
        topo = Topology(("a", "b"), (GateSlot(2, ("a", "b")),), ("s0",))
        circuit = synth.Circuit(topo, (GateType.AND,))
        structure = synth.to_function_structure(circuit)
        assert fs.interdependency_index(structure) == 1

    def test_not_chain_has_pi_zero(self):
        topo = Topology(("a",), (GateSlot(1, ("a",)), GateSlot(1, ("s0",))), ("s1",))
        circuit = synth.Circuit(topo, (GateType.NOT, GateType.NOT))
        structure = synth.to_function_structure(circuit)
        assert fs.interdependency_index(structure) == 0

    def test_conversion_always_validates(self, subtractor_req):
        circuit = synth.synthesize_topology(subtractor_req, 5)
        structure = synth.to_function_structure(circuit, subtractor_req.outputs)
        assert fs.validate(structure).ok


class TestStructuralInvariants:
    def test_forward_reference_rejected(self):
        with pytest.raises(ValueError):
            Topology(("a",), (GateSlot(1, ("s1",)), GateSlot(1, ("a",))), ("s1",))

    def test_unreachable_slot_rejected(self):
        with pytest.raises(ValueError):
            Topology(("a", "b"),
                     (GateSlot(2, ("a", "b")), GateSlot(1, ("a",))),
                     ("s1",))

    def test_incomplete_truth_table_rejected(self):
        with pytest.raises(ValueError):
            Requirement(("a",), ("y",), (((0,), (0,)),))

    def test_duplicate_row_rejected(self):
        with pytest.raises(ValueError):
            Requirement(("a",), ("y",), (((0,), (0,)), ((0,), (1,))))

    def test_requirement_fixture_round_trips(self, subtractor_req):
        doc = {
            "inputs": list(subtractor_req.inputs),
            "outputs": list(subtractor_req.outputs),
            "rows": [{"in": list(i), "out": list(o)} for i, o in subtractor_req.rows],
        }
        assert synth.requirement_from_dict(doc) == subtractor_req
