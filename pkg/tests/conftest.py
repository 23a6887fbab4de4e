import json
import random
from pathlib import Path

import pytest

from designbench import funcstruct as fs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


def load_fixture_bytes(name: str) -> bytes:
    return (FIXTURES / name).read_bytes()


def load_fixture_json(name: str):
    return json.loads(load_fixture_bytes(name))


def random_structure(rng: random.Random, max_vertices: int = 12) -> fs.FunctionStructure:
    """A random valid function structure.

    Every vertex gets at least one in-flow and one out-flow; since flows
    only ever point forward in a topological order (or to terminals),
    the result is acyclic and every vertex sits on an input->output path.
    """
    n = rng.randint(1, max_vertices)
    labels = [f"task {rng.randint(0, 5)}" for _ in range(n)]
    vertices = [fs.FunctionVertex(f"v{i}", labels[i]) for i in range(n)]
    flow_pool = ["material", "energy", "signal", "torque", "water"]
    flows = []

    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.25:
                flows.append(fs.Flow(f"v{i}", f"v{j}", rng.choice(flow_pool)))

    terminals = []
    in_count = 0
    out_count = 0

    def add_input(target: str) -> None:
        nonlocal in_count
        tid = f"in{in_count}"
        in_count += 1
        label = rng.choice(flow_pool)
        terminals.append(fs.BoundaryTerminal(tid, "input", label))
        flows.append(fs.Flow(tid, target, label))

    def add_output(source: str) -> None:
        nonlocal out_count
        tid = f"out{out_count}"
        out_count += 1
        label = rng.choice(flow_pool)
        terminals.append(fs.BoundaryTerminal(tid, "output", label))
        flows.append(fs.Flow(source, tid, label))

    for i in range(n):
        if not any(f.target == f"v{i}" for f in flows):
            add_input(f"v{i}")
        if not any(f.source == f"v{i}" for f in flows):
            add_output(f"v{i}")
    # a few extra boundary flows to vary terminal degrees
    for _ in range(rng.randint(0, 2)):
        add_input(f"v{rng.randrange(n)}")
    for _ in range(rng.randint(0, 2)):
        add_output(f"v{rng.randrange(n)}")

    structure = fs.FunctionStructure(tuple(vertices), tuple(terminals), tuple(flows))
    assert fs.validate(structure).ok
    return structure


def relabel_structure(rng: random.Random,
                      structure: fs.FunctionStructure) -> fs.FunctionStructure:
    """Randomly rename every id and shuffle the flow list."""
    ids = [v.id for v in structure.vertices] + [t.id for t in structure.terminals]
    fresh = [f"r{i}" for i in range(len(ids))]
    rng.shuffle(fresh)
    mapping = dict(zip(ids, fresh))
    vertices = tuple(fs.FunctionVertex(mapping[v.id], v.label) for v in structure.vertices)
    terminals = tuple(
        fs.BoundaryTerminal(mapping[t.id], t.kind, t.label) for t in structure.terminals
    )
    flows = [fs.Flow(mapping[f.source], mapping[f.target], f.label) for f in structure.flows]
    rng.shuffle(flows)
    return fs.FunctionStructure(vertices, terminals, tuple(flows))
