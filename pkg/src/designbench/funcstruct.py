"""Function-structure graphs and the interdependency index.

A design problem is held either as a :class:`BlackBox` (nondecomposable:
just labelled input and output flows) or as a :class:`FunctionStructure`
(decomposable: a DAG of subfunction vertices connected by labelled flows,
with boundary terminals for flows crossing the system border).

The interdependency index of a structure is the fraction of function
vertices whose total degree exceeds two.  Flows to and from boundary
terminals count toward a vertex's degree, but terminals themselves are
never counted in the denominator.  All arithmetic is exact
(:class:`fractions.Fraction`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

INPUT = "input"
OUTPUT = "output"


class SchemaError(ValueError):
    """A document does not conform to the on-disk schema.

    ``location`` is a dotted/indexed path into the offending document,
    e.g. ``"flows[3].source"``.
    """

    def __init__(self, message: str, location: str = "$"):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.reason = message


class InvalidStructureError(ValueError):
    """Raised when an operation requires a valid structure but got violations."""

    def __init__(self, report: "ValidationReport"):
        super().__init__(
            "invalid function structure: "
            + "; ".join(v.message for v in report.violations)
        )
        self.report = report


@dataclass(frozen=True)
class FunctionVertex:
    """A subfunction, e.g. ``"lead water through coffee powder"``."""

    id: str
    label: str


@dataclass(frozen=True)
class BoundaryTerminal:
    """Entry/exit point of a flow crossing the system boundary."""

    id: str
    kind: str  # INPUT or OUTPUT
    label: str  # flow label carried across the boundary


@dataclass(frozen=True)
class Flow:
    """A directed, labelled flow between vertices and/or terminals."""

    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


@dataclass(frozen=True)
class FunctionStructure:
    """Immutable attributed DAG of subfunctions, terminals and flows.

    Construction is permissive: semantic invariants (acyclicity, path
    coverage, ...) are checked by :func:`validate`, which reports
    violations as data rather than raising.
    """

    vertices: tuple[FunctionVertex, ...]
    terminals: tuple[BoundaryTerminal, ...] = ()
    flows: tuple[Flow, ...] = ()

    def vertex_ids(self) -> set[str]:
        return {v.id for v in self.vertices}

    def terminal_ids(self) -> set[str]:
        return {t.id for t in self.terminals}

    def vertex(self, vertex_id: str) -> FunctionVertex:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        raise KeyError(f"unknown vertex id: {vertex_id!r}")


@dataclass(frozen=True)
class BlackBox:
    """A nondecomposed overall function with labelled inputs and outputs."""

    label: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]


#: A design problem is exactly one of the two representations.  Choosing
#: BlackBox declares the problem nondecomposable; choosing
#: FunctionStructure declares it decomposable.
DesignProblem = Union[BlackBox, FunctionStructure]


def is_decomposable(problem: DesignProblem) -> bool:
    return isinstance(problem, FunctionStructure)


def validate(fs: FunctionStructure) -> ValidationReport:
    """Check every structural invariant; violations are data, not errors."""
    out: list[Violation] = []

    seen: set[str] = set()
    for v in fs.vertices:
        if v.id in seen:
            out.append(Violation("duplicate-id", f"duplicate id {v.id!r}"))
        seen.add(v.id)
    for t in fs.terminals:
        if t.id in seen:
            out.append(Violation("duplicate-id", f"duplicate id {t.id!r}"))
        seen.add(t.id)
        if t.kind not in (INPUT, OUTPUT):
            out.append(
                Violation("bad-terminal-kind", f"terminal {t.id!r} has kind {t.kind!r}")
            )
        if not t.label:
            out.append(Violation("empty-label", f"terminal {t.id!r} has empty label"))

    if not fs.vertices:
        out.append(Violation("no-vertices", "structure has no function vertices"))

    vertex_ids = fs.vertex_ids()
    term_by_id = {t.id: t for t in fs.terminals}

    for i, f in enumerate(fs.flows):
        for endpoint in (f.source, f.target):
            if endpoint not in vertex_ids and endpoint not in term_by_id:
                out.append(
                    Violation("unknown-endpoint", f"flows[{i}] references {endpoint!r}")
                )
        if f.source in term_by_id and f.target in term_by_id:
            out.append(
                Violation(
                    "terminal-terminal-flow",
                    f"flows[{i}] connects two terminals ({f.source!r} -> {f.target!r})",
                )
            )
        if f.target in term_by_id and term_by_id[f.target].kind == INPUT:
            out.append(
                Violation(
                    "input-terminal-inflow",
                    f"flows[{i}] enters input terminal {f.target!r}",
                )
            )
        if f.source in term_by_id and term_by_id[f.source].kind == OUTPUT:
            out.append(
                Violation(
                    "output-terminal-outflow",
                    f"flows[{i}] leaves output terminal {f.source!r}",
                )
            )
        if not f.label:
            out.append(Violation("empty-label", f"flows[{i}] has empty label"))

    # Cycle check on the subgraph induced by function vertices.
    succ: dict[str, list[str]] = {v: [] for v in vertex_ids}
    for f in fs.flows:
        if f.source in vertex_ids and f.target in vertex_ids:
            succ[f.source].append(f.target)
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def has_cycle(start: str) -> bool:
        stack = [(start, iter(succ[start]))]
        state[start] = 0
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if state.get(nxt) == 0:
                    return True
                if nxt not in state:
                    state[nxt] = 0
                    stack.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                state[node] = 1
                stack.pop()
        return False

    for v in vertex_ids:
        if v not in state and has_cycle(v):
            out.append(Violation("cycle", "flows between function vertices form a cycle"))
            break

    # Every vertex must lie on some input-terminal -> output-terminal path.
    inputs = {t.id for t in fs.terminals if t.kind == INPUT}
    outputs = {t.id for t in fs.terminals if t.kind == OUTPUT}
    fwd: dict[str, set[str]] = {}
    back: dict[str, set[str]] = {}
    for f in fs.flows:
        fwd.setdefault(f.source, set()).add(f.target)
        back.setdefault(f.target, set()).add(f.source)

    def reachable(seeds: set[str], adjacency: dict[str, set[str]]) -> set[str]:
        seen_r = set(seeds)
        stack = list(seeds)
        while stack:
            for nxt in adjacency.get(stack.pop(), ()):
                if nxt not in seen_r:
                    seen_r.add(nxt)
                    stack.append(nxt)
        return seen_r

    from_inputs = reachable(inputs, fwd)
    to_outputs = reachable(outputs, back)
    for v in fs.vertices:
        if v.id not in from_inputs or v.id not in to_outputs:
            out.append(
                Violation(
                    "off-path-vertex",
                    f"vertex {v.id!r} is not on any input->output path",
                )
            )

    return ValidationReport(tuple(out))


def validate_blackbox(box: BlackBox) -> ValidationReport:
    out = []
    if not box.inputs:
        out.append(Violation("no-inputs", "black box has no input flows"))
    if not box.outputs:
        out.append(Violation("no-outputs", "black box has no output flows"))
    for name in (*box.inputs, *box.outputs):
        if not name:
            out.append(Violation("empty-label", "black box has an empty flow label"))
    return ValidationReport(tuple(out))


def degree(fs: FunctionStructure, vertex_id: str) -> int:
    """Total degree: in-degree + out-degree, terminal flows included.

    Parallel flows between the same endpoints each count.
    """
    if vertex_id not in fs.vertex_ids():
        raise KeyError(f"unknown vertex id: {vertex_id!r}")
    return sum(1 for f in fs.flows if f.source == vertex_id) + sum(
        1 for f in fs.flows if f.target == vertex_id
    )


def interdependency_index(problem: DesignProblem) -> Fraction:
    """Fraction of function vertices with degree strictly greater than two.

    Black boxes: 1 if the box carries more than two boundary flows in
    total, else 0 (the box is a single vertex of that degree).
    """
    if isinstance(problem, BlackBox):
        report = validate_blackbox(problem)
        if not report.ok:
            raise InvalidStructureError(report)
        return Fraction(1) if len(problem.inputs) + len(problem.outputs) > 2 else Fraction(0)

    report = validate(problem)
    if not report.ok:
        raise InvalidStructureError(report)
    busy = sum(1 for v in problem.vertices if degree(problem, v.id) > 2)
    return Fraction(busy, len(problem.vertices))


# ---------------------------------------------------------------------------
# JSON round-trip (.fs.json)

def _expect(condition: bool, message: str, location: str) -> None:
    if not condition:
        raise SchemaError(message, location)


def _expect_str(value: object, location: str) -> str:
    _expect(isinstance(value, str), "expected a string", location)
    return value  # type: ignore[return-value]


def problem_from_dict(doc: object, location: str = "$") -> DesignProblem:
    _expect(isinstance(doc, dict), "expected an object", location)
    assert isinstance(doc, dict)
    kind = doc.get("kind")
    _expect(kind in ("structure", "blackbox"),
            "kind must be 'structure' or 'blackbox'", f"{location}.kind")

    if kind == "blackbox":
        label = _expect_str(doc.get("label", ""), f"{location}.label")
        for key in ("inputs", "outputs"):
            _expect(isinstance(doc.get(key), list), "expected an array", f"{location}.{key}")
        inputs = tuple(
            _expect_str(x, f"{location}.inputs[{i}]") for i, x in enumerate(doc["inputs"])
        )
        outputs = tuple(
            _expect_str(x, f"{location}.outputs[{i}]") for i, x in enumerate(doc["outputs"])
        )
        return BlackBox(label=label, inputs=inputs, outputs=outputs)

    for key in ("vertices", "terminals", "flows"):
        _expect(isinstance(doc.get(key), list), "expected an array", f"{location}.{key}")

    seen_ids: set[str] = set()
    vertices = []
    for i, v in enumerate(doc["vertices"]):
        loc = f"{location}.vertices[{i}]"
        _expect(isinstance(v, dict), "expected an object", loc)
        vid = _expect_str(v.get("id"), f"{loc}.id")
        _expect(vid not in seen_ids, f"duplicate id {vid!r}", f"{loc}.id")
        seen_ids.add(vid)
        vertices.append(FunctionVertex(id=vid, label=_expect_str(v.get("label"), f"{loc}.label")))

    terminals = []
    for i, t in enumerate(doc["terminals"]):
        loc = f"{location}.terminals[{i}]"
        _expect(isinstance(t, dict), "expected an object", loc)
        tid = _expect_str(t.get("id"), f"{loc}.id")
        _expect(tid not in seen_ids, f"duplicate id {tid!r}", f"{loc}.id")
        seen_ids.add(tid)
        kind_t = _expect_str(t.get("kind"), f"{loc}.kind")
        _expect(kind_t in (INPUT, OUTPUT), "kind must be 'input' or 'output'", f"{loc}.kind")
        terminals.append(
            BoundaryTerminal(id=tid, kind=kind_t, label=_expect_str(t.get("label"), f"{loc}.label"))
        )

    flows = []
    for i, f in enumerate(doc["flows"]):
        loc = f"{location}.flows[{i}]"
        _expect(isinstance(f, dict), "expected an object", loc)
        flows.append(
            Flow(
                source=_expect_str(f.get("source"), f"{loc}.source"),
                target=_expect_str(f.get("target"), f"{loc}.target"),
                label=_expect_str(f.get("label"), f"{loc}.label"),
            )
        )

    return FunctionStructure(tuple(vertices), tuple(terminals), tuple(flows))


def problem_to_dict(problem: DesignProblem) -> dict:
    if isinstance(problem, BlackBox):
        return {
            "kind": "blackbox",
            "label": problem.label,
            "inputs": list(problem.inputs),
            "outputs": list(problem.outputs),
        }
    return {
        "kind": "structure",
        "vertices": [{"id": v.id, "label": v.label} for v in problem.vertices],
        "terminals": [
            {"id": t.id, "kind": t.kind, "label": t.label} for t in problem.terminals
        ],
        "flows": [
            {"source": f.source, "target": f.target, "label": f.label}
            for f in problem.flows
        ],
    }


def parse_structure(data: bytes | str) -> DesignProblem:
    """Parse a ``.fs.json`` document.  Raises :class:`SchemaError` with a
    location for malformed documents, schema violations and duplicate ids."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if not data.strip():
        raise SchemaError("empty document")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return problem_from_dict(doc)


def serialize_structure(problem: DesignProblem) -> bytes:
    """Serialize deterministically; ``parse_structure`` round-trips to an
    equal value."""
    return (
        json.dumps(problem_to_dict(problem), indent=2, sort_keys=True) + "\n"
    ).encode("utf-8")
