"""Innovation and creativity indices over a knowledge base of variables.

A knowledge base declares, per design variable, the domain of values
considered expected.  Scoring a concrete design instance against it:

* innovation index = share of the instance's variables that are known
  but carry a value outside their domain;
* creativity index = share of the instance's variables the knowledge
  base does not know at all.

A name counts toward exactly one of the two (known or new, never both),
so the indices share the instance-size denominator and their sum never
exceeds one.  Feasibility is an external verdict: a design judged not
feasible is categorised ``NOT_VALUABLE`` regardless of its indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import json
import math
from typing import Mapping, Optional

from .domains import Domain, Scalar, domain_from_dict, domain_to_dict, singleton
from .funcstruct import SchemaError


class DesignCategory(Enum):
    ROUTINE = "routine"
    INNOVATIVE = "innovative"
    CREATIVE = "creative"
    NOT_VALUABLE = "not_valuable"


@dataclass(frozen=True)
class DesignVariable:
    name: str
    domain: Domain
    subfunction: Optional[str] = None


@dataclass(frozen=True)
class KnowledgeBase:
    variables: tuple[DesignVariable, ...]

    def __post_init__(self):
        names = [v.name for v in self.variables]
        if len(names) != len(set(names)):
            raise ValueError("variable names must be unique within a knowledge base")

    def names(self) -> set[str]:
        return {v.name for v in self.variables}

    def domain_of(self, name: str) -> Domain:
        for v in self.variables:
            if v.name == name:
                return v.domain
        raise KeyError(name)


@dataclass(frozen=True)
class DesignInstance:
    """A concrete variable assignment, optionally pre-judged for feasibility."""

    assignments: tuple[tuple[str, Scalar], ...]
    feasible: Optional[bool] = None

    def __post_init__(self):
        if not self.assignments:
            raise ValueError("a design instance needs at least one assignment")
        names = [n for n, _ in self.assignments]
        if len(names) != len(set(names)):
            raise ValueError("assignment names must be unique")

    @classmethod
    def from_mapping(cls, assignments: Mapping[str, Scalar],
                     feasible: Optional[bool] = None) -> "DesignInstance":
        return cls(tuple(assignments.items()), feasible)

    def __len__(self) -> int:
        return len(self.assignments)


@dataclass(frozen=True)
class NoveltyReport:
    innovation: Fraction
    creativity: Fraction
    category: DesignCategory
    unexpected: tuple[str, ...]
    new: tuple[str, ...]


def unexpected_names(kb: KnowledgeBase, design: DesignInstance) -> tuple[str, ...]:
    """Names known to the KB whose assigned value falls outside its domain."""
    known = kb.names()
    return tuple(
        name for name, value in design.assignments
        if name in known and not kb.domain_of(name).contains(value)
    )


def new_names(kb: KnowledgeBase, design: DesignInstance) -> tuple[str, ...]:
    """Names the KB does not know; these never count as unexpected."""
    known = kb.names()
    return tuple(name for name, _ in design.assignments if name not in known)


def innovation_index(kb: KnowledgeBase, design: DesignInstance) -> Fraction:
    return Fraction(len(unexpected_names(kb, design)), len(design))


def creativity_index(kb: KnowledgeBase, design: DesignInstance) -> Fraction:
    return Fraction(len(new_names(kb, design)), len(design))


def assess(kb: KnowledgeBase, design: DesignInstance,
           feasible: Optional[bool] = None) -> NoveltyReport:
    """Score a design and place it in the routine/innovative/creative
    taxonomy.  ``feasible`` falls back to the instance's own verdict."""
    if feasible is None:
        feasible = design.feasible
    if feasible is None:
        raise ValueError("a feasibility verdict is required (external judgement)")

    unexpected = unexpected_names(kb, design)
    new = new_names(kb, design)
    innovation = Fraction(len(unexpected), len(design))
    creativity = Fraction(len(new), len(design))

    if not feasible:
        category = DesignCategory.NOT_VALUABLE
    elif creativity > 0:
        category = DesignCategory.CREATIVE
    elif innovation > 0:
        category = DesignCategory.INNOVATIVE
    else:
        category = DesignCategory.ROUTINE

    return NoveltyReport(innovation, creativity, category, unexpected, new)


def absorb(kb: KnowledgeBase, design: DesignInstance) -> KnowledgeBase:
    """Fold a design back into the knowledge base.

    Out-of-domain values widen the variable's domain; unknown names are
    added with singleton domains.  Assessing the same design against the
    result is routine by construction.
    """
    by_name = {v.name: v for v in kb.variables}
    merged = list(kb.variables)
    for name, value in design.assignments:
        if name in by_name:
            var = by_name[name]
            if not var.domain.contains(value):
                widened = DesignVariable(var.name, var.domain.widen(value), var.subfunction)
                merged[merged.index(var)] = widened
                by_name[name] = widened
        else:
            added = DesignVariable(name, singleton(value))
            merged.append(added)
            by_name[name] = added
    return KnowledgeBase(tuple(merged))


# ---------------------------------------------------------------------------
# JSON formats (.kb.json / .design.json)

def kb_from_dict(doc: object, location: str = "$") -> KnowledgeBase:
    if not isinstance(doc, dict) or not isinstance(doc.get("variables"), list):
        raise SchemaError("expected {'variables': [...]}", location)
    variables = []
    seen: set[str] = set()
    for i, v in enumerate(doc["variables"]):
        loc = f"{location}.variables[{i}]"
        if not isinstance(v, dict) or not isinstance(v.get("name"), str):
            raise SchemaError("variable needs a string 'name'", loc)
        if v["name"] in seen:
            raise SchemaError(f"duplicate variable {v['name']!r}", f"{loc}.name")
        seen.add(v["name"])
        domain = domain_from_dict(v.get("domain"), f"{loc}.domain")
        subfunction = v.get("subfunction")
        if subfunction is not None and not isinstance(subfunction, str):
            raise SchemaError("'subfunction' must be a string", f"{loc}.subfunction")
        variables.append(DesignVariable(v["name"], domain, subfunction))
    return KnowledgeBase(tuple(variables))


def kb_to_dict(kb: KnowledgeBase) -> dict:
    out = []
    for v in kb.variables:
        entry: dict = {"name": v.name, "domain": domain_to_dict(v.domain)}
        if v.subfunction is not None:
            entry["subfunction"] = v.subfunction
        out.append(entry)
    return {"variables": out}


def parse_knowledge_base(data: bytes | str) -> KnowledgeBase:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return kb_from_dict(doc)


def serialize_knowledge_base(kb: KnowledgeBase) -> bytes:
    return (json.dumps(kb_to_dict(kb), indent=2, sort_keys=True) + "\n").encode("utf-8")


def design_from_dict(doc: object, location: str = "$") -> DesignInstance:
    if not isinstance(doc, dict) or not isinstance(doc.get("assignments"), dict):
        raise SchemaError("expected {'assignments': {...}}", location)
    if not doc["assignments"]:
        raise SchemaError("'assignments' must not be empty", f"{location}.assignments")
    feasible = doc.get("feasible")
    if feasible is not None and not isinstance(feasible, bool):
        raise SchemaError("'feasible' must be a boolean", f"{location}.feasible")
    for name, value in doc["assignments"].items():
        if not isinstance(value, (type(None), bool, int, float, str)):
            raise SchemaError("values must be JSON scalars",
                              f"{location}.assignments.{name}")
        if isinstance(value, float) and not math.isfinite(value):
            raise SchemaError("values must be finite",
                              f"{location}.assignments.{name}")
    return DesignInstance.from_mapping(doc["assignments"], feasible)


def parse_design_instance(data: bytes | str) -> DesignInstance:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return design_from_dict(doc)
