"""Mapping problem profiles to applicable synthesis methods.

The capability matrix is data, not code: each row says whether a method
needs a decomposable problem and how well it copes with
interdependencies, innovation and creativity.  The default matrix
encodes the conclusions drawn from the worked examples: all three
methods need decomposability and handle interdependencies; analogy
methods are only partially suited to innovation because retrieval pulls
solutions toward what the case base already contains; and no method
reaches creativity, since each one draws every variable it can touch
from a knowledge base someone programmed in advance.

The interdependency index never flips a verdict; it is carried into the
rationale as an annotation only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum, IntEnum
from fractions import Fraction
from typing import Optional, Sequence

from .funcstruct import SchemaError
from .novelty import DesignCategory


class Method(Enum):
    GRAMMAR_BASED = "grammar_based"
    FUNCTIONAL_SYNTHESIS = "functional_synthesis"
    ANALOGY_BASED = "analogy_based"


class CapabilityLevel(IntEnum):
    NONE = 0
    LIMITED = 1
    FULL = 2


class Verdict(Enum):
    APPLICABLE = "applicable"
    LIMITED = "limited"
    INAPPLICABLE = "inapplicable"


_PROFILE_NOVELTIES = (
    DesignCategory.ROUTINE,
    DesignCategory.INNOVATIVE,
    DesignCategory.CREATIVE,
)


@dataclass(frozen=True)
class MethodCapabilities:
    method: Method
    requires_decomposable: bool
    interdependencies: CapabilityLevel
    innovation: CapabilityLevel
    creativity: CapabilityLevel


@dataclass(frozen=True)
class ProblemProfile:
    decomposable: bool
    pi: Optional[Fraction]
    novelty: DesignCategory

    def __post_init__(self):
        if self.novelty not in _PROFILE_NOVELTIES:
            raise ValueError("profile novelty must be routine, innovative or creative")
        if self.decomposable and self.pi is None:
            raise ValueError("decomposable profiles carry an interdependency index")
        if not self.decomposable and self.pi not in (None, Fraction(0), Fraction(1)):
            raise ValueError("a black-box annotation can only be 0 or 1")
        if self.pi is not None and not 0 <= self.pi <= 1:
            raise ValueError("interdependency index must lie in [0, 1]")


@dataclass(frozen=True)
class MethodVerdict:
    method: Method
    verdict: Verdict
    rationale: str


@dataclass(frozen=True)
class MethodReport:
    entries: tuple[MethodVerdict, ...]

    def applicable(self) -> tuple[Method, ...]:
        return tuple(e.method for e in self.entries if e.verdict is Verdict.APPLICABLE)

    def verdict_for(self, method: Method) -> Verdict:
        for e in self.entries:
            if e.method is method:
                return e.verdict
        raise KeyError(method)


def default_matrix() -> tuple[MethodCapabilities, ...]:
    full, limited, none = CapabilityLevel.FULL, CapabilityLevel.LIMITED, CapabilityLevel.NONE
    return (
        MethodCapabilities(Method.GRAMMAR_BASED, True, full, full, none),
        MethodCapabilities(Method.FUNCTIONAL_SYNTHESIS, True, full, full, none),
        MethodCapabilities(Method.ANALOGY_BASED, True, full, limited, none),
    )


def _pi_note(profile: ProblemProfile) -> str:
    if profile.pi is None:
        return "no interdependency index is available"
    return f"interdependencies at PI = {profile.pi} are handled"


def recommend(profile: ProblemProfile,
              matrix: Optional[Sequence[MethodCapabilities]] = None) -> MethodReport:
    """Verdict per method: APPLICABLE, LIMITED (partial capability at the
    profile's novelty level) or INAPPLICABLE."""
    if matrix is None:
        matrix = default_matrix()
    entries = []
    for row in matrix:
        if row.requires_decomposable and not profile.decomposable:
            entries.append(
                MethodVerdict(
                    row.method,
                    Verdict.INAPPLICABLE,
                    f"{row.method.value} needs a decomposable problem; "
                    "this one is represented as a black box",
                )
            )
            continue
        if profile.novelty is DesignCategory.ROUTINE:
            level, needed = CapabilityLevel.FULL, "routine design"
        elif profile.novelty is DesignCategory.INNOVATIVE:
            level, needed = row.innovation, "innovation"
        else:
            level, needed = row.creativity, "creativity"
        if level is CapabilityLevel.FULL:
            entries.append(
                MethodVerdict(
                    row.method,
                    Verdict.APPLICABLE,
                    f"{row.method.value} covers {needed}; {_pi_note(profile)}",
                )
            )
        elif level is CapabilityLevel.LIMITED:
            entries.append(
                MethodVerdict(
                    row.method,
                    Verdict.LIMITED,
                    f"{row.method.value} covers {needed} only partially; "
                    f"{_pi_note(profile)}",
                )
            )
        else:
            entries.append(
                MethodVerdict(
                    row.method,
                    Verdict.INAPPLICABLE,
                    f"{row.method.value} cannot provide {needed}: every variable it "
                    "can reach lives in a pre-programmed knowledge base",
                )
            )
    return MethodReport(tuple(entries))


# ---------------------------------------------------------------------------
# JSON formats (.profile.json / matrix override)

def _fraction_from_json(value: object, location: str) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, float):
            return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"not a valid rational: {value!r}", location) from exc
    raise SchemaError(f"not a valid rational: {value!r}", location)


def profile_from_dict(doc: object, location: str = "$") -> ProblemProfile:
    if not isinstance(doc, dict):
        raise SchemaError("expected an object", location)
    if not isinstance(doc.get("decomposable"), bool):
        raise SchemaError("'decomposable' must be a boolean", f"{location}.decomposable")
    novelty_raw = doc.get("novelty")
    try:
        novelty = DesignCategory(novelty_raw)
    except ValueError as exc:
        raise SchemaError(
            f"'novelty' must be one of routine/innovative/creative, got {novelty_raw!r}",
            f"{location}.novelty",
        ) from exc
    pi = None
    if doc.get("pi") is not None:
        pi = _fraction_from_json(doc["pi"], f"{location}.pi")
    try:
        return ProblemProfile(doc["decomposable"], pi, novelty)
    except ValueError as exc:
        raise SchemaError(str(exc), location) from exc


def parse_profile(data: bytes | str) -> ProblemProfile:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return profile_from_dict(doc)


_LEVELS = {"none": CapabilityLevel.NONE, "limited": CapabilityLevel.LIMITED,
           "full": CapabilityLevel.FULL}


def matrix_from_dict(doc: object, location: str = "$") -> tuple[MethodCapabilities, ...]:
    if not isinstance(doc, list) or not doc:
        raise SchemaError("expected a non-empty array of capability rows", location)
    rows = []
    for i, row in enumerate(doc):
        loc = f"{location}[{i}]"
        if not isinstance(row, dict):
            raise SchemaError("expected an object", loc)
        try:
            method = Method(row.get("method"))
        except ValueError as exc:
            raise SchemaError(f"unknown method {row.get('method')!r}", f"{loc}.method") from exc
        if not isinstance(row.get("requires_decomposable"), bool):
            raise SchemaError("'requires_decomposable' must be a boolean",
                              f"{loc}.requires_decomposable")
        levels = {}
        for key in ("interdependencies", "innovation", "creativity"):
            if row.get(key) not in _LEVELS:
                raise SchemaError(f"'{key}' must be one of none/limited/full", f"{loc}.{key}")
            levels[key] = _LEVELS[row[key]]
        rows.append(
            MethodCapabilities(method, row["requires_decomposable"],
                               levels["interdependencies"], levels["innovation"],
                               levels["creativity"])
        )
    return tuple(rows)


def parse_matrix(data: bytes | str) -> tuple[MethodCapabilities, ...]:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}", f"line {exc.lineno}") from exc
    return matrix_from_dict(doc)


def report_to_dict(report: MethodReport) -> dict:
    return {
        "methods": [
            {"method": e.method.value, "verdict": e.verdict.value, "rationale": e.rationale}
            for e in report.entries
        ],
        "applicable": [m.value for m in report.applicable()],
    }
