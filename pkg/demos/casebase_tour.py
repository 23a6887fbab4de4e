"""Case-based design on the coil-winder problem: the full 4R cycle.

The query is a guitar-pickup coil winder; the case base holds a fruit
peeler, a fishing reel, a car door and a clock.  Similarity blends
function-label overlap, flow-label overlap and interdependency
closeness, so the domestic rotating machines rank far above the door.
"""

from pathlib import Path

from designbench import casebase as cb
from designbench import funcstruct as fs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

base = cb.parse_case_base((FIXTURES / "winder_cases.cases.json").read_bytes())
winder = fs.parse_structure((FIXTURES / "coil_winder.fs.json").read_bytes())
spec = cb.SimilaritySpec()

print("=== retrieve ===")
result = cb.retrieve(base, spec, winder, k=4)
for rank, (case_id, score) in enumerate(result.ranked, start=1):
    print(f"{rank}. {case_id:13s} {score} = {float(score):.4f}")

print()
print("=== reuse the fishing reel ===")
draft = cb.reuse(base.case("fishing_reel"), winder)
for mapping in draft.mappings:
    target = mapping.subfunction or "(unassigned)"
    print(f"  {mapping.component.name:18s} -> {target}")
print(f"  ...and {len(draft.gaps)} winder subfunctions stay uncovered, e.g.: "
      + ", ".join(draft.gaps[:4]))

print()
print("=== revise against explicit requirements ===")
requirements = [
    cb.Requirement("has a crank", cb.has_component("crank")),
    cb.Requirement("can wind the wire", cb.serves_function("wind wire")),
    cb.Requirement("has a bobbin clamp", cb.has_component("bobbin clamp")),
]
revised = cb.revise(draft, requirements)
for check in revised.checks:
    print(f"  [{'ok' if check.satisfied else 'OPEN'}] {check.name}")
print(f"open revision tasks: {list(revised.open_tasks)}")

print()
print("=== retain the solved problem ===")
solved = cb.Case(
    "coil_winder",
    winder,
    cb.Solution(
        "Fishing-reel style winder with a prong clamp borrowed from the peeler.",
        draft.components() + (cb.Component("prong clamp", "secure bobbin"),),
    ),
)
grown = cb.retain(base, solved)
again = cb.retrieve(grown, spec, winder, k=1)
print(f"retrieving the same problem now hits {again.ranked[0][0]} "
      f"with score {again.ranked[0][1]}")
