"""A tour of design-problem representations and the interdependency index.

A problem is either a black box (we cannot or will not split its overall
function) or a function structure (a DAG of subfunctions joined by
flows).  The interdependency index PI is the share of subfunctions whose
total degree exceeds two: a pure chain of one-in/one-out steps scores 0,
a structure where everything meets everything scores 1.
"""

from fractions import Fraction
from pathlib import Path

from designbench import funcstruct as fs

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def show(name: str) -> None:
    problem = fs.parse_structure((FIXTURES / name).read_bytes())
    pi = fs.interdependency_index(problem)
    if isinstance(problem, fs.BlackBox):
        print(f"{name}: black box {problem.label!r}")
        print(f"  {len(problem.inputs)} inputs, {len(problem.outputs)} outputs"
              f" -> PI = {pi}")
        return
    busy = [v for v in problem.vertices if fs.degree(problem, v.id) > 2]
    print(f"{name}: {len(problem.vertices)} subfunctions, "
          f"{len(problem.flows)} flows")
    print(f"  {len(busy)} vertices with degree > 2 -> PI = {pi} = {float(pi):.4f}")
    for v in busy[:4]:
        print(f"    e.g. {v.label!r} (degree {fs.degree(problem, v.id)})")


print("=== nondecomposable problems ===")
show("rope.fs.json")      # one flow in, one flow out: PI = 0
show("bridge.fs.json")    # several boundary flows on one box: PI = 1

print()
print("=== decomposable problems ===")
show("coffee_maker.fs.json")
show("full_subtractor.fs.json")   # the classic 5/7
show("coil_winder.fs.json")       # 12 of 28 -> 3/7

print()
print("Adding a pass-through step into any flow can only dilute PI:")
winder = fs.parse_structure((FIXTURES / "coil_winder.fs.json").read_bytes())
flow = winder.flows[0]
spliced = fs.FunctionStructure(
    winder.vertices + (fs.FunctionVertex("extra", "inspect wire"),),
    winder.terminals,
    tuple(f for f in winder.flows if f is not flow) + (
        fs.Flow(flow.source, "extra", flow.label),
        fs.Flow("extra", flow.target, flow.label),
    ),
)
print(f"  before: {fs.interdependency_index(winder)}  "
      f"after splice: {fs.interdependency_index(spliced)}")
assert fs.interdependency_index(spliced) <= Fraction(3, 7)
