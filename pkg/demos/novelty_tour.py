"""How far does a design stray from what the knowledge base expects?

Two exact ratios over the design's variables:

* innovation I - known variables carrying values outside their domains;
* creativity C - variables the knowledge base has never heard of.

A design judged infeasible is 'not valuable' no matter how novel it is,
and once a novel design is absorbed into the knowledge base, scoring it
again is routine: novelty only exists in retrospect.
"""

from pathlib import Path

from designbench import novelty

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def report(kb, design, tag):
    result = novelty.assess(kb, design)
    print(f"{tag}: I = {result.innovation}, C = {result.creativity}"
          f" -> {result.category.value}")
    if result.unexpected:
        print(f"  unexpected values on: {', '.join(result.unexpected)}")
    if result.new:
        print(f"  new variables: {', '.join(result.new)}")
    return result


print("=== rotorcraft: unexpected values ===")
helicopter_kb = novelty.parse_knowledge_base(
    (FIXTURES / "helicopter.kb.json").read_bytes())
quadrocopter = novelty.parse_design_instance(
    (FIXTURES / "quadrocopter.design.json").read_bytes())
print("knowledge base expects exactly one lift device and one torque counter;")
print("the quadrocopter uses four lift devices and no torque counter at all.")
report(helicopter_kb, quadrocopter, "quadrocopter")

print()
print("=== signal transmission: a brand-new variable ===")
signal_kb = novelty.parse_knowledge_base(
    (FIXTURES / "signal_transmission.kb.json").read_bytes())
radio = novelty.parse_design_instance((FIXTURES / "radio.design.json").read_bytes())
print("the base knows wire gauges and lamp powers; the design introduces")
print("a transmission medium nobody modelled before.")
report(signal_kb, radio, "radio link")

print()
print("=== value is a precondition ===")
infeasible = novelty.assess(signal_kb, radio, feasible=False)
print(f"same radio design judged infeasible -> {infeasible.category.value}")

print()
print("=== absorption: novelty is retrospective ===")
grown = novelty.absorb(signal_kb, radio)
print("after absorbing the radio design, 'medium' is known knowledge:")
report(grown, radio, "radio link, reassessed")
