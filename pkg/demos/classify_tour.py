"""Which synthesis method fits which problem?

The capability matrix is plain data: per method, whether it needs a
decomposable problem and how well it covers interdependencies,
innovation and creativity.  The recommender folds a problem profile
through the matrix.  The one systematic gap: no method reaches
creativity, because each draws every variable it can use from a
knowledge base someone wrote in advance.
"""

from fractions import Fraction
from pathlib import Path

from designbench import classify
from designbench.novelty import DesignCategory

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

print("=== the default capability matrix ===")
for row in classify.default_matrix():
    print(f"  {row.method.value:21s} decomposable-only={row.requires_decomposable} "
          f"interdependencies={row.interdependencies.name.lower()} "
          f"innovation={row.innovation.name.lower()} "
          f"creativity={row.creativity.name.lower()}")

print()
print("=== bundled profiles ===")
for name in ("routine", "innovative", "creative", "blackbox_routine"):
    profile = classify.parse_profile((FIXTURES / f"{name}.profile.json").read_bytes())
    report = classify.recommend(profile)
    verdicts = ", ".join(f"{e.method.value}={e.verdict.value}" for e in report.entries)
    print(f"{name}: {verdicts}")

print()
print("=== the creativity gap, exhaustively ===")
for decomposable in (True, False):
    profile = classify.ProblemProfile(
        decomposable, Fraction(1, 2) if decomposable else None, DesignCategory.CREATIVE
    )
    report = classify.recommend(profile)
    print(f"decomposable={decomposable}: applicable methods = "
          f"{[m.value for m in report.applicable()] or 'none'}")

print()
print("=== the matrix is data: override it ===")
generous = (classify.MethodCapabilities(
    classify.Method.GRAMMAR_BASED, True,
    classify.CapabilityLevel.FULL, classify.CapabilityLevel.FULL,
    classify.CapabilityLevel.FULL),)
profile = classify.ProblemProfile(True, Fraction(0), DesignCategory.CREATIVE)
report = classify.recommend(profile, generous)
print("with a hypothetical creative-capable grammar engine:",
      report.entries[0].verdict.value)
