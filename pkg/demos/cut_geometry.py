"""
Alpha-cuts as boxes
===================

Every confidence level carves the outcome space into a union of
axis-aligned boxes around the remembered cases. Lowering the level
grows the boxes; the frontier corners are where utility is decided.
"""

import json

from qeu import (
    AttributeSpec,
    Case,
    CaseBase,
    Query,
    SimilarityFamily,
    density_alpha_cut,
    distribution_alpha_cut,
    frontier,
)

linear = lambda s: SimilarityFamily("linear", s)

base = CaseBase(
    situation_attrs=(),
    outcome_attrs=(
        AttributeSpec("throughput", linear(0.5), polarity=1),
        AttributeSpec("defect_rate", linear(0.5), polarity=0),
    ),
    cases=(
        Case(situation=(), outcome=(0.6, 0.4), similarity_override=1.0),
        Case(situation=(), outcome=(0.8, 0.7), similarity_override=0.8),
    ),
)
query = Query(())
polarities = (1, 0)

for alpha in (0.9, 0.7, 0.5):
    cut = density_alpha_cut(base, query, alpha)
    print(f"density cut at alpha={alpha}:")
    print(json.dumps(cut.to_dict(), indent=2))

# The distribution cut is one-sided: boxes extend all the way to the
# good end of each axis, so only the pessimistic corner matters.
cut = distribution_alpha_cut(base, query, polarities, 0.7)
print("distribution cut at alpha=0.7:")
print(json.dumps(cut.to_dict(), indent=2))

# Frontier points are those pessimistic corners, one per active case.
for alpha in (0.9, 0.7, 0.5):
    points = frontier(base, query, polarities, alpha)
    coords = [tuple(round(c, 4) for c in p.coords) for p in points]
    print(f"frontier at alpha={alpha}: {coords}")
