"""
Walking through one case by hand
================================

A single remembered episode: outcome quality 0.5 on a [0, 1] scale,
higher is better, and the match to the current situation is perfect.
How good an outcome is it possible to expect?
"""

import numpy as np

from qeu import (
    AttributeSpec,
    Case,
    CaseBase,
    Query,
    SimilarityFamily,
    UtilityModel,
    density_at,
    distribution_at,
    estimate,
)

# One outcome attribute with a linear kernel: two outcomes count as
# fully interchangeable at distance 0 and as unrelated from 0.5 away.
quality = AttributeSpec("quality", SimilarityFamily("linear", 0.5), polarity=1)

base = CaseBase(
    situation_attrs=(),
    outcome_attrs=(quality,),
    cases=(Case(situation=(), outcome=(0.5,), similarity_override=1.0),),
)
query = Query(())
utility = UtilityModel((1.0,))

# The density says how plausible each exact outcome value is. It peaks
# at the remembered 0.5 and falls off linearly on both sides.
print("possibility of observing exactly y:")
for y in np.linspace(0.0, 1.0, 11):
    print(f"  y={y:.1f}  mu={density_at(base, query, (float(y),)):.2f}")

# The distribution asks for "y or better" instead, so it stays flat at
# 1.0 below the remembered outcome and only decays above it.
print("possibility of doing at least as well as y:")
for y in np.linspace(0.0, 1.0, 11):
    print(f"  y={y:.1f}  pi={distribution_at(base, query, (1,), (float(y),)):.2f}")

# The qualitative expected utility balances those hopes against worth:
# the guaranteed level alpha0 is where confidence and utility cross.
result = estimate(base, query, (1,), utility)
print(f"alpha0 = {result.alpha0:.6f}  (exact crossing: 2/3)")
print(f"best defensible outcome: {result.outcomes[0].coords}")

# The trace shows the descent that found it: confidence levels walked
# down from 1.0, each paired with the best utility reachable there.
print("descent trace (level, best reachable utility):")
for level, score in result.trace:
    shown = "none" if score is None else f"{score:.4f}"
    print(f"  alpha={level:.2f}  h={shown}")
