"""
Ranking negotiation partners
============================

Three candidate partners, each with a history of past deals. The one
worth approaching first is the one whose history supports the highest
guaranteed-utility level, not just the best remembered deal.
"""

from qeu import (
    AttributeSpec,
    Case,
    CaseBase,
    Query,
    SimilarityFamily,
    UtilityModel,
    rank_partners,
)

price = AttributeSpec("price_score", SimilarityFamily("linear", 0.4), polarity=1)
terms = AttributeSpec("terms_score", SimilarityFamily("exponential", 0.3), polarity=1)

# Histories differ in both quality and relevance: steady-but-modest,
# excellent-but-stale, and a single middling deal.
histories = {
    "steady": (
        Case((), (0.7, 0.6), similarity_override=0.9),
        Case((), (0.65, 0.7), similarity_override=0.95),
        Case((), (0.6, 0.65), similarity_override=1.0),
    ),
    "stale-star": (
        Case((), (0.95, 0.9), similarity_override=0.4),
        Case((), (0.9, 0.85), similarity_override=0.35),
    ),
    "one-shot": (Case((), (0.5, 0.5), similarity_override=0.8),),
}

problems = []
for name, cases in histories.items():
    base = CaseBase(situation_attrs=(), outcome_attrs=(price, terms), cases=cases)
    problems.append((name, base, Query(())))

utility = UtilityModel((0.6, 0.4))

ranked = rank_partners(problems, (1, 1), utility)
print("partner ranking (higher alpha0 first):")
for name, result in ranked:
    best = ", ".join(f"{c:.3f}" for c in result.outcomes[0].coords)
    print(f"  {name:>10}  alpha0={result.alpha0:.4f}  aim for ({best})")

# The stale star loses despite the better deals on record: a 0.4
# situation match caps everything its history can promise at 0.4.
