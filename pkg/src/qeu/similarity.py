"""Similarity kernels, their generalized inverses, and min-aggregation.

Kernels map a distance d >= 0 to a similarity degree in [0, 1] and are
non-increasing in d. The generalized inverse of a kernel at level alpha
is the largest distance whose similarity still reaches alpha, capped at
the domain width 1; on [0, 1] x [0, 1] this makes

    kernel_at(family, d) >= alpha  <=>  d <= pseudo_inverse(family, alpha)

an exact equivalence, which is what turns level sets of the possibility
machinery into explicit intervals.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .model import CaseBase, Query, SimilarityFamily, ValidationError

__all__ = [
    "kernel_at",
    "kernel_values",
    "pseudo_inverse",
    "pseudo_inverse_values",
    "tuple_similarity",
    "situation_similarity",
    "case_similarities",
]


def kernel_at(family: SimilarityFamily, d: float) -> float:
    """Similarity of two values at distance ``d``."""
    if d < 0.0:
        raise ValidationError(f"distance must be non-negative, got {d}")
    if family.kind == "linear":
        return max(0.0, 1.0 - d / family.scale)
    return math.exp(-d / family.scale)


def kernel_values(family: SimilarityFamily, d: np.ndarray) -> np.ndarray:
    """Vectorized :func:`kernel_at` over an array of distances."""
    if family.kind == "linear":
        return np.maximum(0.0, 1.0 - d / family.scale)
    return np.exp(-d / family.scale)


def pseudo_inverse(family: SimilarityFamily, alpha: float) -> float:
    """Largest distance in [0, 1] whose similarity is still >= ``alpha``.

    At alpha = 0 every distance qualifies, so the domain width 1 is
    returned for both kernel kinds.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")
    if alpha == 0.0:
        return 1.0
    if family.kind == "linear":
        return min(1.0, family.scale * (1.0 - alpha))
    return min(1.0, family.scale * math.log(1.0 / alpha))


def pseudo_inverse_values(family: SimilarityFamily, alphas: np.ndarray) -> np.ndarray:
    """Vectorized :func:`pseudo_inverse` over an array of levels."""
    if family.kind == "linear":
        radii = np.minimum(1.0, family.scale * (1.0 - alphas))
    else:
        with np.errstate(divide="ignore"):
            radii = np.minimum(1.0, family.scale * -np.log(alphas))
    return np.where(alphas > 0.0, radii, 1.0)


def tuple_similarity(
    families: Sequence[SimilarityFamily], a: Sequence[float], b: Sequence[float]
) -> float:
    """Min over per-attribute kernel similarities of two tuples.

    An empty tuple pair is perfectly similar (the min of nothing is the
    neutral element 1).
    """
    if len(a) != len(b):
        raise ValidationError(f"tuple lengths differ: {len(a)} vs {len(b)}")
    if len(families) != len(a):
        raise ValidationError(
            f"got {len(families)} kernels for tuples of length {len(a)}"
        )
    sim = 1.0
    for fam, x, y in zip(families, a, b):
        sim = min(sim, kernel_at(fam, abs(x - y)))
    return sim


def situation_similarity(case_base: CaseBase, query: Query, index: int) -> float:
    """Similarity of case ``index`` to the query situation.

    A case with a similarity override returns the override untouched;
    otherwise the situation tuples are compared attribute by attribute.
    """
    if not (0 <= index < len(case_base.cases)):
        raise ValidationError(
            f"case index {index} out of range for {len(case_base.cases)} cases"
        )
    case = case_base.cases[index]
    if case.similarity_override is not None:
        return case.similarity_override
    families = tuple(a.family for a in case_base.situation_attrs)
    return tuple_similarity(families, case.situation, query.situation)


def case_similarities(case_base: CaseBase, query: Query) -> np.ndarray:
    """Situation similarities of all cases to the query, as an array."""
    if len(query.situation) != case_base.n_situation:
        raise ValidationError(
            f"query situation length {len(query.situation)} does not match the "
            f"{case_base.n_situation} declared situation attributes"
        )
    overrides = [c.similarity_override for c in case_base.cases]
    if all(s is not None for s in overrides):
        return np.array(overrides, dtype=float)
    return np.array(
        [situation_similarity(case_base, query, i) for i in range(len(case_base.cases))]
    )
