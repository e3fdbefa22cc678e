"""Possibility density and distribution over outcomes, with cut geometry.

The density of an outcome y is the degree to which some remembered case
supports seeing exactly y:

    mu(y) = max over cases i of min(S_i, min over axes k of f_k(|y_k - o_ik|))

where S_i is the case's situation similarity and o_i its outcome. The
distribution pi is the monotone envelope of mu under the preference
order: pi(y) is the possibility of obtaining y *or anything preferred to
it*. With polarity signs s_k = 2 m_k - 1 the envelope has the closed
form of the density with the absolute distance replaced by the
directional shortfall max(0, s_k (y_k - o_ik)), which is what the code
evaluates.

Level sets of both functions decompose per case into axis-aligned boxes,
and the distribution's boxes are half-open toward the preferred side.
The maximal elements of a distribution cut are the clamped per-case
vertices o_i + s * radius; they drive the descent estimator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import CaseBase, Query, ValidationError
from .similarity import case_similarities, kernel_values, pseudo_inverse

__all__ = [
    "Hypercuboid",
    "CutGeometry",
    "FrontierPoint",
    "density_at",
    "distribution_at",
    "density_alpha_cut",
    "distribution_alpha_cut",
    "frontier",
]


@dataclass(frozen=True)
class Hypercuboid:
    """Axis-aligned box contributed by one case at one cut level."""

    case: int
    intervals: tuple[tuple[float, float], ...]

    def contains(self, point: Sequence[float], slack: float = 0.0) -> bool:
        if len(point) != len(self.intervals):
            raise ValidationError(
                f"point length {len(point)} does not match {len(self.intervals)} axes"
            )
        return all(
            lo - slack <= x <= hi + slack
            for x, (lo, hi) in zip(point, self.intervals)
        )

    def to_dict(self) -> dict:
        return {"case": self.case, "intervals": [list(iv) for iv in self.intervals]}


@dataclass(frozen=True)
class CutGeometry:
    """A level set as the union of per-case boxes."""

    level: float
    kind: str
    cuboids: tuple[Hypercuboid, ...]

    def contains(self, point: Sequence[float], slack: float = 0.0) -> bool:
        return any(c.contains(point, slack) for c in self.cuboids)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "kind": self.kind,
            "cuboids": [c.to_dict() for c in self.cuboids],
        }


@dataclass(frozen=True)
class FrontierPoint:
    """A maximal element of a distribution cut, tagged by its case."""

    case: int
    coords: tuple[float, ...]

    def to_dict(self) -> dict:
        return {"case": self.case, "coords": list(self.coords)}


def _outcome_matrix(case_base: CaseBase) -> np.ndarray:
    return np.array([c.outcome for c in case_base.cases])


def _check_point(case_base: CaseBase, y: Sequence[float]) -> np.ndarray:
    if len(y) != case_base.n_outcome:
        raise ValidationError(
            f"outcome point length {len(y)} does not match the "
            f"{case_base.n_outcome} declared outcome attributes"
        )
    return np.asarray(y, dtype=float)


def _check_polarities(case_base: CaseBase, polarities: Sequence[int]) -> np.ndarray:
    if len(polarities) != case_base.n_outcome:
        raise ValidationError(
            f"polarity vector length {len(polarities)} does not match the "
            f"{case_base.n_outcome} declared outcome attributes"
        )
    arr = np.asarray(polarities, dtype=float)
    if not np.all((arr == 0.0) | (arr == 1.0)):
        raise ValidationError("polarity vector entries must be 0 or 1")
    return arr


def _max_min_score(case_base: CaseBase, sims: np.ndarray, dist: np.ndarray) -> float:
    # dist is (cases, axes) of non-negative per-axis distances.
    per_axis = np.empty_like(dist)
    for k, attr in enumerate(case_base.outcome_attrs):
        per_axis[:, k] = kernel_values(attr.family, dist[:, k])
    return float(np.max(np.minimum(sims, per_axis.min(axis=1))))


def density_at(case_base: CaseBase, query: Query, y: Sequence[float]) -> float:
    """Possibility degree of obtaining exactly the outcome ``y``."""
    point = _check_point(case_base, y)
    sims = case_similarities(case_base, query)
    dist = np.abs(_outcome_matrix(case_base) - point)
    return _max_min_score(case_base, sims, dist)


def distribution_at(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    y: Sequence[float],
) -> float:
    """Possibility degree of obtaining ``y`` or anything preferred to it."""
    point = _check_point(case_base, y)
    signs = 2.0 * _check_polarities(case_base, polarities) - 1.0
    sims = case_similarities(case_base, query)
    shortfall = np.maximum(0.0, signs * (point - _outcome_matrix(case_base)))
    return _max_min_score(case_base, sims, shortfall)


def _check_level(alpha: float) -> float:
    if not (0.0 < alpha <= 1.0):
        raise ValidationError(f"alpha must be in (0, 1], got {alpha}")
    return float(alpha)


def _radii(case_base: CaseBase, alpha: float) -> np.ndarray:
    return np.array(
        [pseudo_inverse(attr.family, alpha) for attr in case_base.outcome_attrs]
    )


def density_alpha_cut(case_base: CaseBase, query: Query, alpha: float) -> CutGeometry:
    """The set {y : density >= alpha} as per-case boxes clipped to [0, 1]^n.

    Cases whose situation similarity falls below ``alpha`` contribute
    nothing, so the geometry can be empty.
    """
    alpha = _check_level(alpha)
    sims = case_similarities(case_base, query)
    radii = _radii(case_base, alpha)
    cuboids = []
    for i in np.flatnonzero(sims >= alpha):
        case = case_base.cases[int(i)]
        intervals = tuple(
            (max(0.0, float(o - r)), min(1.0, float(o + r)))
            for o, r in zip(case.outcome, radii)
        )
        cuboids.append(Hypercuboid(case=int(i), intervals=intervals))
    return CutGeometry(level=alpha, kind="density", cuboids=tuple(cuboids))


def distribution_alpha_cut(
    case_base: CaseBase, query: Query, polarities: Sequence[int], alpha: float
) -> CutGeometry:
    """The set {y : distribution >= alpha} as per-case boxes.

    Each box is anchored at the case outcome pushed by the cut radius
    toward the preferred side and extends all the way back to the worst
    side: on a higher-is-better axis it is [0, min(1, o + r)], on a
    lower-is-better axis [max(0, o - r), 1].
    """
    alpha = _check_level(alpha)
    pol = _check_polarities(case_base, polarities)
    sims = case_similarities(case_base, query)
    radii = _radii(case_base, alpha)
    cuboids = []
    for i in np.flatnonzero(sims >= alpha):
        case = case_base.cases[int(i)]
        intervals = tuple(
            (0.0, min(1.0, float(o + r))) if m else (max(0.0, float(o - r)), 1.0)
            for o, r, m in zip(case.outcome, radii, pol)
        )
        cuboids.append(Hypercuboid(case=int(i), intervals=intervals))
    return CutGeometry(level=alpha, kind="distribution", cuboids=tuple(cuboids))


def _frontier_points(
    case_base: CaseBase, query: Query, polarities: Sequence[int], alpha: float
) -> tuple[FrontierPoint, ...]:
    # Shared with the estimator, which also needs the alpha = 0 endpoint.
    pol = _check_polarities(case_base, polarities)
    signs = 2.0 * pol - 1.0
    sims = case_similarities(case_base, query)
    radii = _radii(case_base, alpha)
    outcomes = _outcome_matrix(case_base)
    points = []
    for i in np.flatnonzero(sims >= alpha):
        vertex = np.clip(outcomes[int(i)] + signs * radii, 0.0, 1.0)
        points.append(FrontierPoint(case=int(i), coords=tuple(vertex.tolist())))
    return tuple(points)


def frontier(
    case_base: CaseBase, query: Query, polarities: Sequence[int], alpha: float
) -> tuple[FrontierPoint, ...]:
    """Maximal elements of the distribution cut at ``alpha``, one per
    contributing case.

    Duplicates are kept: distinct cases may push to the same vertex, and
    callers that care about provenance need both tags.
    """
    alpha = _check_level(alpha)
    return _frontier_points(case_base, query, polarities, alpha)
