"""Descent estimator for the optimistic qualitative expected utility.

The optimistic score of a decision problem is max over outcomes y of
min(pi(y), u(y)). Because u is strictly increasing in the preference
order and every cut of pi has finitely many maximal elements (the
per-case frontier vertices), the score is the largest level alpha whose
frontier still reaches utility alpha. The estimator walks a descending
level ladder, scores each level's frontier in one vectorized pass, stops
at the first level where max-utility >= level, and optionally bisects
between the last failing and the first passing level. The ladder always
terminates: at level 0 every frontier vertex collapses to the ideal
corner, whose utility is 1.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import CaseBase, EstimatorConfig, Query, UtilityModel, ValidationError
from .possibility import FrontierPoint, _check_polarities
from .similarity import case_similarities, pseudo_inverse, pseudo_inverse_values

__all__ = ["EstimateResult", "frontier_score", "estimate", "rank_partners"]

_MAX_BISECTIONS = 200


@dataclass(frozen=True)
class EstimateResult:
    """Outcome of one descent run.

    Attributes
    ----------
    alpha0:
        The estimated optimistic score.
    outcomes:
        Frontier vertices at ``alpha0`` whose utility ties the level
        score (within the configured tie tolerance).
    utilities:
        Utility of each reported vertex, parallel to ``outcomes``.
    trace:
        Every evaluated (level, frontier score) pair in evaluation
        order, ladder first, then bisection probes. The score is None
        where the frontier was empty.
    refined:
        Whether bisection ran after the ladder.
    """

    alpha0: float
    outcomes: tuple[FrontierPoint, ...]
    utilities: tuple[float, ...]
    trace: tuple[tuple[float, float | None], ...]
    refined: bool

    def to_dict(self) -> dict:
        return {
            "alpha0": self.alpha0,
            "outcomes": [
                {**p.to_dict(), "utility": u}
                for p, u in zip(self.outcomes, self.utilities)
            ],
            "trace": [[a, h] for a, h in self.trace],
            "refined": self.refined,
        }


@dataclass(frozen=True)
class _Instance:
    """Precompiled arrays shared by every level evaluation."""

    outcomes: np.ndarray  # (cases, axes)
    sims: np.ndarray  # (cases,)
    families: tuple
    signs: np.ndarray  # (axes,) = 2 m - 1
    coef: np.ndarray  # (axes,) utility gradient w * (2 m - 1)
    offset: float  # utility constant term sum of w * (1 - m)


def _compile(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    utility: UtilityModel,
) -> _Instance:
    pol = _check_polarities(case_base, polarities)
    if len(utility.weights) != case_base.n_outcome:
        raise ValidationError(
            f"utility has {len(utility.weights)} weights for "
            f"{case_base.n_outcome} outcome attributes"
        )
    weights = np.asarray(utility.weights)
    signs = 2.0 * pol - 1.0
    return _Instance(
        outcomes=np.array([c.outcome for c in case_base.cases]),
        sims=case_similarities(case_base, query),
        families=tuple(a.family for a in case_base.outcome_attrs),
        signs=signs,
        coef=weights * signs,
        offset=float(np.sum(weights * (1.0 - pol))),
    )


def _batch_scores(inst: _Instance, levels: np.ndarray) -> np.ndarray:
    """Frontier score at every level at once; -inf marks empty frontiers.

    Shapes: levels (L,), radii (L, axes), vertices (L, cases, axes),
    utilities (L, cases).
    """
    radii = np.stack(
        [pseudo_inverse_values(fam, levels) for fam in inst.families], axis=1
    )
    vertices = np.clip(
        inst.outcomes[np.newaxis, :, :] + inst.signs * radii[:, np.newaxis, :],
        0.0,
        1.0,
    )
    utilities = vertices @ inst.coef + inst.offset
    active = inst.sims[np.newaxis, :] >= levels[:, np.newaxis]
    return np.where(active, utilities, -np.inf).max(axis=1)


def _score_one(inst: _Instance, alpha: float) -> float | None:
    h = float(_batch_scores(inst, np.array([alpha]))[0])
    return None if h == -np.inf else h


def frontier_score(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    utility: UtilityModel,
    alpha: float,
) -> float | None:
    """Best utility reachable on the frontier of the cut at ``alpha``.

    Returns None when no case clears the level. Levels from the closed
    interval [0, 1] are accepted; 0 is the descent's terminal level.
    """
    if not (0.0 <= alpha <= 1.0):
        raise ValidationError(f"alpha must be in [0, 1], got {alpha}")
    return _score_one(_compile(case_base, query, polarities, utility), alpha)


def _ladder(step: float) -> np.ndarray:
    levels = []
    j = 0
    while True:
        alpha = 1.0 - j * step
        if alpha <= 0.0:
            levels.append(0.0)
            break
        levels.append(alpha)
        j += 1
    return np.array(levels)


def estimate(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    utility: UtilityModel,
    config: EstimatorConfig | None = None,
) -> EstimateResult:
    """Run the descent (plus optional bisection) and collect the result.

    The returned ``alpha0`` always satisfies the stopping predicate
    (frontier score >= level); with refinement enabled it is the passing
    end of a bracket no wider than ``config.refine_tolerance``.
    """
    cfg = config or EstimatorConfig()
    inst = _compile(case_base, query, polarities, utility)

    levels = _ladder(cfg.step)
    scores = _batch_scores(inst, levels)
    passing = scores >= levels  # -inf never passes; level 0 always does
    stop = int(np.argmax(passing))

    trace: list[tuple[float, float | None]] = [
        (float(a), None if h == -np.inf else float(h))
        for a, h in zip(levels[: stop + 1], scores[: stop + 1])
    ]

    alpha0 = float(levels[stop])
    refined = False
    if stop > 0 and cfg.refine_tolerance > 0.0:
        refined = True
        lo, hi = float(levels[stop]), float(levels[stop - 1])
        for _ in range(_MAX_BISECTIONS):
            if hi - lo <= cfg.refine_tolerance:
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:  # bracket exhausted in floats
                break
            h = _score_one(inst, mid)
            trace.append((mid, h))
            if h is not None and h >= mid:
                lo = mid
            else:
                hi = mid
        alpha0 = lo

    radii = np.array([pseudo_inverse(fam, alpha0) for fam in inst.families])
    vertices = np.clip(inst.outcomes + inst.signs * radii, 0.0, 1.0)
    utilities = vertices @ inst.coef + inst.offset
    active = np.flatnonzero(inst.sims >= alpha0)
    best = float(utilities[active].max())
    outcomes = []
    outcome_utilities = []
    for i in active:
        if utilities[i] >= best - cfg.tie_tolerance:
            outcomes.append(
                FrontierPoint(case=int(i), coords=tuple(vertices[i].tolist()))
            )
            outcome_utilities.append(float(utilities[i]))
    return EstimateResult(
        alpha0=alpha0,
        outcomes=tuple(outcomes),
        utilities=tuple(outcome_utilities),
        trace=tuple(trace),
        refined=refined,
    )


def rank_partners(
    partners: Iterable[tuple[str, CaseBase, Query]],
    polarities: Sequence[int],
    utility: UtilityModel,
    config: EstimatorConfig | None = None,
    threads: int = 1,
) -> list[tuple[str, EstimateResult]]:
    """Estimate every partner's optimistic score and sort best first.

    Ties keep the input order (the sort is stable). With ``threads`` > 1
    the independent estimates run on a thread pool; results are
    reassembled in input order before sorting, so the ranking does not
    depend on scheduling.
    """
    items = list(partners)
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    lambda it: estimate(it[1], it[2], polarities, utility, config),
                    items,
                )
            )
    else:
        results = [estimate(cb, q, polarities, utility, config) for _, cb, q in items]
    ranked = [(pid, res) for (pid, _, _), res in zip(items, results)]
    ranked.sort(key=lambda t: -t[1].alpha0)
    return ranked
