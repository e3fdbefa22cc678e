"""Benchmark harness: exhaustive lattice cost versus the descent estimator.

The point of the comparison is the growth law, not absolute speed: the
lattice pays G**n points per evaluation while the descent pays a fixed
ladder of frontier scorings, so adding an outcome attribute multiplies
the classical cost by roughly G and leaves the estimator essentially
flat. Instances are generated from a seed so a report can be reproduced
exactly.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence, TextIO

import numpy as np

from .estimator import estimate
from .grid import DEFAULT_BUDGET, classical_estimate
from .model import (
    AttributeSpec,
    Case,
    CaseBase,
    EstimatorConfig,
    Query,
    SimilarityFamily,
    UtilityModel,
    ValidationError,
)

__all__ = ["BenchRow", "BenchReport", "random_instance", "run_bench", "report_to_csv"]

CSV_HEADER = "att,cases,grid,distr_s,calcul_s,sum_s,estim_s,ratio"


@dataclass(frozen=True)
class BenchRow:
    attributes: int
    cases: int
    resolution: int
    distribution_seconds: float
    aggregation_seconds: float
    classical_seconds: float
    estimator_seconds: float
    ratio: float


@dataclass(frozen=True)
class BenchReport:
    seed: int
    repetitions: int
    rows: tuple[BenchRow, ...]


def random_instance(
    rng: np.random.Generator,
    n_attrs: int,
    n_cases: int,
    lambda_range: tuple[float, float] = (0.2, 1.0),
    kinds: Sequence[str] = ("linear", "exponential"),
    use_overrides: bool | None = None,
) -> tuple[CaseBase, Query, tuple[int, ...], UtilityModel]:
    """Draw a reproducible random decision problem.

    Outcome attributes get independent kernels with scales from
    ``lambda_range``, random polarities, and uniform random case
    outcomes. Situation matching is either exercised for real (one
    situation attribute, random values) or bypassed with per-case
    similarity overrides; ``use_overrides`` None flips a coin.
    """
    lo, hi = lambda_range
    if use_overrides is None:
        use_overrides = bool(rng.integers(2))

    def fam() -> SimilarityFamily:
        return SimilarityFamily(
            kind=str(rng.choice(list(kinds))), scale=float(rng.uniform(lo, hi))
        )

    out_attrs = tuple(
        AttributeSpec(name=f"y{k}", family=fam(), polarity=int(rng.integers(2)))
        for k in range(n_attrs)
    )
    if use_overrides:
        sit_attrs: tuple[AttributeSpec, ...] = ()
        cases = tuple(
            Case(
                situation=(),
                outcome=tuple(rng.uniform(0.0, 1.0, n_attrs).tolist()),
                similarity_override=float(rng.uniform(0.2, 1.0)),
            )
            for _ in range(n_cases)
        )
        query = Query(situation=())
    else:
        sit_attrs = (AttributeSpec(name="s0", family=fam()),)
        cases = tuple(
            Case(
                situation=(float(rng.uniform(0.0, 1.0)),),
                outcome=tuple(rng.uniform(0.0, 1.0, n_attrs).tolist()),
            )
            for _ in range(n_cases)
        )
        query = Query(situation=(float(rng.uniform(0.0, 1.0)),))

    weights = rng.uniform(0.1, 1.0, n_attrs)
    weights = weights / weights.sum()
    # Renormalized floats can drift off exactly 1 by an ulp; nudge the last one.
    weights[-1] += 1.0 - weights.sum()
    case_base = CaseBase(
        situation_attrs=sit_attrs, outcome_attrs=out_attrs, cases=cases
    )
    polarities = tuple(a.polarity for a in out_attrs)
    return case_base, query, polarities, UtilityModel(weights=tuple(weights.tolist()))


def _timed(fn: Callable[[], object], min_seconds: float) -> tuple[float, int]:
    """Per-call seconds of ``fn``, inner-looped up to ``min_seconds``."""
    calls = 0
    t0 = time.perf_counter()
    while True:
        fn()
        calls += 1
        elapsed = time.perf_counter() - t0
        if elapsed >= min_seconds or calls >= 1000:
            return elapsed / calls, calls


def run_bench(
    attribute_counts: Sequence[int],
    n_cases: int = 30,
    resolution: int = 21,
    seed: int = 42,
    repetitions: int = 3,
    threads: int = 1,
    min_measure_seconds: float = 0.05,
    budget: int = DEFAULT_BUDGET,
) -> BenchReport:
    """Time the classical lattice route against the descent estimator.

    One random instance is drawn per attribute count (deterministically
    from ``seed``), both routes are checked to agree on it before any
    timing, and each measurement is the median of ``repetitions``
    inner-looped timings. Classical phase times are the kernel-reported
    phase splits averaged over the inner loop.
    """
    if resolution < 2:
        raise ValidationError(f"resolution must be at least 2, got {resolution}")
    cfg = EstimatorConfig()
    rows = []
    for n_attrs in attribute_counts:
        rng = np.random.default_rng([seed, n_attrs])
        case_base, query, polarities, utility = random_instance(
            rng,
            n_attrs,
            n_cases,
            lambda_range=(0.5, 1.0),
            kinds=("linear",),
            use_overrides=True,
        )

        classical = classical_estimate(
            case_base, query, polarities, utility, resolution, budget, threads
        )
        fast = estimate(case_base, query, polarities, utility, cfg)
        spacing = 1.0 / (resolution - 1)
        scales = [a.family.scale for a in case_base.outcome_attrs]
        tol = cfg.step + n_attrs * spacing / min(scales)
        if abs(classical.alpha0 - fast.alpha0) > tol:
            raise RuntimeError(
                f"routes disagree at {n_attrs} attributes: "
                f"classical {classical.alpha0} vs estimator {fast.alpha0}"
            )

        phase = {"distr": 0.0, "calcul": 0.0}

        def run_classical():
            est = classical_estimate(
                case_base, query, polarities, utility, resolution, budget, threads
            )
            phase["distr"] += est.distribution_seconds
            phase["calcul"] += est.aggregation_seconds

        def run_fast():
            estimate(case_base, query, polarities, utility, cfg)

        classical_samples = []
        phase_samples = []
        for _ in range(repetitions):
            phase["distr"] = phase["calcul"] = 0.0
            per_call, calls = _timed(run_classical, min_measure_seconds)
            classical_samples.append(per_call)
            phase_samples.append((phase["distr"] / calls, phase["calcul"] / calls))
        fast_samples = [
            _timed(run_fast, min_measure_seconds)[0] for _ in range(repetitions)
        ]

        order = np.argsort(classical_samples)
        mid = order[len(order) // 2]
        distr_s, calcul_s = phase_samples[mid]
        sum_s = distr_s + calcul_s
        estim_s = statistics.median(fast_samples)
        rows.append(
            BenchRow(
                attributes=n_attrs,
                cases=n_cases,
                resolution=resolution,
                distribution_seconds=distr_s,
                aggregation_seconds=calcul_s,
                classical_seconds=sum_s,
                estimator_seconds=estim_s,
                ratio=sum_s / estim_s,
            )
        )
    return BenchReport(seed=seed, repetitions=repetitions, rows=tuple(rows))


def report_to_csv(report: BenchReport, fp: TextIO) -> None:
    fp.write(CSV_HEADER + "\n")
    for r in report.rows:
        fp.write(
            f"{r.attributes},{r.cases},{r.resolution},"
            f"{r.distribution_seconds:.9f},{r.aggregation_seconds:.9f},"
            f"{r.classical_seconds:.9f},{r.estimator_seconds:.9f},{r.ratio:.3f}\n"
        )
