"""Shared fixtures: canonical decision problems and acceptance reporting."""

import time
from pathlib import Path

import numpy as np
import pytest

from qeu import (
    AttributeSpec,
    Case,
    CaseBase,
    EstimatorConfig,
    Query,
    SimilarityFamily,
    UtilityModel,
    estimate,
    grid_distribution,
    grid_utility,
    qu_optimistic,
    random_instance,
)

DATA = Path(__file__).parent / "data"

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion, then assert."""

    def record(label: str, passed: bool, detail: str = ""):
        _ACCEPTANCE.append((label, bool(passed), detail))
        assert passed, f"{label}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, passed, detail in _ACCEPTANCE:
        status = "PASS" if passed else "FAIL"
        line = f"{status}  {label}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


def _linear(scale: float) -> SimilarityFamily:
    return SimilarityFamily("linear", scale)


@pytest.fixture(scope="session")
def fixture_a():
    """One perfectly matching case at 0.5, one higher-is-better axis."""
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("quality", _linear(0.5), polarity=1),),
        cases=(Case(situation=(), outcome=(0.5,), similarity_override=1.0),),
    )
    return cb, Query(()), (1,), UtilityModel((1.0,))


@pytest.fixture(scope="session")
def fixture_b():
    """Two cases, mixed polarities, the second only 0.8 similar."""
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(
            AttributeSpec("throughput", _linear(0.5), polarity=1),
            AttributeSpec("defect_rate", _linear(0.5), polarity=0),
        ),
        cases=(
            Case(situation=(), outcome=(0.6, 0.4), similarity_override=1.0),
            Case(situation=(), outcome=(0.8, 0.7), similarity_override=0.8),
        ),
    )
    return cb, Query(()), (1, 0), UtilityModel((0.5, 0.5))


@pytest.fixture(scope="session")
def fixture_s_cap():
    """Ideal outcome but the only case is just 0.5 similar."""
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("quality", _linear(0.5), polarity=1),),
        cases=(Case(situation=(), outcome=(1.0,), similarity_override=0.5),),
    )
    return cb, Query(()), (1,), UtilityModel((1.0,))


SWEEP_SEED = 777
SWEEP_SIZE = 100


@pytest.fixture(scope="session")
def sweep_results():
    """100 random instances compared against the exhaustive lattice.

    Dimensions cycle through 1, 2, 3 with the lattice resolution the
    descent is checked against (201 points per axis up to two
    dimensions, 101 at three). Shared by the oracle-agreement and
    descent-trace criteria.
    """
    entries = []
    t0 = time.perf_counter()
    for i in range(SWEEP_SIZE):
        n = 1 + i % 3
        rng = np.random.default_rng([SWEEP_SEED, i])
        n_cases = int(rng.integers(1, 9))
        case_base, query, polarities, utility = random_instance(
            rng, n, n_cases, lambda_range=(0.2, 1.0)
        )
        resolution = 201 if n <= 2 else 101
        cfg = EstimatorConfig()
        fast = estimate(case_base, query, polarities, utility, cfg)
        pi = grid_distribution(case_base, query, polarities, resolution)
        u = grid_utility(utility, polarities, resolution)
        grid_value, _ = qu_optimistic(pi, u)
        spacing = 1.0 / (resolution - 1)
        scale_min = min(a.family.scale for a in case_base.outcome_attrs)
        entries.append(
            {
                "n": n,
                "case_base": case_base,
                "query": query,
                "polarities": polarities,
                "utility": utility,
                "fast": fast,
                "grid_value": grid_value,
                "tolerance": cfg.step + n * spacing / scale_min,
                "config": cfg,
            }
        )
    elapsed = time.perf_counter() - t0
    return {"entries": entries, "elapsed": elapsed}
