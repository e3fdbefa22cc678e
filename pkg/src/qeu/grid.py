"""Exhaustive lattice baseline for the possibility machinery.

Everything here evaluates fields point by point over the regular lattice
{0, 1/(G-1), ..., 1}^n, deliberately paying the full cost of G**n points
so the descent estimator has an independent reference to be checked
against. The per-point work is a max over cases of a min over axes;
since every axis only takes G distinct values, the kernel values are
precomputed into per-case, per-axis tables and the inner loop is a pure
table gather, compiled with numba. Multi-threading splits the flat index
range into contiguous chunks (the nogil kernel releases the GIL), which
keeps results bitwise identical regardless of thread count.
"""

from __future__ import annotations

import functools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TextIO

import numpy as np

from .model import CaseBase, Query, UtilityModel, ValidationError
from .possibility import _check_polarities
from .similarity import case_similarities, kernel_values

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetError",
    "GridField",
    "grid_density",
    "grid_distribution",
    "grid_utility",
    "cone_sup_transform",
    "qu_optimistic",
    "qu_pessimistic",
    "argmax_sets",
    "ClassicalEstimate",
    "classical_estimate",
]

DEFAULT_BUDGET = 10**8

_TIE_EPS = 1e-12

_kernel_cache: Callable | None = None


class BudgetError(RuntimeError):
    """Requested lattice exceeds the point budget."""

    def __init__(self, points: int, budget: int):
        self.points = points
        self.budget = budget
        super().__init__(
            f"lattice would need {points} points, which exceeds the budget of {budget}"
        )


@dataclass(frozen=True)
class GridField:
    """A scalar field sampled on the flat row-major unit lattice."""

    resolution: int
    n_axes: int
    values: np.ndarray

    def __post_init__(self):
        expected = self.resolution**self.n_axes
        if self.values.shape != (expected,):
            raise ValidationError(
                f"field has {self.values.shape} values, expected ({expected},)"
            )

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.resolution,) * self.n_axes

    def axis_coords(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.resolution)

    def point(self, flat_index: int) -> tuple[float, ...]:
        """Lattice coordinates of one flat row-major index."""
        idx = np.unravel_index(flat_index, self.shape)
        coords = self.axis_coords()
        return tuple(float(coords[i]) for i in idx)

    def to_csv(self, fp: TextIO) -> None:
        """Write one row per lattice point: index coordinates, then value."""
        header = ",".join(f"idx{k}" for k in range(self.n_axes)) + ",value"
        fp.write(header + "\n")
        indices = np.stack(
            np.unravel_index(np.arange(self.values.size), self.shape), axis=1
        )
        for row, v in zip(indices, self.values):
            fp.write(",".join(str(int(i)) for i in row) + f",{float(v)!r}\n")


def _lattice_kernel() -> Callable:
    """Compile (once) the table-gather max-min evaluator."""
    global _kernel_cache
    if _kernel_cache is None:
        from numba import njit

        @njit(cache=True, nogil=True)
        def eval_chunk(tables, sims, out, start, stop):
            n_cases, n_axes, res = tables.shape
            idx = np.zeros(n_axes, np.int64)
            rem = start
            for k in range(n_axes - 1, -1, -1):
                idx[k] = rem % res
                rem //= res
            for p in range(start, stop):
                best = 0.0
                for i in range(n_cases):
                    m = sims[i]
                    for k in range(n_axes):
                        v = tables[i, k, idx[k]]
                        if v < m:
                            m = v
                    if m > best:
                        best = m
                out[p] = best
                for k in range(n_axes - 1, -1, -1):
                    idx[k] += 1
                    if idx[k] < res:
                        break
                    idx[k] = 0

        _kernel_cache = eval_chunk
    return _kernel_cache


def _check_resolution(resolution: int) -> int:
    if resolution < 2:
        raise ValidationError(f"resolution must be at least 2, got {resolution}")
    return int(resolution)


def _check_budget(resolution: int, n_axes: int, budget: int) -> int:
    points = resolution**n_axes
    if points > budget:
        raise BudgetError(points, budget)
    return points


def _axis_tables(case_base: CaseBase, signs: np.ndarray | None, resolution: int) -> np.ndarray:
    """Per-case, per-axis kernel value tables of shape (cases, axes, G).

    With ``signs`` None the tables hold kernel(|c - o|) for the density;
    otherwise kernel(max(0, sign * (c - o))) for the distribution.
    """
    coords = np.linspace(0.0, 1.0, resolution)
    outcomes = np.array([c.outcome for c in case_base.cases])
    tables = np.empty((len(case_base.cases), case_base.n_outcome, resolution))
    for k, attr in enumerate(case_base.outcome_attrs):
        delta = coords[np.newaxis, :] - outcomes[:, k][:, np.newaxis]
        if signs is None:
            d = np.abs(delta)
        else:
            d = np.maximum(0.0, signs[k] * delta)
        tables[:, k, :] = kernel_values(attr.family, d)
    return tables


def _eval_field(tables: np.ndarray, sims: np.ndarray, threads: int) -> np.ndarray:
    n_cases, n_axes, resolution = tables.shape
    points = resolution**n_axes
    out = np.empty(points)
    kernel = _lattice_kernel()
    if threads <= 1 or points < 1024:
        kernel(tables, sims, out, 0, points)
        return out
    bounds = np.linspace(0, points, threads + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(kernel, tables, sims, out, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        for f in futures:
            f.result()
    return out


def grid_density(
    case_base: CaseBase,
    query: Query,
    resolution: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> GridField:
    """Sample the possibility density on the lattice."""
    resolution = _check_resolution(resolution)
    _check_budget(resolution, case_base.n_outcome, budget)
    sims = case_similarities(case_base, query)
    tables = _axis_tables(case_base, None, resolution)
    return GridField(
        resolution=resolution,
        n_axes=case_base.n_outcome,
        values=_eval_field(tables, sims, threads),
    )


def grid_distribution(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    resolution: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> GridField:
    """Sample the possibility distribution (monotone envelope) directly."""
    resolution = _check_resolution(resolution)
    _check_budget(resolution, case_base.n_outcome, budget)
    signs = 2.0 * _check_polarities(case_base, polarities) - 1.0
    sims = case_similarities(case_base, query)
    tables = _axis_tables(case_base, signs, resolution)
    return GridField(
        resolution=resolution,
        n_axes=case_base.n_outcome,
        values=_eval_field(tables, sims, threads),
    )


def grid_utility(
    utility: UtilityModel, polarities: Sequence[int], resolution: int
) -> GridField:
    """Sample the weighted-linear utility on the lattice.

    The utility is separable, so the field is built by broadcasting one
    per-axis contribution at a time; no budget applies beyond memory.
    """
    resolution = _check_resolution(resolution)
    n = len(utility.weights)
    if len(polarities) != n:
        raise ValidationError(
            f"polarity vector length {len(polarities)} does not match {n} weights"
        )
    coords = np.linspace(0.0, 1.0, resolution)
    contribs = [
        w * (coords if m else 1.0 - coords)
        for w, m in zip(utility.weights, polarities)
    ]
    # Telescoping outer sums: cheaper than n full-lattice passes.
    values = functools.reduce(np.add.outer, contribs)
    return GridField(resolution=resolution, n_axes=n, values=values.reshape(-1))


def cone_sup_transform(field: GridField, polarities: Sequence[int]) -> GridField:
    """Running max of a field over each point's preferred cone.

    Sweeping a directional cumulative maximum along one axis at a time
    computes, for every lattice point, the supremum of the field over
    all lattice points preferred to it. Applied to a sampled density
    this is the lattice version of the monotone envelope, which the
    directly-sampled distribution must match up to kernel resolution
    error.
    """
    if len(polarities) != field.n_axes:
        raise ValidationError(
            f"polarity vector length {len(polarities)} does not match "
            f"{field.n_axes} field axes"
        )
    values = field.values.reshape(field.shape).copy()
    for k, m in enumerate(polarities):
        if m:
            values = np.flip(
                np.maximum.accumulate(np.flip(values, axis=k), axis=k), axis=k
            )
        else:
            values = np.maximum.accumulate(values, axis=k)
    return GridField(
        resolution=field.resolution, n_axes=field.n_axes, values=values.reshape(-1)
    )


def _check_same_lattice(a: GridField, b: GridField) -> None:
    if a.resolution != b.resolution or a.n_axes != b.n_axes:
        raise ValidationError(
            f"fields live on different lattices: {a.n_axes} axes at G={a.resolution} "
            f"vs {b.n_axes} axes at G={b.resolution}"
        )


def qu_optimistic(
    distribution: GridField, utility_field: GridField
) -> tuple[float, np.ndarray]:
    """Max over the lattice of min(distribution, utility).

    Returns the value and the flat indices attaining it within 1e-12.
    """
    _check_same_lattice(distribution, utility_field)
    agg = np.minimum(distribution.values, utility_field.values)
    value = float(agg.max())
    return value, np.flatnonzero(agg >= value - _TIE_EPS)


def qu_pessimistic(
    distribution: GridField,
    utility_field: GridField,
    negate_possibility: bool = False,
) -> float:
    """Min over the lattice of max(distribution, utility).

    With ``negate_possibility`` the distribution enters as 1 - pi, the
    guardedness reading under which a fully plausible bad outcome drags
    the score down.
    """
    _check_same_lattice(distribution, utility_field)
    pi = 1.0 - distribution.values if negate_possibility else distribution.values
    return float(np.maximum(pi, utility_field.values).min())


def argmax_sets(
    distribution: GridField, utility_field: GridField
) -> tuple[np.ndarray, np.ndarray]:
    """Optimal lattice outcomes of the optimistic aggregation.

    Returns (P, O): P holds the coordinates of every lattice point
    attaining the optimistic value within 1e-12, O the subset of P with
    maximal utility (again within 1e-12). Both are (k, n) arrays.
    """
    _check_same_lattice(distribution, utility_field)
    agg = np.minimum(distribution.values, utility_field.values)
    value = agg.max()
    p_idx = np.flatnonzero(agg >= value - _TIE_EPS)
    u_best = utility_field.values[p_idx].max()
    o_idx = p_idx[utility_field.values[p_idx] >= u_best - _TIE_EPS]
    coords = distribution.axis_coords()
    shape = distribution.shape

    def _points(flat: np.ndarray) -> np.ndarray:
        multi = np.stack(np.unravel_index(flat, shape), axis=1)
        return coords[multi]

    return _points(p_idx), _points(o_idx)


@dataclass(frozen=True)
class ClassicalEstimate:
    """Grid-only estimate with its phase timings (seconds)."""

    alpha0: float
    outcomes: np.ndarray
    distribution_seconds: float
    aggregation_seconds: float


def classical_estimate(
    case_base: CaseBase,
    query: Query,
    polarities: Sequence[int],
    utility: UtilityModel,
    resolution: int,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> ClassicalEstimate:
    """Estimate the optimistic score by exhaustive lattice evaluation.

    Phase one samples the distribution field; phase two builds the
    utility field, aggregates, and extracts the argmax outcomes. Wall
    times of the two phases are reported separately.
    """
    t0 = time.perf_counter()
    pi = grid_distribution(case_base, query, polarities, resolution, budget, threads)
    t1 = time.perf_counter()
    u = grid_utility(utility, polarities, resolution)
    agg = np.minimum(pi.values, u.values)
    value = float(agg.max())
    p_idx = np.flatnonzero(agg >= value - _TIE_EPS)
    u_best = u.values[p_idx].max()
    o_idx = p_idx[u.values[p_idx] >= u_best - _TIE_EPS]
    coords = pi.axis_coords()
    o_points = coords[np.stack(np.unravel_index(o_idx, pi.shape), axis=1)]
    t2 = time.perf_counter()
    return ClassicalEstimate(
        alpha0=value,
        outcomes=o_points,
        distribution_seconds=t1 - t0,
        aggregation_seconds=t2 - t1,
    )
