"""Domain types and ingestion for possibilistic case-based decision models.

A decision problem is a case base of historical (situation, outcome)
pairs plus a query situation. Situations and outcomes are tuples of
attribute values in the unit interval. Each attribute carries a strictly
decreasing similarity kernel; each outcome attribute additionally carries
a polarity flag (1 = higher is better, 0 = lower is better), so the
polarity vector doubles as the ideal corner of the outcome hypercube.
Preferences of the deciding side are a weighted-linear utility over the
same hypercube.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

__all__ = [
    "ValidationError",
    "SimilarityFamily",
    "AttributeSpec",
    "Case",
    "CaseBase",
    "Query",
    "UtilityModel",
    "EstimatorConfig",
    "AffineMap",
    "normalize",
    "utility_at",
    "best_point",
    "validate_case_base",
    "validate_query",
    "validate_utility",
]

KERNEL_KINDS = ("linear", "exponential")

_WEIGHT_TOL = 1e-12


class ValidationError(ValueError):
    """An input document or parameter violates a model invariant."""


@dataclass(frozen=True)
class SimilarityFamily:
    """A parametric similarity kernel over distances in [0, 1].

    Attributes
    ----------
    kind:
        "linear" for max(0, 1 - d / scale) or "exponential" for
        exp(-d / scale).
    scale:
        Positive width parameter. Larger scales make the kernel more
        forgiving of distance.
    """

    kind: str
    scale: float

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValidationError(
                f"unknown similarity kind {self.kind!r}, expected one of {KERNEL_KINDS}"
            )
        if not (isinstance(self.scale, (int, float)) and math.isfinite(self.scale)):
            raise ValidationError(f"similarity scale must be finite, got {self.scale!r}")
        if self.scale <= 0:
            raise ValidationError(f"similarity scale must be positive, got {self.scale}")


@dataclass(frozen=True)
class AttributeSpec:
    """One named attribute: its kernel, and for outcomes a polarity.

    ``bounds`` optionally declares the attribute's original value range;
    when present, raw case values are affinely mapped to [0, 1] at
    ingestion and can be mapped back for reporting.
    """

    name: str
    family: SimilarityFamily
    polarity: int = 1
    bounds: tuple[float, float] | None = None

    def __post_init__(self):
        if self.polarity not in (0, 1):
            raise ValidationError(
                f"attribute {self.name!r}: polarity must be 0 or 1, got {self.polarity!r}"
            )
        if self.bounds is not None:
            lo, hi = self.bounds
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValidationError(f"attribute {self.name!r}: bounds must be finite")
            if hi <= lo:
                raise ValidationError(
                    f"attribute {self.name!r}: degenerate attribute range [{lo}, {hi}]"
                )


def _check_unit_vector(values: Sequence[float], what: str) -> tuple[float, ...]:
    out = []
    for j, v in enumerate(values):
        if not (isinstance(v, (int, float)) and math.isfinite(v)):
            raise ValidationError(f"{what}: component {j} is not a finite number: {v!r}")
        if v < 0.0 or v > 1.0:
            raise ValidationError(f"{what}: component {j} = {v} is outside [0, 1]")
        out.append(float(v))
    return tuple(out)


@dataclass(frozen=True)
class Case:
    """One remembered (situation, outcome) pair.

    ``similarity_override`` short-circuits situation matching: when set,
    it is used directly as the case's similarity to any query.
    """

    situation: tuple[float, ...]
    outcome: tuple[float, ...]
    similarity_override: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "situation", tuple(float(v) for v in self.situation))
        object.__setattr__(self, "outcome", tuple(float(v) for v in self.outcome))
        if self.similarity_override is not None:
            s = float(self.similarity_override)
            if not (0.0 <= s <= 1.0):
                raise ValidationError(f"similarity override {s} is outside [0, 1]")
            object.__setattr__(self, "similarity_override", s)


@dataclass(frozen=True)
class CaseBase:
    """The remembered cases together with their attribute declarations."""

    situation_attrs: tuple[AttributeSpec, ...]
    outcome_attrs: tuple[AttributeSpec, ...]
    cases: tuple[Case, ...]

    def __post_init__(self):
        object.__setattr__(self, "situation_attrs", tuple(self.situation_attrs))
        object.__setattr__(self, "outcome_attrs", tuple(self.outcome_attrs))
        object.__setattr__(self, "cases", tuple(self.cases))
        if not self.outcome_attrs:
            raise ValidationError("case base must declare at least one outcome attribute")
        if not self.cases:
            raise ValidationError("case base must be non-empty")
        l, n = len(self.situation_attrs), len(self.outcome_attrs)
        for i, case in enumerate(self.cases):
            if len(case.situation) != l:
                raise ValidationError(
                    f"case {i}: situation length {len(case.situation)} does not match "
                    f"the {l} declared situation attributes"
                )
            if len(case.outcome) != n:
                raise ValidationError(
                    f"case {i}: outcome length {len(case.outcome)} does not match "
                    f"the {n} declared outcome attributes"
                )
            _check_unit_vector(case.situation, f"case {i} situation")
            _check_unit_vector(case.outcome, f"case {i} outcome")

    @property
    def n_outcome(self) -> int:
        return len(self.outcome_attrs)

    @property
    def n_situation(self) -> int:
        return len(self.situation_attrs)

    @property
    def polarity_vector(self) -> tuple[int, ...]:
        return tuple(a.polarity for a in self.outcome_attrs)


@dataclass(frozen=True)
class Query:
    """The situation the decision is being made in."""

    situation: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "situation", _check_unit_vector(self.situation, "query situation")
        )


@dataclass(frozen=True)
class UtilityModel:
    """Weighted-linear preferences over outcome attributes.

    Weights must be strictly positive and sum to one (within 1e-12), so
    the induced utility is strictly increasing in the preference order
    and spans exactly [0, 1] over the outcome hypercube.
    """

    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if not self.weights:
            raise ValidationError("utility model needs at least one weight")
        for k, w in enumerate(self.weights):
            if not math.isfinite(w) or w <= 0.0:
                raise ValidationError(f"weight {k} must be strictly positive, got {w}")
        total = sum(self.weights)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValidationError(f"weights must sum to 1, got {total!r}")


@dataclass(frozen=True)
class EstimatorConfig:
    """Tunable knobs of the descent estimator and the grid baseline.

    step:
        Level decrement of the descent ladder, in (0, 1].
    refine_tolerance:
        Target width of the bisection refinement bracket; 0 disables
        refinement. Must be smaller than ``step``.
    tie_tolerance:
        Slack used when collecting argmax ties.
    grid_resolution:
        Lattice points per axis for grid evaluations, at least 2.
    """

    step: float = 0.01
    refine_tolerance: float = 1e-6
    tie_tolerance: float = 1e-9
    grid_resolution: int = 201

    def __post_init__(self):
        if not (0.0 < self.step <= 1.0):
            raise ValidationError(f"step must be in (0, 1], got {self.step}")
        if self.refine_tolerance < 0.0:
            raise ValidationError(
                f"refine_tolerance must be non-negative, got {self.refine_tolerance}"
            )
        if self.refine_tolerance >= self.step:
            raise ValidationError(
                f"refine_tolerance {self.refine_tolerance} must be smaller than step {self.step}"
            )
        if self.tie_tolerance < 0.0:
            raise ValidationError(
                f"tie_tolerance must be non-negative, got {self.tie_tolerance}"
            )
        if self.grid_resolution < 2:
            raise ValidationError(
                f"grid_resolution must be at least 2, got {self.grid_resolution}"
            )


@dataclass(frozen=True)
class AffineMap:
    """Invertible affine map between an original range and [0, 1]."""

    lo: float
    hi: float

    def to_unit(self, v: float) -> float:
        return (v - self.lo) / (self.hi - self.lo)

    def from_unit(self, t: float) -> float:
        return self.lo + t * (self.hi - self.lo)


def normalize(
    values: Sequence[float], bounds: Sequence[tuple[float, float]]
) -> tuple[tuple[float, ...], tuple[AffineMap, ...]]:
    """Map raw attribute values into [0, 1] given per-attribute ranges.

    Returns the unit-interval values together with the affine maps, so
    results computed in normalized space can be reported back in original
    units.
    """
    if len(values) != len(bounds):
        raise ValidationError(
            f"got {len(values)} values for {len(bounds)} declared ranges"
        )
    maps = []
    unit = []
    for k, (v, (lo, hi)) in enumerate(zip(values, bounds)):
        if hi <= lo:
            raise ValidationError(f"attribute {k}: degenerate attribute range [{lo}, {hi}]")
        if v < lo or v > hi:
            raise ValidationError(
                f"attribute {k}: value {v} is outside declared bounds [{lo}, {hi}]"
            )
        m = AffineMap(float(lo), float(hi))
        maps.append(m)
        unit.append(m.to_unit(float(v)))
    return tuple(unit), tuple(maps)


def best_point(polarities: Sequence[int]) -> tuple[float, ...]:
    """The ideal corner of the outcome hypercube (polarities as floats)."""
    return tuple(float(m) for m in polarities)


def utility_at(
    utility: UtilityModel, polarities: Sequence[int], point: Sequence[float]
) -> float:
    """Evaluate the weighted-linear utility at an outcome point.

    Each attribute contributes ``w_k * y_k`` when higher is better and
    ``w_k * (1 - y_k)`` when lower is better, so the ideal corner scores
    exactly 1 and the opposite corner exactly 0.
    """
    if len(polarities) != len(utility.weights):
        raise ValidationError(
            f"polarity vector length {len(polarities)} does not match "
            f"{len(utility.weights)} weights"
        )
    if len(point) != len(utility.weights):
        raise ValidationError(
            f"point length {len(point)} does not match {len(utility.weights)} weights"
        )
    total = 0.0
    for w, m, y in zip(utility.weights, polarities, point):
        total += w * (y if m else 1.0 - y)
    return total


def _require(doc: Any, key: str, where: str) -> Any:
    if not isinstance(doc, dict):
        raise ValidationError(f"{where}: expected an object, got {type(doc).__name__}")
    if key not in doc:
        raise ValidationError(f"{where}: missing required field {key!r}")
    return doc[key]


def _parse_family(entry: dict, where: str) -> SimilarityFamily:
    kind = _require(entry, "family", where)
    scale = _require(entry, "lambda", where)
    try:
        return SimilarityFamily(kind=kind, scale=scale)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def validate_case_base(doc: Any) -> CaseBase:
    """Parse and validate a case-base document (already-decoded JSON).

    Outcome attributes that declare ``bounds`` have their case values
    normalized into [0, 1] here; everything downstream works in
    normalized space.
    """
    raw_sit = _require(doc, "situation_attributes", "case base")
    raw_out = _require(doc, "outcome_attributes", "case base")
    raw_cases = _require(doc, "cases", "case base")
    if not isinstance(raw_sit, list):
        raise ValidationError("case base: situation_attributes must be a list")
    if not isinstance(raw_out, list) or not raw_out:
        raise ValidationError("case base: outcome_attributes must be a non-empty list")
    if not isinstance(raw_cases, list) or not raw_cases:
        raise ValidationError("case base must be non-empty")

    sit_attrs = []
    for j, entry in enumerate(raw_sit):
        where = f"situation attribute {j}"
        name = _require(entry, "name", where)
        sit_attrs.append(AttributeSpec(name=name, family=_parse_family(entry, where)))

    out_attrs = []
    for k, entry in enumerate(raw_out):
        where = f"outcome attribute {k}"
        name = _require(entry, "name", where)
        polarity = _require(entry, "polarity", where)
        bounds = None
        if "bounds" in entry:
            b = entry["bounds"]
            lo = _require(b, "min", f"{where} bounds")
            hi = _require(b, "max", f"{where} bounds")
            bounds = (float(lo), float(hi))
        try:
            out_attrs.append(
                AttributeSpec(
                    name=name,
                    family=_parse_family(entry, where),
                    polarity=polarity,
                    bounds=bounds,
                )
            )
        except ValidationError as exc:
            raise ValidationError(f"{where}: {exc}") from None

    n = len(out_attrs)
    bounded = [a.bounds for a in out_attrs]
    cases = []
    for i, entry in enumerate(raw_cases):
        where = f"case {i}"
        situation = _require(entry, "situation", where)
        outcome = _require(entry, "outcome", where)
        if not isinstance(outcome, list) or len(outcome) != n:
            got = len(outcome) if isinstance(outcome, list) else outcome
            raise ValidationError(
                f"case {i}: outcome length {got} does not match the {n} declared "
                f"outcome attributes"
            )
        mapped = []
        for k, v in enumerate(outcome):
            if bounded[k] is not None:
                lo, hi = bounded[k]
                if v < lo or v > hi:
                    raise ValidationError(
                        f"case {i}: outcome attribute {out_attrs[k].name!r} value {v} "
                        f"is outside declared bounds [{lo}, {hi}]"
                    )
                mapped.append(AffineMap(lo, hi).to_unit(float(v)))
            else:
                mapped.append(v)
        try:
            cases.append(
                Case(
                    situation=tuple(situation),
                    outcome=tuple(mapped),
                    similarity_override=entry.get("similarity"),
                )
            )
        except (ValidationError, TypeError) as exc:
            raise ValidationError(f"case {i}: {exc}") from None

    return CaseBase(
        situation_attrs=tuple(sit_attrs),
        outcome_attrs=tuple(out_attrs),
        cases=tuple(cases),
    )


def validate_query(doc: Any, case_base: CaseBase) -> Query:
    """Parse the current situation and check it against the case base."""
    raw = _require(doc, "current_situation", "query")
    if not isinstance(raw, list):
        raise ValidationError("query: current_situation must be a list")
    if len(raw) != case_base.n_situation:
        raise ValidationError(
            f"query: current_situation length {len(raw)} does not match the "
            f"{case_base.n_situation} declared situation attributes"
        )
    try:
        return Query(situation=tuple(raw))
    except ValidationError as exc:
        raise ValidationError(f"query: {exc}") from None


def validate_utility(doc: Any, n_outcome: int) -> UtilityModel:
    """Parse a utility document and check its arity."""
    raw = _require(doc, "weights", "utility")
    if not isinstance(raw, list):
        raise ValidationError("utility: weights must be a list")
    if len(raw) != n_outcome:
        raise ValidationError(
            f"utility: got {len(raw)} weights for {n_outcome} outcome attributes"
        )
    try:
        return UtilityModel(weights=tuple(raw))
    except ValidationError as exc:
        raise ValidationError(f"utility: {exc}") from None
