"""Density and distribution pointwise values, cut geometry, frontiers."""

import json

import pytest

from qeu import (
    AttributeSpec,
    Case,
    CaseBase,
    CutGeometry,
    Hypercuboid,
    Query,
    SimilarityFamily,
    ValidationError,
    density_alpha_cut,
    density_at,
    distribution_alpha_cut,
    distribution_at,
    frontier,
)

LIN = SimilarityFamily("linear", 0.5)


def test_density_values_fixture_a(fixture_a):
    cb, q, _, _ = fixture_a
    assert density_at(cb, q, (0.5,)) == 1.0
    assert density_at(cb, q, (0.6,)) == pytest.approx(0.8)
    assert density_at(cb, q, (1.0,)) == 0.0


def test_density_is_capped_by_situation_similarity():
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("y", LIN),),
        cases=(Case((), (0.5,), similarity_override=0.7),),
    )
    assert density_at(cb, Query(()), (0.5,)) == 0.7


def test_distribution_values_fixture_a(fixture_a):
    cb, q, pol, _ = fixture_a
    assert distribution_at(cb, q, pol, (0.3,)) == 1.0
    assert distribution_at(cb, q, pol, (0.75,)) == pytest.approx(0.5)


def test_distribution_values_fixture_b(fixture_b):
    cb, q, pol, _ = fixture_b
    # Case 1 dominates: shortfalls (0.2, 0) -> min(1, 0.6, 0.8) = 0.6;
    # case 2 gives min(0.8, 1, 0.2) = 0.2.
    assert distribution_at(cb, q, pol, (0.8, 0.3)) == pytest.approx(0.6)
    # Anything case 1's outcome dominates is fully possible.
    assert distribution_at(cb, q, pol, (0.6, 0.4)) == pytest.approx(1.0)
    assert distribution_at(cb, q, pol, (0.2, 0.9)) == pytest.approx(1.0)
    # The best corner itself is far from both outcomes.
    assert distribution_at(cb, q, pol, (1.0, 0.0)) == pytest.approx(0.2)


def test_distribution_dominates_density(fixture_b):
    cb, q, pol, _ = fixture_b
    for y in [(0.1, 0.9), (0.5, 0.5), (0.6, 0.4), (0.9, 0.1)]:
        assert distribution_at(cb, q, pol, y) >= density_at(cb, q, y) - 1e-12


def test_pointwise_dimension_checks(fixture_b):
    cb, q, pol, _ = fixture_b
    with pytest.raises(ValidationError, match="outcome point length"):
        density_at(cb, q, (0.5,))
    with pytest.raises(ValidationError, match="polarity vector length"):
        distribution_at(cb, q, (1,), (0.5, 0.5))
    with pytest.raises(ValidationError, match="0 or 1"):
        distribution_at(cb, q, (1, 2), (0.5, 0.5))


def test_density_cut_fixture_a(fixture_a):
    cb, q, _, _ = fixture_a
    cut = density_alpha_cut(cb, q, 0.5)
    assert cut.kind == "density"
    assert cut.level == 0.5
    assert len(cut.cuboids) == 1
    assert cut.cuboids[0].intervals == ((0.25, 0.75),)
    exact = density_alpha_cut(cb, q, 1.0)
    assert exact.cuboids[0].intervals == ((0.5, 0.5),)


def test_density_cut_excludes_dissimilar_cases():
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("y", LIN),),
        cases=(Case((), (0.5,), similarity_override=0.4),),
    )
    cut = density_alpha_cut(cb, Query(()), 0.5)
    assert cut.cuboids == ()


@pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5])
def test_cut_level_range_enforced(fixture_a, alpha):
    cb, q, pol, _ = fixture_a
    with pytest.raises(ValidationError, match="alpha"):
        density_alpha_cut(cb, q, alpha)
    with pytest.raises(ValidationError, match="alpha"):
        distribution_alpha_cut(cb, q, pol, alpha)
    with pytest.raises(ValidationError, match="alpha"):
        frontier(cb, q, pol, alpha)


def test_distribution_cut_extends_to_the_worst_side(fixture_a):
    cb, q, pol, _ = fixture_a
    cut = distribution_alpha_cut(cb, q, pol, 0.5)
    assert cut.kind == "distribution"
    assert cut.cuboids[0].intervals == ((0.0, 0.75),)


def test_distribution_cut_fixture_b_orientation(fixture_b):
    cb, q, pol, _ = fixture_b
    cut = distribution_alpha_cut(cb, q, pol, 0.8)
    assert len(cut.cuboids) == 2  # the 0.8-similar case is still in
    assert cut.cuboids[0].intervals == (
        (0.0, pytest.approx(0.7)),
        (pytest.approx(0.3), 1.0),
    )
    assert cut.cuboids[1].intervals == (
        (0.0, pytest.approx(0.9)),
        (pytest.approx(0.6), 1.0),
    )

    higher = distribution_alpha_cut(cb, q, pol, 0.9)
    assert [c.case for c in higher.cuboids] == [0]
    assert higher.cuboids[0].intervals == (
        (0.0, pytest.approx(0.65)),
        (pytest.approx(0.35), 1.0),
    )


def test_frontier_fixture_a(fixture_a):
    cb, q, pol, _ = fixture_a
    assert [p.coords for p in frontier(cb, q, pol, 0.5)] == [(0.75,)]
    assert [p.coords for p in frontier(cb, q, pol, 1.0)] == [(0.5,)]


def test_frontier_fixture_b(fixture_b):
    cb, q, pol, _ = fixture_b
    points = frontier(cb, q, pol, 0.8)
    assert [p.case for p in points] == [0, 1]
    assert points[0].coords == (pytest.approx(0.7), pytest.approx(0.3))
    assert points[1].coords == (pytest.approx(0.9), pytest.approx(0.6))


def test_frontier_keeps_duplicate_vertices():
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("y", LIN),),
        cases=(Case((), (0.5,), 1.0), Case((), (0.5,), 1.0)),
    )
    points = frontier(cb, Query(()), (1,), 0.5)
    assert len(points) == 2
    assert points[0].coords == points[1].coords


def test_frontier_clamps_to_the_unit_cube():
    cb = CaseBase(
        situation_attrs=(),
        outcome_attrs=(AttributeSpec("y", LIN),),
        cases=(Case((), (0.9,), 1.0),),
    )
    points = frontier(cb, Query(()), (1,), 0.5)
    assert points[0].coords == (1.0,)  # 0.9 + 0.25 clamped


def test_cuboid_contains_with_slack():
    box = Hypercuboid(case=0, intervals=((0.2, 0.4), (0.5, 0.9)))
    assert box.contains((0.3, 0.7))
    assert not box.contains((0.41, 0.7))
    assert box.contains((0.41, 0.7), slack=0.02)
    with pytest.raises(ValidationError, match="point length"):
        box.contains((0.3,))


def test_cut_geometry_contains_is_union(fixture_b):
    cb, q, pol, _ = fixture_b
    cut = distribution_alpha_cut(cb, q, pol, 0.8)
    assert cut.contains((0.85, 0.65))  # only inside the second case's box
    assert cut.contains((0.1, 0.35))  # only inside the first
    assert not cut.contains((0.85, 0.35))


def test_geometry_serializes_to_plain_json(fixture_b):
    cb, q, pol, _ = fixture_b
    cut = distribution_alpha_cut(cb, q, pol, 0.8)
    doc = json.loads(json.dumps(cut.to_dict()))
    assert doc["kind"] == "distribution"
    assert doc["cuboids"][0]["case"] == 0
    points = frontier(cb, q, pol, 0.8)
    json.dumps([p.to_dict() for p in points])


def test_cut_membership_matches_pointwise_values(fixture_b):
    cb, q, pol, _ = fixture_b
    for alpha in (0.25, 0.5, 0.75, 0.95):
        dcut = density_alpha_cut(cb, q, alpha)
        pcut = distribution_alpha_cut(cb, q, pol, alpha)
        for y in [(x / 10, z / 10) for x in range(0, 11, 2) for z in range(0, 11, 2)]:
            assert (density_at(cb, q, y) >= alpha) == dcut.contains(y, slack=1e-12)
            assert (distribution_at(cb, q, pol, y) >= alpha) == pcut.contains(
                y, slack=1e-12
            )
