"""Stratification, foliation checks, extension tower, index composition."""

import pytest

from orbitkit.liealg import (
    Covector,
    InputError,
    abelian,
    aff1,
    heisenberg,
    poisson_matrix,
    sl2,
)
from orbitkit.strata import (
    SamplerConfig,
    Stratum,
    compose_index,
    extension_tower,
    foliation_check,
    generic_rank,
    stratify,
)

CONFIG = SamplerConfig(seed=0, samples=1000, coordinate_range=3)


def test_heisenberg_strata_dimensions():
    strata = stratify(heisenberg(), CONFIG)
    assert [s.orbit_dimension for s in strata] == [2, 0]
    assert sum(s.sample_count for s in strata) == CONFIG.samples
    # the top stratum is exactly the samples with F_Z != 0
    assert poisson_matrix(heisenberg(), strata[0].witness).rank() == 2


def test_aff1_strata_dimensions():
    strata = stratify(aff1(), CONFIG)
    assert [s.orbit_dimension for s in strata] == [2, 0]


def test_abelian_single_zero_stratum():
    strata = stratify(abelian(3), CONFIG)
    assert [s.orbit_dimension for s in strata] == [0]
    assert strata[0].sample_count == CONFIG.samples


def test_stratify_needs_at_least_one_sample():
    with pytest.raises(InputError):
        stratify(heisenberg(), SamplerConfig(seed=0, samples=0))


def test_every_stratum_dimension_is_even():
    for L in (heisenberg(), aff1(), sl2(), abelian(2)):
        for s in stratify(L, CONFIG):
            assert s.orbit_dimension % 2 == 0
            assert s.higher_minors_vanish


def test_generic_rank_values_and_certificates():
    for L, expected in ((heisenberg(), 2), (aff1(), 2), (sl2(), 2), (abelian(3), 0)):
        report = generic_rank(L, CONFIG)
        assert report["rank"] == expected
        if expected:
            assert report["minor"] is not None
            assert report["minor_value_at_witness"] != "0"


def test_generic_rank_monotone_in_sample_count():
    small = generic_rank(sl2(), SamplerConfig(seed=0, samples=20))
    large = generic_rank(sl2(), SamplerConfig(seed=0, samples=400))
    assert large["rank"] >= small["rank"]


def test_sl2_known_witness_rank():
    assert poisson_matrix(sl2(), Covector.of(0, 1, 1)).rank() == 2


def test_foliation_check_passes_everywhere():
    for L in (heisenberg(), aff1(), sl2(), abelian(2)):
        for s in stratify(L, CONFIG):
            verdict = foliation_check(L, s, CONFIG)
            assert verdict["constant_rank"]
            assert verdict["distribution_is_image"]
            assert verdict["failure"] is None


def test_foliation_check_rejects_empty_stratum():
    ghost = Stratum(
        orbit_dimension=2,
        sample_count=0,
        witness=Covector.of(0, 0, 0),
        minors_used=(),
        higher_minors_vanish=True,
    )
    with pytest.raises(InputError):
        foliation_check(heisenberg(), ghost, CONFIG)


def test_tower_heisenberg_single_stage():
    report = extension_tower(heisenberg(), CONFIG)
    assert len(report.stages) == 1
    assert report.stages[0]["orbit_dimension"] == 2
    assert report.strictly_decreasing
    assert "A_1" in report.to_table()


def test_tower_abelian_is_empty_with_character_note():
    report = extension_tower(abelian(3), CONFIG)
    assert report.stages == ()
    assert "character space" in report.terminal


def test_tower_reports_stage_per_positive_stratum():
    report = extension_tower(sl2(), CONFIG)
    dims = [stage["orbit_dimension"] for stage in report.stages]
    assert dims == sorted(dims, reverse=True)
    assert all(d > 0 for d in dims)


def test_compose_index_products():
    assert compose_index([[1, 0], [0, 1]], [1, 1]) == [1, 1]
    assert compose_index([[1, 1]], [1, -1]) == [0]
    assert compose_index([[0, 0], [0, 0]], [5, 7]) == [0, 0]


def test_compose_index_shape_mismatch():
    with pytest.raises(InputError):
        compose_index([[1, 2, 3]], [1, 2])
