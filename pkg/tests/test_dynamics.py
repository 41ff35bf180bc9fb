import cmath
import math
from fractions import Fraction

import pytest

from algebra.polynomial import Polynomial
from dynamics.cycles import classify_multiplier, find_cycle, rotation_number_at
from dynamics.orbits import (all_critical_orbits_bounded, classify_critical_orbits, escape_radius_bound, orbit,
                             postcritically_finite)
from errors import CollapsedToLowerPeriod, NeedsRays
from experiments.base_experiment import load_map

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def quadratic(c):
    return Polynomial([c, 0.0, 1.0])


def test_escape_radius_bound():
    assert escape_radius_bound(quadratic(-1.0)) == 2.0
    assert escape_radius_bound(Polynomial([5.0, 0.0, 1.0])) == 6.0
    assert escape_radius_bound(Polynomial([1.0, 0.0, 0.5])) == 4.0


def test_orbit_stops_at_escape():
    record = orbit(quadratic(1.0), 0.0, 10)
    assert record.escaped
    assert record.escape_index == 3
    assert record.points == [0, 1, 2, 5]


def test_orbit_rejects_small_radius():
    with pytest.raises(ValueError):
        orbit(quadratic(1.0), 0.0, 10, escape_radius=1.5)


def test_basilica_two_cycle():
    cycle = find_cycle(quadratic(-1.0), 2, 0.1)
    assert cycle.period == 2
    assert sorted(round(z.real, 9) for z in cycle.points) == [-1.0, 0.0]
    assert cycle.kind == "superattracting"
    assert cycle.residual(quadratic(-1.0)) < 1e-9


def test_fixed_point_seed_collapses():
    # the seed is attracted by the beta fixed point
    with pytest.raises(CollapsedToLowerPeriod) as info:
        find_cycle(quadratic(-1.0), 2, 1.6)
    assert info.value.divisor == 1


@pytest.mark.parametrize("multiplier, kind", [
    (0.0, "superattracting"),
    (0.5j, "attracting"),
    (2.0, "repelling"),
    (-1.0, "rationally-indifferent"),
    (cmath.exp(2j * math.pi / 3), "rationally-indifferent"),
    (cmath.exp(2j * math.pi * GOLDEN), "irrationally-indifferent"),
])
def test_classify_multiplier(multiplier, kind):
    assert classify_multiplier(multiplier) == kind


def _alpha(c):
    return (1 - cmath.sqrt(1 - 4 * c)) / 2


def test_rotation_number_from_rays(presets):
    f = load_map("rabbit", presets)
    alpha = _alpha(f.coefficients[0])
    rays = [Fraction(1, 7), Fraction(2, 7), Fraction(4, 7)]
    assert rotation_number_at(f, alpha, rays) == Fraction(1, 3)


def test_repelling_point_needs_rays(presets):
    f = load_map("rabbit", presets)
    with pytest.raises(NeedsRays):
        rotation_number_at(f, _alpha(f.coefficients[0]))


def test_rotation_number_of_indifferent_point():
    lam = cmath.exp(2j * math.pi / 3)
    z = lam / 2
    f = quadratic(z - z * z)
    assert rotation_number_at(f, z) == Fraction(1, 3)


def test_rotation_number_rejects_attracting_point():
    with pytest.raises(ValueError):
        rotation_number_at(quadratic(0.0), 0.0)


def test_basilica_critical_orbit_is_periodic():
    reports = classify_critical_orbits(quadratic(-1.0))
    assert len(reports) == 1
    assert reports[0].outcome == "periodic"
    assert reports[0].period == 2
    assert postcritically_finite(reports)


def test_rabbit_critical_orbit_is_periodic(presets):
    reports = classify_critical_orbits(load_map("rabbit", presets))
    assert reports[0].outcome == "periodic"
    assert reports[0].period == 3


def test_misiurewicz_critical_orbit():
    # 0 -> i -> -1+i -> -i -> -1+i
    report = classify_critical_orbits(quadratic(1j))[0]
    assert report.outcome == "preperiodic"
    assert (report.preperiod, report.period) == (2, 2)
    assert report.cycle.kind == "repelling"


def test_attracted_and_escaping_critical_orbits():
    attracted = classify_critical_orbits(quadratic(0.1))
    assert attracted[0].outcome == "attracted"
    assert attracted[0].period == 1
    assert not postcritically_finite(attracted)
    assert all_critical_orbits_bounded(attracted)

    escaping = classify_critical_orbits(quadratic(1.0))
    assert escaping[0].outcome == "escaping"
    assert not all_critical_orbits_bounded(escaping)


def test_mating_critical_orbits(presets):
    reports = classify_critical_orbits(load_map("mating", presets))
    by_period = sorted((r.period, r.outcome) for r in reports)
    assert by_period == [(2, "periodic"), (3, "periodic")]
    assert all(abs(r.cycle.multiplier) < 1e-8 for r in reports)


def test_intertwining_critical_orbits(presets):
    f = load_map("basilica_basilica", presets)
    reports = classify_critical_orbits(f)
    assert sorted(round(r.point.real, 12) for r in reports) == [-0.5, 0.5]
    assert all(r.outcome == "periodic" and r.period == 2 for r in reports)
    image = (-1 + 1j * math.sqrt(7)) / 4
    cycle = next(r.cycle for r in reports if r.point.real > 0)
    assert min(abs(z - image) for z in cycle.points) < 1e-10
    assert cycle.residual(f) < 1e-12
