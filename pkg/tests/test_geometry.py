import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circdom import Disk, annulus, is_real_symmetric, locate, validate_domain
from circdom.errors import (
    DomainValidationError,
    HoleOutsideOuter,
    HoleOverlap,
    HoleTouchesOuter,
    InvalidInput,
)
from circdom.geometry import (
    IN_HOLE,
    INTERIOR,
    ON_BOUNDARY,
    OUTSIDE_OUTER,
    CircularDomain,
    Contour,
    conjugate_partners,
)


def test_annulus_is_valid():
    d = validate_domain(Disk(0, 2), [Disk(0, 0.5)])
    assert d.connectivity == 2
    assert d.contains(1.0)
    assert not d.contains(0.3)
    assert not d.contains(2.5)


def test_hole_touches_outer():
    with pytest.raises(HoleTouchesOuter) as exc:
        validate_domain(Disk(0, 1), [Disk(0.5, 0.6)])
    assert exc.value.violations == [("HoleTouchesOuter", (1,))]


def test_three_connected():
    d = validate_domain(Disk(0, 4), [Disk(-2, 0.5), Disk(2, 0.5)])
    assert d.connectivity == 3


def test_overlap_and_outside_reported_together():
    with pytest.raises(HoleOutsideOuter) as exc:
        validate_domain(Disk(0, 1), [Disk(5, 0.5), Disk(0.1, 0.2), Disk(0.2, 0.2)])
    kinds = [k for k, _ in exc.value.violations]
    assert kinds == ["HoleOutsideOuter", "HoleOverlap"]
    assert exc.value.violations[1][1] == (2, 3)
    assert isinstance(exc.value, DomainValidationError)


def test_overlap_alone():
    with pytest.raises(HoleOverlap):
        validate_domain(Disk(0, 4), [Disk(-0.5, 0.6), Disk(0.5, 0.6)])


def test_bad_disk():
    with pytest.raises(InvalidInput):
        Disk(0, -1)
    with pytest.raises(InvalidInput):
        Disk(complex(np.inf, 0), 1)


def test_locate_examples():
    a = annulus(0.5, 2)
    loc = locate(a, 1.0)
    assert loc.tag == INTERIOR and loc.distance == pytest.approx(0.5)
    loc = locate(a, 0.1)
    assert loc.tag == IN_HOLE and loc.index == 1 and loc.distance == pytest.approx(0.4)
    loc = locate(a, 2.0)
    assert loc.tag == ON_BOUNDARY and loc.index == 0
    assert locate(a, 3.0).tag == OUTSIDE_OUTER


def test_symmetry_examples():
    assert is_real_symmetric(annulus(0.5, 2))
    assert not is_real_symmetric(validate_domain(Disk(0, 4), [Disk(2j, 0.5)]))
    d = validate_domain(Disk(0, 4), [Disk(1 + 1j, 0.3), Disk(1 - 1j, 0.3)])
    assert is_real_symmetric(d)
    assert conjugate_partners(d) == [0, 2, 1]


def test_contour_radius_and_orientation():
    d = annulus(0.5, 2)
    outer, hole = d.contours(64, mu=1e-3)
    assert outer.orientation == 1 and outer.radius == pytest.approx(2 * (1 - 1e-3))
    assert hole.orientation == -1 and hole.radius == pytest.approx(0.5 * (1 + 1e-3))
    assert np.all(d.contains(outer.points())) and np.all(d.contains(hole.points()))
    with pytest.raises(InvalidInput):
        Contour(Disk(0, 1), samples=48)
    with pytest.raises(InvalidInput):
        Contour(Disk(0, 1), samples=8)


def test_json_round_trip_bit_exact():
    d = validate_domain(Disk(0.1 + 0.2j, 3.3), [Disk(1 / 3, 0.1), Disk(-1.7 + 0.3j, 1e-3)])
    back = CircularDomain.from_json(d.to_json())
    assert back == d
    assert json.loads(d.to_json())["holes"][0]["center"] == [1 / 3, 0.0]


def test_from_dict_malformed():
    with pytest.raises(InvalidInput):
        CircularDomain.from_dict({"holes": []})


def test_grid_inside_closure():
    d = validate_domain(Disk(0, 4), [Disk(-2, 0.5), Disk(2, 0.5)])
    pts = d.grid(16)
    assert np.all(d.contains(pts) | (d.boundary_distance(pts) < 1e-12))


def test_project():
    d = annulus(0.5, 2)
    assert abs(d.project(3.0) - 2.0) < 1e-15
    assert abs(d.project(0.1j) - 0.5j) < 1e-15
    assert d.project(1.0) == 1.0


coords = st.floats(-3, 3, allow_nan=False)
radii = st.floats(0.01, 2, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(r0=st.floats(0.5, 4), holes=st.lists(st.tuples(coords, coords, radii), max_size=4))
def test_validation_matches_inequalities(r0, holes):
    disks = [Disk(complex(x, y), r) for x, y, r in holes]
    ok = all(abs(h.center) + h.radius < r0 for h in disks)
    ok &= all(
        abs(disks[j].center - disks[k].center) > disks[j].radius + disks[k].radius
        for j in range(len(disks)) for k in range(j + 1, len(disks))
    )
    try:
        validate_domain(Disk(0, r0), disks)
        accepted = True
    except DomainValidationError:
        accepted = False
    assert accepted == ok


@settings(max_examples=200, deadline=None)
@given(x=st.floats(-3, 3), y=st.floats(-3, 3))
def test_locate_consistent(x, y):
    d = validate_domain(Disk(0, 2.5), [Disk(-1, 0.5), Disk(1 + 0.5j, 0.4)])
    z = complex(x, y)
    loc = locate(d, z)
    expect = min(abs(abs(z - c.center) - c.radius) for c in d.disks)
    assert loc.distance == pytest.approx(expect, abs=1e-15)
    if loc.tag != ON_BOUNDARY:
        inside = abs(z) < 2.5 and all(abs(z - h.center) > h.radius for h in d.holes)
        assert (loc.tag == INTERIOR) == inside
        assert bool(d.contains(z)) == inside


@settings(max_examples=100, deadline=None)
@given(
    cx=st.floats(-1, 1), cy=st.floats(-1, 1),
    hx=st.floats(-1, 1), hy=st.floats(0.1, 1), r=st.floats(0.01, 0.09),
    mirror=st.booleans(),
)
def test_symmetry_invariant_under_conjugation(cx, cy, hx, hy, r, mirror):
    holes = [Disk(complex(hx, hy), r)]
    if mirror:
        holes.append(Disk(complex(hx, -hy), r))
    d = validate_domain(Disk(complex(cx, cy), 5), holes)
    assert is_real_symmetric(d) == is_real_symmetric(d.conjugate())
