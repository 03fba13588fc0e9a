import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circdom import ComplexRational, ComponentSeries, Disk, annulus, evaluate, sup_norm, validate_domain
from circdom.errors import DegreeOverflow, EvalAtPole, InvalidInput, PoleOnBoundary
from circdom.funcrep import sample_boundary

import randfun

A = annulus(0.5, 2)


def test_eval_examples():
    f = ComplexRational([1], [-1])
    assert evaluate(f, 3.0) == pytest.approx(0.5)
    assert evaluate(ComplexRational.constant(2 - 1j), 7.0) == 2 - 1j


def test_eval_at_pole():
    f = ComplexRational([1], [-1])
    with pytest.raises(EvalAtPole):
        f(-1.0)


def test_zero_function():
    z = ComplexRational.constant(0)
    assert z.is_zero and z.zeros == () and z.poles == ()
    assert np.all(z(np.array([1.0, 2.0])) == 0)
    assert sup_norm(z, A) == 0.0


def test_sup_norm_examples():
    assert sup_norm(ComplexRational([0]), A) == pytest.approx(2, abs=1e-12)
    assert sup_norm(ComplexRational([], [0]), A) == pytest.approx(2, abs=1e-12)
    assert sup_norm(ComplexRational([1, -1]), A) == pytest.approx(5, abs=1e-12)


def test_sup_norm_pole_on_boundary():
    with pytest.raises(PoleOnBoundary):
        sup_norm(ComplexRational([], [2.0]), A)


def test_mul_and_cancel():
    f = ComplexRational([1]) * ComplexRational([-1])
    assert sorted(f.zeros, key=lambda w: w.real) == [-1, 1]
    one = ComplexRational([1]) / ComplexRational([1])
    assert one.zeros == () and one.poles == () and one.scale == 1


def test_add_partial_fractions():
    f = ComplexRational([0]) + ComplexRational([], [0], 2.0)
    assert f.poles == (0j,)
    zs = sorted(f.zeros, key=lambda w: w.imag)
    assert np.allclose(zs, [-1j * np.sqrt(2), 1j * np.sqrt(2)], atol=1e-12)
    z = np.array([0.7 + 0.2j, -1.3j])
    assert np.allclose(f(z), z + 2 / z, atol=1e-13)


def test_add_cancels_to_zero():
    f = ComplexRational([1, 2], [3])
    assert (f - f).is_zero


def test_degree_overflow():
    big = ComplexRational(np.linspace(0.6, 1.9, 40), [])
    with pytest.raises(DegreeOverflow):
        big + ComplexRational([], np.linspace(3, 4, 30))


def test_from_coefficients():
    f = ComplexRational.from_coefficients([2, 0, 1], [0, 1])
    z = np.array([1.1, 0.3 + 1j])
    assert np.allclose(f(z), (z ** 2 + 2) / z)


def test_in_hinf():
    assert ComplexRational([], [0.1, 3]).in_hinf(A)
    assert not ComplexRational([], [1.0]).in_hinf(A)
    assert not ComplexRational([], [2.0]).in_hinf(A)


def test_series_vanishes_at_infinity():
    s = ComponentSeries(1, 0.3, 0.5, [0.0, 1.5 - 0.2j, 0.7, -0.1j])
    R = 1e6 * 0.5
    assert abs(s(0.3 + R)) <= 2 * abs(s.coefficients[1]) * 0.5 / R
    with pytest.raises(InvalidInput):
        ComponentSeries.from_dict({**s.to_dict(), "basis": "outer_taylor"})


def test_hole_series_constant_forced_to_zero():
    s = ComponentSeries(2, 0, 1, [5.0, 1.0])
    assert s.coefficients[0] == 0


def test_sample_boundary_shapes():
    b = sample_boundary(ComplexRational([1]), A, 64, mu=1e-3)
    assert b.samples == 64 and len(b.values) == 2
    assert np.allclose(b.values[0], b.contours[0].points() - 1)


def test_json_round_trip_random():
    rng = np.random.default_rng(5)
    z = np.array([randfun.interior_point(rng) for _ in range(100)])
    for _ in range(10):
        f = randfun.random_rational(rng)
        g = ComplexRational.from_dict(f.to_dict())
        assert np.max(np.abs(f(z) - g(z))) <= 1e-12 * (1 + np.max(np.abs(f(z))))
    f = ComplexRational([1, 1, 2], [0.1, 0.1])
    assert f.to_dict()["zeros"] == [[1.0, 0.0, 2], [2.0, 0.0, 1]]
    assert ComplexRational.from_dict(f.to_dict()) == f


def test_series_round_trip():
    s = ComponentSeries(0, 1 + 1j, 2.0, [1, 2j, 3])
    t = ComponentSeries.from_dict(s.to_dict())
    assert np.array_equal(s.coefficients, t.coefficients) and t.basis == "outer_taylor"


def test_norm_on_three_connected():
    d = validate_domain(Disk(0, 4), [Disk(-2, 0.5), Disk(2, 0.5)])
    f = ComplexRational([], [2.0])
    assert sup_norm(f, d) == pytest.approx(2.0, abs=1e-10)


seeds = st.integers(0, 2**31)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_norm_inequalities(seed):
    rng = np.random.default_rng(seed)
    f, g = randfun.random_rational(rng), randfun.random_rational(rng)
    nf, ng = sup_norm(f, A), sup_norm(g, A)
    tol = 1e-9 * (1 + nf * ng)
    assert sup_norm(f * g, A) <= nf * ng + tol
    assert sup_norm(f + g, A) <= nf + ng + 1e-9 * (1 + nf + ng)


@settings(max_examples=30, deadline=None)
@given(seed=seeds)
def test_interior_bounded_by_sup_norm(seed):
    rng = np.random.default_rng(seed)
    f = randfun.random_rational(rng)
    z = np.array([randfun.polar(rng, 0.5, 2.0) for _ in range(200)])
    assert np.max(np.abs(f(z))) <= sup_norm(f, A) * (1 + 1e-10) + 1e-10
