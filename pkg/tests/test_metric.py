import math

import pytest

from banachlab import (FiniteVector, Lp, MapUnderTest, compose_map, lemma15_check, lemma16_check,
                       lipschitz_large_const, mid_membership, modulus_scan)
from banachlab.metric import fit_power_law

V = FiniteVector.from_array
E1, E2 = FiniteVector.basis(1), FiniteVector.basis(2)


def test_mid_membership_examples():
    x, y = V([1, 0]), V([-1, 0])
    ok, slack = mid_membership(Lp(2), x, y, 0, FiniteVector())
    assert ok and slack == pytest.approx(0, abs=1e-15)
    z = E2 * 0.5
    ok, slack = mid_membership(Lp(2), x, y, 0, z)
    assert not ok and slack == pytest.approx(1 - math.sqrt(1.25))
    assert mid_membership(Lp(2), x, y, 0.2, z)[0]
    with pytest.raises(ValueError):
        mid_membership(Lp(2), x, x, 0.1, z)


def test_lemma16_upper_l2():
    assert mid_membership(Lp(2), E1, -E1, 0.25, E2 * 0.5)[0]
    r = lemma16_check(Lp(2), 2, "upper", E1, 0.25, 300, 0)
    assert r.passed and r.violations == 0


def test_lemma16_lower_l1():
    r = lemma16_check(Lp(1), 1, "lower", E1, 0.1, 200, 0)
    assert r.passed and r.worst_slack >= -1e-12


def test_lemma16_literal_vs_sharp_lower_bound():
    # (2 delta)^(1/2) is below the true reach ((1+delta)^2 - 1)^(1/2) in l_2
    x = V([0.6, 0.8])
    literal = lemma16_check(Lp(2), 2, "lower", x, 0.2, 400, 3)
    sharp = lemma16_check(Lp(2), 2, "lower", x, 0.2, 400, 3, bound="sharp")
    assert sharp.passed
    assert literal.violations > 0


def test_lipschitz_examples():
    ident = MapUnderTest.identity(Lp(2), radius=None)
    assert lipschitz_large_const(ident, 0.5, 200, 0) == pytest.approx(1.0, abs=1e-12)
    two = MapUnderTest.scaling(Lp(2), 2.0, radius=None)
    assert lipschitz_large_const(two, 0.5, 200, 0) == pytest.approx(2.0, abs=1e-12)
    shift = MapUnderTest.translation(Lp(2), V([3, -1]), radius=None)
    u = lipschitz_large_const(shift, 0.5, 200, 0)
    assert 0.9 < u <= 1.0 + 1e-12


def test_modulus_scan_examples():
    ident = MapUnderTest.identity(Lp(2))
    est = modulus_scan(ident, [0.1, 0.5], 100, 0)
    assert all(e.omega_hat <= e.t * (1 + 1e-12) for e in est)
    assert est[1].omega_hat >= 0.45
    with pytest.raises(ValueError):
        modulus_scan(ident, [0.5, 0.1], 10, 0)


def test_modulus_scan_square_root():
    m = MapUnderTest.from_ball_map(compose_map(Lp(1), Lp(2)))
    est = modulus_scan(m, [0.001, 0.01, 0.1], 200, 0)
    assert [e.omega_hat for e in est] == sorted(e.omega_hat for e in est)
    assert est[1].omega_hat <= 2.5 * 0.1
    slope, C = fit_power_law(est)
    assert 0.35 < slope < 0.75


def test_lemma15_identity_and_scaling():
    x, y = V([3, 0]), V([-3, 0])
    r = lemma15_check(MapUnderTest.identity(Lp(2), radius=None), x, y, 2.0, 0.0, 0.1, 100, 0)
    assert r.passed and not r.vacuous
    r = lemma15_check(MapUnderTest.scaling(Lp(2), 2.0, radius=None), x, y, 2.0, 0.0, 0.1, 100, 0)
    assert r.passed and not r.vacuous


def test_lemma15_vacuous_when_too_close():
    r = lemma15_check(MapUnderTest.identity(Lp(2), radius=None), E1, -E1, 5.0, 0.0, 0.1, 10, 0)
    assert r.vacuous and r.passed


def test_lemma15_mazur_far_apart():
    m = MapUnderTest.from_ball_map(compose_map(Lp(2), Lp(4)), radius=None)
    x, y = V([10, 0]), V([-10, 0])
    r = lemma15_check(m, x, y, 10.0, None, 0.05, 500, 0, u_samples=300)
    assert r.violations == 0
