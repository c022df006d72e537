import math

import numpy as np
import pytest

from banachlab import (DirectSum, FiniteVector, Interpolate, Lp, Tsirelson, compose_map,
                       construct_lemma44, extend_map, geometric_mean, modulus_bound_45_46, norm,
                       normalized_coupling, pointwise_power, solve_F, verify_cor43,
                       verify_lemma42, weight_vector)
from banachlab.mazur import check_lemma41, verify_lemma44

V = FiniteVector.from_array


def close(u: FiniteVector, v: FiniteVector, tol: float) -> bool:
    keys = u.support | v.support
    return all(abs(u[i] - v[i]) <= tol for i in keys)


def random_weights(rng, n):
    w = rng.dirichlet(np.ones(n))
    return V(w / w.sum())


def test_geometric_mean_examples():
    assert geometric_mean(V([1.0]), V([0.5])) == pytest.approx(0.5)
    assert geometric_mean(V([0.5, 0.5]), V([1, 1])) == pytest.approx(1.0)
    assert geometric_mean(V([0.5, 0.5]), V([0.25, 1])) == pytest.approx(0.5)


def test_weight_validation():
    with pytest.raises(ValueError):
        weight_vector(V([0.5, 0.6]))
    with pytest.raises(ValueError):
        weight_vector(V([1.5, -0.5]))
    weight_vector(V([0.25, 0.75]))


def test_solve_l1_and_lp():
    b = V([0.5, 0.25, 0.25])
    assert close(solve_F(Lp(1), b).x, b, 1e-9)
    sol = solve_F(Lp(3), b)
    assert sol.converged
    assert np.allclose(sol.x.values, [0.7937, 0.6300, 0.6300], atol=1e-4)
    assert close(sol.x, pointwise_power(b, 1 / 3), 1e-8)
    assert norm(Lp(3), sol.x) == pytest.approx(1, abs=1e-12)


def test_solve_zero_weights_and_functional():
    b = FiniteVector.from_pairs([(1, 0.6), (4, 0.4)])
    sol = solve_F(Lp(2), b)
    assert sol.x.support == frozenset({1, 4})
    assert sol.f.attained_value == pytest.approx(1.0, abs=1e-9)
    pairing, dn = check_lemma41(sol, Lp(2))
    assert pairing == pytest.approx(1.0, abs=1e-9) and dn == pytest.approx(1.0, abs=1e-6)


def test_solve_tsirelson_kkt():
    sol = solve_F(Tsirelson(), V([0.1, 0.2, 0.3, 0.4])).require_converged()
    assert sol.method == "column-generation"
    assert norm(Tsirelson(), sol.x) == pytest.approx(1.0, abs=1e-9)
    pairing, dn = check_lemma41(sol, Tsirelson())
    assert pairing == pytest.approx(1.0, abs=1e-6) and dn == pytest.approx(1.0, abs=1e-6)


def test_uniqueness_from_random_starts():
    rng = np.random.default_rng(5)
    space = Interpolate(Lp(1), Lp(4), 0.5)
    b = random_weights(rng, 4)
    ref = solve_F(space, b).x
    for _ in range(5):
        x0 = rng.uniform(0.1, 2.0, size=4)
        assert close(solve_F(space, b, x0=x0).x, ref, 1e-5)


def test_extend_map_examples():
    f = extend_map(Lp(2), "from_l1")
    assert f(FiniteVector()) == FiniteVector()
    assert np.allclose(f(V([0.36, 0.64])).values, [0.6, 0.8], atol=1e-9)
    assert np.allclose(f(V([-0.36, 0.64])).values, [-0.6, 0.8], atol=1e-9)
    g = extend_map(Lp(2), "to_l1")
    assert close(g(f(V([-0.2, 0.5, 0.3]))), V([-0.2, 0.5, 0.3]), 1e-6)
    # homogeneity
    assert close(f(V([0.72, 1.28])), V([1.2, 1.6]), 1e-9)


def test_compose_map_examples():
    m = compose_map(Lp(2), Lp(4))
    out = m(V([0.6, 0.8]))
    assert np.allclose(out.values, [math.sqrt(0.6), math.sqrt(0.8)], atol=1e-6)
    assert norm(Lp(4), out) == pytest.approx(1, abs=2e-6)
    same = compose_map(Interpolate(Lp(1), Lp(3), 0.5), Interpolate(Lp(1), Lp(3), 0.5))
    v = V([0.3, -0.2, 0.1])
    assert close(same(v), v, 1e-6)
    v = V([0.1, 0.3, 0.6])
    assert close(compose_map(Lp(1), Lp(2))(v), extend_map(Lp(2))(v), 1e-12)


def test_normalized_coupling():
    src = DirectSum((Lp(1), Lp(1)), ((1, 2), (3, None)), Lp(1))
    dst = DirectSum((Lp(2), Lp(3)), ((1, 2), (3, None)), Lp(1))
    fwd = normalized_coupling(src, dst, [extend_map(Lp(2)), extend_map(Lp(3))])
    inv = normalized_coupling(dst, src, [extend_map(Lp(2), "to_l1"), extend_map(Lp(3), "to_l1")])
    v = V([0.1, -0.2, 0.3, 0.15])
    w = fwd(v)
    assert norm(dst, w) == pytest.approx(norm(src, v), rel=1e-9)
    assert close(inv(w), v, 1e-6)


def test_lemma42_examples():
    r = verify_lemma42(Lp(1), Lp(math.inf), 0.5, V([0.5, 0.5]))
    assert r.max_dev <= 1e-6
    assert np.allclose(r.lhs.values, [math.sqrt(0.5)] * 2, atol=1e-6)
    rng = np.random.default_rng(0)
    r = verify_lemma42(Lp(2), Lp(6), 0.5, random_weights(rng, 4))
    assert r.max_dev <= 1e-5
    b = V([0.2, 0.3, 0.5])
    r = verify_lemma42(Lp(2), Lp(3), 0.999, b)
    assert close(r.lhs, solve_F(Lp(2), b).x, 1e-3)
    assert r.max_dev <= 1e-4


def test_cor43_examples():
    b = V([0.2, 0.3, 0.5])
    r = verify_cor43(Lp(1), 0.5, b)
    assert r.max_dev <= 1e-6 and close(r.rhs, pointwise_power(b, 0.5), 1e-9)
    r = verify_cor43(Tsirelson(), 0.5, V([0.1, 0.2, 0.3, 0.4]))
    assert r.max_dev <= 1e-5
    with pytest.raises(ValueError):
        verify_cor43(Lp(1), 1.0, b)


def test_lemma44_examples():
    c = construct_lemma44(2, 3, Lp(3))
    assert c.theta == pytest.approx(1 / 3)
    assert c.Y == Lp(4)
    vecs = [V([0.3, -0.5, 0.2, 0.9]), V([1.0]), V([0.1, 0.1])]
    assert verify_lemma44(2, 3, Lp(3), vecs) <= 1e-4
    assert construct_lemma44(2, 2, Lp(2)).theta == 1.0
    assert construct_lemma44(2, 2, Lp(2)).space() == Lp(2)
    with pytest.raises(ValueError):
        construct_lemma44(2, 5, Lp(3))


def test_modulus_bound_examples():
    assert modulus_bound_45_46(2, 3, 0.125).leading == pytest.approx(1.0)
    b = modulus_bound_45_46(2, 2, 0.3)
    assert b.phi0_coefficient == 0 and b.leading == pytest.approx(0.6)
    assert modulus_bound_45_46(2, 4, 0.1, "inverse").phi0_coefficient == pytest.approx(math.sqrt(0.5))
    with pytest.raises(ValueError):
        modulus_bound_45_46(2, 3, 0.1, "sideways")
