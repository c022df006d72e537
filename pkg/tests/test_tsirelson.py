import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from banachlab import FiniteVector, lemma54_check, lower_q_constant_search, t_norm_exact, \
    t_norm_interval_lb, tp_norm
from banachlab.oracles import tsirelson_bruteforce
from banachlab.tsirelson import (Leaf, SupportTooLarge, certificate_functional,
                                 certificate_is_admissible, concavity_threshold,
                                 render_certificate)

ONES4 = FiniteVector.ones([1, 2, 3, 4])


def test_single_coordinate_is_leaf():
    val, cert = t_norm_exact(FiniteVector.basis(7))
    assert val == 1.0 and isinstance(cert, Leaf)


def test_four_ones():
    val, cert = t_norm_exact(ONES4)
    assert val == pytest.approx(1.5)
    assert cert.n == 2
    assert [s for s, _ in cert.family] == [(2,), (3,), (4,)]
    assert cert.recompute() == pytest.approx(val)
    assert certificate_is_admissible(cert, "min-after-n", "power")
    assert "E = {2}" in render_certificate(cert)


def test_tail_ones():
    assert t_norm_exact(FiniteVector.ones([4, 5, 6]))[0] == pytest.approx(1.5)


def test_interval_lower_bound_examples():
    assert t_norm_interval_lb(FiniteVector.basis(7)) == 1.0
    assert t_norm_interval_lb(ONES4) == pytest.approx(1.5)


def test_support_cap_error():
    v = FiniteVector.ones(range(1, 20))
    with pytest.raises(SupportTooLarge):
        t_norm_exact(v, cap=12)
    assert t_norm_interval_lb(v) > 1


dyadic = st.lists(st.integers(-16, 16), min_size=1, max_size=6).map(
    lambda xs: FiniteVector.from_array([x / 16 for x in xs], indices=range(1, len(xs) + 1)))


@settings(max_examples=20, deadline=None)
@given(dyadic, st.sampled_from(["power", "linear"]))
def test_matches_bruteforce(v, growth):
    if not v:
        return
    exact = t_norm_exact(v, "min-after-n", growth)[0]
    assert exact == tsirelson_bruteforce(v, "min-after-n", growth)


@settings(max_examples=10, deadline=None)
@given(dyadic)
def test_per_index_matches_bruteforce(v):
    if not v:
        return
    assert t_norm_exact(v, "per-index")[0] == pytest.approx(tsirelson_bruteforce(v, "per-index"),
                                                            abs=1e-15)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-1, 1).filter(lambda x: abs(x) > 1e-3), min_size=1, max_size=8),
       st.integers(0, 10))
def test_interval_bound_and_certificate(vals, offset):
    v = FiniteVector.from_array(vals, indices=range(1 + offset, 1 + offset + len(vals)))
    val, cert = t_norm_exact(v)
    assert t_norm_interval_lb(v) <= val * (1 + 1e-12)
    assert max(map(abs, vals)) <= val <= sum(map(abs, vals)) + 1e-12
    assert cert.recompute() == pytest.approx(val, rel=1e-12)
    assert certificate_is_admissible(cert, "min-after-n", "power")
    assert certificate_functional(cert).dot(abs(v)) == pytest.approx(val, rel=1e-12)


def test_tp_norm_examples():
    assert tp_norm(FiniteVector.basis(3), 2) == pytest.approx(1.0)
    assert tp_norm(ONES4, 2) == pytest.approx(math.sqrt(1.5), rel=1e-12)
    v = FiniteVector.from_array([0.3, -0.7, 0.2])
    assert tp_norm(v, 1) == t_norm_exact(v)[0]
    with pytest.raises(ValueError):
        tp_norm(v, 0.5)


def test_lemma54_examples():
    r = lemma54_check([1, 2, 4, 8, 16], [1.0], 2)
    assert r.holds and r.lhs == 1.0
    assert r.rhs == pytest.approx((1 + r.epsilon) ** -0.5)
    r = lemma54_check([1, 2, 4, 8, 16, 17], [1.0] * 16, 2)
    assert r.holds and r.lhs == 8.0
    with pytest.raises(ValueError):
        lemma54_check([1, 2], [0.1, 0.5], 2)


def test_lemma54_random_sweep():
    rng = np.random.default_rng(3)
    for _ in range(300):
        q = float(rng.uniform(1.05, 3))
        gaps = rng.integers(1, 6, size=int(rng.integers(1, 6)))
        m = [1] + list(1 + np.cumsum(gaps))
        a = np.sort(rng.uniform(0, 1, size=int(rng.integers(1, 25))))[::-1]
        assert lemma54_check(m, a, q).holds


def test_concavity_threshold():
    assert concavity_threshold(1.25) == 32
    assert concavity_threshold(1.4) == 12
    assert concavity_threshold(1.1) == 2048


def test_lower_q_search_small():
    s = lower_q_constant_search(1.25, trials=60, seed=1)
    assert s.tail_start == 32
    assert s.holds and s.bound == pytest.approx(2 ** -1.8)
