import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from banachlab import (Convexify, DirectSum, Dual, FiniteVector, Interpolate, Lp, SpaceError,
                       Tsirelson, dual_norm, estimate_disjoint_estimate, interpolation_norm, norm,
                       norming_functional, simplify, space_from_json)

V = FiniteVector.from_array


def test_norm_examples():
    assert norm(Lp(2), V([3, 4])) == pytest.approx(5, rel=1e-12)
    assert norm(Convexify(Lp(1), 2), V([3, 4])) == pytest.approx(5, rel=1e-12)
    assert norm(Interpolate(Lp(1), Lp(math.inf), 0.5), V([1, 1])) == pytest.approx(math.sqrt(2), abs=1e-6)
    assert norm(Lp(math.inf), V([1, -7, 2])) == 7
    assert norm(Lp(2), FiniteVector()) == 0.0


def test_interpolation_certificate_brackets_value():
    r = interpolation_norm(Interpolate(Lp(1), Lp(2), 0.3), V([0.2, -1.0, 0.4]))
    assert r.lower <= r.value
    assert r.gap <= 1e-6 * r.value
    # closed form: [l1, l2]_0.3 = l_p with 1/p = 0.3 + 0.7/2
    p = 1 / (0.3 + 0.35)
    assert r.value == pytest.approx(norm(Lp(p), V([0.2, -1.0, 0.4])), rel=1e-6)


def test_dual_norm_examples():
    assert dual_norm(Lp(2), V([3, 4])).value == pytest.approx(5, rel=1e-12)
    assert dual_norm(Lp(1), V([1, -2])).value == pytest.approx(2, rel=1e-12)
    assert dual_norm(Tsirelson(), FiniteVector.basis(1)).value == pytest.approx(1, abs=1e-9)


def test_tsirelson_dual_norm_brackets():
    f = V([0.3, -0.2, 0.5, 0.1])
    r = dual_norm(Tsirelson(), f)
    assert r.converged and r.lower <= r.value <= r.upper + 1e-12
    # every unit vector pairs below the dual norm
    x = r.witness
    assert abs(f.dot(x)) <= r.value * norm(Tsirelson(), x) * (1 + 1e-9)


def test_norming_functional_examples():
    nf = norming_functional(Lp(2), V([3, 4]))
    assert np.allclose(nf.f.values, [0.6, 0.8], atol=1e-12)
    nf = norming_functional(Lp(1), V([1, -2]))
    assert nf.f.values == (1.0, -1.0)
    nf = norming_functional(Tsirelson(), V([1, 1, 1, 1]))
    assert nf.f == FiniteVector.from_pairs([(2, 0.5), (3, 0.5), (4, 0.5)])
    assert nf.attained_value == pytest.approx(1.5)
    assert dual_norm(Tsirelson(), nf.f).value == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ValueError):
        norming_functional(Lp(2), FiniteVector())


def test_simplify_closed_forms():
    assert simplify(Convexify(Lp(1), 3)) == Lp(3)
    assert simplify(Dual(Lp(3))) == Lp(1.5)
    assert simplify(Dual(Dual(Tsirelson()))) == Tsirelson()
    assert simplify(Convexify(Convexify(Tsirelson(), 2), 1.5)) == Convexify(Tsirelson(), 3)


def test_invalid_constructions():
    with pytest.raises(SpaceError):
        Lp(0.5)
    with pytest.raises(SpaceError):
        Interpolate(Lp(1), Lp(2), 1.0)
    with pytest.raises(SpaceError):
        Convexify(Lp(1), 0.5)
    Convexify(Lp(2), 0.5, allow_concave=True)
    with pytest.raises(SpaceError):
        DirectSum((Lp(1), Lp(2)), ((1, 5), (4, None)))
    with pytest.raises(SpaceError):
        space_from_json({"type": "lp", "p": 2, "q": 3})
    with pytest.raises(SpaceError):
        space_from_json({"type": "banana"})


def test_json_round_trip():
    sp = DirectSum((Tsirelson(), Interpolate(Lp(1), Dual(Lp(3)), 0.25)), ((1, 4), (5, None)), Lp(2))
    assert space_from_json(sp.to_json()) == sp
    assert space_from_json({"type": "lp", "p": "inf"}) == Lp(math.inf)


def test_direct_sum_norm():
    sp = DirectSum((Lp(1), Lp(math.inf)), ((1, 2), (3, None)), Lp(2))
    v = V([1, 2, 3, -4])
    assert norm(sp, v) == pytest.approx(math.hypot(3, 4), rel=1e-12)
    nf = norming_functional(sp, v)
    assert nf.attained_value == pytest.approx(5, rel=1e-12)


def test_disjoint_estimate_examples():
    lo = estimate_disjoint_estimate(Lp(2), 2, "lower", 1, 50, 0)
    assert lo.ratio == pytest.approx(1, abs=1e-9)
    up = estimate_disjoint_estimate(Lp(1), 1, "upper", 1, 50, 0)
    assert up.ratio == pytest.approx(1, abs=1e-9)
    with pytest.raises(ValueError):
        estimate_disjoint_estimate(Lp(1), 1, "sideways", 1, 5, 0)


# property tests -----------------------------------------------------------

SPACES = [Lp(1), Lp(1.5), Lp(2), Lp(4), Lp(math.inf), Tsirelson(), Convexify(Tsirelson(), 2),
          Interpolate(Lp(1), Lp(3), 0.4)]

vectors = st.lists(st.floats(-10, 10, allow_nan=False).filter(lambda x: abs(x) > 1e-3),
                   min_size=1, max_size=6).map(V)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SPACES), vectors, st.sampled_from([-2.0, 0.5, 3.0]))
def test_homogeneity(space, v, lam):
    assert norm(space, v * lam) == pytest.approx(abs(lam) * norm(space, v), rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SPACES), vectors, vectors)
def test_triangle(space, u, v):
    assert norm(space, u + v) <= (norm(space, u) + norm(space, v)) * (1 + 1e-9) + 1e-12


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(SPACES), vectors, st.lists(st.sampled_from([-1.0, 1.0]), min_size=6, max_size=6))
def test_unconditional(space, v, signs):
    flipped = FiniteVector(v.indices, tuple(s * x for s, x in zip(signs, v.values)))
    assert norm(space, flipped) == pytest.approx(norm(space, v), rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]), vectors)
def test_lp_duality_consistency(p, f):
    closed = dual_norm(Lp(p), f).value
    q = 1.0 if p == math.inf else (math.inf if p == 1 else p / (p - 1))
    assert closed == pytest.approx(norm(Lp(q), f), rel=1e-9)
    nf = norming_functional(Lp(p), f)
    assert nf.attained_value == pytest.approx(norm(Lp(p), f), rel=1e-9)
    assert norm(Lp(q), nf.f) == pytest.approx(1.0, rel=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([1.0, 1.7, 2.0, 5.0]), vectors)
def test_convexified_l1_is_lp(p, v):
    assert norm(Convexify(Lp(1), p), v) == pytest.approx(norm(Lp(p), v), rel=1e-12)
