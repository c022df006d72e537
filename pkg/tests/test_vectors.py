import math

import numpy as np
import pytest

from banachlab import FiniteVector, pointwise_power


def test_zero_values_dropped():
    v = FiniteVector.from_pairs([(3, 0.0), (1, 2.0), (1, -2.0), (5, 1.5)])
    assert v.indices == (5,) and v.values == (1.5,)


def test_rejects_bad_indices():
    with pytest.raises(ValueError):
        FiniteVector((0,), (1.0,))
    with pytest.raises(ValueError):
        FiniteVector((2, 1), (1.0, 1.0))
    with pytest.raises(ValueError):
        FiniteVector((1,), (math.nan,))


def test_arithmetic_and_lattice():
    a = FiniteVector.from_array([1.0, -2.0, 3.0])
    b = FiniteVector.from_array([1.0, 2.0], indices=[2, 4])
    assert (a + b).as_dict() == {1: 1.0, 2: -1.0, 3: 3.0, 4: 2.0}
    assert (a - a) == FiniteVector()
    assert (a * 2).values == (2.0, -4.0, 6.0)
    assert abs(a).values == (1.0, 2.0, 3.0)
    assert a.positive_part().as_dict() == {1: 1.0, 3: 3.0}
    assert a.negative_part().as_dict() == {2: 2.0}
    assert a.dot(b) == -2.0
    assert (a + FiniteVector.basis(2, 2.0)).indices == (1, 3)
    assert a.shift(2).indices == (3, 4, 5)
    assert a.restrict([1, 3]).indices == (1, 3)
    assert a.max_index() == 3
    assert not a.is_disjoint(b) and a.restrict([1]).is_disjoint(b)


def test_json_round_trip():
    v = FiniteVector.from_array([0.25, 0.0, -7.5])
    assert FiniteVector.from_json(v.to_json()) == v
    with pytest.raises(ValueError):
        FiniteVector.from_json([{"i": 1, "v": 1.0}, {"i": 1, "v": 2.0}])


def test_dense_and_signs():
    v = FiniteVector.from_pairs([(2, -1.0), (5, 3.0)])
    assert np.array_equal(v.dense([1, 2, 5]), [0.0, -1.0, 3.0])
    assert v.signs() == {2: -1.0, 5: 1.0}


@pytest.mark.parametrize("v,p,expected", [
    (FiniteVector.basis(1, 4.0), 0.5, FiniteVector.basis(1, 2.0)),
    (FiniteVector.basis(2, -3.0), 2.0, FiniteVector.basis(2, 9.0)),
    (FiniteVector.from_pairs([(1, 1.0), (3, 8.0)]), 1 / 3, FiniteVector.from_pairs([(1, 1.0), (3, 2.0)])),
])
def test_pointwise_power_examples(v, p, expected):
    out = pointwise_power(v, p)
    assert out.indices == expected.indices
    assert np.allclose(out.values, expected.values, rtol=1e-12)
