"""Finitely supported real sequences indexed by positive integers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np


@dataclass(frozen=True)
class FiniteVector:
    """Sparse vector ``sum_i v_i e_i`` with strictly increasing indices.

    Zero values are never stored, so two vectors are equal exactly when
    they represent the same sequence.  Instances are immutable and
    hashable, which lets norm oracles memoize on them.
    """

    indices: tuple[int, ...] = ()
    values: tuple[float, ...] = ()

    def __post_init__(self):
        if len(self.indices) != len(self.values):
            raise ValueError("indices and values differ in length")
        prev = 0
        for i, v in zip(self.indices, self.values):
            if not isinstance(i, (int, np.integer)) or i < 1:
                raise ValueError(f"index {i!r} is not a positive integer")
            if i <= prev:
                raise ValueError("indices must be strictly increasing")
            if v == 0 or not math.isfinite(v):
                raise ValueError(f"invalid stored value {v!r} at index {i}")
            prev = i

    # construction -----------------------------------------------------

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "FiniteVector":
        acc: dict[int, float] = {}
        for i, v in pairs:
            acc[int(i)] = acc.get(int(i), 0.0) + float(v)
        items = sorted((i, v) for i, v in acc.items() if v != 0.0)
        return cls(tuple(i for i, _ in items), tuple(v for _, v in items))

    @classmethod
    def from_dict(cls, d: Mapping[int, float]) -> "FiniteVector":
        return cls.from_pairs(d.items())

    @classmethod
    def from_array(cls, values, indices=None) -> "FiniteVector":
        values = np.asarray(values, dtype=float)
        if indices is None:
            indices = range(1, len(values) + 1)
        return cls.from_pairs(zip(indices, values.tolist()))

    @classmethod
    def basis(cls, i: int, value: float = 1.0) -> "FiniteVector":
        return cls((int(i),), (float(value),))

    @classmethod
    def ones(cls, indices: Iterable[int]) -> "FiniteVector":
        return cls.from_pairs((i, 1.0) for i in indices)

    # views --------------------------------------------------------------

    def __len__(self) -> int:
        return len(self.indices)

    def __bool__(self) -> bool:
        return bool(self.indices)

    def __getitem__(self, i: int) -> float:
        try:
            return self.values[self.indices.index(i)]
        except ValueError:
            return 0.0

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.indices)

    def as_dict(self) -> dict[int, float]:
        return dict(zip(self.indices, self.values))

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def dense(self, indices: Iterable[int]) -> np.ndarray:
        d = self.as_dict()
        return np.array([d.get(i, 0.0) for i in indices], dtype=float)

    def max_index(self) -> int:
        return self.indices[-1] if self.indices else 0

    # lattice and linear operations -------------------------------------

    def __abs__(self) -> "FiniteVector":
        return FiniteVector(self.indices, tuple(abs(v) for v in self.values))

    def __neg__(self) -> "FiniteVector":
        return FiniteVector(self.indices, tuple(-v for v in self.values))

    def __add__(self, other: "FiniteVector") -> "FiniteVector":
        return FiniteVector.from_pairs(list(zip(self.indices, self.values))
                                       + list(zip(other.indices, other.values)))

    def __sub__(self, other: "FiniteVector") -> "FiniteVector":
        return self + (-other)

    def __mul__(self, c: float) -> "FiniteVector":
        c = float(c)
        if c == 0.0:
            return FiniteVector()
        return FiniteVector(self.indices, tuple(c * v for v in self.values))

    __rmul__ = __mul__

    def hadamard(self, other: "FiniteVector") -> "FiniteVector":
        d = other.as_dict()
        return FiniteVector.from_pairs((i, v * d[i]) for i, v in zip(self.indices, self.values) if i in d)

    def sup(self, other: "FiniteVector") -> "FiniteVector":
        a, b = self.as_dict(), other.as_dict()
        keys = set(a) | set(b)
        return FiniteVector.from_pairs((i, max(a.get(i, 0.0), b.get(i, 0.0))) for i in keys)

    def inf(self, other: "FiniteVector") -> "FiniteVector":
        a, b = self.as_dict(), other.as_dict()
        keys = set(a) | set(b)
        return FiniteVector.from_pairs((i, min(a.get(i, 0.0), b.get(i, 0.0))) for i in keys)

    def positive_part(self) -> "FiniteVector":
        return FiniteVector.from_pairs((i, v) for i, v in zip(self.indices, self.values) if v > 0)

    def negative_part(self) -> "FiniteVector":
        return FiniteVector.from_pairs((i, -v) for i, v in zip(self.indices, self.values) if v < 0)

    def signs(self) -> dict[int, float]:
        return {i: math.copysign(1.0, v) for i, v in zip(self.indices, self.values)}

    def restrict(self, subset: Iterable[int]) -> "FiniteVector":
        keep = set(subset)
        return FiniteVector.from_pairs((i, v) for i, v in zip(self.indices, self.values) if i in keep)

    def shift(self, k: int = 1) -> "FiniteVector":
        return FiniteVector(tuple(i + k for i in self.indices), self.values)

    def dot(self, other: "FiniteVector") -> float:
        d = other.as_dict()
        return math.fsum(v * d[i] for i, v in zip(self.indices, self.values) if i in d)

    def is_disjoint(self, other: "FiniteVector") -> bool:
        return not (self.support & other.support)

    # serialization -------------------------------------------------------

    def to_json(self) -> list[dict]:
        return [{"i": i, "v": v} for i, v in zip(self.indices, self.values)]

    @classmethod
    def from_json(cls, data) -> "FiniteVector":
        if not isinstance(data, list):
            raise ValueError("vector document must be an array of {i, v} objects")
        pairs = []
        for item in data:
            if set(item) != {"i", "v"}:
                raise ValueError(f"bad vector entry {item!r}")
            pairs.append((int(item["i"]), float(item["v"])))
        if len({i for i, _ in pairs}) != len(pairs):
            raise ValueError("duplicate index in vector document")
        return cls.from_pairs(pairs)

    def __repr__(self) -> str:
        body = ", ".join(f"{v:g}@{i}" for i, v in zip(self.indices, self.values))
        return f"FiniteVector({body})"


def pointwise_power(v: FiniteVector, p: float) -> FiniteVector:
    """Coordinatewise ``|v_i|**p``; the support is preserved."""
    if p <= 0:
        raise ValueError("exponent must be positive")
    return FiniteVector(v.indices, tuple(abs(x) ** p for x in v.values))
