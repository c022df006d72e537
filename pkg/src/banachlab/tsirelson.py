"""Implicit Tsirelson-type norm on finitely supported vectors.

    ||x|| = max( ||x||_inf , 1/2 * sup sum_j ||E_j x|| )

where the supremum runs over allowable families of disjoint finite sets.
Two readings of allowability are provided:

``MIN_AFTER_N``
    for some ``n``, at most ``growth(n)`` sets, every one of them with
    minimum at least ``n`` (the default).
``PER_INDEX``
    the literal reading: sets ``E_1, ..., E_growth(n)`` with ``min E_j >= j``
    for ``j <= n`` only.  Sorting any family by minima shows the condition
    is automatic, so only the count ``growth(n)`` binds, with ``n`` up to
    the largest index of the vector.

The exact solver recurses on support subsets (bitmasks) with memoization.
Two facts keep it cheap and are both consequences of the norm being a
lattice norm: only the largest ``n`` giving a particular tail set matters
(the cap grows with ``n``), and splitting a block never lowers
``sum ||E_j x||`` (triangle inequality), so whenever the cap is at least
the tail size the optimal family is the family of singletons.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .vectors import FiniteVector, pointwise_power

DEFAULT_SUPPORT_CAP = 12
MAX_PRACTICAL_INDEX = 10**6


class AdmissibilityRule(str, enum.Enum):
    MIN_AFTER_N = "min-after-n"
    PER_INDEX = "per-index"


class GrowthFunction(str, enum.Enum):
    POWER = "power"      # n -> (n+1)^n
    LINEAR = "linear"    # n -> n

    def cap(self, n: int, limit: int = 1 << 30) -> int:
        """``min(growth(n), limit)`` without building huge integers."""
        if self is GrowthFunction.LINEAR:
            return min(n, limit)
        if n * math.log(n + 1) > math.log(limit):
            return limit
        return min((n + 1) ** n, limit)


class SupportTooLarge(ValueError):
    pass


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class Leaf:
    value: float
    index: int

    def recompute(self) -> float:
        return self.value

    def functional(self) -> dict[int, float]:
        return {self.index: 1.0}

    def to_json(self) -> dict:
        return {"leaf": self.index, "value": self.value}

    def lines(self, depth: int = 0) -> Iterator[str]:
        yield "  " * depth + f"c0 term at e_{self.index}: {self.value!r}"


@dataclass(frozen=True)
class Node:
    value: float
    n: int
    family: tuple[tuple[tuple[int, ...], "Certificate"], ...]

    def recompute(self) -> float:
        return 0.5 * _fold([child.recompute() for _, child in self.family])

    def functional(self) -> dict[int, float]:
        out: dict[int, float] = {}
        for _, child in self.family:
            for i, c in child.functional().items():
                out[i] = out.get(i, 0.0) + 0.5 * c
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "value": self.value,
                "family": [{"set": list(s), "cert": c.to_json()} for s, c in self.family]}

    def lines(self, depth: int = 0) -> Iterator[str]:
        yield "  " * depth + f"n={self.n}, {len(self.family)} sets: {self.value!r}"
        for s, c in self.family:
            yield "  " * (depth + 1) + "E = {" + ", ".join(map(str, s)) + "}"
            yield from c.lines(depth + 2)


Certificate = Union[Leaf, Node]


def certificate_is_admissible(cert: Certificate, rule: AdmissibilityRule,
                              growth: GrowthFunction) -> bool:
    """Check the family structure of a certificate tree against the rule."""
    rule, growth = AdmissibilityRule(rule), GrowthFunction(growth)
    if isinstance(cert, Leaf):
        return True
    sets = [s for s, _ in cert.family]
    flat = [i for s in sets for i in s]
    if len(flat) != len(set(flat)) or any(len(s) == 0 for s in sets):
        return False
    if len(sets) > growth.cap(cert.n, len(sets) + 1):
        return False
    if rule is AdmissibilityRule.MIN_AFTER_N and any(min(s) < cert.n for s in sets):
        return False
    return all(certificate_is_admissible(c, rule, growth) for _, c in cert.family)


def render_certificate(cert: Certificate) -> str:
    return "\n".join(cert.lines())


def _fold(values: Sequence[float]) -> float:
    """Right-nested sum, the evaluation order shared by solver and certificates."""
    acc = 0.0
    for v in reversed(values):
        acc = v + acc
    return acc


# ---------------------------------------------------------------------------
# exact solver


class _Solver:
    """Memoized recursion over subsets of one vector's support."""

    def __init__(self, idx: Sequence[int], a: np.ndarray, rule: AdmissibilityRule,
                 growth: GrowthFunction):
        self.idx = tuple(int(i) for i in idx)
        self.a = [float(x) for x in a]
        self.rule = rule
        self.growth = growth
        self.memo: dict[int, tuple[float, tuple]] = {}

    def bits(self, mask: int) -> list[int]:
        out = []
        j = 0
        while mask:
            if mask & 1:
                out.append(j)
            mask >>= 1
            j += 1
        return out

    def value(self, mask: int) -> float:
        return self.solve(mask)[0]

    def solve(self, mask: int) -> tuple[float, tuple]:
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        pos = self.bits(mask)
        a = self.a
        j0 = max(pos, key=lambda j: (a[j], -j))
        best: tuple[float, tuple] = (a[j0], ("leaf", j0))
        if len(pos) >= 2:
            for n, tail, k in self.candidates(pos):
                if k < 2:
                    continue
                total, blocks = self.best_family(mask, tail, k)
                val = 0.5 * total
                if val > best[0]:
                    best = (val, ("node", n, blocks))
        self.memo.setdefault(mask, best)
        return best

    def candidates(self, pos: list[int]):
        """Yield ``(n, tail positions, cap)`` for the n values that matter."""
        count = len(pos)
        if self.rule is AdmissibilityRule.PER_INDEX:
            n = self.idx[pos[-1]]
            yield n, pos, self.growth.cap(n, count)
            return
        for t, j in enumerate(pos):
            n = self.idx[j]
            tail = pos[t:]
            yield n, tail, self.growth.cap(n, len(tail))

    def best_family(self, mask: int, tail: list[int], k: int) -> tuple[float, tuple]:
        if k >= len(tail):
            blocks = tuple(1 << j for j in tail)
            return _fold([self.a[j] for j in tail]), blocks
        tail_mask = 0
        for j in tail:
            tail_mask |= 1 << j
        table: dict[tuple[int, int], tuple[float, tuple]] = {}

        def part(rest: int, left: int) -> tuple[float, tuple]:
            if rest == 0:
                return 0.0, ()
            if left == 0:
                return -math.inf, ()
            key = (rest, left)
            hit = table.get(key)
            if hit is not None:
                return hit
            low = rest & -rest
            others = rest ^ low
            best = (-math.inf, ())
            sub = others
            while True:
                block = sub | low
                if block != mask:
                    tail_val, tail_blocks = part(rest ^ block, left - 1)
                    if tail_val > -math.inf:
                        total = self.value(block) + tail_val
                        if total > best[0]:
                            best = (total, (block,) + tail_blocks)
                if sub == 0:
                    break
                sub = (sub - 1) & others
            table[key] = best
            return best

        return part(tail_mask, k)

    def certificate(self, mask: int) -> Certificate:
        val, choice = self.solve(mask)
        if choice[0] == "leaf":
            return Leaf(val, self.idx[choice[1]])
        _, n, blocks = choice
        family = tuple((tuple(self.idx[j] for j in self.bits(b)), self.certificate(b))
                       for b in blocks)
        return Node(val, n, family)


def _check_cap(size: int, cap: int):
    if size > cap:
        raise SupportTooLarge(
            f"support of size {size} exceeds the exact-solver cap {cap}; "
            "use t_norm_interval_lb for a scalable lower bound")


def t_norm_exact(v: FiniteVector, rule: AdmissibilityRule = AdmissibilityRule.MIN_AFTER_N,
                 growth: GrowthFunction = GrowthFunction.POWER,
                 cap: int = DEFAULT_SUPPORT_CAP) -> tuple[float, Certificate]:
    """Exact implicit norm of ``v`` together with a certificate tree."""
    rule, growth = AdmissibilityRule(rule), GrowthFunction(growth)
    if not v:
        return 0.0, Leaf(0.0, 0)
    _check_cap(len(v), cap)
    s = _Solver(v.indices, np.abs(v.array()), rule, growth)
    full = (1 << len(v)) - 1
    return s.value(full), s.certificate(full)


@lru_cache(maxsize=65536)
def _cached_norm(idx: tuple[int, ...], vals: tuple[float, ...], rule, growth):
    s = _Solver(idx, np.asarray(vals), rule, growth)
    full = (1 << len(idx)) - 1
    return s.value(full), s.certificate(full)


def _nonzero(idx, a):
    a = np.asarray(a, dtype=float)
    keep = a > 0
    return tuple(int(i) for i, k in zip(idx, keep) if k), tuple(a[keep].tolist())


def t_norm_array(idx, a, rule=AdmissibilityRule.MIN_AFTER_N, growth=GrowthFunction.POWER,
                 cap: int = DEFAULT_SUPPORT_CAP) -> float:
    sub_idx, vals = _nonzero(idx, a)
    if not sub_idx:
        return 0.0
    _check_cap(len(sub_idx), cap)
    return _cached_norm(sub_idx, vals, AdmissibilityRule(rule), GrowthFunction(growth))[0]


def t_functional_array(idx, a, rule=AdmissibilityRule.MIN_AFTER_N,
                       growth=GrowthFunction.POWER) -> np.ndarray:
    """Norming functional read off the certificate, as an array aligned with ``idx``."""
    sub_idx, vals = _nonzero(idx, a)
    out = np.zeros(len(idx))
    if not sub_idx:
        return out
    _, cert = _cached_norm(sub_idx, vals, AdmissibilityRule(rule), GrowthFunction(growth))
    coef = cert.functional()
    for k, i in enumerate(idx):
        out[k] = coef.get(int(i), 0.0)
    return out


def certificate_functional(cert: Certificate) -> FiniteVector:
    return FiniteVector.from_dict(cert.functional())


# ---------------------------------------------------------------------------
# interval lower bound


def t_norm_interval_lb(v: FiniteVector, rule: AdmissibilityRule = AdmissibilityRule.MIN_AFTER_N,
                       growth: GrowthFunction = GrowthFunction.POWER) -> float:
    """Supremum restricted to families of consecutive support intervals.

    Runs in polynomial time for any support size and never exceeds the
    exact norm.
    """
    rule, growth = AdmissibilityRule(rule), GrowthFunction(growth)
    if not v:
        return 0.0
    idx = v.indices
    a = np.abs(v.array()).tolist()
    m = len(a)
    F: dict[tuple[int, int], float] = {}

    def best_split(lo: int, hi: int, start: int, k: int) -> float:
        # partition [start, hi) into at most k intervals, never the whole [lo, hi)
        length = hi - start
        if k >= length:
            return _fold(a[start:hi])
        P = [[-math.inf] * (k + 1) for _ in range(length + 1)]
        P[length] = [0.0] * (k + 1)
        for s in range(length - 1, -1, -1):
            for left in range(1, k + 1):
                best = -math.inf
                for e in range(s + 1, length + 1):
                    if start + s == lo and start + e == hi:
                        continue
                    rest = P[e][left - 1]
                    if rest == -math.inf:
                        continue
                    cand = F[(start + s, start + e)] + rest
                    if cand > best:
                        best = cand
                P[s][left] = best
        return P[0][k]

    for width in range(1, m + 1):
        for lo in range(0, m - width + 1):
            hi = lo + width
            val = max(a[lo:hi])
            if width >= 2:
                if rule is AdmissibilityRule.PER_INDEX:
                    starts = [(lo, growth.cap(idx[hi - 1], width))]
                else:
                    starts = [(s, growth.cap(idx[s], hi - s)) for s in range(lo, hi)]
                for s, k in starts:
                    if k < 2:
                        continue
                    val = max(val, 0.5 * best_split(lo, hi, s, k))
            F[(lo, hi)] = val
    return F[(0, m)]


def tp_norm(v: FiniteVector, p: float, rule: AdmissibilityRule = AdmissibilityRule.MIN_AFTER_N,
            growth: GrowthFunction = GrowthFunction.POWER, cap: int = DEFAULT_SUPPORT_CAP) -> float:
    """Norm in the ``p``-convexification of the Tsirelson-type space."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if not v:
        return 0.0
    return t_norm_exact(pointwise_power(v, p), rule, growth, cap)[0] ** (1.0 / p)


# ---------------------------------------------------------------------------
# blocking lemma and lower estimates


@dataclass(frozen=True)
class BlockingCheck:
    holds: bool
    lhs: float
    rhs: float
    epsilon: float


def lemma54_check(m: Sequence[int], a: Sequence[float], q: float,
                  rtol: float = 1e-12) -> BlockingCheck:
    """Largest block sum versus ``(1+eps)^(-1/q) * ||a||_q``.

    Blocks are ``[m_k, m_{k+1})`` with the last one unbounded, and
    ``eps = sum_{k>=2} (m_k - m_{k-1})^(1-q)``.  ``a`` is indexed from 1.
    """
    m = [int(x) for x in m]
    a = [float(x) for x in a]
    if q <= 1:
        raise ValueError("q must exceed 1")
    if not m or m[0] != 1 or any(y <= x for x, y in zip(m, m[1:])):
        raise ValueError("m must be strictly increasing with m_1 = 1")
    if any(x < 0 for x in a) or any(y > x for x, y in zip(a, a[1:])):
        raise ValueError("a must be nonincreasing and nonnegative")
    eps = math.fsum((y - x) ** (1.0 - q) for x, y in zip(m, m[1:]))
    bounds = m + [max(len(a), m[-1]) + 1]
    sums = [math.fsum(a[lo - 1:hi - 1]) for lo, hi in zip(bounds, bounds[1:])]
    lhs = max(sums) if sums else 0.0
    rhs = (1.0 + eps) ** (-1.0 / q) * math.fsum(x ** q for x in a) ** (1.0 / q)
    return BlockingCheck(lhs >= rhs * (1.0 - rtol), lhs, rhs, eps)


def concavity_threshold(q: float, p: float = 1.0) -> int:
    """First index of the tail: ``ceil(2^(r/(r-p)))`` with ``r = q*p``."""
    r = q * p
    expo = r / (r - p)
    if expo * math.log(2) > math.log(MAX_PRACTICAL_INDEX):
        raise ValueError(f"tail start 2^{expo:g} exceeds the practical index range")
    return math.ceil(2.0 ** expo - 1e-9)


@dataclass(frozen=True)
class LowerEstimateSearch:
    worst_ratio: float
    witness: tuple[FiniteVector, ...]
    tail_start: int
    bound: float
    trials: int
    seed: int

    @property
    def holds(self) -> bool:
        return self.worst_ratio >= self.bound


def _lower_ratio(family, q, p, rule, growth, cap):
    total = FiniteVector()
    for x in family:
        total = total + x
    num = tp_norm(total, p, rule, growth, cap)
    den = math.fsum(tp_norm(x, p, rule, growth, cap) ** (q * p) for x in family) ** (1.0 / (q * p))
    return num / den


def random_disjoint_family(rng: np.random.Generator, start: int, total_support: int,
                           width: int = 24) -> list[FiniteVector]:
    """Disjoint vectors on indices ``>= start`` with at most ``total_support`` coordinates."""
    size = int(rng.integers(1, total_support + 1))
    pool = start + rng.choice(width, size=size, replace=False)
    pool.sort()
    k = int(rng.integers(1, size + 1))
    labels = rng.integers(0, k, size=size)
    mode = rng.integers(0, 3)
    if mode == 0:
        mags = np.ones(size)
    elif mode == 1:
        mags = rng.uniform(0.05, 1.0, size=size)
    else:
        mags = np.exp(rng.normal(scale=1.0, size=size))
    fam = []
    for lab in range(k):
        sel = labels == lab
        if sel.any():
            fam.append(FiniteVector.from_pairs(zip(pool[sel].tolist(), mags[sel].tolist())))
    return fam


def lower_q_constant_search(q: float, p: float = 1.0, trials: int = 1000, seed: int = 0,
                            rule: AdmissibilityRule = AdmissibilityRule.MIN_AFTER_N,
                            growth: GrowthFunction = GrowthFunction.POWER,
                            cap: int = DEFAULT_SUPPORT_CAP,
                            tail_start: Optional[int] = None) -> LowerEstimateSearch:
    """Empirical floor of the lower ``q*p`` estimate of the tail basis in ``T^p``.

    Families are sampled on ``[N, inf)`` and each sample is pushed downhill
    by a few multiplicative magnitude moves.  The floor is compared with
    ``2^(-(1+1/q)/p)``.
    """
    if not 1.0 < q:
        raise ValueError("q must exceed 1")
    N = concavity_threshold(q, p) if tail_start is None else int(tail_start)
    rng = np.random.default_rng(seed)
    worst = math.inf
    witness: tuple[FiniteVector, ...] = ()
    for _ in range(trials):
        fam = random_disjoint_family(rng, N, cap)
        r = _lower_ratio(fam, q, p, rule, growth, cap)
        for _ in range(4):
            j = int(rng.integers(len(fam)))
            factor = float(np.exp(rng.normal(scale=0.7)))
            trial = fam[:j] + [fam[j] * factor] + fam[j + 1:]
            rt = _lower_ratio(trial, q, p, rule, growth, cap)
            if rt < r:
                fam, r = trial, rt
        if r < worst:
            worst, witness = r, tuple(fam)
    bound = 2.0 ** (-(1.0 + 1.0 / q) / p)
    return LowerEstimateSearch(worst, witness, N, bound, trials, seed)


def shift_ratio_band(samples: int = 200, seed: int = 0, support: int = 8, width: int = 16,
                     rule: AdmissibilityRule = AdmissibilityRule.MIN_AFTER_N,
                     growth: GrowthFunction = GrowthFunction.POWER) -> tuple[float, float]:
    """Observed range of ``||shift(v)|| / ||v||`` over random small vectors."""
    rng = np.random.default_rng(seed)
    lo, hi = math.inf, 0.0
    for _ in range(samples):
        size = int(rng.integers(1, support + 1))
        ix = 1 + rng.choice(width, size=size, replace=False)
        vals = rng.uniform(-1, 1, size=size)
        v = FiniteVector.from_pairs(zip(ix.tolist(), vals.tolist()))
        if not v:
            continue
        r = t_norm_exact(v.shift(1), rule, growth)[0] / t_norm_exact(v, rule, growth)[0]
        lo, hi = min(lo, r), max(hi, r)
    return lo, hi


def cache_dir() -> Optional[str]:
    return os.environ.get("LAB_CACHE_DIR") or None
