"""Approximate midpoints, large-scale Lipschitz constants and moduli of continuity.

All estimators here are sampled sups, so they are lower bounds for the
true quantities.  Every random draw goes through an explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .mazur import BallMap
from .spaces import SpaceSpec, norm
from .vectors import FiniteVector

MID_BUDGET = 10 ** 6


class SamplingError(RuntimeError):
    pass


@dataclass(frozen=True)
class MapUnderTest:
    evaluator: Callable[[FiniteVector], FiniteVector]
    source: SpaceSpec
    target: SpaceSpec
    domain_radius: Optional[float] = 1.0   # None means the whole space
    name: str = "map"

    def __call__(self, v: FiniteVector) -> FiniteVector:
        return self.evaluator(v)

    @classmethod
    def from_ball_map(cls, m: BallMap, radius: Optional[float] = 1.0) -> "MapUnderTest":
        return cls(m, m.source, m.target, radius, m.name or "ball-map")

    @classmethod
    def identity(cls, space: SpaceSpec, radius: Optional[float] = 1.0) -> "MapUnderTest":
        return cls(lambda v: v, space, space, radius, "identity")

    @classmethod
    def scaling(cls, space: SpaceSpec, c: float, radius: Optional[float] = 1.0) -> "MapUnderTest":
        return cls(lambda v: v * c, space, space, radius, f"scale({c})")

    @classmethod
    def translation(cls, space: SpaceSpec, shift: FiniteVector,
                    radius: Optional[float] = 1.0) -> "MapUnderTest":
        return cls(lambda v: v + shift, space, space, radius, "translate")


@dataclass(frozen=True)
class ModulusEstimate:
    t: float
    omega_hat: float
    samples: int
    seed: int


def dist(space: SpaceSpec, x: FiniteVector, y: FiniteVector) -> float:
    return norm(space, x - y)


# ---------------------------------------------------------------------------
# sampling law


def sample_direction(rng: np.random.Generator, space: SpaceSpec,
                     indices: Sequence[int]) -> FiniteVector:
    """Unit vector with symmetric exponential coordinates on ``indices``."""
    mags = rng.exponential(size=len(indices))
    signs = rng.choice((-1.0, 1.0), size=len(indices))
    v = FiniteVector.from_pairs(zip(indices, (mags * signs).tolist()))
    if not v:
        return sample_direction(rng, space, indices)
    return v * (1.0 / norm(space, v))


def sample_ball(rng: np.random.Generator, space: SpaceSpec, indices: Sequence[int],
                radius: float = 1.0) -> FiniteVector:
    """Random direction scaled by a radius uniform on ``[0, radius]``."""
    return sample_direction(rng, space, indices) * (radius * rng.random())


def _dims(rng: np.random.Generator, max_dim: int) -> tuple[int, ...]:
    return tuple(range(1, int(rng.integers(1, max_dim + 1)) + 1))


# ---------------------------------------------------------------------------
# midpoints


def mid_membership(space: SpaceSpec, x: FiniteVector, y: FiniteVector, delta: float,
                   z: FiniteVector) -> tuple[bool, float]:
    """Membership of ``z`` in ``Mid(x, y, delta)`` and the slack ``rhs - lhs``."""
    dxy = dist(space, x, y)
    if dxy == 0:
        raise ValueError("Mid(x, y, delta) needs x != y")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    lhs = max(dist(space, x, z), dist(space, z, y))
    slack = (1.0 + delta) * dxy / 2.0 - lhs
    return slack >= -1e-12 * dxy, slack


def sample_mid(rng: np.random.Generator, space: SpaceSpec, x: FiniteVector, y: FiniteVector,
               delta: float, extra: int = 2, budget: int = MID_BUDGET) -> FiniteVector:
    """One point of ``Mid(x, y, delta)`` by rejection around the midpoint.

    For ``delta < 1e-6`` the exact midpoint is perturbed within a radius
    that keeps membership automatic.
    """
    m = (x + y) * 0.5
    dxy = dist(space, x, y)
    top = max(x.max_index(), y.max_index(), 0)
    idx = tuple(sorted(x.support | y.support | set(range(top + 1, top + 1 + extra))))
    if delta < 1e-6:
        w = sample_ball(rng, space, idx, delta * dxy / 2.0)
        return m + w
    radius = (1.0 + delta) * dxy / 2.0
    for _ in range(budget):
        z = m + sample_ball(rng, space, idx, radius)
        if mid_membership(space, x, y, delta, z)[0]:
            return z
    raise SamplingError(f"no point of Mid found after {budget} proposals")


@dataclass(frozen=True)
class CheckResult:
    violations: int
    samples: int
    worst_slack: float
    witness: Optional[FiniteVector]
    vacuous: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.violations == 0


def lemma16_check(space: SpaceSpec, p_or_r: float, direction: str, x: FiniteVector,
                  delta: float, samples: int, seed: int, *, scale: str = "relative",
                  bound: str = "literal", extra: int = 4) -> CheckResult:
    """Sampled check of the midpoint inclusions for spaces with estimate constant one.

    ``upper``: vectors ``z`` disjoint from ``supp x`` with
    ``||z|| <= delta**(1/p) ||x||`` must lie in ``Mid(x, -x, delta)``.
    ``lower``: points of ``Mid(x, -x, delta)`` must lie within
    ``(r delta)**(1/r) ||x||`` of the span of ``supp x`` (``bound="sharp"``
    uses ``((1+delta)**r - 1)**(1/r) ||x||`` instead).  With
    ``scale="literal"`` the Mid parameter is ``delta * ||x||``.
    """
    if not x:
        raise ValueError("x must be nonzero")
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be 'upper' or 'lower'")
    if direction == "upper" and p_or_r < 1 or direction == "lower" and p_or_r < 1:
        raise ValueError("estimate exponent must be at least 1")
    rng = np.random.default_rng(seed)
    nx = norm(space, x)
    mid_delta = delta * nx if scale == "literal" else delta
    worst, witness, bad = math.inf, None, 0
    if direction == "upper":
        off = tuple(range(x.max_index() + 1, x.max_index() + 1 + extra))
        rad = delta ** (1.0 / p_or_r) * nx
        for k in range(samples):
            z = FiniteVector() if k == 0 else sample_ball(rng, space, off, rad)
            ok, slack = mid_membership(space, x, -x, mid_delta, z)
            bad += not ok
            if slack < worst:
                worst, witness = slack, z
        return CheckResult(bad, samples, worst, witness)
    r = p_or_r
    if bound == "sharp":
        limit = ((1.0 + delta) ** r - 1.0) ** (1.0 / r) * nx
    else:
        limit = (r * delta) ** (1.0 / r) * nx
    for _ in range(samples):
        z = sample_mid(rng, space, x, -x, mid_delta, extra=extra)
        off = z.restrict(i for i in z.indices if i not in x.support)
        slack = limit - norm(space, off)
        bad += slack < -1e-12 * nx
        if slack < worst:
            worst, witness = slack, z
    return CheckResult(bad, samples, worst, witness)


# ---------------------------------------------------------------------------
# Lipschitz-for-large-distances and moduli


def _pair(rng, m: MapUnderTest, t: float, idx: tuple[int, ...], crossing: bool):
    """Two points at distance at most ``t`` inside the declared domain.

    Half of the pairs straddle zero on a few coordinates (``x_i = -h_i/2``,
    ``y_i = h_i/2``), where power-type maps are least regular.
    """
    R = m.domain_radius
    x = sample_ball(rng, m.source, idx, 1.0 if R is None else R)
    h = sample_direction(rng, m.source, idx) * (t * rng.random() ** 0.25)
    if crossing:
        S = set(rng.choice(idx, size=int(rng.integers(1, min(3, len(idx)) + 1)), replace=False).tolist())
        h = h.restrict(S)
        if not h:
            return x, x
        x = x.restrict(i for i in x.indices if i not in S) + h * -0.5
    y = x + h
    if R is not None:
        big = max(norm(m.source, x), norm(m.source, y))
        if big > R:
            x, y = x * (R / big), y * (R / big)
    return x, y


def modulus_scan(m: MapUnderTest, scales: Sequence[float], samples: int, seed: int,
                 max_dim: int = 6) -> list[ModulusEstimate]:
    """Empirical ``omega(f, t)`` on the declared domain, as a cumulative max."""
    scales = [float(t) for t in scales]
    if any(t <= 0 for t in scales) or scales != sorted(scales):
        raise ValueError("scales must be positive and sorted")
    rng = np.random.default_rng(seed)
    out, running = [], 0.0
    for t in scales:
        best = 0.0
        for k in range(samples):
            idx = _dims(rng, max_dim)
            x, y = _pair(rng, m, t, idx, crossing=bool(k % 2))
            if dist(m.source, x, y) > t * (1 + 1e-12):
                continue
            best = max(best, dist(m.target, m(x), m(y)))
        running = max(running, best)
        out.append(ModulusEstimate(t, running, samples, seed))
    return out


def lipschitz_large_const(m: MapUnderTest, t: float, samples: int, seed: int,
                          max_dim: int = 6, radius: Optional[float] = None,
                          pairs: Sequence[tuple[FiniteVector, FiniteVector]] = ()) -> float:
    """Sampled ``u_t = sup ||Ux1 - Ux2|| / (t v ||x1 - x2||)``; a lower bound.

    Points are drawn from the declared domain, or from the ball of radius
    ``radius`` (default ``4 t``) when the domain is the whole space.
    Caller-supplied ``pairs`` are always included.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    rng = np.random.default_rng(seed)
    R = m.domain_radius if m.domain_radius is not None else (radius or 4.0 * t)
    best = 0.0

    def ratio(a, b):
        d = dist(m.source, a, b)
        return dist(m.target, m(a), m(b)) / max(t, d)

    for a, b in pairs:
        best = max(best, ratio(a, b))
    for _ in range(samples):
        idx = _dims(rng, max_dim)
        a = sample_ball(rng, m.source, idx, R)
        b = sample_ball(rng, m.source, idx, R)
        best = max(best, ratio(a, b))
    return best


def minimal_epsilon(m: MapUnderTest, x: FiniteVector, y: FiniteVector, u_d: float) -> float:
    """Smallest ``eps`` with ``||Ux - Uy|| >= u_d ||x - y|| / (1 + eps)``."""
    num = u_d * dist(m.source, x, y)
    den = dist(m.target, m(x), m(y))
    return math.inf if den == 0 else max(0.0, num / den - 1.0)


def lemma15_check(m: MapUnderTest, x: FiniteVector, y: FiniteVector, d: float,
                  epsilon: Optional[float], delta: float, samples: int, seed: int,
                  u_samples: int = 2000) -> CheckResult:
    """Images of sampled ``Mid(x, y, delta)`` points against ``Mid(Ux, Uy, eps+delta+eps*delta)``.

    ``u_d`` is estimated by sampling (with ``(x, y)`` included), so the
    hypothesis check is only as good as that lower estimate.  When a
    hypothesis fails the result is vacuous rather than failed.  With
    ``epsilon=None`` the smallest admissible value is used.
    """
    dxy = dist(m.source, x, y)
    if dxy < 2.0 * d / (1.0 + delta):
        return CheckResult(0, 0, math.inf, None, True, "hypothesis (i) fails")
    u_d = lipschitz_large_const(m, d, u_samples, seed, radius=max(norm(m.source, x), norm(m.source, y)),
                                pairs=[(x, y)])
    eps_min = minimal_epsilon(m, x, y, u_d)
    if epsilon is None:
        epsilon = eps_min
    if eps_min > epsilon + 1e-12:
        return CheckResult(0, 0, math.inf, None, True, f"hypothesis (ii) fails (needs eps >= {eps_min:.6g})")
    rng = np.random.default_rng(seed + 1)
    ux, uy = m(x), m(y)
    gamma = epsilon + delta + epsilon * delta
    worst, witness, bad = math.inf, None, 0
    for _ in range(samples):
        z = sample_mid(rng, m.source, x, y, delta)
        ok, slack = mid_membership(m.target, ux, uy, gamma, m(z))
        bad += not ok
        if slack < worst:
            worst, witness = slack, z
    return CheckResult(bad, samples, worst, witness, False, f"eps={epsilon:.6g}, u_d={u_d:.6g}")


def fit_power_law(estimates: Sequence[ModulusEstimate]) -> tuple[float, float]:
    """Least-squares ``log omega = log C + slope * log t``; returns ``(slope, C)``."""
    pts = [(math.log(e.t), math.log(e.omega_hat)) for e in estimates if e.omega_hat > 0]
    lt, lw = np.array(pts).T
    slope, icpt = np.polyfit(lt, lw, 1)
    return float(slope), float(math.exp(icpt))
