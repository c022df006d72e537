"""Composable descriptions of 1-unconditional sequence spaces and their oracles.

A :class:`SpaceSpec` is an immutable tree.  Every node knows how to
evaluate its norm on a nonnegative vector living on a tuple of indices,
and how to produce a norming functional (a subgradient of the norm).
The public entry points :func:`norm`, :func:`dual_norm` and
:func:`norming_functional` accept signed :class:`FiniteVector` inputs and
use 1-unconditionality to reduce to absolute values.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import optimize

from . import tsirelson as _ts
from .calderon import CalderonResult, calderon_norm
from .vectors import FiniteVector

EXACT_TOL = 1e-9
OPT_TOL = 1e-6


class SpaceError(ValueError):
    """Invalid space description (bad exponent, cycle, overlapping blocks)."""


def _check_exponent(p: float, *, allow_inf: bool, lower: float = 1.0) -> float:
    p = float(p)
    if math.isnan(p) or p < lower or (math.isinf(p) and not allow_inf):
        raise SpaceError(f"invalid exponent {p!r}")
    return p


def conjugate(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


class SpaceSpec:
    """Base class; concrete nodes are frozen dataclasses below."""

    closed_form = True

    def _norm(self, idx: tuple[int, ...], a: np.ndarray) -> float:
        raise NotImplementedError

    def _functional(self, idx: tuple[int, ...], a: np.ndarray, prefer=None) -> np.ndarray:
        raise NotImplementedError

    def _dual_norm(self, idx: tuple[int, ...], c: np.ndarray) -> Optional[float]:
        """Closed-form dual norm of a nonnegative functional, or ``None``."""
        return None

    def children(self) -> tuple["SpaceSpec", ...]:
        return ()

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Lp(SpaceSpec):
    p: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "p", _check_exponent(self.p, allow_inf=True))

    def _norm(self, idx, a):
        a = np.asarray(a, dtype=float)
        if a.size == 0:
            return 0.0
        p = self.p
        if p == 1:
            return float(math.fsum(a))
        m = float(a.max())
        if math.isinf(p) or m == 0.0:
            return m
        if p == 2:
            return float(m * math.sqrt(math.fsum((a / m) ** 2)))
        return float(m * math.fsum((a / m) ** p) ** (1.0 / p))

    def _functional(self, idx, a, prefer=None):
        a = np.asarray(a, dtype=float)
        p = self.p
        if p == 1:
            return np.ones_like(a)
        if math.isinf(p):
            g = np.zeros_like(a)
            m = a.max()
            ties = a >= m * (1.0 - 1e-9)
            if prefer is not None and np.sum(np.asarray(prefer)[ties]) > 0:
                w = np.asarray(prefer, dtype=float) * ties
                g = w / w.sum()
            else:
                g[int(np.argmax(a))] = 1.0
            return g
        n = self._norm(idx, a)
        return (a / n) ** (p - 1.0)

    def _dual_norm(self, idx, c):
        return Lp(conjugate(self.p))._norm(idx, c)

    def to_json(self):
        return {"type": "lp", "p": "inf" if math.isinf(self.p) else self.p}


@dataclass(frozen=True)
class Tsirelson(SpaceSpec):
    rule: _ts.AdmissibilityRule = _ts.AdmissibilityRule.MIN_AFTER_N
    growth: _ts.GrowthFunction = _ts.GrowthFunction.POWER

    closed_form = False

    def __post_init__(self):
        object.__setattr__(self, "rule", _ts.AdmissibilityRule(self.rule))
        object.__setattr__(self, "growth", _ts.GrowthFunction(self.growth))

    def _norm(self, idx, a):
        return _ts.t_norm_array(idx, a, self.rule, self.growth)

    def _functional(self, idx, a, prefer=None):
        return _ts.t_functional_array(idx, a, self.rule, self.growth)

    def to_json(self):
        return {"type": "tsirelson", "rule": self.rule.value, "growth": self.growth.value}


@dataclass(frozen=True)
class Convexify(SpaceSpec):
    """``||x|| = || |x|^p ||_base^(1/p)``.

    Exponents below one (concavifications) are rejected unless
    ``allow_concave`` is set; they are only norms when the base is
    ``1/p``-convex, which the caller must guarantee.
    """

    base: SpaceSpec
    p: float
    allow_concave: bool = field(default=False, compare=True)

    def __post_init__(self):
        lower = 1e-12 if self.allow_concave else 1.0
        object.__setattr__(self, "p", _check_exponent(self.p, allow_inf=False, lower=lower))

    @property
    def closed_form(self):
        return self.base.closed_form

    def children(self):
        return (self.base,)

    def _norm(self, idx, a):
        a = np.asarray(a, dtype=float)
        return self.base._norm(idx, a ** self.p) ** (1.0 / self.p)

    def _functional(self, idx, a, prefer=None):
        a = np.asarray(a, dtype=float)
        y = a ** self.p
        ny = self.base._norm(idx, y)
        if ny == 0:
            return np.zeros_like(a)
        g = self.base._functional(idx, y, prefer=prefer)
        return ny ** (1.0 / self.p - 1.0) * g * a ** (self.p - 1.0)

    def to_json(self):
        d = {"type": "convexify", "base": self.base.to_json(), "p": self.p}
        if self.allow_concave:
            d["allow_concave"] = True
        return d


@dataclass(frozen=True)
class Interpolate(SpaceSpec):
    """Calderón product ``Y^theta Z^(1-theta)``."""

    Y: SpaceSpec
    Z: SpaceSpec
    theta: float

    closed_form = False

    def __post_init__(self):
        t = float(self.theta)
        if not 0.0 < t < 1.0:
            raise SpaceError("theta must lie in (0, 1)")
        object.__setattr__(self, "theta", t)

    def children(self):
        return (self.Y, self.Z)

    def calderon(self, idx, a) -> CalderonResult:
        return calderon_norm(self.Y, self.Z, self.theta, tuple(idx), np.asarray(a, dtype=float))

    def _norm(self, idx, a):
        return self.calderon(idx, a).value

    def _functional(self, idx, a, prefer=None):
        return self.calderon(idx, a).functional

    def _dual_norm(self, idx, c):
        # finite-dimensional Calderón duality: (Y^t Z^(1-t))* = (Y*)^t (Z*)^(1-t)
        dual = Interpolate(simplify(Dual(self.Y)), simplify(Dual(self.Z)), self.theta)
        return dual._norm(idx, c)

    def to_json(self):
        return {"type": "interpolate", "Y": self.Y.to_json(), "Z": self.Z.to_json(),
                "theta": self.theta}


@dataclass(frozen=True)
class Dual(SpaceSpec):
    base: SpaceSpec

    closed_form = False

    def children(self):
        return (self.base,)

    def _norm(self, idx, a):
        return _dual_norm_arrays(self.base, tuple(idx), np.asarray(a, dtype=float)).value

    def _functional(self, idx, a, prefer=None):
        res = _dual_norm_arrays(self.base, tuple(idx), np.asarray(a, dtype=float))
        w = res.witness_array
        nw = self.base._norm(idx, w)
        return w / nw if nw > 0 else w

    def _dual_norm(self, idx, c):
        return self.base._norm(idx, c)

    def to_json(self):
        return {"type": "dual", "base": self.base.to_json()}


@dataclass(frozen=True)
class DirectSum(SpaceSpec):
    """Parts acting on index blocks, combined by an outer norm.

    ``blocks[k] = (lo, hi)`` is an inclusive index range (``hi=None`` means
    unbounded).  Part ``k`` sees its block reindexed to start at 1, and the
    outer space sees the part norms at indices ``1..len(parts)``.
    """

    parts: tuple[SpaceSpec, ...]
    blocks: tuple[tuple[int, Optional[int]], ...]
    outer: SpaceSpec = Lp(1.0)

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "blocks", tuple((int(lo), None if hi is None else int(hi))
                                                 for lo, hi in self.blocks))
        if len(self.parts) != len(self.blocks) or not self.parts:
            raise SpaceError("need one block per part")
        spans = sorted(self.blocks)
        for (lo, hi) in spans:
            if lo < 1 or (hi is not None and hi < lo):
                raise SpaceError(f"bad block {(lo, hi)}")
        for (lo1, hi1), (lo2, _) in zip(spans, spans[1:]):
            if hi1 is None or hi1 >= lo2:
                raise SpaceError("direct-sum blocks overlap")

    @property
    def closed_form(self):
        return all(p.closed_form for p in self.parts) and self.outer.closed_form

    def children(self):
        return tuple(self.parts) + (self.outer,)

    def block_of(self, i: int) -> int:
        for k, (lo, hi) in enumerate(self.blocks):
            if i >= lo and (hi is None or i <= hi):
                return k
        raise SpaceError(f"index {i} lies in no block")

    def _split(self, idx):
        groups: dict[int, list[int]] = {}
        for pos, i in enumerate(idx):
            groups.setdefault(self.block_of(i), []).append(pos)
        return groups

    def _part_norms(self, idx, a):
        groups = self._split(idx)
        norms = np.zeros(len(self.parts))
        for k, positions in groups.items():
            lo = self.blocks[k][0]
            local = tuple(idx[j] - lo + 1 for j in positions)
            norms[k] = self.parts[k]._norm(local, a[positions])
        return groups, norms

    def _outer_idx(self):
        return tuple(range(1, len(self.parts) + 1))

    def _norm(self, idx, a):
        a = np.asarray(a, dtype=float)
        _, norms = self._part_norms(idx, a)
        return self.outer._norm(self._outer_idx(), norms)

    def _functional(self, idx, a, prefer=None):
        a = np.asarray(a, dtype=float)
        groups, norms = self._part_norms(idx, a)
        h = self.outer._functional(self._outer_idx(), norms)
        g = np.zeros_like(a)
        for k, positions in groups.items():
            if norms[k] == 0:
                continue
            lo = self.blocks[k][0]
            local = tuple(idx[j] - lo + 1 for j in positions)
            g[positions] = h[k] * self.parts[k]._functional(local, a[positions])
        return g

    def to_json(self):
        return {"type": "direct_sum", "parts": [p.to_json() for p in self.parts],
                "blocks": [[lo, hi] for lo, hi in self.blocks], "outer": self.outer.to_json()}


# ---------------------------------------------------------------------------
# structural helpers


def validate(space: SpaceSpec) -> SpaceSpec:
    """Reject cyclic trees (only reachable through mutation hacks)."""
    path: set[int] = set()

    def walk(node):
        if not isinstance(node, SpaceSpec):
            raise SpaceError(f"{node!r} is not a space description")
        if id(node) in path:
            raise SpaceError("cyclic space description")
        path.add(id(node))
        for c in node.children():
            walk(c)
        path.discard(id(node))

    walk(space)
    return space


def simplify(space: SpaceSpec) -> SpaceSpec:
    """Rewrite closed-form reductions; interpolation nodes are kept as is."""
    if isinstance(space, Convexify):
        base = simplify(space.base)
        if space.p == 1:
            return base
        if isinstance(base, Lp):
            return Lp(base.p * space.p)
        if isinstance(base, Convexify):
            return simplify(Convexify(base.base, base.p * space.p,
                                      allow_concave=space.allow_concave or base.allow_concave))
        return Convexify(base, space.p, allow_concave=space.allow_concave)
    if isinstance(space, Dual):
        base = simplify(space.base)
        if isinstance(base, Lp):
            return Lp(conjugate(base.p))
        if isinstance(base, Dual):
            return base.base
        return Dual(base)
    if isinstance(space, Interpolate):
        return Interpolate(simplify(space.Y), simplify(space.Z), space.theta)
    if isinstance(space, DirectSum):
        return DirectSum(tuple(simplify(p) for p in space.parts), space.blocks, simplify(space.outer))
    return space


def space_from_json(doc) -> SpaceSpec:
    if not isinstance(doc, dict) or "type" not in doc:
        raise SpaceError(f"bad space document {doc!r}")
    kind = doc["type"]

    def exponent(v):
        return math.inf if v in ("inf", "infinity", float("inf")) else float(v)

    def keys(*allowed):
        extra = set(doc) - {"type", *allowed}
        if extra:
            raise SpaceError(f"unknown keys {sorted(extra)} for {kind}")

    if kind == "lp":
        keys("p")
        return Lp(exponent(doc["p"]))
    if kind == "tsirelson":
        keys("rule", "growth")
        return Tsirelson(doc.get("rule", "min-after-n"), doc.get("growth", "power"))
    if kind == "convexify":
        keys("base", "p", "allow_concave")
        return Convexify(space_from_json(doc["base"]), float(doc["p"]),
                         allow_concave=bool(doc.get("allow_concave", False)))
    if kind == "interpolate":
        keys("Y", "Z", "theta")
        return Interpolate(space_from_json(doc["Y"]), space_from_json(doc["Z"]), float(doc["theta"]))
    if kind == "dual":
        keys("base")
        return Dual(space_from_json(doc["base"]))
    if kind == "direct_sum":
        keys("parts", "blocks", "outer")
        return DirectSum(tuple(space_from_json(p) for p in doc["parts"]),
                         tuple((b[0], b[1]) for b in doc["blocks"]),
                         space_from_json(doc.get("outer", {"type": "lp", "p": 1})))
    raise SpaceError(f"unknown space type {kind!r}")


# ---------------------------------------------------------------------------
# public oracles


def _arrays(v: FiniteVector) -> tuple[tuple[int, ...], np.ndarray]:
    return v.indices, np.abs(v.array())


def norm(space: SpaceSpec, v: FiniteVector) -> float:
    """Norm of ``v``.

    Exact to floating precision for closed-form constructors; for
    interpolation nodes it is the upper bound given by the best
    factorization found (see :func:`interpolation_norm` for the gap).
    """
    validate(space)
    if not v:
        return 0.0
    idx, a = _arrays(v)
    return float(simplify(space)._norm(idx, a))


def interpolation_norm(space: Interpolate, v: FiniteVector) -> CalderonResult:
    idx, a = _arrays(v)
    return simplify(space).calderon(idx, a)


@dataclass(frozen=True)
class NormingFunctional:
    f: FiniteVector
    attained_value: float


def norming_functional(space: SpaceSpec, v: FiniteVector) -> NormingFunctional:
    """A unit dual vector ``f`` with ``<f, v> = ||v||``.

    For non-smooth norms one subgradient is returned: the sign pattern for
    ``l_1``, the first maximal coordinate for ``l_inf``, and the functional
    read off the optimal allowable family for Tsirelson norms.
    """
    validate(space)
    if not v:
        raise ValueError("the zero vector has no norming functional")
    idx, a = _arrays(v)
    sp = simplify(space)
    g = sp._functional(idx, a)
    signs = np.sign(v.array())
    f = FiniteVector.from_pairs(zip(idx, (g * signs).tolist()))
    return NormingFunctional(f, f.dot(v))


@dataclass(frozen=True)
class DualNormResult:
    value: float
    lower: float
    upper: float
    witness: FiniteVector
    gap: float
    converged: bool
    method: str
    witness_array: np.ndarray = field(repr=False, compare=False, default=None)

    def __float__(self):
        return float(self.value)


def _ratio_ascent(space: SpaceSpec, idx, c, x0, iters: int = 4000):
    """Entropic multiplicative ascent of ``<c, x>/||x||`` from ``x0``."""
    s = np.log(x0)
    s -= s.max()

    def ratio(s):
        x = np.exp(s)
        return float(np.dot(c, x) / space._norm(idx, x))

    r = ratio(s)
    eta = 1.0
    stall = 0
    converged = False
    for _ in range(iters):
        x = np.exp(s)
        nx = space._norm(idx, x)
        g = space._functional(idx, x)
        u = c * x / np.dot(c, x)
        w = g * x / nx
        cand = s + eta * (u - w)
        cand -= cand.max()
        rc = ratio(cand)
        if rc > r:
            gain = rc - r
            s, r = cand, rc
            eta = min(eta * 1.5, 1e6)
            stall = stall + 1 if gain <= 1e-15 * r else 0
        else:
            eta *= 0.5
            stall += 1
        if eta < 1e-12 or stall >= 30:
            converged = True
            break
    return r, np.exp(s), converged


def _cutting_plane(space: SpaceSpec, idx, c, power: float = 1.0, maxcuts: int = 500):
    """Dual norm of a polyhedral norm, or of its ``1/power``-convexification.

    With ``y = x**(1/power)`` the problem is ``max <c, y**power>`` over the
    polytope ``<phi, y> <= 1``, concave for ``power <= 1``.  Maximizing over
    the norming functionals collected so far gives an upper bound; the exact
    norm of the maximizer gives a lower bound.  Coordinate functionals seed
    the cuts.
    """
    cuts = [row for row in np.eye(c.size)]
    lower, upper, best = 0.0, math.inf, np.ones(c.size)
    y = np.full(c.size, 0.5)
    for _ in range(maxcuts):
        A = np.array(cuts)
        if power == 1.0:
            res = optimize.linprog(-c, A_ub=A, b_ub=np.ones(len(cuts)),
                                   bounds=[(0, None)] * c.size, method="highs")
            y, top = res.x, -res.fun
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                res = optimize.minimize(
                    lambda t: -float(np.dot(c, t ** power)), y,
                    jac=lambda t: -power * c * t ** (power - 1.0),
                    bounds=[(1e-15, None)] * c.size,
                    constraints=[{"type": "ineq", "fun": lambda t, A=A: 1.0 - A @ t,
                                  "jac": lambda t, A=A: -A}],
                    method="SLSQP", options={"ftol": 1e-15, "maxiter": 1000})
            y = np.maximum(res.x, 1e-15)
            # the SLSQP point may be infeasible by rounding; its value after
            # scaling back into the cut polytope is the reported bound
            y = y / max(1.0, float(np.max(A @ y)))
            top = float(np.dot(c, y ** power))
        upper = min(upper, top)
        ny = space._norm(idx, y)
        x = y ** power
        val = float(np.dot(c, x)) / ny ** power
        if val > lower:
            lower, best = val, x / ny ** power
        if upper - lower <= 1e-12 * upper:
            break
        g = space._functional(idx, y)
        if any(np.array_equal(g, cut) for cut in cuts):
            break
        cuts.append(g)
    return lower, max(upper, lower), best


def _dual_norm_arrays(space: SpaceSpec, idx, c, *, restarts: int = 8, seed: int = 0,
                      hints: Sequence[np.ndarray] = ()) -> DualNormResult:
    c = np.asarray(c, dtype=float)
    pos = c > 0
    full_w = np.zeros_like(c)
    if not pos.any():
        return DualNormResult(0.0, 0.0, 0.0, FiniteVector(), 0.0, True, "zero", full_w)
    space = simplify(space)
    closed = space._dual_norm(idx, c)
    if closed is not None and space.closed_form:
        # closed-form witness: the norming functional of c in the dual is a
        # unit vector of the primal
        dual_space = simplify(Dual(space))
        if isinstance(dual_space, Lp):
            w = dual_space._functional(idx, c)
        else:
            w = np.zeros_like(c)
        fv = FiniteVector.from_pairs(zip(idx, w.tolist()))
        return DualNormResult(closed, closed, closed, fv, 0.0, True, "closed-form", w)
    sub_idx = tuple(i for i, k in zip(idx, pos) if k)
    cs = c[pos]
    if isinstance(space, Dual):
        # finite dimensions: the bidual norm is the base norm
        val = space.base._norm(sub_idx, cs)
        full_w[pos] = space.base._functional(sub_idx, cs)
        fv = FiniteVector.from_pairs(zip(idx, full_w.tolist()))
        return DualNormResult(val, val, val, fv, 0.0, True, "bidual", full_w)
    if isinstance(space, Interpolate):
        dual = Interpolate(simplify(Dual(space.Y)), simplify(Dual(space.Z)), space.theta)
        res = dual.calderon(sub_idx, cs)
        # the product functional has norm <= 1 in the primal product space
        full_w[pos] = res.functional
        fv = FiniteVector.from_pairs(zip(idx, full_w.tolist()))
        return DualNormResult(res.value, res.lower, res.value, fv, res.gap, True,
                              "calderon-duality", full_w)
    polyhedral = None
    if isinstance(space, Tsirelson):
        polyhedral = (space, 1.0)
    elif isinstance(space, Convexify) and isinstance(space.base, Tsirelson) and space.p >= 1:
        polyhedral = (space.base, 1.0 / space.p)
    if polyhedral is not None:
        lower, upper, x = _cutting_plane(polyhedral[0], sub_idx, cs, polyhedral[1])
        full_w[pos] = x
        fv = FiniteVector.from_pairs(zip(idx, full_w.tolist()))
        return DualNormResult(lower, lower, upper, fv, upper - lower,
                              upper - lower <= 1e-9 * upper, "cutting-plane", full_w)
    rng = np.random.default_rng(seed)
    starts = [np.ones(cs.size), cs / cs.max()]
    for h in hints:
        h = np.asarray(h, dtype=float)[pos]
        if np.all(h > 0):
            starts.append(h)
    starts += [np.exp(rng.normal(scale=1.5, size=cs.size)) for _ in range(restarts)]
    values = []
    best = (-1.0, None)
    all_conv = True
    for x0 in starts:
        r, x, conv = _ratio_ascent(space, sub_idx, cs, x0)
        all_conv &= conv
        values.append(r)
        if r > best[0]:
            best = (r, x)
    value, x = best
    full_w[pos] = x / space._norm(sub_idx, x)
    upper = math.inf if closed is None else float(closed)
    fv = FiniteVector.from_pairs(zip(idx, full_w.tolist()))
    return DualNormResult(float(value), float(value), upper, fv, float(max(values) - min(values)),
                          all_conv, "ascent", full_w)


def dual_norm(space: SpaceSpec, f: FiniteVector, *, restarts: int = 8, seed: int = 0,
              hints: Sequence[FiniteVector] = ()) -> DualNormResult:
    """``sup{<f, x> : ||x|| <= 1}``.

    Closed form for ``l_p``; cutting planes for Tsirelson and
    its convexifications.  Otherwise a certified lower bound from
    entropic ascent with seeded restarts (``gap`` is their spread); optional
    ``hints`` add caller-supplied starting points.  Interpolation nodes
    also report an upper bound through finite-dimensional duality.
    """
    validate(space)
    if not f:
        return DualNormResult(0.0, 0.0, 0.0, FiniteVector(), 0.0, True, "zero", np.zeros(0))
    idx, c = _arrays(f)
    hint_arrays = [np.abs(h.dense(idx)) for h in hints]
    res = _dual_norm_arrays(space, idx, c, restarts=restarts, seed=seed, hints=hint_arrays)
    signs = np.sign(f.array())
    w = FiniteVector.from_pairs(zip(idx, (res.witness_array * signs).tolist()))
    return DualNormResult(res.value, res.lower, res.upper, w, res.gap, res.converged,
                          res.method, res.witness_array * signs)


@dataclass(frozen=True)
class DisjointEstimate:
    ratio: float
    family: tuple[FiniteVector, ...]
    direction: str
    trials: int
    seed: int


def estimate_disjoint_estimate(space: SpaceSpec, p: float, direction: str, tail_start: int,
                               trials: int, seed: int, *, total_support: int = 8,
                               width: int = 24) -> DisjointEstimate:
    """Extremal ``||sum x_k|| / (sum ||x_k||^p)^(1/p)`` over random disjoint families.

    Minimized for ``direction="lower"``, maximized for ``"upper"``.  Families
    live on indices ``>= tail_start`` and use at most ``total_support``
    coordinates in total, so Tsirelson norms stay exact.
    """
    if trials < 1 or tail_start < 1:
        raise ValueError("trials and tail_start must be positive")
    if direction not in ("upper", "lower"):
        raise ValueError("direction must be 'upper' or 'lower'")
    validate(space)
    rng = np.random.default_rng(seed)
    sign = 1.0 if direction == "upper" else -1.0
    best, best_fam = None, ()
    for _ in range(trials):
        fam = _ts.random_disjoint_family(rng, tail_start, total_support, width)
        total = FiniteVector()
        for x in fam:
            total = total + x
        parts = [norm(space, x) for x in fam]
        if p == math.inf:
            denom = max(parts)
        else:
            denom = math.fsum(n ** p for n in parts) ** (1.0 / p)
        ratio = norm(space, total) / denom
        if best is None or sign * ratio > sign * best:
            best, best_fam = ratio, tuple(fam)
    return DisjointEstimate(float(best), best_fam, direction, trials, seed)
