"""Generalized Mazur maps built from extremal geometric-mean vectors.

For a weight vector ``b`` (nonnegative, summing to one) the extremal vector
``F_X(b)`` maximizes ``sum b_i log x_i`` over the positive part of the unit
sphere of ``X``.  In log-coordinates ``s = log x`` the scale-free objective
``sum b_i s_i - log||exp(s)||`` is concave, and its stationarity condition is
the Lozanovskii relation: ``b/x`` norms ``x``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import optimize

from .optim import coordinate_descent, ralg
from .spaces import (Convexify, DirectSum, Dual, Interpolate, Lp, NormingFunctional, SpaceError,
                     SpaceSpec, Tsirelson, dual_norm, norm, simplify, validate)
from .vectors import FiniteVector, pointwise_power

KKT_TOL = 1e-6


class MazurError(RuntimeError):
    pass


def weight_vector(b: FiniteVector, tol: float = 1e-12) -> FiniteVector:
    """Validate ``b`` as a probability vector on the positive integers."""
    if not b:
        raise ValueError("weight vector is empty")
    if any(v < 0 for v in b.values):
        raise ValueError("weights must be nonnegative")
    total = math.fsum(b.values)
    if abs(total - 1.0) > tol:
        raise ValueError(f"weights sum to {total!r}, not 1")
    return b


def normalize_weights(v: FiniteVector) -> FiniteVector:
    a = abs(v)
    return a * (1.0 / math.fsum(a.values))


def geometric_mean(b: FiniteVector, x: FiniteVector) -> float:
    """``prod x_i^{b_i}`` over the support of ``b``."""
    total = 0.0
    for i, bi in zip(b.indices, b.values):
        xi = x[i]
        if xi < 0:
            raise ValueError(f"negative coordinate {xi} at index {i}")
        if bi == 0:
            continue
        if xi == 0:
            return 0.0
        total += bi * math.log(xi)
    return math.exp(total)


@dataclass
class MazurSolution:
    x: FiniteVector
    f: NormingFunctional
    value: float
    kkt_residual: float
    converged: bool
    iterations: int
    method: str
    b: FiniteVector = field(repr=False, default=None)

    def require_converged(self) -> "MazurSolution":
        if not self.converged:
            raise MazurError(f"solve did not converge (residual {self.kkt_residual:.3g})")
        return self


class _Problem:
    def __init__(self, space: SpaceSpec, idx: tuple[int, ...], b: np.ndarray):
        self.space = space
        self.idx = idx
        self.b = b
        self.evals = 0

    def x(self, s):
        s = s - s.max()
        return np.exp(s)

    def phi(self, s) -> float:
        x = self.x(s)
        self.evals += 1
        return float(np.dot(self.b, s - s.max()) - math.log(self.space._norm(self.idx, x)))

    def weights(self, s):
        x = self.x(s)
        n = self.space._norm(self.idx, x)
        g = self.space._functional(self.idx, x, prefer=self.b)
        return g * x / n, x / n

    def weight_residual(self, s) -> float:
        w, _ = self.weights(s)
        return float(np.max(np.abs(w - self.b)))

    def probe_residual(self, s, h: float = 1e-5, pairs: bool = True) -> float:
        """Largest ascent rate of the concave objective along probe directions."""
        k = s.size
        base = self.phi(s)
        worst = 0.0
        dirs = []
        for i in range(k):
            e = np.zeros(k)
            e[i] = 1.0
            dirs += [e, -e]
        if pairs:
            for i in range(k):
                for j in range(i + 1, k):
                    e = np.zeros(k)
                    e[i], e[j] = 1.0, -1.0
                    dirs += [e, -e]
        for d in dirs:
            worst = max(worst, (self.phi(s + h * d) - base) / h)
        return worst


def _lozanovskii(prob: _Problem, s, *, alpha: float = 0.5, maxiter: int = 10000,
                 tol: float = KKT_TOL):
    """Damped fixed point ``x <- normalize(b / f(x))`` in log-coordinates."""
    b = prob.b
    f_cur = prob.phi(s)
    hist = [f_cur]
    it = 0
    for it in range(1, maxiter + 1):
        w, _ = prob.weights(s)
        if np.any(w <= 0):
            return s, it, False
        step = np.log(b) - np.log(w)
        if np.max(np.abs(w - b)) <= 1e-13:
            return s, it, True
        while True:
            cand = s + alpha * step
            f_new = prob.phi(cand)
            if f_new >= f_cur or alpha < 1e-10:
                break
            alpha *= 0.5
        if f_new < f_cur:
            return s, it, False
        s, f_cur = cand, f_new
        alpha = min(1.0, alpha * 1.25)
        hist.append(f_cur)
        if len(hist) > 8:
            hist.pop(0)
            if (max(hist) - min(hist)) <= 1e-15 * max(1.0, abs(f_cur)):
                if np.max(np.abs(w - b)) <= tol:
                    return s, it, True
                return s, it, False
    return s, it, False


def _solve_polyhedral(base: SpaceSpec, idx: tuple[int, ...], b: np.ndarray, p: float = 1.0,
                      maxcols: int = 400):
    """Column generation for ``||x|| = ||x**p||_base`` ** (1/p) with a polyhedral base.

    The base norm is a max of positive functionals ``phi``, so the ball is
    ``<phi, x**p> <= 1`` for all of them.  The restricted problem over the
    functionals collected so far is solved by SLSQP in log-coordinates; the
    exact base oracle then either confirms feasibility or returns the most
    violated functional.  Optimality is certified by writing ``b / x**p``
    as a combination of collected functionals with nonnegative weights
    summing to one (NNLS).  The coordinate functionals must be among the
    norming functionals of the base.
    """
    x = b.copy()
    # coordinate functionals keep the restricted problem bounded
    cols = [row for row in np.eye(b.size)] + [base._functional(idx, x / base._norm(idx, x))]
    s = np.log(b) / p
    for rounds in range(1, maxcols + 1):
        Phi = np.array(cols)

        def cons(t, Phi=Phi):
            return 1.0 - Phi @ np.exp(p * t)

        def cons_jac(t, Phi=Phi):
            return -p * Phi * np.exp(p * t)[None, :]

        start = s - math.log(max(1.0, float(np.max(Phi @ np.exp(p * s))))) / p
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = optimize.minimize(lambda t: -float(b @ t), start, jac=lambda t: -b,
                                    constraints=[{"type": "ineq", "fun": cons, "jac": cons_jac}],
                                    method="SLSQP", options={"ftol": 1e-16, "maxiter": 1000})
        s = res.x
        y = np.exp(p * s)
        if base._norm(idx, y) <= 1.0 + 1e-13:
            break
        g = base._functional(idx, y)
        if any(np.array_equal(g, c) for c in cols):
            break
        cols.append(g)
    y = np.exp(p * s)
    y = y / base._norm(idx, y)
    Phi = np.array(cols)
    target = b / y
    lam, _ = optimize.nnls(Phi.T, target)
    resid = float(np.max(np.abs(Phi.T @ lam - target)) / np.max(target))
    kkt = max(resid, abs(float(lam.sum()) - 1.0))
    return np.log(y) / p, rounds, kkt


def solve_F(space: SpaceSpec, b: FiniteVector, *, x0: Optional[np.ndarray] = None,
            tol: float = KKT_TOL, maxiter: int = 10000, probe: bool = True) -> MazurSolution:
    """Extremal vector ``F_X(b)`` with its Lozanovskii functional ``b/x``.

    Zero weights are dropped before solving and come back as zeros.  The
    damped fixed-point iteration is tried first; if the weights it reaches
    do not match ``b`` (typical on kinks of nonsmooth norms), an
    r-algorithm ascent followed by coordinate ascent on norm values takes
    over, and optimality is then certified by probing ascent directions.
    Tsirelson targets and their convexifications are polyhedral after a
    power change and go through exact column generation instead.
    """
    validate(space)
    weight_vector(b)
    space = simplify(space)
    active = FiniteVector.from_pairs((i, v) for i, v in zip(b.indices, b.values) if v > 0)
    idx = active.indices
    bb = active.array()
    prob = _Problem(space, idx, bb)
    if x0 is not None:
        s = np.log(np.asarray(x0, dtype=float))
    else:
        s = np.log(bb)
    method = "lozanovskii"
    polyhedral = None
    if isinstance(space, Tsirelson):
        polyhedral = (space, 1.0)
    elif isinstance(space, Convexify) and isinstance(space.base, Tsirelson) and space.p >= 1:
        polyhedral = (space.base, space.p)
    if polyhedral is not None:
        method = "column-generation"
        s, iters, resid = _solve_polyhedral(polyhedral[0], idx, bb, polyhedral[1])
        ok = resid <= tol
    else:
        s, iters, ok = _lozanovskii(prob, s, maxiter=maxiter, tol=tol)
        resid = prob.weight_residual(s)
    if not ok or resid > tol:
        method = "r-algorithm"

        def fg(t):
            w, _ = prob.weights(t)
            return -prob.phi(t), -(bb - w)

        res = ralg(fg, s, h0=0.1, maxiter=3000, xtol=1e-13)
        if -res.fun >= prob.phi(s):
            s = res.x
        iters += res.iterations
        resid = prob.weight_residual(s)
        if resid > tol:
            cd = coordinate_descent(lambda t: -prob.phi(t), s, span=0.05, sweeps=30, tol=1e-15)
            if -cd.fun >= prob.phi(s):
                s = cd.x
            iters += cd.iterations
            resid = prob.weight_residual(s)
            if resid > tol and probe:
                method = "r-algorithm+probe"
                resid = min(resid, prob.probe_residual(s, pairs=len(idx) <= 8))
    x_arr = prob.x(s)
    x_arr = x_arr / space._norm(idx, x_arr)
    x_arr = x_arr / space._norm(idx, x_arr)
    nrm = space._norm(idx, x_arr)
    resid = max(resid, abs(nrm - 1.0))
    x = FiniteVector.from_pairs(zip(idx, x_arr.tolist()))
    fvec = FiniteVector.from_pairs(zip(idx, (bb / x_arr).tolist()))
    value = math.exp(float(np.dot(bb, np.log(x_arr))))
    return MazurSolution(x, NormingFunctional(fvec, fvec.dot(x)), value, float(resid),
                         bool(resid <= tol), iters, method, b)


# ---------------------------------------------------------------------------
# ball maps


@dataclass(frozen=True)
class BallMap:
    """Norm-preserving, homogeneous, sign-equivariant map between balls."""

    source: SpaceSpec
    target: SpaceSpec
    fn: Callable[[FiniteVector], FiniteVector] = field(repr=False, compare=False)
    name: str = ""

    def __call__(self, v: FiniteVector) -> FiniteVector:
        return self.fn(v)

    def then(self, other: "BallMap") -> "BallMap":
        return BallMap(self.source, other.target, lambda v: other(self(v)),
                       f"{other.name}∘{self.name}")


def _apply_signs(signs: dict[int, float], v: FiniteVector) -> FiniteVector:
    return FiniteVector.from_pairs((i, signs.get(i, 1.0) * x) for i, x in zip(v.indices, v.values))


def _from_l1(space: SpaceSpec, v: FiniteVector) -> FiniteVector:
    if not v:
        return FiniteVector()
    r = math.fsum(abs(x) for x in v.values)
    sol = solve_F(space, normalize_weights(v))
    return _apply_signs(v.signs(), sol.x * r)


def _to_l1(space: SpaceSpec, v: FiniteVector) -> FiniteVector:
    if not v:
        return FiniteVector()
    sp = simplify(space)
    idx, a = v.indices, np.abs(v.array())
    g = sp._functional(idx, a)
    return _apply_signs(v.signs(), FiniteVector.from_pairs(zip(idx, (a * g).tolist())))


def extend_map(space: SpaceSpec, direction: str = "from_l1") -> BallMap:
    """The homogeneous, sign-equivariant extension of ``F_X`` or its inverse."""
    validate(space)
    if direction == "from_l1":
        return BallMap(Lp(1), space, lambda v: _from_l1(space, v), "F")
    if direction == "to_l1":
        return BallMap(space, Lp(1), lambda v: _to_l1(space, v), "F^-1")
    raise ValueError("direction must be 'from_l1' or 'to_l1'")


def compose_map(X: SpaceSpec, Y: SpaceSpec) -> BallMap:
    """``F_{X,Y} = F_Y ∘ F_X^{-1}`` from the ball of ``X`` to the ball of ``Y``."""
    return extend_map(X, "to_l1").then(extend_map(Y, "from_l1"))


def _block_apply(m: BallMap, v: FiniteVector, lo: int) -> FiniteVector:
    local = FiniteVector(tuple(i - lo + 1 for i in v.indices), v.values)
    out = m(local)
    return FiniteVector(tuple(i + lo - 1 for i in out.indices), out.values)


def normalized_coupling(source: DirectSum, target: DirectSum,
                        maps: Sequence[Optional[BallMap]]) -> BallMap:
    """Blockwise maps rescaled so the total norm is preserved.

    ``maps[k]`` acts on block ``k`` in local coordinates (``None`` keeps the
    block unchanged); the image is ``||v|| / ||m(v)|| * m(v)``.  With
    homogeneous block maps the inverse is the same construction applied
    to the inverse maps in the opposite direction.
    """
    if source.blocks != target.blocks or len(maps) != len(source.parts):
        raise SpaceError("source and target must share the block layout")

    def fn(v: FiniteVector) -> FiniteVector:
        if not v:
            return v
        pieces = FiniteVector()
        for k, (lo, hi) in enumerate(source.blocks):
            part = v.restrict(i for i in v.indices if i >= lo and (hi is None or i <= hi))
            if maps[k] is not None and part:
                part = _block_apply(maps[k], part, lo)
            pieces = pieces + part
        scale = norm(source, v) / norm(target, pieces)
        return pieces * scale

    return BallMap(source, target, fn, "coupling")


# ---------------------------------------------------------------------------
# identity checks


@dataclass(frozen=True)
class IdentityCheck:
    lhs: FiniteVector
    rhs: FiniteVector
    max_dev: float
    residuals: tuple[float, ...] = ()


def _max_dev(u: FiniteVector, v: FiniteVector) -> float:
    keys = sorted(u.support | v.support)
    if not keys:
        return 0.0
    return float(np.max(np.abs(u.dense(keys) - v.dense(keys))))


def _product(u: FiniteVector, a: float, v: FiniteVector, c: float) -> FiniteVector:
    return pointwise_power(u, a).hadamard(pointwise_power(v, c))


def verify_lemma42(Y: SpaceSpec, Z: SpaceSpec, theta: float, b: FiniteVector) -> IdentityCheck:
    """Extremal vector of the Calderón product versus the product of extremal vectors."""
    weight_vector(b)
    lhs = solve_F(Interpolate(Y, Z, theta), b)
    fy, fz = solve_F(Y, b), solve_F(Z, b)
    rhs = _product(fy.x, theta, fz.x, 1.0 - theta)
    return IdentityCheck(lhs.x, rhs, _max_dev(lhs.x, rhs),
                         (lhs.kkt_residual, fy.kkt_residual, fz.kkt_residual))


def verify_cor43(X: SpaceSpec, theta: float, b: FiniteVector) -> IdentityCheck:
    """Extremal vector of the ``1/theta``-convexification versus the powered one."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0, 1)")
    weight_vector(b)
    lhs = solve_F(Convexify(X, 1.0 / theta), b)
    fx = solve_F(X, b)
    rhs = pointwise_power(fx.x, theta)
    return IdentityCheck(lhs.x, rhs, _max_dev(lhs.x, rhs), (lhs.kkt_residual, fx.kkt_residual))


@dataclass(frozen=True)
class Lemma44Construction:
    theta: float
    Y: SpaceSpec
    p: float
    r: float

    def space(self) -> SpaceSpec:
        if self.theta >= 1.0:
            return Lp(self.p)
        return Interpolate(Lp(self.p), self.Y, self.theta)


def construct_lemma44(p: float, r: float, X: SpaceSpec) -> Lemma44Construction:
    """Write a ``p``-convex, ``r``-concave ``X`` as ``l_p^theta Y^(1-theta)``.

    ``theta = 2p/r - 1``.  For ``p = 1`` the factor is ``Y = (X*)^(2/r')*``,
    a concavified dual taken back to the primal side; for general ``p`` the
    same recipe runs on ``X^(1/p)`` and the result is ``p``-convexified.
    Closed-form pieces are collapsed by :func:`simplify`.
    """
    p, r = float(p), float(r)
    if p < 1 or not (p <= r <= 2 * p):
        raise ValueError("need 1 <= p <= r <= 2p")
    theta = 2.0 * p / r - 1.0
    if r == p:
        return Lemma44Construction(1.0, X, p, r)
    base = X if p == 1 else Convexify(X, 1.0 / p, allow_concave=True)
    rr = r / p
    expo = 2.0 / (rr / (rr - 1.0))  # 2 / (r/p)'
    Z = Dual(Convexify(Dual(base), expo, allow_concave=True))
    Y = Z if p == 1 else Convexify(Z, p)
    return Lemma44Construction(theta, simplify(Y), p, r)


def verify_lemma44(p: float, r: float, X: SpaceSpec, vectors: Sequence[FiniteVector]) -> float:
    """Largest relative gap between ``||v||_X`` and the reconstructed product norm."""
    c = construct_lemma44(p, r, X)
    sp = c.space()
    worst = 0.0
    for v in vectors:
        nx = norm(X, v)
        worst = max(worst, abs(norm(sp, v) - nx) / nx)
    return worst


@dataclass(frozen=True)
class ModulusBound:
    leading: float
    phi0_coefficient: float
    which: str


def modulus_bound_45_46(p: float, r: float, epsilon: float, which: str = "forward") -> ModulusBound:
    """Explicit part of the modulus bounds for ``F_{l_p,X}`` and its inverse.

    Only the leading term is numeric; the remaining term is
    ``2 * phi0_coefficient * phi0(eps)`` with ``phi0`` unknown.
    """
    if not (1 <= p <= r <= 2 * p):
        raise ValueError("need 1 <= p <= r <= 2p")
    if not 0 < epsilon <= 2:
        raise ValueError("epsilon must lie in (0, 2]")
    if which == "forward":
        return ModulusBound(2.0 * epsilon ** (2.0 * p / r - 1.0), 1.0 - p / r, which)
    if which == "inverse":
        return ModulusBound(2.0 * epsilon, (1.0 - p / r) ** (1.0 / p), which)
    raise ValueError("which must be 'forward' or 'inverse'")


def check_lemma41(sol: MazurSolution, space: SpaceSpec, *, seed: int = 0,
                  restarts: int = 8) -> tuple[float, float]:
    """Return ``(<f, x>, dual norm of f)`` for a solved extremal vector."""
    pairing = sol.f.f.dot(sol.x)
    dn = dual_norm(space, sol.f.f, restarts=restarts, seed=seed, hints=(sol.x,))
    return pairing, dn.value
