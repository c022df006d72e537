"""Small nonsmooth convex solvers used behind the norm and Mazur oracles.

Everything here works on plain numpy vectors of dimension at most a few
dozen, which is all the laboratory ever needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class MinimizeResult:
    x: np.ndarray
    fun: float
    iterations: int
    evaluations: int
    converged: bool


def ralg(fg: Callable[[np.ndarray], tuple[float, np.ndarray]], x0: np.ndarray, *,
         h0: float = 1.0, alpha: float = 3.0, q1: float = 1.0, q2: float = 1.1,
         nh: int = 3, xtol: float = 1e-13, gtol: float = 1e-14,
         maxiter: int = 3000) -> MinimizeResult:
    """Shor's r-algorithm with adaptive step (Stetsyuk's ``ralgb5`` variant).

    ``fg`` returns the objective and one subgradient.  Space dilation along
    differences of successive subgradients lets the method slide along
    the kinks that stall coordinate descent on max-type functions.
    """
    x = np.array(x0, dtype=float)
    n = x.size
    B = np.eye(n)
    f, g = fg(x)
    nevals = 1
    best_x, best_f = x.copy(), f
    h = h0
    g1 = B.T @ g
    if np.linalg.norm(g1) < gtol:
        return MinimizeResult(x, f, 0, nevals, True)
    converged = False
    it = 0
    for it in range(1, maxiter + 1):
        dx = B @ (g1 / np.linalg.norm(g1))
        d = 1.0
        ls = 0
        ddx = 0.0
        while d > 0 and ls < 500:
            x = x - h * dx
            ddx += h * np.linalg.norm(dx)
            f, g = fg(x)
            nevals += 1
            if f < best_f:
                best_f, best_x = f, x.copy()
            ls += 1
            if ls % nh == 0:
                h *= q2
            d = float(dx @ g)
        if ls == 1:
            h *= q1
        g2 = B.T @ g
        dg = g2 - g1
        ndg = np.linalg.norm(dg)
        if ndg > 1e-300:
            xi = dg / ndg
            B = B + (1.0 / alpha - 1.0) * np.outer(B @ xi, xi)
        g1 = B.T @ g
        if np.linalg.norm(g1) < gtol or ddx < xtol:
            converged = True
            break
        if not np.all(np.isfinite(x)):
            break
    return MinimizeResult(best_x, best_f, it, nevals, converged)


def golden_min(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12,
               maxiter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal function on ``[a, b]``; returns ``(t, f(t))``."""
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * (1.0 + abs(c) + abs(d)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    if fc <= fd:
        return c, fc
    return d, fd


def coordinate_descent(f: Callable[[np.ndarray], float], x0: np.ndarray, *, span: float = 1.0,
                       sweeps: int = 50, tol: float = 1e-12) -> MinimizeResult:
    """Exact coordinate minimization of a convex function by golden section.

    Each coordinate is searched on a bracket that doubles until the
    minimizer is interior, so steps are multiplicative when ``x`` holds
    logarithms.
    """
    x = np.array(x0, dtype=float)
    fx = f(x)
    nevals = 1
    converged = False
    k = 0
    for k in range(1, sweeps + 1):
        start = fx
        for i in range(x.size):
            base = x[i]

            def fi(t, i=i):
                y = x.copy()
                y[i] = t
                return f(y)

            w = span
            lo, hi = base - w, base + w
            flo, fhi = fi(lo), fi(hi)
            nevals += 2
            while flo < fx and w < 1e6:
                w *= 2
                lo = base - w
                flo = fi(lo)
                nevals += 1
            while fhi < fx and w < 1e6:
                w *= 2
                hi = base + w
                fhi = fi(hi)
                nevals += 1
            t, ft = golden_min(fi, lo, hi, tol=1e-13)
            nevals += 60
            if ft < fx:
                x[i] = t
                fx = ft
        if start - fx <= tol * max(1.0, abs(fx)):
            converged = True
            break
    return MinimizeResult(x, fx, k, nevals, converged)
