"""Norm of the Calderón product ``Y^theta Z^(1-theta)`` by direct factorization search.

For ``|x| = y**theta * z**(1-theta)`` we parametrize ``y = exp(s)`` on the
support of ``x`` and force ``z = (|x| * y**-theta)**(1/(1-theta))``.  The
objective ``theta*log||y||_Y + (1-theta)*log||z||_Z`` is convex in ``s``
(lattice norms are log-convex), with subgradient ``theta*(wY - wZ)`` where
``wY = gY*y/||y||`` and ``wZ = gZ*z/||z||`` are the probability weights
carried by norming functionals.  Any factorization is an upper bound;
``gY**theta * gZ**(1-theta)`` has dual norm at most one, so it yields a
certified lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING

import numpy as np

from .optim import coordinate_descent, ralg

if TYPE_CHECKING:
    from .spaces import SpaceSpec


@dataclass(frozen=True)
class CalderonResult:
    value: float          # upper bound from the best factorization found
    lower: float          # certified lower bound <f, |x|>
    y: np.ndarray         # normalized Y factor (unit norm in Y)
    z: np.ndarray         # normalized Z factor (unit norm in Z)
    functional: np.ndarray
    iterations: int

    @property
    def gap(self) -> float:
        return max(self.value - self.lower, 0.0)


def _weights(space: "SpaceSpec", idx, v: np.ndarray, prefer=None):
    n = space._norm(idx, v)
    g = space._functional(idx, v, prefer=prefer)
    return n, g, g * v / n


def calderon_norm(Y: "SpaceSpec", Z: "SpaceSpec", theta: float, idx: tuple[int, ...],
                  a: np.ndarray, tol: float = 1e-7) -> CalderonResult:
    a = np.asarray(a, dtype=float)
    out_f = np.zeros_like(a)
    pos = a > 0
    if not pos.any():
        return CalderonResult(0.0, 0.0, np.zeros_like(a), np.zeros_like(a), out_f, 0)
    sub_idx = tuple(i for i, keep in zip(idx, pos) if keep)
    la = np.log(a[pos])
    return _calderon_cached(Y, Z, float(theta), sub_idx, la.tobytes(), idx, pos.tobytes())


@lru_cache(maxsize=4096)
def _calderon_cached(Y, Z, theta, sub_idx, la_bytes, idx, pos_bytes) -> CalderonResult:
    la = np.frombuffer(la_bytes, dtype=float)
    pos = np.frombuffer(pos_bytes, dtype=bool)
    t1 = 1.0 - theta

    def split(s):
        s = s - s.max()
        lz = (la - theta * s) / t1
        lz = lz - lz.max()
        return np.exp(s), np.exp(lz), s, lz

    def fg(s):
        y, z, s0, lz0 = split(s)
        ny, gy, wy = _weights(Y, sub_idx, y)
        nz, gz, wz = _weights(Z, sub_idx, z)
        # undo the max-shifts so the objective is comparable across points
        shift_y = s.max()
        shift_z = ((la - theta * s) / t1).max()
        f = theta * (np.log(ny) + shift_y) + t1 * (np.log(nz) + shift_z)
        return f, theta * (wy - wz)

    def mism(s):
        y, z, _, _ = split(s)
        _, _, wy = _weights(Y, sub_idx, y)
        _, _, wz = _weights(Z, sub_idx, z)
        return wy, wz, float(np.max(np.abs(wy - wz)))

    def balance(s, f_best, steps):
        # multiplicative steps push wY and wZ together; exact on smooth pairs.
        # Near the optimum the objective is flat to rounding, so a step is
        # also accepted when it keeps the value and shrinks the mismatch.
        step = 0.5
        wy, wz, mismatch = mism(s)
        for _ in range(steps):
            with np.errstate(divide="ignore"):
                d = np.log(np.maximum(wz, 1e-300)) - np.log(np.maximum(wy, 1e-300))
            if mismatch < 1e-14 or not np.all(np.isfinite(d)) or np.max(np.abs(d)) > 50:
                break
            cand = s + step * d
            f_c, _ = fg(cand)
            wy_c, wz_c, m_c = mism(cand)
            if f_c < f_best - 1e-15 * abs(f_best) or (f_c <= f_best + 1e-15 * abs(f_best)
                                                       and m_c < mismatch):
                s, f_best = cand, min(f_c, f_best)
                wy, wz, mismatch = wy_c, wz_c, m_c
                step = min(step * 1.5, 1.0)
            else:
                step *= 0.5
                if step < 1e-10:
                    break
        return s, f_best, mismatch

    s = la.copy()
    f_best, _ = fg(s)
    s, f_best, mismatch = balance(s, f_best, 400)
    iterations = 0
    if mismatch > 1e-12:
        res = ralg(fg, s, h0=0.5, xtol=1e-14, maxiter=4000)
        iterations = res.iterations
        if res.fun < f_best:
            s, f_best = res.x, res.fun
        s, f_best, mismatch = balance(s, f_best, 200)
        if not res.converged:
            cd = coordinate_descent(lambda t: fg(t)[0], s, span=0.1, sweeps=20, tol=1e-15)
            if cd.fun < f_best:
                s, f_best = cd.x, cd.fun

    y, z, _, _ = split(s)
    ny, gy, wy = _weights(Y, sub_idx, y)
    nz, gz, wz = _weights(Z, sub_idx, z)
    # re-pick subgradients on kinks so that the two weight vectors agree as
    # far as the oracles allow; any choice keeps the lower bound certified
    for _ in range(2):
        gy = Y._functional(sub_idx, y, prefer=wz)
        gz = Z._functional(sub_idx, z, prefer=wy)
        wy, wz = gy * y / ny, gz * z / nz
    yh, zh = y / ny, z / nz
    xa = np.exp(la)
    recon = yh ** theta * zh ** t1
    # recon has norm <= 1 in the product, and |x| <= max(|x|/recon) * recon
    upper = float(np.max(xa / recon))
    f_sub = gy ** theta * gz ** t1
    lower = float(np.dot(f_sub, xa))
    f_full = np.zeros(pos.size)
    f_full[pos] = f_sub
    yf = np.zeros(pos.size)
    zf = np.zeros(pos.size)
    yf[pos] = yh
    zf[pos] = zh
    return CalderonResult(upper, min(lower, upper), yf, zf, f_full, iterations)
