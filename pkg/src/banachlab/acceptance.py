"""Reproducible acceptance suite shared by ``lab accept`` and the test suite.

Every criterion returns a :class:`CriterionResult` whose ``payload`` holds
only seed-determined data (no timings), so two runs with the same seed can
be compared byte for byte.
"""

from __future__ import annotations

import json
import math
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import tsirelson as ts
from .mazur import (MazurSolution, check_lemma41, compose_map, solve_F, verify_cor43,
                    verify_lemma42)
from .metric import MapUnderTest, fit_power_law, lemma16_check, modulus_scan, sample_ball
from .oracles import tsirelson_bruteforce
from .spaces import Convexify, Interpolate, Lp, Tsirelson, norm
from .vectors import FiniteVector

INF = float("inf")


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    payload: dict
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title} -- {self.detail}"


@dataclass
class SuiteContext:
    seed: int
    solutions: list[tuple[object, MazurSolution]] = field(default_factory=list)

    def rng(self, number: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, number])


def _r(x: float) -> str:
    return repr(float(x))


def _weights(rng, dim: int) -> FiniteVector:
    w = rng.exponential(size=dim)
    w = w / w.sum()
    b = FiniteVector.from_array(w)
    # renormalize on the stored values so the sum is one to rounding
    return b * (1.0 / math.fsum(b.values))


def _max_dev(u: FiniteVector, v: FiniteVector) -> float:
    keys = sorted(u.support | v.support)
    return float(np.max(np.abs(u.dense(keys) - v.dense(keys)))) if keys else 0.0


# ---------------------------------------------------------------------------


def c1_mazur_closed_form(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(1)
    cases = []
    for p in (1.0, 1.5, 2.0, 3.0, 4.0):
        for _ in range(200):
            cases.append((p, _weights(rng, int(rng.integers(1, 17)))))
    t0 = time.perf_counter()
    sols = [(Lp(p), solve_F(Lp(p), b)) for p, b in cases]
    elapsed = time.perf_counter() - t0
    worst = 0.0
    for (p, b), (_, s) in zip(cases, sols):
        worst = max(worst, _max_dev(s.x, FiniteVector.from_pairs(
            (i, v ** (1.0 / p)) for i, v in zip(b.indices, b.values))))
    ctx.solutions += sols
    ok = worst <= 1e-6 and elapsed < 5.0
    return CriterionResult(1, "Mazur closed form on l_p", ok,
                           f"max dev {worst:.3e} (tol 1e-6), {len(cases)} solves in {elapsed:.2f}s (limit 5s)",
                           {"max_dev": _r(worst), "solves": len(cases)}, elapsed)


def c2_lemma41(ctx: SuiteContext) -> CriterionResult:
    worst_pair, worst_dual, bad, skipped = 0.0, 0.0, 0, 0
    methods: dict[str, int] = {}
    for space, s in ctx.solutions:
        if not s.converged:
            skipped += 1
            continue
        pairing, dn = check_lemma41(s, space, seed=ctx.seed)
        dp, dd = abs(pairing - 1.0), abs(dn - 1.0)
        worst_pair, worst_dual = max(worst_pair, dp), max(worst_dual, dd)
        bad += dp > 1e-6 or dd > 1e-6
        methods[s.method] = methods.get(s.method, 0) + 1
    ok = bad == 0 and len(ctx.solutions) > 0
    return CriterionResult(2, "extremal functional pairing and dual norm", ok,
                           f"{len(ctx.solutions) - skipped} converged solves, worst |<f,x>-1| {worst_pair:.2e}, "
                           f"worst |dual-1| {worst_dual:.2e}, violations {bad}, unconverged {skipped}",
                           {"worst_pair": _r(worst_pair), "worst_dual": _r(worst_dual), "violations": bad,
                            "unconverged": skipped, "methods": dict(sorted(methods.items()))})


def c3_lemma42(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(3)
    configs = [(Lp(1), Lp(INF), 0.5), (Lp(2), Lp(6), 0.5), (Lp(1), Lp(2), 0.25)]
    t0 = time.perf_counter()
    worst = {}
    for Y, Z, th in configs:
        key = f"{Y.p}/{Z.p}/{th}"
        worst[key] = 0.0
        for _ in range(50):
            b = _weights(rng, int(rng.integers(1, 9)))
            chk = verify_lemma42(Y, Z, th, b)
            worst[key] = max(worst[key], chk.max_dev)
            ctx.solutions.append((Interpolate(Y, Z, th), solve_F(Interpolate(Y, Z, th), b)))
    elapsed = time.perf_counter() - t0
    top = max(worst.values())
    ok = top <= 1e-5 and elapsed < 60.0
    return CriterionResult(3, "interpolation product identity", ok,
                           f"max dev {top:.3e} (tol 1e-5), {elapsed:.1f}s (limit 60s)",
                           {k: _r(v) for k, v in worst.items()}, elapsed)


def c4_cor43(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(4)
    worst = {}
    for X in (Lp(1), Tsirelson()):
        for th in (0.5, 1.0 / 3.0):
            key = f"{X.to_json()['type']}/{th:.4f}"
            worst[key] = 0.0
            for _ in range(25):
                b = _weights(rng, int(rng.integers(1, 7)))
                chk = verify_cor43(X, th, b)
                worst[key] = max(worst[key], chk.max_dev)
                ctx.solutions.append((X, solve_F(X, b)))
                ctx.solutions.append((Convexify(X, 1.0 / th), solve_F(Convexify(X, 1.0 / th), b)))
    top = max(worst.values())
    return CriterionResult(4, "convexification power identity", top <= 1e-5,
                           f"max dev {top:.3e} (tol 1e-5)", {k: _r(v) for k, v in worst.items()})


def c5_tsirelson(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(5)
    basis_ok = all(ts.t_norm_exact(FiniteVector.basis(k))[0] == 1.0 for k in range(1, 13))
    v4 = FiniteVector.ones([1, 2, 3, 4])
    val4 = ts.t_norm_exact(v4)[0]
    ex_ok = val4 == 1.5 and tsirelson_bruteforce(v4) == 1.5
    mismatches = 0
    for _ in range(100):
        size = int(rng.integers(1, 9))
        ix = sorted((1 + rng.choice(16, size=size, replace=False)).tolist())
        vals = (rng.integers(1, 33, size=size) / 16.0 * rng.choice((-1, 1), size=size)).tolist()
        v = FiniteVector.from_pairs(zip(ix, vals))
        mismatches += ts.t_norm_exact(v)[0] != tsirelson_bruteforce(v)
    # indices from 1 keep the two-block families of n = 1 in play, the costly case
    big = FiniteVector.from_pairs(zip(range(1, 13), rng.uniform(0.1, 1.0, size=12).tolist()))
    t0 = time.perf_counter()
    big_val = ts.t_norm_exact(big)[0]
    elapsed = time.perf_counter() - t0
    ok = basis_ok and ex_ok and mismatches == 0 and elapsed < 30.0
    return CriterionResult(5, "Tsirelson exact norms", ok,
                           f"e_k->1: {basis_ok}, |e1+..+e4|={val4}, oracle mismatches {mismatches}/100, "
                           f"12-support norm in {elapsed:.2f}s (limit 30s)",
                           {"basis": basis_ok, "e1234": _r(val4), "mismatches": mismatches,
                            "big": _r(big_val)}, elapsed)


def c6_lemma54(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(6)
    bad, worst = 0, math.inf
    for _ in range(1000):
        q = float(rng.uniform(1.05, 3.0))
        blocks = int(rng.integers(1, 8))
        m = [1]
        for _ in range(blocks):
            m.append(m[-1] + int(rng.integers(1, 20)))
        length = int(rng.integers(1, m[-1] + 10))
        a = sorted(rng.exponential(size=length).tolist(), reverse=True)
        if rng.random() < 0.3:
            a = [1.0] * length
        chk = ts.lemma54_check(m, a, q)
        bad += not chk.holds
        worst = min(worst, chk.lhs / chk.rhs if chk.rhs > 0 else math.inf)
    return CriterionResult(6, "blocking inequality", bad == 0,
                           f"violations {bad}/1000, min lhs/rhs {worst:.4f}",
                           {"violations": bad, "min_ratio": _r(worst)})


def c7_lower_q(ctx: SuiteContext) -> CriterionResult:
    t0 = time.perf_counter()
    out, ok = {}, True
    parts = []
    for q in (1.1, 1.25, 1.4):
        res = ts.lower_q_constant_search(q, trials=1000, seed=ctx.seed)
        ok &= res.holds
        out[str(q)] = {"tail_start": res.tail_start, "worst": _r(res.worst_ratio), "bound": _r(res.bound)}
        parts.append(f"q={q}: N={res.tail_start} worst {res.worst_ratio:.4f} >= {res.bound:.4f}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300.0
    return CriterionResult(7, "tail lower-q floor", ok,
                           "; ".join(parts) + f"; {elapsed:.1f}s (limit 300s)", out, elapsed)


def c8_lemma16(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(8)
    total, out = 0, {}
    for p in (2.0, 3.0):
        for delta in (0.01, 0.1, 0.5):
            dim = int(rng.integers(1, 9))
            x = sample_ball(rng, Lp(p), tuple(range(1, dim + 1)), 1.0)
            res = lemma16_check(Lp(p), p, "upper", x, delta, 10 ** 4, int(rng.integers(2 ** 31)))
            total += res.violations
            out[f"{p}/{delta}"] = {"violations": res.violations, "worst_slack": _r(res.worst_slack)}
    return CriterionResult(8, "midpoint upper inclusion", total == 0,
                           f"violations {total} over 6 x 10^4 samples", out)


def _roundtrip(X, Y, points):
    fwd, back = compose_map(X, Y), compose_map(Y, X)
    rt, npres = 0.0, 0.0
    images = []
    for v in points:
        w = fwd(v)
        images.append(w)
        u = back(w)
        rt = max(rt, _max_dev(u, v))
        npres = max(npres, abs(norm(Y, w) - norm(X, v)), abs(norm(X, u) - norm(Y, w)))
    return rt, npres, images


def c9_ball_maps(ctx: SuiteContext) -> CriterionResult:
    rng = ctx.rng(9)
    out, ok, parts = {}, True, []
    for X, Y, dmax in ((Lp(1), Lp(2), 8), (Lp(2), Lp(4), 8), (Lp(1), Tsirelson(), 6)):
        pts = [sample_ball(rng, X, tuple(range(1, int(rng.integers(1, dmax + 1)) + 1)), 1.0)
               for _ in range(1000)]
        rt, npres, images = _roundtrip(X, Y, pts)
        name = f"{X.to_json()['type']}{X.to_json().get('p', '')}->{Y.to_json()['type']}{Y.to_json().get('p', '')}"
        good = rt <= 1e-6 and npres <= 2e-6
        ok &= good
        out[name] = {"roundtrip": _r(rt), "norm": _r(npres)}
        parts.append(f"{name}: round trip {rt:.2e}, norm {npres:.2e}")
        if isinstance(Y, Tsirelson):
            # the other order starts from points of the Tsirelson ball
            tpts = [sample_ball(rng, Y, tuple(range(1, int(rng.integers(1, dmax + 1)) + 1)), 1.0)
                    for _ in range(200)]
            rt2, np2, _ = _roundtrip(Y, X, tpts)
            out[name + ":reverse"] = {"roundtrip": _r(rt2), "norm": _r(np2)}
            parts.append(f"reverse: round trip {rt2:.2e}, norm {np2:.2e}")
            for v in pts[:200]:
                ctx.solutions.append((Y, solve_F(Y, _normalize(v))))
            # two weights with one image: on span{e1, e2} the norm is the sup norm
            u1 = solve_F(Y, FiniteVector.from_array([0.3, 0.7])).x
            u2 = solve_F(Y, FiniteVector.from_array([0.5, 0.5])).x
            out[name + ":collision"] = {"F(0.3,0.7)": u1.to_json(), "F(0.5,0.5)": u2.to_json()}
            parts.append(f"F_T(0.3,0.7)={u1.values} and F_T(0.5,0.5)={u2.values}")
    return CriterionResult(9, "BallMap contracts", ok, "; ".join(parts), out)


def _normalize(v: FiniteVector) -> FiniteVector:
    a = abs(v)
    return a * (1.0 / math.fsum(a.values))


def c10_modulus(ctx: SuiteContext) -> CriterionResult:
    m = MapUnderTest.from_ball_map(compose_map(Lp(2), Lp(3)))
    scales = np.logspace(-3, 0, 13).tolist()
    est = modulus_scan(m, scales, 400, ctx.seed)
    slope, C = fit_power_law(est)
    cmax = max(e.omega_hat / e.t ** (2.0 / 3.0) for e in est)
    ok = abs(slope - 2.0 / 3.0) <= 0.05 and C <= 2.5 and cmax <= 2.5
    return CriterionResult(10, "Modulus of F_{l2,l3} (consistency check)", ok,
                           f"slope {slope:.4f} (target 0.6667 +/- 0.05), fitted C {C:.3f}, "
                           f"max omega/t^(2/3) {cmax:.3f} (limit 2.5)",
                           {"slope": _r(slope), "C": _r(C), "cmax": _r(cmax),
                            "omega": [_r(e.omega_hat) for e in est]})


CRITERIA: dict[int, Callable[[SuiteContext], CriterionResult]] = {
    1: c1_mazur_closed_form, 3: c3_lemma42, 4: c4_cor43, 9: c9_ball_maps, 2: c2_lemma41,
    5: c5_tsirelson, 6: c6_lemma54, 7: c7_lower_q, 8: c8_lemma16, 10: c10_modulus,
}

SUITES = {"all": sorted(CRITERIA) + [11], "core": sorted(CRITERIA),
          "fast": [1, 5, 6, 8, 10]}


def payload_document(results: list[CriterionResult]) -> str:
    data = [{"criterion": r.number, "passed": r.passed, "payload": r.payload}
            for r in sorted(results, key=lambda r: r.number) if r.number != 11]
    return json.dumps(data, sort_keys=True, indent=1)


def c11_determinism(ctx: SuiteContext, results: list[CriterionResult]) -> CriterionResult:
    """Rerun the core suite in a fresh interpreter and compare payloads."""
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "payload.json")
        cmd = [sys.executable, "-m", "banachlab.cli", "accept", "--suite", "core",
               "--seed", str(ctx.seed), "--payload-out", path, "--quiet"]
        env = dict(os.environ)
        env.pop("LAB_CACHE_DIR", None)
        subprocess.run(cmd, check=False, env=env, capture_output=True)
        other = open(path).read() if os.path.exists(path) else ""
    mine = payload_document(results)
    same = other == mine
    return CriterionResult(11, "Determinism across reruns", same,
                           "rerun payload byte-identical" if same else "rerun payload differs",
                           {"bytes": len(mine)})


def run_suite(seed: int = 7, suite: str = "all", numbers: Optional[list[int]] = None,
              report: Optional[Callable[[CriterionResult], None]] = None) -> list[CriterionResult]:
    wanted = numbers if numbers is not None else SUITES[suite]
    ctx = SuiteContext(seed)
    order = [1, 3, 4, 9, 2, 5, 6, 7, 8, 10]
    if 2 in wanted:
        # the pairing and dual-norm check runs over the solves of the Mazur criteria
        wanted = sorted(set(wanted) | {1, 3, 4, 9})
    results = []
    for n in order:
        if n not in wanted:
            continue
        t0 = time.perf_counter()
        res = CRITERIA[n](ctx)
        res.seconds = res.seconds or time.perf_counter() - t0
        results.append(res)
        if report:
            report(res)
    if 11 in wanted:
        res = c11_determinism(ctx, results)
        results.append(res)
        if report:
            report(res)
    return sorted(results, key=lambda r: r.number)
