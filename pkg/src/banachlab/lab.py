"""Experiment manifests, result records and the operation dispatcher."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import tsirelson as ts
from .mazur import (compose_map, construct_lemma44, solve_F, verify_cor43, verify_lemma42,
                    verify_lemma44, weight_vector)
from .metric import (MapUnderTest, lemma15_check, lemma16_check, modulus_scan, sample_ball)
from .spaces import (Lp, SpaceError, dual_norm, norm, space_from_json)
from .vectors import FiniteVector

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_UNKNOWN_OPERATION = 3
EXIT_RUNTIME = 4

MANIFEST_KEYS = ("name", "operation", "parameters", "seed", "tolerances", "output")
CSV_HEADER = ("experiment", "parameters", "values", "violations", "seed", "wall_time")


class ManifestError(ValueError):
    pass


@dataclass
class ExperimentManifest:
    name: str
    operation: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0
    tolerances: dict = field(default_factory=dict)
    output: Optional[str] = None

    @classmethod
    def from_json(cls, doc: Any) -> "ExperimentManifest":
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"manifest is not valid JSON: {exc}") from None
        if not isinstance(doc, dict):
            raise ManifestError("manifest must be a JSON object")
        unknown = set(doc) - set(MANIFEST_KEYS)
        if unknown:
            raise ManifestError(f"unknown manifest keys: {sorted(unknown)}")
        for key in ("name", "operation", "seed"):
            if key not in doc:
                raise ManifestError(f"manifest lacks '{key}'")
        if not isinstance(doc["seed"], int) or isinstance(doc["seed"], bool):
            raise ManifestError("seed must be an integer")
        params = doc.get("parameters", {})
        tols = doc.get("tolerances", {})
        if not isinstance(params, dict) or not isinstance(tols, dict):
            raise ManifestError("parameters and tolerances must be objects")
        return cls(str(doc["name"]), str(doc["operation"]), params, doc["seed"], tols,
                   doc.get("output"))

    def to_json(self) -> dict:
        d = {"name": self.name, "operation": self.operation, "parameters": self.parameters,
             "seed": self.seed, "tolerances": self.tolerances}
        if self.output is not None:
            d["output"] = self.output
        return d


def _clean(x):
    """JSON-safe, deterministic rendering of result values."""
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, (np.floating,)):
        return _clean(float(x))
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, FiniteVector):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def _canon(x) -> str:
    return json.dumps(_clean(x), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ScanRecord:
    experiment: str
    parameters: dict
    values: dict
    violations: int
    seed: int
    wall_time: float = 0.0

    def row(self, timing: bool = True) -> tuple:
        return (self.experiment, _canon(self.parameters), _canon(self.values), str(self.violations),
                str(self.seed), repr(round(self.wall_time, 6)) if timing else "")

    def to_json(self, timing: bool = True) -> dict:
        d = {"experiment": self.experiment, "parameters": _clean(self.parameters),
             "values": _clean(self.values), "violations": self.violations, "seed": self.seed}
        if timing:
            d["wall_time"] = self.wall_time
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ScanRecord":
        return cls(d["experiment"], d["parameters"], d["values"], int(d["violations"]),
                   int(d["seed"]), float(d.get("wall_time", 0.0)))


def emit_report(records: list[ScanRecord], fmt: str = "csv", timing: bool = True) -> str:
    """Serialize records; identical records always give identical text."""
    if not records:
        raise ValueError("no records to report")
    if fmt == "json":
        return json.dumps([r.to_json(timing) for r in records], sort_keys=True, indent=1) + "\n"
    if fmt != "csv":
        raise ValueError("format must be 'csv' or 'json'")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row(timing))
    return buf.getvalue()


def records_from_json(text: str) -> list[ScanRecord]:
    return [ScanRecord.from_json(d) for d in json.loads(text)]


# ---------------------------------------------------------------------------
# persistence of exact Tsirelson norms


def cached_t_norm(v: FiniteVector, rule=ts.AdmissibilityRule.MIN_AFTER_N,
                  growth=ts.GrowthFunction.POWER):
    """Exact norm and certificate (as JSON) with an optional content-addressed
    store under ``LAB_CACHE_DIR``."""
    root = ts.cache_dir()
    rule, growth = ts.AdmissibilityRule(rule), ts.GrowthFunction(growth)
    if root is None:
        value, cert = ts.t_norm_exact(v, rule, growth)
        return value, cert.to_json()
    key = _canon({"rule": rule.value, "growth": growth.value, "v": abs(v).to_json()})
    digest = hashlib.sha256(key.encode()).hexdigest()
    path = os.path.join(root, "tsirelson", digest[:2], digest + ".json")
    if os.path.exists(path):
        with open(path) as fh:
            doc = json.load(fh)
        return float(doc["value"]), doc["certificate"]
    value, cert = ts.t_norm_exact(v, rule, growth)
    cert = cert.to_json()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"key": json.loads(key), "value": value, "certificate": cert}, fh)
    os.replace(tmp, path)
    return value, cert


# ---------------------------------------------------------------------------
# operations


def _vec(p, key) -> FiniteVector:
    if key not in p:
        raise ManifestError(f"missing parameter '{key}'")
    return FiniteVector.from_json(p[key])


def _space(p, key="space"):
    if key not in p:
        raise ManifestError(f"missing parameter '{key}'")
    return space_from_json(p[key])


def _tol(tols, name, default):
    return float(tols.get(name, default))


def _op_norm(p, seed, tols):
    return [({}, {"norm": norm(_space(p), _vec(p, "v"))}, 0)]


def _op_dualnorm(p, seed, tols):
    res = dual_norm(_space(p), _vec(p, "f"), restarts=int(p.get("restarts", 8)), seed=seed)
    return [({}, {"value": res.value, "lower": res.lower, "upper": res.upper, "gap": res.gap,
                  "method": res.method, "converged": res.converged}, 0)]


def _op_t_norm(p, seed, tols):
    v = _vec(p, "v")
    value, cert = cached_t_norm(v, p.get("rule", "min-after-n"), p.get("growth", "power"))
    return [({}, {"norm": value, "certificate": cert}, 0)]


def _op_lowerq(p, seed, tols):
    q = float(p["q"])
    res = ts.lower_q_constant_search(q, float(p.get("p", 1.0)), int(p.get("trials", 1000)), seed,
                                     tail_start=p.get("tail_start"))
    return [({"q": q}, {"worst_ratio": res.worst_ratio, "bound": res.bound,
                        "tail_start": res.tail_start,
                        "witness": [x.to_json() for x in res.witness]}, int(not res.holds))]


def _op_lemma54(p, seed, tols):
    if "m" in p:
        chk = ts.lemma54_check(p["m"], p["a"], float(p["q"]))
        return [({"q": float(p["q"])}, {"lhs": chk.lhs, "rhs": chk.rhs, "epsilon": chk.epsilon},
                 int(not chk.holds))]
    rng = np.random.default_rng(seed)
    out = []
    for k in range(int(p.get("instances", 1000))):
        q = float(rng.uniform(1.05, 3.0))
        m = [1]
        for _ in range(int(rng.integers(1, 8))):
            m.append(m[-1] + int(rng.integers(1, 20)))
        a = sorted(rng.exponential(size=int(rng.integers(1, m[-1] + 10))).tolist(), reverse=True)
        chk = ts.lemma54_check(m, a, q)
        out.append(({"instance": k, "q": q}, {"lhs": chk.lhs, "rhs": chk.rhs}, int(not chk.holds)))
    return out


def _op_mazur_solve(p, seed, tols):
    space = _space(p)
    b = weight_vector(_vec(p, "b"))
    sol = solve_F(space, b, tol=_tol(tols, "kkt", 1e-6))
    return [({}, {"x": sol.x, "f": sol.f.f, "value": sol.value, "kkt_residual": sol.kkt_residual,
                  "converged": sol.converged, "method": sol.method}, int(not sol.converged))]


def _op_mazur_map(p, seed, tols):
    m = compose_map(_space(p, "from"), _space(p, "to"))
    x = _vec(p, "x")
    y = m(x)
    return [({}, {"image": y, "norm_in": norm(m.source, x), "norm_out": norm(m.target, y)}, 0)]


def _weights(rng, dim):
    w = rng.exponential(size=dim)
    b = FiniteVector.from_array(w / w.sum())
    return b * (1.0 / math.fsum(b.values))


def _op_lemma42(p, seed, tols):
    Y, Z, th = _space(p, "Y"), _space(p, "Z"), float(p["theta"])
    tol = _tol(tols, "deviation", 1e-5)
    rng = np.random.default_rng(seed)
    out = []
    for k in range(int(p.get("trials", 10))):
        b = _weights(rng, int(rng.integers(1, int(p.get("max_dim", 8)) + 1)))
        chk = verify_lemma42(Y, Z, th, b)
        out.append(({"trial": k}, {"max_dev": chk.max_dev}, int(chk.max_dev > tol)))
    return out


def _op_cor43(p, seed, tols):
    X, th = _space(p, "X"), float(p["theta"])
    tol = _tol(tols, "deviation", 1e-5)
    rng = np.random.default_rng(seed)
    out = []
    for k in range(int(p.get("trials", 10))):
        b = _weights(rng, int(rng.integers(1, int(p.get("max_dim", 6)) + 1)))
        chk = verify_cor43(X, th, b)
        out.append(({"trial": k}, {"max_dev": chk.max_dev}, int(chk.max_dev > tol)))
    return out


def _op_lemma44(p, seed, tols):
    X, pp, r = _space(p, "X"), float(p["p"]), float(p["r"])
    tol = _tol(tols, "relative", 1e-4)
    rng = np.random.default_rng(seed)
    c = construct_lemma44(pp, r, X)
    vecs = [sample_ball(rng, Lp(2), tuple(range(1, int(rng.integers(1, int(p.get("max_dim", 4)) + 1)) + 1)))
            for _ in range(int(p.get("trials", 10)))]
    vecs = [v for v in vecs if v]
    dev = verify_lemma44(pp, r, X, vecs)
    return [({"p": pp, "r": r}, {"theta": c.theta, "Y": c.Y.to_json(), "max_rel_dev": dev},
             int(dev > tol))]


def _op_lemma16(p, seed, tols):
    space = _space(p)
    res = lemma16_check(space, float(p["p"]), p.get("direction", "upper"), _vec(p, "x"),
                        float(p["delta"]), int(p.get("samples", 1000)), seed,
                        scale=p.get("scale", "relative"), bound=p.get("bound", "literal"))
    return [({"t_or_delta": float(p["delta"]), "samples": res.samples},
             {"worst_slack": res.worst_slack}, res.violations)]


def _map(p) -> MapUnderTest:
    spec = p.get("map")
    if not isinstance(spec, dict) or "from" not in spec or "to" not in spec:
        raise ManifestError("map must be an object with 'from' and 'to' spaces")
    radius = spec.get("radius", 1.0)
    return MapUnderTest.from_ball_map(compose_map(space_from_json(spec["from"]),
                                                  space_from_json(spec["to"])), radius)


def _op_lemma15(p, seed, tols):
    m = _map(p)
    res = lemma15_check(m, _vec(p, "x"), _vec(p, "y"), float(p["d"]), p.get("epsilon"),
                        float(p["delta"]), int(p.get("samples", 500)), seed)
    return [({"t_or_delta": float(p["delta"]), "samples": res.samples},
             {"vacuous": res.vacuous, "note": res.note, "worst_slack": res.worst_slack},
             res.violations)]


def _op_scan(p, seed, tols):
    m = _map(p)
    est = modulus_scan(m, [float(t) for t in p["scales"]], int(p.get("samples", 200)), seed)
    return [({"t_or_delta": e.t, "samples": e.samples}, {"estimate": e.omega_hat}, 0) for e in est]


OPERATIONS: dict[str, Callable] = {
    "norm": _op_norm,
    "dualnorm": _op_dualnorm,
    "tsirelson.norm": _op_t_norm,
    "tsirelson.lowerq": _op_lowerq,
    "tsirelson.lemma54": _op_lemma54,
    "mazur.solve": _op_mazur_solve,
    "mazur.map": _op_mazur_map,
    "verify.lemma15": _op_lemma15,
    "verify.lemma16": _op_lemma16,
    "verify.lemma42": _op_lemma42,
    "verify.cor43": _op_cor43,
    "verify.lemma44": _op_lemma44,
    "scan.modulus": _op_scan,
}


@dataclass
class ExperimentOutcome:
    status: int
    records: list[ScanRecord]
    message: str = ""


def run_experiment(manifest: ExperimentManifest) -> ExperimentOutcome:
    """Dispatch a manifest; the exit status is nonzero iff a check failed or input was bad."""
    op = OPERATIONS.get(manifest.operation)
    if op is None:
        return ExperimentOutcome(EXIT_UNKNOWN_OPERATION, [],
                                 f"unknown operation '{manifest.operation}'")
    t0 = time.perf_counter()
    try:
        rows = op(manifest.parameters, manifest.seed, manifest.tolerances)
    except (ManifestError, SpaceError, KeyError, TypeError, json.JSONDecodeError) as exc:
        return ExperimentOutcome(EXIT_PARSE, [], f"bad parameters: {exc}")
    except ValueError as exc:
        return ExperimentOutcome(EXIT_PARSE, [], f"invalid input: {exc}")
    except Exception as exc:  # solver failures surface as a runtime status
        return ExperimentOutcome(EXIT_RUNTIME, [], f"{type(exc).__name__}: {exc}")
    wall = time.perf_counter() - t0
    records = [ScanRecord(manifest.name, {**params}, values, int(bad), manifest.seed,
                          wall / max(len(rows), 1))
               for params, values, bad in rows]
    status = EXIT_VIOLATION if any(r.violations for r in records) else EXIT_OK
    if manifest.output and records:
        write_records(manifest.output, records)
    return ExperimentOutcome(status, records)


def write_records(path: str, records: list[ScanRecord]) -> None:
    """JSON files are rewritten; CSV files are appended to under one fixed header."""
    if path.endswith(".json"):
        with open(path, "w") as fh:
            fh.write(emit_report(records, "json"))
        return
    text = emit_report(records, "csv")
    if os.path.exists(path) and os.path.getsize(path) > 0:
        with open(path) as fh:
            head = fh.readline().rstrip("\n")
        if head != ",".join(CSV_HEADER):
            raise ManifestError(f"{path} has a different header")
        text = text.split("\n", 1)[1]
    with open(path, "a", newline="") as fh:
        fh.write(text)
