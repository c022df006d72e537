"""Independent reference implementations used by the acceptance checks.

Nothing here imports the optimized solvers.  The Tsirelson oracle
enumerates every family of disjoint subsets of the support directly from
the definition, for every ``n`` up to the largest index, so it shares no
shortcut with the memoized solver.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .vectors import FiniteVector


def _growth(name: str, n: int) -> float:
    if name == "power":
        return float(n + 1) ** n
    if name == "linear":
        return float(n)
    raise ValueError(name)


def _labelings(size: int, kmax: int):
    """Restricted growth strings with an extra 'unused' label ``-1``."""
    def rec(pos, used, acc):
        if pos == size:
            yield tuple(acc)
            return
        for lab in [-1] + list(range(min(used + 1, kmax))):
            acc.append(lab)
            yield from rec(pos + 1, max(used, lab + 1), acc)
            acc.pop()
    yield from rec(0, 0, [])


def tsirelson_bruteforce(v: FiniteVector, rule: str = "min-after-n", growth: str = "power") -> float:
    """Exhaustive evaluation of the implicit Tsirelson norm."""
    items = tuple(sorted((i, abs(x)) for i, x in zip(v.indices, v.values)))

    @lru_cache(maxsize=None)
    def value(sub: tuple[tuple[int, float], ...]) -> float:
        if not sub:
            return 0.0
        best = max(a for _, a in sub)
        top = max(i for i, _ in sub)
        for n in range(1, top + 1):
            if rule == "min-after-n":
                elig = tuple(e for e in sub if e[0] >= n)
            else:
                elig = sub
            cap = _growth(growth, n)
            kmax = int(min(cap, len(elig)))
            if kmax >= 2:
                best = max(best, families(elig, kmax, n if rule != "min-after-n" else 0))
        return best

    @lru_cache(maxsize=None)
    def families(elig, kmax, literal_n):
        best = 0.0
        for lab in _labelings(len(elig), kmax):
            k = max(lab) + 1
            if k < 2:
                continue
            blocks = [tuple(e for e, l in zip(elig, lab) if l == j) for j in range(k)]
            if literal_n:
                # literal reading: E_j has min >= j for j <= n once sorted by minima
                mins = sorted(b[0][0] for b in blocks)
                if any(m < j + 1 for j, m in enumerate(mins[:literal_n])):
                    continue
            best = max(best, 0.5 * math.fsum(value(b) for b in blocks))
        return best

    return value(items)
