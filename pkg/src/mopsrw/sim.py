"""Monte Carlo runs of the banded chains, checked against exact r-step tables.

Rows are tiny (at most four outcomes), so each step is an inverse-CDF lookup
on a padded cumulative table.  A row summing to less than one sends the
missing mass to an absorbing sink; a row summing to more than one cannot be
sampled and is rejected up front.

Samples are processed in fixed-size blocks, each with its own generator
seeded from (seed, block index), so results do not depend on how blocks are
scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
import numpy as np

from .markov import StochasticSystem, _propagate

BLOCK = 1 << 16
ABSORBED = -1


class NotSimulableError(ValueError):
    """A reachable row has total mass above one (a source)."""


@dataclass
class SimConfig:
    system: StochasticSystem
    start: int
    steps: int
    samples: int
    seed: int = 0
    policy: str = "sink"  # "sink": deficits absorb; "strict": any deficit is an error

    def reach(self) -> int:
        """Largest upward jump allowed by the band structure."""
        up = 0
        for i, row in enumerate(self.system.P.rows):
            for j in row:
                up = max(up, j - i)
        return up

    def validate(self):
        need = self.start + self.reach() * self.steps + 3
        if self.system.N < need:
            raise ValueError(f"truncation {self.system.N} too small; need {need} so no sample meets a cut row")
        if self.policy not in ("sink", "strict"):
            raise ValueError(f"unknown boundary policy {self.policy!r}")
        if self.samples < 1 or self.steps < 0:
            raise ValueError("samples >= 1 and steps >= 0 required")


@dataclass
class SimReport:
    counts: dict
    destroyed: int
    samples: int
    exact: dict = field(default_factory=dict)
    exact_destroyed: Fraction = Fraction(0)
    zscores: dict = field(default_factory=dict)

    def frequencies(self) -> dict:
        return {m: c / self.samples for m, c in self.counts.items()}

    def conserved(self) -> bool:
        return sum(self.counts.values()) + self.destroyed == self.samples

    def within(self, nsigma: float = 4.0) -> float:
        """Share of exactly reachable end states whose frequency is within nsigma."""
        states = [m for m, p in self.exact.items() if p > 0]
        if not states:
            return 1.0
        ok = sum(1 for m in states if abs(self.zscores.get(m, 0.0)) <= nsigma)
        return ok / len(states)

    def unexpected_states(self) -> list:
        return [m for m in self.counts if self.exact.get(m, 0) == 0]


def _tables(system: StochasticSystem, rows: int, strict: bool = False):
    """Padded targets and cumulative probabilities for rows 0..rows-1."""
    K = max(len(system.P.rows[i]) for i in range(rows)) or 1
    targets = np.zeros((rows, K), dtype=np.int64)
    cum = np.zeros((rows, K), dtype=np.float64)
    for i in range(rows):
        items = sorted(system.P.rows[i].items())
        total = sum((v for _, v in items), Fraction(0))
        if total > 1:
            raise NotSimulableError(f"row {i} has mass {total} > 1 (source)")
        if strict and total != 1:
            raise NotSimulableError(f"row {i} has mass {total} < 1 under strict policy")
        acc = Fraction(0)
        for k, (j, v) in enumerate(items):
            acc += v
            targets[i, k] = j
            cum[i, k] = float(acc)
        if total == 1 and items:
            cum[i, len(items) - 1] = 1.0
        cum[i, len(items):] = cum[i, len(items) - 1] if items else 0.0
        targets[i, len(items):] = ABSORBED
    return targets, cum


def _run_block(targets, cum, start, steps, size, rng) -> np.ndarray:
    state = np.full(size, start, dtype=np.int64)
    K = cum.shape[1]
    for _ in range(steps):
        alive = state != ABSORBED
        s = state[alive]
        u = rng.random(s.size)
        k = (u[:, None] >= cum[s]).sum(axis=1)
        nxt = np.full(s.size, ABSORBED, dtype=np.int64)
        inside = k < K
        nxt[inside] = targets[s[inside], k[inside]]
        state[alive] = nxt
    return state


def simulate(cfg: SimConfig) -> SimReport:
    cfg.validate()
    rows = cfg.start + cfg.reach() * cfg.steps + 1
    targets, cum = _tables(cfg.system, rows, cfg.policy == "strict")
    counts: dict = {}
    destroyed = 0
    nblocks = -(-cfg.samples // BLOCK)
    for b in range(nblocks):
        size = min(BLOCK, cfg.samples - b * BLOCK)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(b,))))
        end = _run_block(targets, cum, cfg.start, cfg.steps, size, rng)
        vals, cnt = np.unique(end, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            if v == ABSORBED:
                destroyed += c
            else:
                counts[v] = counts.get(v, 0) + c
    exact = {m: p for m, p in _propagate(cfg.system.P, cfg.start, cfg.steps)[-1].items() if p}
    rep = SimReport(dict(sorted(counts.items())), destroyed, cfg.samples, exact,
                    1 - sum(exact.values(), Fraction(0)))
    for m in set(exact) | set(counts):
        p = float(exact.get(m, 0))
        f = counts.get(m, 0) / cfg.samples
        sd = math.sqrt(p * (1 - p) / cfg.samples)
        rep.zscores[m] = (f - p) / sd if sd > 0 else (0.0 if f == p else math.inf)
    return rep
