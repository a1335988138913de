"""Monte Carlo realization of the deposition/evaporation process.

Each of n cells is filled at rate alpha while empty and emptied at rate
beta while filled. Trial ``i`` of a run draws all its randomness from a
Philox generator keyed by ``(seed << 64) | i``, so any trial can be
replayed on its own and results do not depend on chunking or worker count.

Two state modes are available:

``count``
    Gillespie simulation of the occupancy count as a birth-death chain,
    vectorized across trials (the default).
``cell``
    Every cell runs its own alternating exponential clock; the occupancy is
    the number of filled cells. Slower, kept as an independent route.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .matrices import ModelParams

MODES = ("count", "cell")
CHUNK = 4096
BLOCK = 64

Initial = Union[int, str]


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if not 0 <= trial < 2**64:
        raise ValueError("trial index out of range")
    return np.random.Generator(np.random.Philox(key=(seed << 64) | trial))


def _rates(params: ModelParams) -> tuple[int, float, float]:
    return params.n, float(params.alpha), float(params.beta)


def parse_initial(initial: Initial, n: int) -> Initial:
    """Validate an initial condition.

    Accepted forms: an integer count ``0..n``, ``"empty"``, ``"full"``,
    ``"equilibrium"`` or ``"bernoulli:<q>"`` (each cell filled with
    probability q).
    """
    if isinstance(initial, (int, np.integer)) and not isinstance(initial, bool):
        if not 0 <= initial <= n:
            raise ValueError(f"initial occupancy {initial} outside 0..{n}")
        return int(initial)
    if initial == "empty":
        return 0
    if initial == "full":
        return n
    if initial == "equilibrium":
        return initial
    if isinstance(initial, str) and initial.startswith("bernoulli:"):
        q = float(initial.split(":", 1)[1])
        if not 0.0 <= q <= 1.0:
            raise ValueError("bernoulli probability must lie in [0, 1]")
        return initial
    raise ValueError(f"unrecognised initial condition {initial!r}")


def _draw_initial(rng: np.random.Generator, params: ModelParams, initial: Initial) -> int:
    if isinstance(initial, int):
        return initial
    if initial == "equilibrium":
        return int(rng.binomial(params.n, float(params.p_eq)))
    q = float(initial.split(":", 1)[1])
    return int(rng.binomial(params.n, q))


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-constant occupancy path: ``states[i]`` holds on
    ``[times[i], times[i+1])``, the last state until ``t_end``."""

    times: tuple[float, ...]
    states: tuple[int, ...]
    t_end: float

    def at(self, t: float) -> int:
        if t < 0 or t > self.t_end:
            raise ValueError("t outside simulated window")
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return self.states[i]


def run_trajectory(
    params: ModelParams,
    rng: np.random.Generator,
    t_end: float,
    initial_filled: int,
) -> Trajectory:
    """Event-driven path of the occupancy count up to ``t_end``.

    With m filled cells the total rate is R = (n-m) alpha + m beta; the next
    event comes after an Exponential(R) wait and is a fill with probability
    (n-m) alpha / R. Given ``trial_rng(seed, i)`` and a fixed count, the path
    is exactly the one trial ``i`` follows inside :func:`estimate_Qk`.
    """
    n, a, b = _rates(params)
    if not 0 <= initial_filled <= n:
        raise ValueError(f"initial occupancy {initial_filled} outside 0..{n}")
    m = int(initial_filled)
    t = 0.0
    times, states = [0.0], [m]
    draws = _BlockDraws(rng)
    while True:
        fill = (n - m) * a
        total = fill + m * b
        if total == 0.0:
            break
        e, u = draws.next()
        t = t + e / total
        if t >= t_end:
            break
        m += 1 if u * total < fill else -1
        times.append(t)
        states.append(m)
    return Trajectory(tuple(times), tuple(states), float(t_end))


class _BlockDraws:
    """(exponential, uniform) pairs drawn BLOCK at a time, in the same
    order the vectorized estimator consumes them."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.pos = BLOCK

    def next(self) -> tuple[float, float]:
        if self.pos == BLOCK:
            self.exp = self.rng.standard_exponential(BLOCK)
            self.uni = self.rng.random(BLOCK)
            self.pos = 0
        i = self.pos
        self.pos += 1
        return float(self.exp[i]), float(self.uni[i])


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    trials: int
    seed: int
    t_grid: tuple[float, ...]
    state_mode: str = "count"
    workers: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        grid = tuple(float(t) for t in self.t_grid)
        if not grid:
            raise ValueError("t_grid must be nonempty")
        if any(t < 0 or not math.isfinite(t) for t in grid):
            raise ValueError("grid times must be finite and nonnegative")
        if any(b < a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be ascending")
        if self.state_mode not in MODES:
            raise ValueError(f"state_mode must be one of {MODES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "t_grid", grid)


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Occupancy histogram, ``counts[g, k]`` trials with k filled cells at grid time g."""

    t_grid: tuple[float, ...]
    counts: np.ndarray
    trials: int
    meta: dict = field(default_factory=dict)

    @property
    def freq(self) -> np.ndarray:
        return self.counts / self.trials

    @property
    def stderr(self) -> np.ndarray:
        f = self.freq
        return np.sqrt(f * (1.0 - f) / self.trials)

    def coverage(self) -> tuple[np.ndarray, np.ndarray]:
        """Sample mean occupancy and its standard error at each grid time."""
        k = np.arange(self.counts.shape[1])
        mean = self.counts @ k / self.trials
        if self.trials > 1:
            sq = self.counts @ (k * k)
            var = (sq - self.trials * mean**2) / (self.trials - 1)
            se = np.sqrt(np.maximum(var, 0.0) / self.trials)
        else:
            se = np.zeros_like(mean)
        return mean, se

    def tv_distance(self, g: int, probs: Sequence[float]) -> float:
        return 0.5 * float(np.abs(self.freq[g] - np.asarray(probs, dtype=float)).sum())

    def to_csv(self) -> str:
        lines = ["t,k,count,freq,stderr"]
        f, se = self.freq, self.stderr
        for g, t in enumerate(self.t_grid):
            for k in range(self.counts.shape[1]):
                lines.append(f"{t!r},{k},{int(self.counts[g, k])},{float(f[g, k])!r},{float(se[g, k])!r}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        mean, se = self.coverage()
        return {
            **self.meta,
            "trials": self.trials,
            "t_grid": list(self.t_grid),
            "counts": self.counts.tolist(),
            "coverage_mean": mean.tolist(),
            "coverage_stderr": se.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _count_chunk(params: ModelParams, seed: int, start: int, stop: int, grid: np.ndarray, initial: Initial) -> np.ndarray:
    n, a, b = _rates(params)
    size = stop - start
    G = len(grid)
    hist = np.zeros((G, n + 1), dtype=np.int64)
    rngs = [trial_rng(seed, i) for i in range(start, stop)]
    m = np.array([_draw_initial(r, params, initial) for r in rngs], dtype=np.int64)
    t = np.zeros(size)
    gi = np.zeros(size, dtype=np.int64)
    active = np.arange(size)
    exp_blk = np.empty((size, BLOCK))
    uni_blk = np.empty((size, BLOCK))
    pos = BLOCK
    while active.size:
        if pos == BLOCK:
            for i in active:
                exp_blk[i] = rngs[i].standard_exponential(BLOCK)
                uni_blk[i] = rngs[i].random(BLOCK)
            pos = 0
        ma = m[active]
        fill = (n - ma) * a
        total = fill + ma * b
        with np.errstate(divide="ignore"):
            t_next = np.where(total > 0, t[active] + exp_blk[active, pos] / total, np.inf)
        # record the current state at every grid time before the next jump
        while True:
            g = gi[active]
            rec = g < G
            rec[rec] &= grid[g[rec]] < t_next[rec]
            if not rec.any():
                break
            idx = active[rec]
            np.add.at(hist, (gi[idx], m[idx]), 1)
            gi[idx] += 1
        still = gi[active] < G
        active, t_next, fill, total = active[still], t_next[still], fill[still], total[still]
        up = uni_blk[active, pos] * total < fill
        m[active] += np.where(up, 1, -1)
        t[active] = t_next
        pos += 1
    return hist


def _cell_chunk(params: ModelParams, seed: int, start: int, stop: int, grid: np.ndarray, initial: Initial) -> np.ndarray:
    n, a, b = _rates(params)
    G = len(grid)
    hist = np.zeros((G, n + 1), dtype=np.int64)

    def hold(rng, filled):
        rate = b if filled else a
        return rng.standard_exponential() / rate if rate > 0.0 else math.inf

    for i in range(start, stop):
        rng = trial_rng(seed, i)
        if isinstance(initial, str) and initial.startswith("bernoulli:"):
            filled = rng.random(n) < float(initial.split(":", 1)[1])
        else:
            filled = np.arange(n) < _draw_initial(rng, params, initial)
        occupancy = np.zeros(G, dtype=np.int64)
        for c in range(n):
            s = bool(filled[c])
            switch = hold(rng, s)
            for g in range(G):
                while switch <= grid[g]:
                    s = not s
                    switch += hold(rng, s)
                occupancy[g] += s
        hist[np.arange(G), occupancy] += 1
    return hist


def _run_chunk(args) -> np.ndarray:
    mode, params, seed, start, stop, grid, initial = args
    fn = _count_chunk if mode == "count" else _cell_chunk
    return fn(params, seed, start, stop, np.asarray(grid, dtype=float), initial)


def estimate_Qk(config: SimConfig, initial_filled: Initial = 0) -> EmpiricalDistribution:
    """Histogram of the occupancy count at each grid time over independent trials."""
    params = config.params
    initial = parse_initial(initial_filled, params.n)
    grid = tuple(config.t_grid)
    jobs = [
        (config.state_mode, params, config.seed, s, min(s + CHUNK, config.trials), grid, initial)
        for s in range(0, config.trials, CHUNK)
    ]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    counts = np.sum(parts, axis=0)
    meta = {
        "n": params.n,
        "alpha": str(params.alpha),
        "beta": str(params.beta),
        "seed": config.seed,
        "state_mode": config.state_mode,
        "initial": initial,
        "rng": "numpy Philox, key = (seed << 64) | trial_index",
    }
    return EmpiricalDistribution(grid, counts, config.trials, meta)


@dataclass(frozen=True)
class CoverageEstimate:
    t_grid: tuple[float, ...]
    mean: np.ndarray
    stderr: np.ndarray


def estimate_coverage(config: SimConfig, initial_filled: Initial = 0) -> CoverageEstimate:
    mean, se = estimate_Qk(config, initial_filled).coverage()
    return CoverageEstimate(config.t_grid, mean, se)
