"""Simulated annealing of a shuttled network.

The search space is the initial order of the ancilla bits together with the
choice of which bit moves in each gate.  Networks are ranked
lexicographically by maximum separation, then the number of gates at that
maximum, then rms separation.  The Metropolis step uses the change of
``j * max(s)`` as its cost and falls back to the change of rms separation
when that product is unchanged.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernel
from .schedule import LogicalNetwork
from .shuttle import (
    DistanceStats,
    Layout,
    ShuttledNetwork,
    distance_stats,
    initial_layout,
    shuttle_transform,
)


@dataclass(frozen=True)
class AnnealConfig:
    """Annealing schedule.

    ``initial_temperature`` and ``steps_per_temperature`` default to values
    scaled by the instance: ``2 * j * max(s)`` of the starting network and
    ``50 * gates``.  Each of the ``reheat_cycles`` cooling runs has
    ``temperature_levels`` levels; after a run the temperature is multiplied
    by ``reheat_factor``.
    """

    initial_temperature: float | None = None
    cooling_factor: float = 0.995
    steps_per_temperature: int | None = None
    temperature_levels: int = 920
    reheat_cycles: int = 5
    reheat_factor: float = 10.0
    seed: int = 0
    move_mix: float = 0.3

    def __post_init__(self):
        if self.initial_temperature is not None and not self.initial_temperature > 0:
            raise ValueError("initial_temperature must be positive")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.steps_per_temperature is not None and self.steps_per_temperature < 1:
            raise ValueError("steps_per_temperature must be >= 1")
        if self.temperature_levels < 1:
            raise ValueError("temperature_levels must be >= 1")
        if self.reheat_cycles < 1:
            raise ValueError("reheat_cycles must be >= 1")
        if not self.reheat_factor > 1:
            raise ValueError("reheat_factor must be > 1")
        if not 0 <= self.move_mix <= 1:
            raise ValueError("move_mix must lie in [0, 1]")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass(frozen=True, order=True)
class Objective:
    """Ordered so that ``a < b`` means ``a`` is the better network."""

    max_s: int
    j_max: int
    rms: float

    @classmethod
    def of(cls, stats: DistanceStats) -> "Objective":
        return cls(stats.maximum, stats.j_max, stats.rms)

    @property
    def product(self) -> int:
        return self.j_max * self.max_s


def cost_delta(before: Objective, after: Objective) -> float:
    """Metropolis cost of going from ``before`` to ``after``."""
    c = after.product - before.product
    if c != 0:
        return float(c)
    return after.rms - before.rms


@dataclass(frozen=True)
class AnnealState:
    """Ancilla order (central block of the initial layout) and per-gate movers."""

    order: tuple[int, ...]
    movers: tuple[int, ...]


def propose_move(state: AnnealState, rng: np.random.Generator, move_mix: float = 0.3) -> AnnealState:
    """One primitive move: swap two distinct ancilla bits, or flip one mover."""
    n = len(state.order)
    if n >= 2 and rng.random() < move_mix:
        a, b = rng.choice(n, size=2, replace=False)
        order = list(state.order)
        order[a], order[b] = order[b], order[a]
        return replace(state, order=tuple(order))
    g = int(rng.integers(len(state.movers)))
    movers = list(state.movers)
    movers[g] = 1 - movers[g]
    return replace(state, movers=tuple(movers))


@dataclass(frozen=True)
class TraceRow:
    cycle: int
    temperature: float
    max_s: int
    j_max: int
    rms: float
    best_max: int
    best_j: int
    best_rms: float

    def to_line(self) -> str:
        return (
            f"{self.cycle} {self.temperature:.9e} {self.max_s} {self.j_max} {self.rms:.9f} "
            f"{self.best_max} {self.best_rms:.9f}"
        )


TRACE_HEADER = "# cycle temperature max_s j_max rms best_max best_rms"


def format_trace(trace) -> str:
    return "\n".join([TRACE_HEADER] + [row.to_line() for row in trace]) + "\n"


@dataclass(frozen=True)
class AnnealResult:
    state: AnnealState
    network: ShuttledNetwork
    stats: DistanceStats
    trace: tuple[TraceRow, ...]
    counts: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def objective(self) -> Objective:
        return Objective.of(self.stats)


class _Compiled:
    """Array form of a logical network for the compiled kernel."""

    def __init__(self, net: LogicalNetwork, above: int | None = None):
        self.net = net
        self.above = math.ceil(net.v / 2) if above is None else above
        steps, self.grow, self.gcol = net.as_arrays()
        self.step_ptr = np.searchsorted(steps, np.arange(1, net.depth + 2)).astype(np.int64)
        nb = net.n_bits
        self._buffers = (
            np.empty(len(net), np.int64),
            np.empty(nb, np.int64),
            np.empty(nb, np.int64),
            np.full(nb, -1, np.int64),
            np.empty(nb, np.int64),
        )

    def layout(self, order) -> Layout:
        return initial_layout(self.net.n, self.net.v, order, self.above)

    def separations(self, order, movers) -> np.ndarray:
        line0 = np.array(self.layout(order).line, dtype=np.int64)
        s, line, pos, slot, start = self._buffers
        _kernel.replay(line0, self.step_ptr, self.grow, self.gcol,
                       np.asarray(movers, dtype=np.int64), s, line, pos, slot, start)
        return s.copy()


def evaluate(net: LogicalNetwork, state: AnnealState, above: int | None = None) -> Objective:
    """Objective of a state via the compiled replay."""
    s = _Compiled(net, above).separations(state.order, state.movers)
    return Objective(int(s.max()), int(np.count_nonzero(s == s.max())), float(np.sqrt(np.mean(s.astype(float) ** 2))))


def default_state(net: LogicalNetwork) -> AnnealState:
    """Identity ancilla order, row (verification) bit moves in every gate."""
    return AnnealState(tuple(range(net.n)), tuple([0] * len(net)))


def anneal(
    net: LogicalNetwork,
    cfg: AnnealConfig = AnnealConfig(),
    start: AnnealState | None = None,
    above: int | None = None,
    verify: bool = False,
) -> AnnealResult:
    """Run one annealing chain; the best state ever visited is returned.

    ``verify`` cross-checks every incremental evaluation against a full
    replay (slow, for testing).
    """
    comp = _Compiled(net, above)
    start = start or default_state(net)
    if len(start.movers) != len(net):
        raise ValueError("start state has the wrong number of mover choices")
    line0 = np.array(comp.layout(start.order).line, dtype=np.int64)
    movers0 = np.array(start.movers, dtype=np.int64)

    s0 = comp.separations(start.order, start.movers)
    mx = int(s0.max())
    t0 = cfg.initial_temperature
    if t0 is None:
        t0 = 2.0 * max(1, int(np.count_nonzero(s0 == mx)) * mx)
    steps = cfg.steps_per_temperature or 50 * len(net)

    best_line, best_mov, trace, counts = _kernel.anneal_loop(
        line0, comp.above, net.n, comp.step_ptr, comp.grow, comp.gcol, movers0,
        float(t0), cfg.cooling_factor, int(steps), cfg.temperature_levels,
        cfg.reheat_cycles, cfg.reheat_factor, cfg.move_mix, int(cfg.seed), bool(verify),
    )
    order = tuple(int(b) for b in best_line[comp.above:comp.above + net.n])
    state = AnnealState(order, tuple(int(m) for m in best_mov))
    sn = shuttle_transform(net, comp.layout(order), state.movers)
    ng = len(net)
    rows = tuple(
        TraceRow(int(r[0]), float(r[1]), int(r[2]), int(r[3]), math.sqrt(r[4] / ng),
                 int(r[5]), int(r[6]), math.sqrt(r[7] / ng))
        for r in trace
    )
    keys = ("proposed", "accepted", "uphill_proposed", "uphill_accepted")
    return AnnealResult(state, sn, distance_stats(sn), rows, dict(zip(keys, map(int, counts))), int(cfg.seed))


def anneal_chains(
    net: LogicalNetwork,
    cfg: AnnealConfig = AnnealConfig(),
    chains: int = 1,
    workers: int | None = None,
    above: int | None = None,
    start: AnnealState | None = None,
) -> tuple[AnnealResult, list[AnnealResult]]:
    """Independent chains with seeds ``cfg.seed + i``; returns (best, all).

    The best chain is the lexicographically smallest objective, ties going to
    the lower seed.
    """
    if chains < 1:
        raise ValueError("chains must be >= 1")
    cfgs = [replace(cfg, seed=cfg.seed + i) for i in range(chains)]
    if chains == 1 or workers == 1:
        results = [anneal(net, c, start, above) for c in cfgs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda c: anneal(net, c, start, above), cfgs))
    best = min(results, key=lambda r: (r.objective, r.seed))
    return best, results
