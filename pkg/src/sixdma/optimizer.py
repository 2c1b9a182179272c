"""CSI-free per-period reconfiguration of the antenna surfaces.

Each reconfiguration period scores candidate positions by mixing the offline
library (weighted by the predicted per-grid vehicle density), a history of
measured rates at previously used positions, and a stability bonus for the
incumbent deployment. Every antenna then takes the best-scoring unclaimed
position inside its own closed grid neighborhood, so a period never needs more
than one movement step per antenna. Orientations are voted by the active
grids' candidate sets; the radial direction is the always-feasible fallback.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import ConfigSpace, Deployment, check_surfaces, \
    closed_neighborhood
from .mobility import PeriodForecast
from .profiler import CandidateLibrary


@dataclass(frozen=True)
class ScoreWeights:
    omega: float = 0.5          # forecast vs history mix
    beta0: float = 1.0          # base coverage reward
    beta1: float = 0.5          # reward per extra candidate orientation
    mu: float = 0.05            # incumbent stability bonus
    warmup_periods: int = 3     # periods with the history term disabled


@dataclass
class HistoryLibrary:
    """Measured period rates keyed by the position sets that produced them."""

    position_sets: list[frozenset[int]] = field(default_factory=list)
    rates: list[float] = field(default_factory=list)

    def add(self, positions, rate: float) -> None:
        self.position_sets.append(frozenset(positions))
        self.rates.append(float(rate))

    def __len__(self) -> int:
        return len(self.rates)

    @property
    def r_norm(self) -> float:
        return max(self.rates) if self.rates else 0.0

    @property
    def global_mean(self) -> float:
        return float(np.mean(self.rates)) if self.rates else 0.0

    def mean_rate(self, pos: int) -> float:
        """Mean measured rate of deployments that used pos; global mean if none."""
        seen = [r for s, r in zip(self.position_sets, self.rates) if pos in s]
        return float(np.mean(seen)) if seen else self.global_mean


def composite_scores(candidates, forecast: PeriodForecast,
                     library: CandidateLibrary, history: HistoryLibrary,
                     weights: ScoreWeights, incumbents,
                     period_index: int) -> dict[int, float]:
    """Score each candidate position for the current period."""
    omega = 0.0 if period_index <= weights.warmup_periods else weights.omega
    incumbents = set(incumbents)

    s_pre: dict[int, float] = {}
    if forecast.active and forecast.rho_max > 0:
        for cell in forecast.active:
            w = forecast.densities[cell] / forecast.rho_max
            for p in library.positions_in(cell):
                bonus = weights.beta0 + weights.beta1 * (library.nu(cell, p) - 1)
                s_pre[p] = s_pre.get(p, 0.0) + w * bonus

    r_norm = history.r_norm
    scores: dict[int, float] = {}
    for i in candidates:
        s = (1.0 - omega) * s_pre.get(i, 0.0)
        if omega > 0.0 and r_norm > 0.0:
            s += omega * history.mean_rate(i) / r_norm
        if i in incumbents:
            s += weights.mu
        scores[i] = s
    return scores


def assign_positions(space: ConfigSpace, current: list[int],
                     scores: dict[int, float]) -> list[int]:
    """Conflict-aware greedy: one closed-neighborhood target per antenna.

    (antenna, candidate) pairs are processed in descending score (ties: lower
    antenna, then lower position index). A still-unassigned antenna's current
    position stays reserved for it; antennas left without an unclaimed
    candidate stay put.
    """
    U = len(current)
    pairs = []
    for u in range(U):
        for i in closed_neighborhood(space, current[u]):
            pairs.append((-scores.get(i, 0.0), u, i))
    pairs.sort()

    target = [-1] * U
    claimed: set[int] = set()
    unassigned = set(range(U))
    progress = True
    while unassigned and progress:
        progress = False
        for _, u, i in pairs:
            if u not in unassigned or i in claimed:
                continue
            if any(w != u and current[w] == i for w in unassigned):
                continue
            target[u] = i
            claimed.add(i)
            unassigned.remove(u)
            progress = True
    for u in sorted(unassigned):
        target[u] = current[u]
    return target


def choose_rotation(space: ConfigSpace, pos: int,
                    votes: dict[tuple[int, int], int]) -> int:
    """Orientation voted by most active grids; radial when nothing votes."""
    J = space.orientation_count(pos)
    best_j, best_v = 0, 0
    for j in range(J):
        v = votes.get((pos, j), 0)
        if v > best_v:
            best_j, best_v = j, v
    return best_j


def repair_orientations(space: ConfigSpace, positions: list[int],
                        orients: list[int]) -> list[int]:
    """Fall back to radial wherever an orientation breaks the deployment rules.

    The radial direction satisfies both center visibility and non-blocking
    against any other on-sphere position, so the loop always terminates with
    a clean deployment.
    """
    orients = list(orients)
    centers = np.array([space.positions[p] for p in positions])
    while True:
        normals = np.array([space.orientations[p][j]
                            for p, j in zip(positions, orients)])
        report = check_surfaces(centers, normals, space.params.d_min)
        culprits = sorted({v.first for v in report.violations
                           if v.kind in ("blocking", "cpu_visibility")
                           and orients[v.first] != 0})
        if not culprits:
            if report.violations:
                raise AssertionError(
                    f"unrepairable deployment violations: {report.violations}")
            return orients
        orients[culprits[0]] = 0


@dataclass
class PeriodDecision:
    """Executed per-period outcome: every move is one neighborhood step."""

    deployment: Deployment
    moves: list[tuple[int, int]]    # (source, target) per antenna that moved
    scores: dict[int, float]
    period_index: int

    @property
    def move_steps(self) -> int:
        return len(self.moves)

    @property
    def time_steps(self) -> int:
        return 1 if self.moves else 0


def initial_deployment(space: ConfigSpace, library: CandidateLibrary,
                       U: int, prior_cells=None,
                       weights: ScoreWeights | None = None) -> Deployment:
    """Top-U positions under a uniform prior over the given cells.

    Positions are ranked by the same coverage statistic the per-period score
    uses, with every prior cell weighted equally. prior_cells defaults to all
    profiled cells; passing the mobility support instead keeps cells no
    vehicle can reach from voting.
    """
    w = weights if weights is not None else ScoreWeights()
    cells = range(len(library.entries)) if prior_cells is None else prior_cells
    score: dict[int, float] = {}
    for c in cells:
        for p in library.positions_in(c):
            score[p] = score.get(p, 0.0) \
                + w.beta0 + w.beta1 * (library.nu(c, p) - 1)
    ranked = sorted(score, key=lambda p: (-score[p], p))
    chosen = ranked[:U]
    if len(chosen) < U:
        rest = [p for p in range(space.M) if p not in set(chosen)]
        chosen.extend(rest[:U - len(chosen)])
    return Deployment(tuple((p, 0) for p in chosen))


class SingleStepOptimizer:
    """Stateful per-period controller for the movable surfaces."""

    def __init__(self, space: ConfigSpace, library: CandidateLibrary,
                 weights: ScoreWeights, deployment: Deployment):
        self.space = space
        self.library = library
        self.weights = weights
        self.deployment = deployment
        self.history = HistoryLibrary()

    def decide(self, forecast: PeriodForecast, period_index: int) -> PeriodDecision:
        current = list(self.deployment.position_indices)

        if not forecast.active:
            return PeriodDecision(self.deployment, [], {}, period_index)

        candidates = sorted({i for c in current
                             for i in closed_neighborhood(self.space, c)})
        scores = composite_scores(candidates, forecast, self.library,
                                  self.history, self.weights,
                                  incumbents=current,
                                  period_index=period_index)
        new_positions = assign_positions(self.space, current, scores)

        votes = self.library.orientation_votes(forecast.active)
        orients = [choose_rotation(self.space, p, votes) for p in new_positions]
        orients = repair_orientations(self.space, new_positions, orients)

        dep = Deployment(tuple(zip(new_positions, orients)))
        moves = [(current[u], new_positions[u])
                 for u in range(len(current)) if new_positions[u] != current[u]]
        self.deployment = dep
        return PeriodDecision(dep, moves, scores, period_index)

    def record(self, measured_rate: float) -> None:
        self.history.add(self.deployment.position_indices, measured_rate)
