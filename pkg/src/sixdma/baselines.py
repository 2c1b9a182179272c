"""Comparison schemes: fixed sectors, track-constrained, rotation-only, and
unconstrained per-period reconfiguration.

Every scheme exposes the same total receive element count as the movable-
surface scheme (U*Q split across however many surfaces it uses) and yields a
physically valid deployment each period.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import RadioParams, Surface, element_gain_linear
from .geometry import ConfigSpace, Deployment
from .mobility import PeriodForecast
from .optimizer import HistoryLibrary, choose_rotation, composite_scores, \
    initial_deployment, repair_orientations, ScoreWeights
from .profiler import CandidateLibrary, GridSpec
from .transitions import PositionGraph, plan_transition

SECTOR_AZIMUTHS_DEG = (0.0, 90.0, 180.0, 270.0)
SECTOR_DOWNTILT_DEG = 15.0


@dataclass
class SchemeDecision:
    surfaces: list[Surface]
    move_steps: int
    time_steps: int
    deployment: Deployment | None = None
    scores: dict[int, float] = field(default_factory=dict)
    moves: list[tuple[int, int]] = field(default_factory=list)


def rect_element_offsets(n: int, spacing: float) -> np.ndarray:
    """(n, 2) lattice offsets using the squarest rows x cols factorization."""
    rows = int(math.isqrt(n))
    while n % rows:
        rows -= 1
    cols = n // rows
    us = (np.arange(cols) - (cols - 1) / 2.0) * spacing
    vs = (np.arange(rows) - (rows - 1) / 2.0) * spacing
    uu, vv = np.meshgrid(us, vs, indexing="xy")
    return np.column_stack([uu.ravel(), vv.ravel()])


def _sector_surface(bs_center: np.ndarray, r0: float, azimuth_rad: float,
                    offsets: np.ndarray) -> Surface:
    ca, sa = math.cos(azimuth_rad), math.sin(azimuth_rad)
    tilt = math.radians(SECTOR_DOWNTILT_DEG)
    center = bs_center + r0 * np.array([ca, sa, 0.0])
    normal = np.array([math.cos(tilt) * ca, math.cos(tilt) * sa,
                       -math.sin(tilt)])
    return Surface(center=center, normal=normal, offsets=offsets)


class FPAScheme:
    """Four fixed downtilted sector surfaces on the sphere equator."""

    name = "fpa"

    def __init__(self, params: RadioParams, bs_center, r0: float,
                 n_total_elements: int):
        bs = np.asarray(bs_center, dtype=float)
        offsets = rect_element_offsets(n_total_elements // 4,
                                       params.element_spacing)
        self.surfaces = [
            _sector_surface(bs, r0, math.radians(a), offsets)
            for a in SECTOR_AZIMUTHS_DEG
        ]

    def decide(self, forecast: PeriodForecast, period_index: int) -> SchemeDecision:
        return SchemeDecision(self.surfaces, 0, 0)

    def record(self, measured_rate: float) -> None:
        pass


class CircularScheme:
    """Four sector surfaces sliding on the equatorial track.

    The steering azimuth is quantized to the catalog meridians and chosen to
    maximize the predicted-density-weighted element gain toward the active
    grid centers; all four surfaces rotate in lockstep, so the period movement
    cost is the cyclic meridian hop count.
    """

    name = "circular"

    def __init__(self, params: RadioParams, bs_center, r0: float, F: int,
                 grid: GridSpec, n_total_elements: int):
        self.params = params
        self.bs = np.asarray(bs_center, dtype=float)
        self.r0 = r0
        self.F = F
        self.grid = grid
        self.offsets = rect_element_offsets(n_total_elements // 4,
                                            params.element_spacing)
        self.base = 0

    def _surfaces_for(self, base: int) -> list[Surface]:
        return [
            _sector_surface(
                self.bs, self.r0,
                2.0 * math.pi * ((base + round(k * self.F / 4)) % self.F) / self.F,
                self.offsets)
            for k in range(4)
        ]

    def _steering_score(self, base: int, forecast: PeriodForecast) -> float:
        surfaces = self._surfaces_for(base)
        centers = np.array([self.grid.cell_center(c) for c in forecast.active])
        weights = forecast.densities[forecast.active] / forecast.rho_max
        best = np.zeros(len(forecast.active))
        for s in surfaces:
            diff = centers - s.center
            dist = np.linalg.norm(diff, axis=-1)
            dhat = diff / dist[:, None]
            ct = np.clip(dhat @ s.normal, -1.0, 1.0)
            par = dhat - ct[:, None] * s.normal
            phi = np.where(np.linalg.norm(par, axis=-1) < 1e-12, 0.0,
                           np.arctan2(par @ s.v_axis, par @ s.u_axis))
            gain = element_gain_linear(self.params, np.arccos(ct), phi)
            best = np.maximum(best, gain)
        return float((weights * best).sum())

    def decide(self, forecast: PeriodForecast, period_index: int) -> SchemeDecision:
        if forecast.active:
            scores = [self._steering_score(b, forecast) for b in range(self.F)]
            new_base = int(np.argmax(scores))
        else:
            new_base = self.base
        hops = abs(new_base - self.base)
        hops = min(hops, self.F - hops)
        self.base = new_base
        return SchemeDecision(self._surfaces_for(new_base), hops, hops)

    def record(self, measured_rate: float) -> None:
        pass


def equator_anchors(space: ConfigSpace) -> list[int]:
    """Catalog positions nearest the four sector azimuths on the equator."""
    zs = np.abs(space.positions[:, 2])
    on_circles = space.lat_index >= 0
    ring = int(space.lat_index[on_circles][np.argmin(zs[on_circles])])
    F = space.params.F
    anchors = []
    for a in SECTOR_AZIMUTHS_DEG:
        f = int(round(math.radians(a) / (2.0 * math.pi / F))) % F
        anchors.append(1 + ring * F + f)
    return anchors


class RotationOnlyScheme:
    """Surfaces pinned at the sector anchors; only orientations adapt."""

    name = "rotation_only"

    def __init__(self, space: ConfigSpace, library: CandidateLibrary,
                 params: RadioParams, bs_center, n_total_elements: int):
        self.space = space
        self.library = library
        self.bs = np.asarray(bs_center, dtype=float)
        self.anchors = equator_anchors(space)
        self.offsets = rect_element_offsets(n_total_elements // 4,
                                            params.element_spacing)

    def decide(self, forecast: PeriodForecast, period_index: int) -> SchemeDecision:
        votes = self.library.orientation_votes(forecast.active)
        orients = [choose_rotation(self.space, p, votes) for p in self.anchors]
        orients = repair_orientations(self.space, self.anchors, orients)
        dep = Deployment(tuple(zip(self.anchors, orients)))
        surfaces = [
            Surface(center=self.bs + self.space.positions[p],
                    normal=self.space.orientations[p][j],
                    offsets=self.offsets)
            for p, j in sorted(dep.entries)
        ]
        return SchemeDecision(surfaces, 0, 0, deployment=dep)

    def record(self, measured_rate: float) -> None:
        pass


class FullReconfigScheme:
    """Per-period global reassignment over the whole catalog (multi-step)."""

    name = "full_reconfig"

    def __init__(self, space: ConfigSpace, graph: PositionGraph,
                 library: CandidateLibrary, weights: ScoreWeights,
                 params: RadioParams, bs_center, U: int,
                 kappa: float | None = None, prior_cells=None):
        self.space = space
        self.graph = graph
        self.library = library
        self.weights = weights
        self.params = params
        self.bs = np.asarray(bs_center, dtype=float)
        self.deployment = initial_deployment(space, library, U, prior_cells,
                                             weights)
        self.history = HistoryLibrary()
        self.kappa = kappa

    def _surfaces(self, dep: Deployment) -> list[Surface]:
        from .channel import element_offsets
        offs = element_offsets(self.params.elements_per_surface,
                               self.params.element_spacing)
        return [
            Surface(center=self.bs + self.space.positions[p],
                    normal=self.space.orientations[p][j], offsets=offs)
            for p, j in sorted(dep.entries)
        ]

    def decide(self, forecast: PeriodForecast, period_index: int) -> SchemeDecision:
        current = list(self.deployment.position_indices)
        if not forecast.active:
            plan = plan_transition(self.graph, current, current, self.kappa)
            return SchemeDecision(self._surfaces(self.deployment),
                                  plan.total_steps, plan.max_steps,
                                  deployment=self.deployment)
        scores = composite_scores(range(self.space.M), forecast, self.library,
                                  self.history, self.weights,
                                  incumbents=current,
                                  period_index=period_index)
        ranked = sorted(range(self.space.M), key=lambda p: (-scores[p], p))
        new_positions = ranked[:len(current)]
        votes = self.library.orientation_votes(forecast.active)
        orients = [choose_rotation(self.space, p, votes) for p in new_positions]
        orients = repair_orientations(self.space, new_positions, orients)
        dep = Deployment(tuple(zip(new_positions, orients)))
        plan = plan_transition(self.graph, current, new_positions, self.kappa)
        moves = [(current[u], new_positions[plan.assignment[u]])
                 for u in range(len(current)) if plan.steps[u] > 0]
        self.deployment = dep
        return SchemeDecision(self._surfaces(dep), plan.total_steps,
                              plan.max_steps, deployment=dep, scores=scores,
                              moves=moves)

    def record(self, measured_rate: float) -> None:
        self.history.add(self.deployment.position_indices, measured_rate)
