"""End-to-end simulation runs over the (power, K, N) sweep grid.

A run is fully determined by (config, seed): mobility draws come from the
(seed, 1) substream, slot channels from (seed, 2, slot). The decision wall
time is measured but kept out of the deterministic metrics rows unless
record_timing is set.
"""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import CircularScheme, FPAScheme, FullReconfigScheme, \
    RotationOnlyScheme, SchemeDecision
from .channel import assemble_channel, sinr_and_rate, surfaces_from_deployment
from .config import ScenarioConfig
from .geometry import ConfigSpace, build_config_space
from .mobility import forecast_period, init_fleet, road_support_cells, step_fleet
from .optimizer import SingleStepOptimizer, initial_deployment
from .profiler import CandidateLibrary, ProfilerHyper, build_library
from .transitions import PositionGraph


@dataclass
class PeriodMetrics:
    period: int
    rate_bps: float
    move_steps: int
    time_steps: int
    decision_s: float


@dataclass
class RunResult:
    scheme: str
    seed: int
    K: int
    tx_dbm: float
    N: int
    periods: list[PeriodMetrics] = field(default_factory=list)
    audit: list[dict] = field(default_factory=list)

    @property
    def mean_rate(self) -> float:
        return float(np.mean([p.rate_bps for p in self.periods]))

    def summary(self) -> dict:
        moves = [p.move_steps for p in self.periods]
        times = [p.time_steps for p in self.periods]
        return {
            "scheme": self.scheme, "seed": self.seed, "K": self.K,
            "tx_dbm": self.tx_dbm, "N": self.N,
            "periods": len(self.periods),
            "mean_rate_bps": self.mean_rate,
            "total_move_steps": int(np.sum(moves)),
            "mean_move_steps": float(np.mean(moves)),
            "max_move_steps": int(np.max(moves)),
            "mean_time_steps": float(np.mean(times)),
            "max_time_steps": int(np.max(times)),
            "mean_decision_ms": float(np.mean(
                [1e3 * p.decision_s for p in self.periods])),
        }


class SingleStepScheme:
    """Adapter exposing the movable-surface controller as a scheme."""

    name = "single_step"

    def __init__(self, space, library, weights, params, bs_center, U,
                 prior_cells=None):
        self.space = space
        self.params = params
        self.bs = bs_center
        dep = initial_deployment(space, library, U, prior_cells, weights)
        self.opt = SingleStepOptimizer(space, library, weights, dep)

    def decide(self, forecast, period_index: int) -> SchemeDecision:
        d = self.opt.decide(forecast, period_index)
        surfaces = surfaces_from_deployment(self.space, d.deployment,
                                            self.params, self.bs)
        return SchemeDecision(surfaces, d.move_steps, d.time_steps,
                              deployment=d.deployment, scores=d.scores,
                              moves=list(d.moves))

    def record(self, measured_rate: float) -> None:
        self.opt.record(measured_rate)


def build_scenario_space(config: ScenarioConfig) -> ConfigSpace:
    return build_config_space(config.geometry)


def build_scenario_library(config: ScenarioConfig,
                           space: ConfigSpace | None = None) -> CandidateLibrary:
    if space is None:
        space = build_scenario_space(config)
    return build_library(space, config.grid_spec(), config.radio,
                         config.profiler, np.asarray(config.bs_center),
                         seed=config.run.library_seed)


def make_scheme(name: str, config: ScenarioConfig, space: ConfigSpace,
                graph: PositionGraph, library: CandidateLibrary, params):
    bs = np.asarray(config.bs_center, dtype=float)
    U = config.run.U
    n_total = U * params.elements_per_surface
    r0 = config.geometry.r0
    support = road_support_cells(config.mobility, config.grid_spec())
    if name == "single_step":
        return SingleStepScheme(space, library, config.weights, params, bs, U,
                                support)
    if name == "full_reconfig":
        return FullReconfigScheme(space, graph, library, config.weights,
                                  params, bs, U, config.run.kappa, support)
    if name == "rotation_only":
        return RotationOnlyScheme(space, library, params, bs, n_total)
    if name == "circular":
        return CircularScheme(params, bs, r0, config.geometry.F,
                              config.grid_spec(), n_total)
    if name == "fpa":
        return FPAScheme(params, bs, r0, n_total)
    raise ValueError(f"unknown scheme {name!r}")


def run_single(config: ScenarioConfig, space: ConfigSpace,
               graph: PositionGraph, library: CandidateLibrary, scheme_name: str,
               seed: int, K: int, tx_dbm: float, N: int) -> RunResult:
    """Simulate one (scheme, seed, sweep point); returns per-period metrics."""
    params = dataclasses.replace(config.radio, tx_power_dbm=tx_dbm)
    grid = config.grid_spec()
    mob = config.mobility
    scheme = make_scheme(scheme_name, config, space, graph, library, params)

    rng_mob = np.random.default_rng(np.random.SeedSequence((seed, 1)))
    fleet = init_fleet(K, mob, rng_mob)

    result = RunResult(scheme_name, seed, K, tx_dbm, N)
    n_periods = config.run.T_max // N
    for l in range(1, n_periods + 1):
        forecast = forecast_period(fleet, mob, grid, N)
        t0 = time.perf_counter()
        decision = scheme.decide(forecast, l)
        decision_s = time.perf_counter() - t0

        slot_rates = []
        for t in range(N):
            global_slot = (l - 1) * N + t
            H = assemble_channel(decision.surfaces, fleet.positions, params,
                                 seed=(seed, 2, global_slot))
            _, r = sinr_and_rate(H, params)
            slot_rates.append(r)
            fleet = step_fleet(fleet, mob, rng_mob)
        rate = float(np.mean(slot_rates))
        scheme.record(rate)

        result.periods.append(PeriodMetrics(
            period=l, rate_bps=rate, move_steps=decision.move_steps,
            time_steps=decision.time_steps,
            decision_s=decision_s if config.run.record_timing else 0.0))
        if config.run.write_audit and decision.scores:
            result.audit.append({
                "scheme": scheme_name, "seed": seed, "K": K,
                "tx_dbm": tx_dbm, "N": N, "period": l,
                "scores": {str(p): s for p, s in sorted(decision.scores.items())},
                "moves": [list(m) for m in decision.moves],
                "positions": [p for p, _ in decision.deployment.entries]
                if decision.deployment else [],
                "rate_bps": rate,
            })
    return result


def run_sweep(config: ScenarioConfig, space: ConfigSpace | None = None,
              library: CandidateLibrary | None = None,
              progress=None) -> list[RunResult]:
    """All (sweep point, scheme, seed) runs, in deterministic order."""
    if space is None:
        space = build_scenario_space(config)
    if library is None:
        library = build_scenario_library(config, space)
    graph = PositionGraph.from_config_space(space)

    results = []
    for tx_dbm in config.sweep.tx_dbm:
        for K in config.sweep.K:
            for N in config.sweep.N:
                for scheme in config.run.schemes:
                    for seed in config.run.seeds:
                        if progress:
                            progress(scheme, seed, tx_dbm, K, N)
                        results.append(run_single(
                            config, space, graph, library, scheme,
                            seed, K, tx_dbm, N))
    return results
