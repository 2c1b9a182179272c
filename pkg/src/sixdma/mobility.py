"""Vehicle fleet kinematics, short-horizon prediction, and period rates.

Vehicles drive on two orthogonal roads crossing at the center of the
rectangular service area, two lanes per road (lane centerlines +/- lane_offset
from the road axis, direction tied to the lane). Per slot, each vehicle
advances along its fixed heading with a speed resampled from a truncated
Gaussian; vehicles leaving the area wrap around to the opposite end.

The period forecast holds the current fleet-mean speed constant over the
horizon, since per-vehicle future speeds are not observable at decision time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import RadioParams, Surface, assemble_channel, sinr_and_rate
from .profiler import GridSpec


@dataclass(frozen=True)
class MobilityParams:
    area_x: float = 300.0
    area_y: float = 300.0
    z_vehicle: float = 1.5
    lane_offset: float = 1.75
    speed_mean: float = 15.0
    speed_std: float = 3.0
    speed_min: float = 10.0
    speed_max: float = 20.0
    slot_duration: float = 1.0


@dataclass
class FleetState:
    positions: np.ndarray    # (K, 3)
    directions: np.ndarray   # (K, 3) unit headings
    speeds: np.ndarray       # (K,)
    lanes: np.ndarray        # (K,) lane ids 0..3

    @property
    def K(self) -> int:
        return self.positions.shape[0]


def truncated_speeds(n: int, params: MobilityParams,
                     rng: np.random.Generator) -> np.ndarray:
    """Rejection-sample speeds from N(mean, std) truncated to [min, max]."""
    out = np.empty(n)
    filled = 0
    while filled < n:
        draw = rng.normal(params.speed_mean, params.speed_std, size=n - filled)
        ok = draw[(draw >= params.speed_min) & (draw <= params.speed_max)]
        out[filled:filled + ok.size] = ok
        filled += ok.size
    return out


_LANE_DIRS = np.array([
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
])


def init_fleet(K: int, params: MobilityParams,
               rng: np.random.Generator) -> FleetState:
    """Spawn K vehicles uniformly along the four lanes."""
    lanes = rng.integers(0, 4, size=K)
    along = rng.uniform(0.0, 1.0, size=K)
    speeds = truncated_speeds(K, params, rng)

    cx, cy = params.area_x / 2.0, params.area_y / 2.0
    off = params.lane_offset
    positions = np.zeros((K, 3))
    horizontal = lanes < 2
    positions[horizontal, 0] = along[horizontal] * params.area_x
    positions[horizontal, 1] = np.where(lanes[horizontal] == 0,
                                        cy - off, cy + off)
    positions[~horizontal, 1] = along[~horizontal] * params.area_y
    positions[~horizontal, 0] = np.where(lanes[~horizontal] == 2,
                                         cx + off, cx - off)
    positions[:, 2] = params.z_vehicle
    return FleetState(positions=positions, directions=_LANE_DIRS[lanes].copy(),
                      speeds=speeds, lanes=lanes)


def _wrap(positions: np.ndarray, params: MobilityParams) -> np.ndarray:
    positions[:, 0] %= params.area_x
    positions[:, 1] %= params.area_y
    return positions


def step_fleet(state: FleetState, params: MobilityParams,
               rng: np.random.Generator) -> FleetState:
    """Advance one slot; speeds are resampled for the next slot."""
    pos = state.positions + state.directions * state.speeds[:, None] \
        * params.slot_duration
    pos = _wrap(pos, params)
    speeds = truncated_speeds(state.K, params, rng)
    return FleetState(positions=pos, directions=state.directions.copy(),
                      speeds=speeds, lanes=state.lanes.copy())


def road_support_cells(params: MobilityParams, grid: GridSpec) -> list[int]:
    """Grid cells the four lane centerlines pass through.

    Vehicles can never leave these cells, so they form the support of any
    long-run occupancy distribution.
    """
    cols, rows = set(), set()
    for off in (-params.lane_offset, params.lane_offset):
        cols.add(min(int((params.area_x / 2 + off) / grid.cell_size),
                     grid.n_x - 1))
        rows.add(min(int((params.area_y / 2 + off) / grid.cell_size),
                     grid.n_y - 1))
    cells = set()
    for gy in rows:
        cells.update(gy * grid.n_x + gx for gx in range(grid.n_x))
    for gx in cols:
        cells.update(gy * grid.n_x + gx for gy in range(grid.n_y))
    return sorted(cells)


@dataclass
class PeriodForecast:
    predicted: np.ndarray     # (N, K, 3) predicted positions per slot
    densities: np.ndarray     # (n_cells,) predicted (vehicle, slot) counts
    active: list[int]         # cells with nonzero density, ascending
    rho_max: int


def forecast_period(state: FleetState, params: MobilityParams,
                    grid: GridSpec, n_slots: int) -> PeriodForecast:
    """Predict positions over the next n_slots and bin them on the grid."""
    v_bar = float(state.speeds.mean()) if state.K else 0.0
    offsets = np.arange(n_slots)[:, None, None] * params.slot_duration
    predicted = state.positions[None, :, :] \
        + state.directions[None, :, :] * v_bar * offsets
    for t in range(n_slots):
        _wrap(predicted[t], params)

    densities = np.zeros(grid.n_cells, dtype=int)
    if state.K:
        cells = grid.cell_indices(predicted[..., 0].ravel(),
                                  predicted[..., 1].ravel())
        np.add.at(densities, cells, 1)
    active = np.flatnonzero(densities).tolist()
    rho_max = int(densities.max()) if state.K else 0
    return PeriodForecast(predicted=predicted, densities=densities,
                          active=active, rho_max=rho_max)


def evaluate_period_rate(surfaces: list[Surface], positions_per_slot: np.ndarray,
                         params: RadioParams, seed) -> tuple[float, list[float]]:
    """Mean sum rate over a period's slots.

    positions_per_slot is (N, K, 3); slot t draws its channel from substream
    (seed, t). Returns (mean rate, per-slot rates).
    """
    rates = []
    base = seed if isinstance(seed, tuple) else (seed,)
    for t in range(positions_per_slot.shape[0]):
        H = assemble_channel(surfaces, positions_per_slot[t], params,
                             seed=base + (t,))
        _, r = sinr_and_rate(H, params)
        rates.append(r)
    return float(np.mean(rates)), rates
