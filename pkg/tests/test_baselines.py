"""Comparison schemes: fixed sectors, equatorial track, rotation-only, full
reassignment. All must expose 64 receive elements and stay physically valid."""

import math

import numpy as np
import pytest

from sixdma.baselines import (
    SECTOR_AZIMUTHS_DEG,
    SECTOR_DOWNTILT_DEG,
    CircularScheme,
    FPAScheme,
    FullReconfigScheme,
    RotationOnlyScheme,
    equator_anchors,
    rect_element_offsets,
)
from sixdma.channel import RadioParams
from sixdma.geometry import check_deployment, check_surfaces
from sixdma.mobility import MobilityParams, forecast_period, init_fleet, \
    road_support_cells
from sixdma.optimizer import HistoryLibrary, ScoreWeights, composite_scores, \
    initial_deployment
from sixdma.profiler import GridSpec
from sixdma.transitions import PositionGraph

GRID = GridSpec()
MOBILITY = MobilityParams()
N_TOTAL = 64


def east_forecast(count=4):
    from sixdma.mobility import PeriodForecast
    d = np.zeros(GRID.n_cells, dtype=int)
    cell = int(GRID.cell_indices(292.5, 142.5))
    d[cell] = count
    return PeriodForecast(predicted=np.zeros((1, 0, 3)), densities=d,
                          active=[cell], rho_max=count)


def empty_forecast():
    from sixdma.mobility import PeriodForecast
    return PeriodForecast(predicted=np.zeros((1, 0, 3)),
                          densities=np.zeros(GRID.n_cells, dtype=int),
                          active=[], rho_max=0)


def fleet_forecast(seed=1, K=20, n_slots=10):
    state = init_fleet(K, MOBILITY, np.random.default_rng(seed))
    return forecast_period(state, MOBILITY, GRID, n_slots)


def total_elements(decision):
    return sum(s.n_elements for s in decision.surfaces)


class TestRectOffsets:
    def test_square_sixteen(self):
        offs = rect_element_offsets(16, 2.0)
        assert offs.shape == (16, 2)
        assert np.allclose(offs.mean(axis=0), 0.0, atol=1e-12)
        assert sorted(set(offs[:, 0])) == [-3.0, -1.0, 1.0, 3.0]
        assert sorted(set(offs[:, 1])) == [-3.0, -1.0, 1.0, 3.0]

    def test_squarest_factorization(self):
        offs = rect_element_offsets(12, 1.0)
        # 3 rows x 4 cols: u spans 4 values, v spans 3
        assert len(set(offs[:, 0])) == 4
        assert len(set(offs[:, 1])) == 3

    def test_row_vector(self):
        offs = rect_element_offsets(2, 1.0)
        assert offs.shape == (2, 2)
        assert np.allclose(sorted(offs[:, 0]), [-0.5, 0.5])
        assert np.allclose(offs[:, 1], 0.0)


class TestFPA:
    @pytest.fixture()
    def scheme(self, radio, bs_center):
        return FPAScheme(radio, bs_center, 0.5, N_TOTAL)

    def test_static_zero_cost(self, scheme):
        d1 = scheme.decide(fleet_forecast(), 1)
        d2 = scheme.decide(east_forecast(), 2)
        assert d1.move_steps == 0 and d1.time_steps == 0
        assert d2.surfaces is d1.surfaces or d2.surfaces == d1.surfaces

    def test_sector_geometry(self, scheme, bs_center):
        tilt = math.radians(SECTOR_DOWNTILT_DEG)
        for s, az_deg in zip(scheme.surfaces, SECTOR_AZIMUTHS_DEG):
            az = math.radians(az_deg)
            assert np.allclose(
                s.center, bs_center + 0.5 * np.array([math.cos(az),
                                                      math.sin(az), 0.0]),
                atol=1e-12)
            expected_n = [math.cos(tilt) * math.cos(az),
                          math.cos(tilt) * math.sin(az), -math.sin(tilt)]
            assert np.allclose(s.normal, expected_n, atol=1e-12)
            assert np.linalg.norm(s.normal) == pytest.approx(1.0)

    def test_physically_valid(self, scheme, bs_center):
        centers = np.array([s.center - bs_center for s in scheme.surfaces])
        normals = np.array([s.normal for s in scheme.surfaces])
        assert check_surfaces(centers, normals, 0.1).feasible

    def test_element_parity(self, scheme):
        assert total_elements(scheme.decide(east_forecast(), 1)) == 64
        assert all(s.n_elements == 16 for s in scheme.surfaces)


class TestEquatorAnchors:
    def test_default_anchors(self, space):
        assert equator_anchors(space) == [61, 64, 67, 70]

    def test_anchor_positions_on_equator(self, space):
        for p in equator_anchors(space):
            assert space.positions[p][2] == pytest.approx(0.0, abs=1e-12)


class TestRotationOnly:
    @pytest.fixture()
    def scheme(self, space, library, radio, bs_center):
        return RotationOnlyScheme(space, library, radio, bs_center, N_TOTAL)

    def test_positions_pinned(self, space, scheme):
        d1 = scheme.decide(fleet_forecast(seed=1), 1)
        d2 = scheme.decide(fleet_forecast(seed=9), 2)
        assert d1.deployment.position_indices == (61, 64, 67, 70)
        assert d2.deployment.position_indices == (61, 64, 67, 70)
        assert d1.move_steps == 0 and d1.time_steps == 0
        assert d2.move_steps == 0 and d2.time_steps == 0

    def test_orientations_adapt_and_stay_valid(self, space, scheme):
        seen = set()
        for seed in (1, 5, 9):
            d = scheme.decide(fleet_forecast(seed=seed), 1)
            assert check_deployment(space, d.deployment).feasible
            for p, j in d.deployment.entries:
                assert 0 <= j < space.orientation_count(p)
            seen.add(tuple(j for _, j in d.deployment.entries))
        assert total_elements(scheme.decide(east_forecast(), 4)) == 64


class TestCircular:
    @pytest.fixture()
    def scheme(self, radio, bs_center):
        return CircularScheme(radio, bs_center, 0.5, 12, GRID, N_TOTAL)

    def test_empty_forecast_no_move(self, scheme):
        scheme.base = 5
        d = scheme.decide(empty_forecast(), 1)
        assert scheme.base == 5
        assert d.move_steps == 0 and d.time_steps == 0

    def test_hops_are_cyclic_distance(self, scheme):
        fc = fleet_forecast(seed=2)
        for start in range(12):
            scheme.base = start
            d = scheme.decide(fc, 1)
            raw = abs(scheme.base - start)
            assert d.move_steps == min(raw, 12 - raw)
            assert d.time_steps == d.move_steps
            assert d.move_steps <= 6

    def test_idempotent_on_frozen_forecast(self, scheme):
        fc = east_forecast()
        scheme.decide(fc, 1)
        second = scheme.decide(fc, 2)
        assert second.move_steps == 0

    def test_lockstep_quadrants(self, scheme, bs_center):
        d = scheme.decide(east_forecast(), 1)
        azimuths = []
        for s in d.surfaces:
            rel = s.center - bs_center
            azimuths.append(math.atan2(rel[1], rel[0]) % (2 * math.pi))
        base = azimuths[0]
        steps = [round(((a - base) % (2 * math.pi)) / (2 * math.pi / 12))
                 for a in azimuths]
        assert steps == [0, 3, 6, 9]
        assert total_elements(d) == 64

    def test_deterministic(self, radio, bs_center):
        fc = fleet_forecast(seed=3)
        bases = []
        for _ in range(2):
            s = CircularScheme(radio, bs_center, 0.5, 12, GRID, N_TOTAL)
            s.decide(fc, 1)
            bases.append(s.base)
        assert bases[0] == bases[1]


class TestFullReconfig:
    @pytest.fixture()
    def scheme(self, space, graph, library, radio, bs_center):
        support = road_support_cells(MOBILITY, GRID)
        return FullReconfigScheme(space, graph, library, ScoreWeights(),
                                  radio, bs_center, 16, prior_cells=support)

    def test_initial_deployment_matches_prior(self, space, library, scheme):
        support = road_support_cells(MOBILITY, GRID)
        expected = initial_deployment(space, library, 16,
                                      prior_cells=support,
                                      weights=ScoreWeights())
        assert scheme.deployment.position_indices == expected.position_indices

    def test_targets_are_top_scored(self, space, library, scheme):
        fc = fleet_forecast(seed=4)
        current = list(scheme.deployment.position_indices)
        expected_scores = composite_scores(range(space.M), fc, library,
                                           HistoryLibrary(), ScoreWeights(),
                                           incumbents=current, period_index=1)
        expected = sorted(range(space.M),
                          key=lambda p: (-expected_scores[p], p))[:16]
        d = scheme.decide(fc, 1)
        assert list(d.deployment.position_indices) == expected
        assert d.scores == expected_scores

    def test_move_accounting(self, space, graph, scheme):
        fc = fleet_forecast(seed=6)
        current = list(scheme.deployment.position_indices)
        d = scheme.decide(fc, 1)
        new = list(d.deployment.position_indices)
        from sixdma.transitions import plan_transition
        plan = plan_transition(graph, current, new)
        assert d.move_steps == plan.total_steps
        assert d.time_steps == plan.max_steps
        assert len(d.moves) == sum(1 for s in plan.steps if s > 0)
        for src, tgt in d.moves:
            assert src in current
            assert tgt in new

    def test_frozen_forecast_settles(self, scheme):
        fc = fleet_forecast(seed=7)
        scheme.decide(fc, 1)
        second = scheme.decide(fc, 2)
        assert second.move_steps == 0
        assert second.time_steps == 0

    def test_no_active_keeps_deployment(self, scheme):
        before = scheme.deployment
        d = scheme.decide(empty_forecast(), 1)
        assert d.move_steps == 0 and d.time_steps == 0
        assert d.deployment is before
        assert total_elements(d) == 64

    def test_deployment_valid_each_period(self, space, scheme):
        for period, seed in enumerate((1, 2, 3), start=1):
            d = scheme.decide(fleet_forecast(seed=seed), period)
            assert check_deployment(space, d.deployment).feasible
            assert len(set(d.deployment.position_indices)) == 16
            assert total_elements(d) == 64
            scheme.record(5e8 + period)
