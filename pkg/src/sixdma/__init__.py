"""Movable antenna surface reconfiguration simulator."""

from .geometry import (
    ConfigSpace,
    Deployment,
    GeometryParams,
    InfeasibleGeometryError,
    build_config_space,
    check_deployment,
    check_surfaces,
    closed_neighborhood,
    export_catalog,
)
from .transitions import (
    CostMatrices,
    PositionGraph,
    TransitionPlan,
    UnreachableTargetError,
    bfs_distance,
    build_cost_matrices,
    default_kappa,
    plan_transition,
)
from .channel import (
    RadioParams,
    Surface,
    assemble_channel,
    dbm_to_watts,
    element_gain_db,
    element_offsets,
    local_angles,
    los_probability,
    path_loss_los_db,
    path_loss_nlos_db,
    sinr_and_rate,
    surfaces_from_deployment,
    tangent_frame,
    watts_to_dbm,
)
from .mobility import (
    FleetState,
    MobilityParams,
    PeriodForecast,
    evaluate_period_rate,
    forecast_period,
    init_fleet,
    step_fleet,
)
from .profiler import (
    CandidateLibrary,
    GridSpec,
    LibraryLoadError,
    ProfilerHyper,
    build_library,
    grid_rate,
    hemisphere_filter,
    load_library,
    save_library,
    write_heatmap_csv,
)
from .optimizer import (
    HistoryLibrary,
    PeriodDecision,
    ScoreWeights,
    SingleStepOptimizer,
    assign_positions,
    choose_rotation,
    composite_scores,
    initial_deployment,
    repair_orientations,
)
from .baselines import (
    CircularScheme,
    FPAScheme,
    FullReconfigScheme,
    RotationOnlyScheme,
    SchemeDecision,
    equator_anchors,
)
from .config import (
    ALL_SCHEMES,
    ConfigError,
    ScenarioConfig,
    library_config_hash,
    load_config,
)
from .simulate import RunResult, run_single, run_sweep

__version__ = "0.1.0"
