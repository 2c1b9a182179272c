"""Scenario configuration: one nested YAML file, strictly validated."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field

import yaml

from .channel import RadioParams
from .geometry import GeometryParams
from .mobility import MobilityParams
from .optimizer import ScoreWeights
from .profiler import GridSpec, ProfilerHyper

ALL_SCHEMES = ("single_step", "full_reconfig", "rotation_only", "circular",
               "fpa")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridConfig:
    cell_size: float = 15.0


@dataclass(frozen=True)
class SweepSpec:
    tx_dbm: tuple[float, ...] = (23.0,)
    K: tuple[int, ...] = (30,)
    N: tuple[int, ...] = (10,)


@dataclass(frozen=True)
class RunSpec:
    U: int = 16
    T_max: int = 1000
    seeds: tuple[int, ...] = (0,)
    schemes: tuple[str, ...] = ALL_SCHEMES
    library_seed: int = 0
    kappa: float | None = None
    delta_e: float = 1.0
    delta_t_step: float = 1.0
    record_timing: bool = False
    write_audit: bool = True

    def __post_init__(self) -> None:
        for s in self.schemes:
            if s not in ALL_SCHEMES:
                raise ConfigError(
                    f"unknown scheme {s!r}; expected one of {ALL_SCHEMES}")


@dataclass(frozen=True)
class ScenarioConfig:
    geometry: GeometryParams = field(default_factory=GeometryParams)
    radio: RadioParams = field(default_factory=RadioParams)
    mobility: MobilityParams = field(default_factory=MobilityParams)
    grid: GridConfig = field(default_factory=GridConfig)
    profiler: ProfilerHyper = field(default_factory=ProfilerHyper)
    weights: ScoreWeights = field(default_factory=ScoreWeights)
    run: RunSpec = field(default_factory=RunSpec)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    bs_center: tuple[float, float, float] = (150.0, 150.0, 10.0)

    def grid_spec(self) -> GridSpec:
        return GridSpec(area_x=self.mobility.area_x,
                        area_y=self.mobility.area_y,
                        cell_size=self.grid.cell_size,
                        z_ref=self.mobility.z_vehicle)


_LIST_FIELDS = {"seeds", "schemes", "tx_dbm", "K", "N", "bs_center"}


def _build(cls, data, path: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping")
    known = {f.name: f for f in dataclasses.fields(cls)}
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(
            f"{path or 'config'}: unknown key(s) {sorted(unknown)};"
            f" known keys: {sorted(known)}")
    kwargs = {}
    for name, value in data.items():
        f = known[name]
        if dataclasses.is_dataclass(f.type) or (
                isinstance(f.default_factory, type)
                and dataclasses.is_dataclass(f.default_factory)):
            sub_cls = f.default_factory if f.default_factory is not dataclasses.MISSING else f.type
            kwargs[name] = _build(sub_cls, value, f"{path}.{name}" if path else name)
        elif name in _LIST_FIELDS:
            if not isinstance(value, (list, tuple)):
                raise ConfigError(f"{path}.{name}: expected a list")
            kwargs[name] = tuple(value)
        else:
            kwargs[name] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path or 'config'}: {exc}")


def load_config(path: str) -> ScenarioConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    return _build(ScenarioConfig, data, "")


def config_to_dict(cfg) -> dict:
    return dataclasses.asdict(cfg)


def library_config_hash(config: ScenarioConfig) -> str:
    """Hash of every setting the offline library depends on."""
    relevant = {
        "geometry": dataclasses.asdict(config.geometry),
        "radio": dataclasses.asdict(config.radio),
        "grid": dataclasses.asdict(config.grid),
        "mobility_area": [config.mobility.area_x, config.mobility.area_y,
                          config.mobility.z_vehicle],
        "profiler": dataclasses.asdict(config.profiler),
        "bs_center": list(config.bs_center),
        "library_seed": config.run.library_seed,
    }
    blob = json.dumps(relevant, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]
