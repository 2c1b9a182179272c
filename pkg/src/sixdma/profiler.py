"""Offline per-grid profiling of catalog configurations.

The service area is split into square grids. For each grid, a hierarchical
search scores a small subset of (position, orientation) pairs by the expected
single-user rate at sampled in-grid user locations, keeping the Top-H as that
grid's candidate set:

  1. keep the hemisphere of positions whose radial normal faces the grid,
  2. pick anchor positions by k-means over the hemisphere coordinates,
  3. score anchors under the radial orientation, keep the best as seeds,
  4. expand seeds to their closed grid neighborhoods (within the hemisphere)
     and score every orientation there.

Scores use large-scale terms only (element gain, LoS-probability-weighted
LoS/NLoS path loss), so the library is stable across fading realizations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .channel import RadioParams, element_gain_linear, los_probability, \
    path_loss_los_db, path_loss_nlos_db
from .geometry import ConfigSpace, closed_neighborhood

LIBRARY_VERSION = 1


class LibraryLoadError(RuntimeError):
    """Raised when a persisted candidate library cannot be used."""


@dataclass(frozen=True)
class GridSpec:
    area_x: float = 300.0
    area_y: float = 300.0
    cell_size: float = 15.0
    z_ref: float = 1.5

    @property
    def n_x(self) -> int:
        return int(math.ceil(self.area_x / self.cell_size))

    @property
    def n_y(self) -> int:
        return int(math.ceil(self.area_y / self.cell_size))

    @property
    def n_cells(self) -> int:
        return self.n_x * self.n_y

    def cell_indices(self, x, y) -> np.ndarray:
        gx = np.clip((np.asarray(x) / self.cell_size).astype(int), 0, self.n_x - 1)
        gy = np.clip((np.asarray(y) / self.cell_size).astype(int), 0, self.n_y - 1)
        return gy * self.n_x + gx

    def cell_coords(self, cell: int) -> tuple[int, int]:
        return cell % self.n_x, cell // self.n_x

    def cell_center(self, cell: int) -> np.ndarray:
        gx, gy = self.cell_coords(cell)
        return np.array([(gx + 0.5) * self.cell_size,
                         (gy + 0.5) * self.cell_size, self.z_ref])


@dataclass(frozen=True)
class ProfilerHyper:
    n_anchors: int = 24
    n_seeds: int = 6
    top_h: int = 5
    n_samples: int = 20


@dataclass
class CandidateLibrary:
    """Per-grid Top-H candidate sets with their profiled rates."""

    entries: list[list[tuple[int, int, float]]]   # per cell: (pos, orient, rate)
    scored_pairs: list[int]
    config_hash: str = ""
    version: int = LIBRARY_VERSION
    _pos_cache: list[dict[int, list[int]]] | None = field(
        default=None, repr=False, compare=False)

    def _cell_positions(self) -> list[dict[int, list[int]]]:
        if self._pos_cache is None:
            cache = []
            for cell_entries in self.entries:
                d: dict[int, list[int]] = {}
                for p, j, _ in cell_entries:
                    d.setdefault(p, []).append(j)
                cache.append(d)
            self._pos_cache = cache
        return self._pos_cache

    def positions_in(self, cell: int) -> set[int]:
        return set(self._cell_positions()[cell])

    def nu(self, cell: int, pos: int) -> int:
        """Distinct orientation count of pos within the cell's candidate set."""
        return len(set(self._cell_positions()[cell].get(pos, ())))

    def orientation_votes(self, cells) -> dict[tuple[int, int], int]:
        """For each (pos, orient): in how many of the cells it appears."""
        votes: dict[tuple[int, int], int] = {}
        for c in cells:
            for p, j, _ in self.entries[c]:
                votes[(p, j)] = votes.get((p, j), 0) + 1
        return votes

    def position_rate_sums(self) -> dict[int, float]:
        sums: dict[int, float] = {}
        for cell_entries in self.entries:
            for p, _, r in cell_entries:
                sums[p] = sums.get(p, 0.0) + r
        return sums

    def best_rate_per_cell(self) -> np.ndarray:
        return np.array([max((r for _, _, r in cell), default=0.0)
                         for cell in self.entries])


def _cell_samples(grid: GridSpec, cell: int, n_samples: int,
                  seed) -> np.ndarray:
    """In-grid user sample locations: the grid center plus uniform draws.

    Drawn once per (cell, seed) so every candidate scored in the cell sees the
    same user locations.
    """
    center = grid.cell_center(cell)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    pts = np.tile(center, (n_samples, 1))
    if n_samples > 1:
        key = seed if isinstance(seed, tuple) else (seed,)
        rng = np.random.default_rng(np.random.SeedSequence(key + (cell, 0)))
        gx, gy = grid.cell_coords(cell)
        pts[1:, 0] = rng.uniform(gx * grid.cell_size,
                                 min((gx + 1) * grid.cell_size, grid.area_x),
                                 size=n_samples - 1)
        pts[1:, 1] = rng.uniform(gy * grid.cell_size,
                                 min((gy + 1) * grid.cell_size, grid.area_y),
                                 size=n_samples - 1)
    return pts


def _tangent_frames(normals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    u = np.cross(normals, z)
    bad = np.linalg.norm(u, axis=-1) < 1e-9
    if bad.any():
        u[bad] = np.cross(normals[bad], x)
    u /= np.linalg.norm(u, axis=-1, keepdims=True)
    v = np.cross(normals, u)
    return u, v


def _candidate_rates(space: ConfigSpace, candidates: list[tuple[int, int]],
                     samples: np.ndarray, params: RadioParams,
                     bs_center: np.ndarray) -> np.ndarray:
    """Large-scale single-user rate of each candidate, averaged over samples."""
    if not candidates:
        return np.zeros(0)
    centers = np.array([bs_center + space.positions[p] for p, _ in candidates])
    normals = np.array([space.orientations[p][j] for p, j in candidates])
    u_ax, v_ax = _tangent_frames(normals)

    diff = samples[None, :, :] - centers[:, None, :]        # (C, S, 3)
    dist = np.linalg.norm(diff, axis=-1)
    dhat = diff / dist[..., None]
    ct = np.clip(np.einsum("cst,ct->cs", dhat, normals), -1.0, 1.0)
    theta = np.arccos(ct)
    par = dhat - ct[..., None] * normals[:, None, :]
    pu = np.einsum("cst,ct->cs", par, u_ax)
    pv = np.einsum("cst,ct->cs", par, v_ax)
    phi = np.where(np.linalg.norm(par, axis=-1) < 1e-12, 0.0,
                   np.arctan2(pv, pu))

    gain = element_gain_linear(params, theta, phi)
    f_ghz = params.carrier_freq_ghz
    p_los = los_probability(dist, params)
    eta = p_los * 10.0 ** (-path_loss_los_db(dist, f_ghz) / 10.0) \
        + (1.0 - p_los) * 10.0 ** (-path_loss_nlos_db(dist, f_ghz) / 10.0)
    snr = params.tx_power_w * params.elements_per_surface * eta * gain \
        / params.noise_power_w
    rates = params.bandwidth_hz * np.log2(1.0 + snr)
    return rates.mean(axis=1)


def grid_rate(space: ConfigSpace, candidate: tuple[int, int], cell: int,
              grid: GridSpec, params: RadioParams, bs_center,
              n_samples: int = 20, seed=0) -> float:
    """Profiled rate of one (position, orientation) pair for one grid cell."""
    samples = _cell_samples(grid, cell, n_samples, seed)
    return float(_candidate_rates(space, [candidate], samples, params,
                                  np.asarray(bs_center, dtype=float))[0])


def hemisphere_filter(space: ConfigSpace, cell: int, grid: GridSpec,
                      bs_center) -> list[int]:
    """Positions whose radial normal faces the grid center."""
    direction = grid.cell_center(cell) - np.asarray(bs_center, dtype=float)
    keep = space.positions @ direction >= 0.0
    return np.flatnonzero(keep).tolist()


def _kmeans(points: np.ndarray, k: int, rng: np.random.Generator,
            n_iter: int = 10) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding; returns (k, dim) centroids."""
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]))
    centroids[0] = points[rng.integers(n)]
    d2 = np.sum((points - centroids[0]) ** 2, axis=1)
    for c in range(1, k):
        probs = d2 / d2.sum() if d2.sum() > 0 else np.full(n, 1.0 / n)
        centroids[c] = points[rng.choice(n, p=probs)]
        d2 = np.minimum(d2, np.sum((points - centroids[c]) ** 2, axis=1))
    for _ in range(n_iter):
        dist = np.sum((points[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
        labels = dist.argmin(axis=1)
        for c in range(k):
            members = points[labels == c]
            if members.size:
                centroids[c] = members.mean(axis=0)
    return centroids


def _anchors_for_cell(space: ConfigSpace, hemi: list[int],
                      hyper: ProfilerHyper, rng: np.random.Generator) -> list[int]:
    if len(hemi) <= hyper.n_anchors:
        return list(hemi)
    pts = space.positions[hemi]
    centroids = _kmeans(pts, hyper.n_anchors, rng)
    anchors = []
    for c in centroids:
        nearest = hemi[int(np.argmin(np.sum((pts - c) ** 2, axis=1)))]
        if nearest not in anchors:
            anchors.append(nearest)
    return anchors


def build_library(space: ConfigSpace, grid: GridSpec, params: RadioParams,
                  hyper: ProfilerHyper, bs_center, seed=0) -> CandidateLibrary:
    """Profile every grid cell and keep its Top-H candidate configurations."""
    bs = np.asarray(bs_center, dtype=float)
    key = seed if isinstance(seed, tuple) else (seed,)
    entries: list[list[tuple[int, int, float]]] = []
    scored: list[int] = []

    for cell in range(grid.n_cells):
        samples = _cell_samples(grid, cell, hyper.n_samples, seed)
        hemi = hemisphere_filter(space, cell, grid, bs)
        rng = np.random.default_rng(np.random.SeedSequence(key + (cell, 1)))
        anchors = _anchors_for_cell(space, hemi, hyper, rng)

        anchor_rates = _candidate_rates(space, [(a, 0) for a in anchors],
                                        samples, params, bs)
        order = sorted(range(len(anchors)),
                       key=lambda t: (-anchor_rates[t], anchors[t]))
        seeds = [anchors[t] for t in order[:hyper.n_seeds]]

        hemi_set = set(hemi)
        expanded = sorted({n for s in seeds
                           for n in closed_neighborhood(space, s)} & hemi_set)
        candidates = [(p, j) for p in expanded
                      for j in range(space.orientation_count(p))]
        rates = _candidate_rates(space, candidates, samples, params, bs)
        ranked = sorted(range(len(candidates)),
                        key=lambda t: (-rates[t], candidates[t]))
        top = [(candidates[t][0], candidates[t][1], float(rates[t]))
               for t in ranked[:hyper.top_h]]
        entries.append(top)
        scored.append(len(anchors) + len(candidates))

    return CandidateLibrary(entries=entries, scored_pairs=scored)


def save_library(library: CandidateLibrary, path: str) -> None:
    payload = {
        "version": library.version,
        "config_hash": library.config_hash,
        "scored_pairs": library.scored_pairs,
        "entries": [[[p, j, r] for p, j, r in cell]
                    for cell in library.entries],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, separators=(",", ":"))


def load_library(path: str) -> CandidateLibrary:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise LibraryLoadError(f"cannot read candidate library {path}: {exc}")
    if not isinstance(payload, dict) or "version" not in payload:
        raise LibraryLoadError(f"{path} is not a candidate library file")
    if payload["version"] != LIBRARY_VERSION:
        raise LibraryLoadError(
            f"library version {payload['version']} unsupported"
            f" (expected {LIBRARY_VERSION}); rebuild with build-library"
        )
    try:
        entries = [[(int(p), int(j), float(r)) for p, j, r in cell]
                   for cell in payload["entries"]]
        scored = [int(s) for s in payload["scored_pairs"]]
        return CandidateLibrary(entries=entries, scored_pairs=scored,
                                config_hash=payload.get("config_hash", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise LibraryLoadError(f"malformed candidate library {path}: {exc}")


def write_heatmap_csv(library: CandidateLibrary, grid: GridSpec,
                      path: str) -> None:
    """Per-cell best profiled rate, one row per grid cell."""
    best = library.best_rate_per_cell()
    with open(path, "w") as fh:
        fh.write("gx,gy,best_rate_bps\n")
        for cell in range(grid.n_cells):
            gx, gy = grid.cell_coords(cell)
            fh.write(f"{gx},{gy},{best[cell]:.3f}\n")
