"""Discrete configuration space for movable antenna surfaces on a sphere.

A base station carries ``U`` antenna surfaces that can relocate on a sphere of
radius ``r0`` and re-orient. Candidate positions form a latitude-longitude grid
built so that every pair of positions is at least ``d_min`` apart; candidate
orientations at a position are the unit normals of the triangular facets spanned
by the position and its consecutive grid neighbours, plus the radial direction.

Positions are indexed ``0 .. M-1`` in the order: north pole, then the ``L+2``
latitude circles from north to south (``F`` meridian points each, azimuth
``2*pi*f/F``), then the south pole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class InfeasibleGeometryError(ValueError):
    """Raised when (r0, d_min, F) cannot produce a valid position grid."""


@dataclass(frozen=True)
class GeometryParams:
    r0: float = 0.5
    d_min: float = 0.1
    F: int = 12

    def __post_init__(self) -> None:
        if self.r0 <= 0 or self.d_min <= 0:
            raise ValueError("r0 and d_min must be positive")
        if int(self.F) != self.F or self.F < 3:
            raise ValueError("F must be an integer >= 3")


# position classes
POLE = "pole"
FIRST_LATITUDE = "first_latitude"
INTERIOR = "interior"


@dataclass
class ConfigSpace:
    """Immutable catalog of candidate positions and orientations."""

    params: GeometryParams
    theta_first: float
    L: int
    positions: np.ndarray          # (M, 3), sphere-centered coordinates
    lat_index: np.ndarray          # (M,), -1 north pole, 0..L+1 circles, L+2 south pole
    mer_index: np.ndarray          # (M,), meridian 0..F-1, -1 at poles
    position_class: list[str]
    neighbors: list[list[int]]     # grid neighbours, symmetric
    orientations: list[np.ndarray]  # per position: (J_i, 3), row 0 is radial

    @property
    def M(self) -> int:
        return self.positions.shape[0]

    def orientation_count(self, i: int) -> int:
        return self.orientations[i].shape[0]


@dataclass(frozen=True)
class Deployment:
    """Activated configuration: one (position, orientation) pair per surface."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pos = [p for p, _ in self.entries]
        if len(set(pos)) != len(pos):
            raise ValueError("deployment occupies a position more than once")

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def position_indices(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)


def first_latitude_angle(params: GeometryParams) -> float:
    """Polar angle of the first latitude circle.

    Two lower bounds apply: adjacent meridian points on the circle must be
    d_min apart (circle radius >= d_min / (2 sin(pi/F))), and the circle must
    be d_min from the pole along the chord.
    """
    arg_ring = params.d_min / (2.0 * params.r0 * math.sin(math.pi / params.F))
    arg_pole = params.d_min / (2.0 * params.r0)
    if arg_ring > 1.0 or arg_pole > 1.0:
        raise InfeasibleGeometryError(
            f"d_min={params.d_min} too large for r0={params.r0}, F={params.F}"
        )
    return max(math.asin(arg_ring), 2.0 * math.asin(arg_pole))


def latitude_count(params: GeometryParams) -> int:
    """Closed-form number of intermediate latitude circles."""
    theta = first_latitude_angle(params)
    D = 2.0 * params.r0 * math.cos(theta)
    if D < params.d_min:
        raise InfeasibleGeometryError(
            "first latitude circles closer than d_min along the axis"
        )
    return int(math.floor(D / params.d_min))

def position_count(params: GeometryParams) -> int:
    """Closed-form M = F*(L+2) + 2."""
    return params.F * (latitude_count(params) + 2) + 2


def _latitude_z(params: GeometryParams, theta_first: float, L: int) -> np.ndarray:
    """z-coordinates of all L+2 circles, north to south.

    The L intermediate circles keep exact d_min z-spacing and are centered
    between the first latitudes; the leftover axial slack goes to the two
    outer gaps, symmetrically.
    """
    z_first = params.r0 * math.cos(theta_first)
    inter = np.array([((L - 1) / 2.0 - j) * params.d_min for j in range(L)])
    return np.concatenate(([z_first], inter, [-z_first]))


def build_config_space(params: GeometryParams) -> ConfigSpace:
    """Construct the position catalog and discrete orientation sets.

    Raises InfeasibleGeometryError if the closed-form grid cannot satisfy the
    pairwise d_min separation (checked exhaustively after construction).
    """
    theta_first = first_latitude_angle(params)
    L = latitude_count(params)
    F = params.F
    r0 = params.r0

    zs = _latitude_z(params, theta_first, L)
    n_circ = L + 2
    M = F * n_circ + 2

    positions = np.zeros((M, 3))
    lat_index = np.full(M, -1, dtype=int)
    mer_index = np.full(M, -1, dtype=int)

    positions[0] = (0.0, 0.0, r0)
    lat_index[0] = -1
    azimuths = 2.0 * np.pi * np.arange(F) / F
    for g in range(n_circ):
        rad = math.sqrt(max(r0 * r0 - zs[g] * zs[g], 0.0))
        base = 1 + g * F
        positions[base:base + F, 0] = rad * np.cos(azimuths)
        positions[base:base + F, 1] = rad * np.sin(azimuths)
        positions[base:base + F, 2] = zs[g]
        lat_index[base:base + F] = g
        mer_index[base:base + F] = np.arange(F)
    positions[M - 1] = (0.0, 0.0, -r0)
    lat_index[M - 1] = n_circ

    _audit_separation(positions, params.d_min)

    idx = _index_map(F, n_circ, M)
    neighbors, cycles = _neighbor_structure(F, n_circ, M, idx)
    classes = [POLE] + [
        FIRST_LATITUDE if g in (0, n_circ - 1) else INTERIOR
        for g in range(n_circ) for _ in range(F)
    ] + [POLE]

    orientations = [
        _orientation_set(positions, i, cycles[i], r0) for i in range(M)
    ]

    return ConfigSpace(
        params=params,
        theta_first=theta_first,
        L=L,
        positions=positions,
        lat_index=lat_index,
        mer_index=mer_index,
        position_class=classes,
        neighbors=neighbors,
        orientations=orientations,
    )


def _audit_separation(positions: np.ndarray, d_min: float) -> None:
    d2 = np.sum((positions[:, None, :] - positions[None, :, :]) ** 2, axis=-1)
    np.fill_diagonal(d2, np.inf)
    dmin_actual = math.sqrt(float(d2.min()))
    if dmin_actual < d_min - 1e-12:
        raise InfeasibleGeometryError(
            f"grid violates separation: min pairwise distance {dmin_actual:.6g}"
            f" < d_min={d_min}"
        )


def _index_map(F: int, n_circ: int, M: int):
    def idx(g: int, f: int) -> int:
        return 1 + g * F + (f % F)
    return idx


def _neighbor_structure(F: int, n_circ: int, M: int, idx):
    """Neighbour lists plus the cyclic neighbour order used for facets."""
    north, south = 0, M - 1
    neighbors: list[list[int]] = [[] for _ in range(M)]
    cycles: list[list[int]] = [[] for _ in range(M)]

    cycles[north] = [idx(0, f) for f in range(F)]
    cycles[south] = [idx(n_circ - 1, f) for f in range(F)]
    neighbors[north] = list(cycles[north])
    neighbors[south] = list(cycles[south])

    for g in range(n_circ):
        for f in range(F):
            i = idx(g, f)
            if g == 0:
                # pole above: pole, E, SE, S, SW, W
                cyc = [north, idx(g, f + 1), idx(g + 1, f + 1),
                       idx(g + 1, f), idx(g + 1, f - 1), idx(g, f - 1)]
            elif g == n_circ - 1:
                # pole below: N, NE, E, pole, W, NW
                cyc = [idx(g - 1, f), idx(g - 1, f + 1), idx(g, f + 1),
                       south, idx(g, f - 1), idx(g - 1, f - 1)]
            else:
                cyc = [idx(g - 1, f), idx(g - 1, f + 1), idx(g, f + 1),
                       idx(g + 1, f + 1), idx(g + 1, f), idx(g + 1, f - 1),
                       idx(g, f - 1), idx(g - 1, f - 1)]
            cycles[i] = cyc
            neighbors[i] = list(cyc)
    return neighbors, cycles


def _orientation_set(positions: np.ndarray, i: int, cycle: list[int],
                     r0: float) -> np.ndarray:
    """Radial normal followed by the facet normals in cyclic order.

    Facet normals are flipped outward (n . q_i >= 0); degenerate facets
    (collinear edges) are skipped.
    """
    q = positions[i]
    normals = [q / r0]
    k = len(cycle)
    for a in range(k):
        e1 = positions[cycle[a]] - q
        e2 = positions[cycle[(a + 1) % k]] - q
        n = np.cross(e1, e2)
        norm = np.linalg.norm(n)
        if norm < 1e-12 * np.linalg.norm(e1) * np.linalg.norm(e2):
            continue
        n = n / norm
        if float(n @ q) < 0.0:
            n = -n
        normals.append(n)
    return np.asarray(normals)


def closed_neighborhood(space: ConfigSpace, i: int) -> list[int]:
    """Grid neighbours of position i plus i itself, ascending order."""
    if not 0 <= i < space.M:
        raise IndexError(f"position index {i} out of range 0..{space.M - 1}")
    return sorted(set(space.neighbors[i]) | {i})


# ---------------------------------------------------------------------------
# physical constraint validation


@dataclass(frozen=True)
class Violation:
    kind: str        # "blocking" | "cpu_visibility" | "separation" | "occupancy"
    first: int
    second: int = -1
    value: float = 0.0


@dataclass
class ConstraintReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations


_TOL = 1e-9


def check_surfaces(centers: np.ndarray, normals: np.ndarray,
                   d_min: float) -> ConstraintReport:
    """Validate physical deployment constraints on explicit surface geometry.

    centers are sphere-centered surface positions, normals the orientation
    unit vectors. Checks, for activated surfaces: mutual non-blocking
    (n_a . (q_b - q_a) <= 0 for every ordered pair), CPU visibility from the
    sphere center (n_a . q_a >= 0), and pairwise separation >= d_min.
    """
    centers = np.asarray(centers, dtype=float)
    normals = np.asarray(normals, dtype=float)
    if centers.shape != normals.shape or centers.ndim != 2:
        raise ValueError("centers and normals must both be (U, 3)")
    report = ConstraintReport()
    U = centers.shape[0]
    for a in range(U):
        vis = float(normals[a] @ centers[a])
        if vis < -_TOL:
            report.violations.append(Violation("cpu_visibility", a, -1, vis))
    for a in range(U):
        for b in range(U):
            if a == b:
                continue
            blk = float(normals[a] @ (centers[b] - centers[a]))
            if blk > _TOL:
                report.violations.append(Violation("blocking", a, b, blk))
    for a in range(U):
        for b in range(a + 1, U):
            d = float(np.linalg.norm(centers[a] - centers[b]))
            if d < d_min - _TOL:
                report.violations.append(Violation("separation", a, b, d))
    return report


def check_deployment(space: ConfigSpace, dep: Deployment) -> ConstraintReport:
    """Validate a catalog deployment against the physical constraints."""
    for p, j in dep.entries:
        if not 0 <= p < space.M:
            raise IndexError(f"position index {p} out of range")
        if not 0 <= j < space.orientation_count(p):
            raise IndexError(
                f"orientation index {j} out of range for position {p}"
            )
    pos = np.array([space.positions[p] for p, _ in dep.entries])
    nrm = np.array([space.orientations[p][j] for p, j in dep.entries])
    report = check_surfaces(pos, nrm, space.params.d_min)
    seen: dict[int, int] = {}
    for a, (p, _) in enumerate(dep.entries):
        if p in seen:
            report.violations.append(Violation("occupancy", seen[p], a))
        seen[p] = a
    return report


def export_catalog(space: ConfigSpace, path: str) -> None:
    """Write the catalog as plain text, one position record per line.

    Record: index, class, latitude index, meridian index, xyz, then the
    orientation normals separated by semicolons.
    """
    with open(path, "w") as fh:
        p = space.params
        fh.write(f"# catalog r0={p.r0} d_min={p.d_min} F={p.F}"
                 f" L={space.L} M={space.M}\n")
        for i in range(space.M):
            x, y, z = space.positions[i]
            normals = ";".join(
                " ".join(f"{c:.9f}" for c in n) for n in space.orientations[i]
            )
            fh.write(f"{i} {space.position_class[i]} {space.lat_index[i]}"
                     f" {space.mer_index[i]}"
                     f" {x:.9f} {y:.9f} {z:.9f} | {normals}\n")
