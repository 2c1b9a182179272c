"""Hybrid near/far-field uplink channel between vehicles and antenna surfaces.

Each surface is a small square element grid at lambda/2 spacing. Large-scale
terms (3GPP-style element gain, distance-dependent LoS probability, LoS/NLoS
path loss) follow the direct path from the surface center; small-scale fading
is one Rayleigh coefficient per path; the per-element phase uses the exact
spherical wavefront, i.e. the true distance from the user to each element, so
near-field curvature is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import ConfigSpace, Deployment

SPEED_OF_LIGHT = 299792458.0

_Z_REF = np.array([0.0, 0.0, 1.0])
_X_REF = np.array([1.0, 0.0, 0.0])


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(w: float) -> float:
    return 10.0 * math.log10(w) + 30.0


@dataclass(frozen=True)
class RadioParams:
    carrier_freq_hz: float = 3.5e9
    bandwidth_hz: float = 20e6
    tx_power_dbm: float = 23.0
    g_max_dbi: float = 8.0
    phi_3db_deg: float = 65.0
    theta_3db_deg: float = 25.0
    a_m_db: float = 30.0
    los_d1: float = 18.0
    los_d2: float = 36.0
    shadow_std_db: float = 7.82
    noise_figure_db: float = 7.0
    elements_per_surface: int = 4
    n_nlos_paths: int = 3
    sinr_eps: float = 1e-12
    min_range: float = 0.1
    los_mode: str = "random"     # "random" | "always" | "never"
    fading: str = "rayleigh"     # "rayleigh" | "fixed"

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq_hz

    @property
    def element_spacing(self) -> float:
        return 0.5 * self.wavelength

    @property
    def tx_power_w(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_power_w(self) -> float:
        dbm = (-174.0 + 10.0 * math.log10(self.bandwidth_hz)
               + self.noise_figure_db)
        return dbm_to_watts(dbm)

    @property
    def carrier_freq_ghz(self) -> float:
        return self.carrier_freq_hz / 1e9


def tangent_frame(normal: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal in-plane basis (u, v) for a surface normal.

    u = normalize(n x z_ref), falling back to x_ref when n is (anti)parallel
    to z_ref; v = n x u. (u, v, n) is right-handed.
    """
    n = np.asarray(normal, dtype=float)
    u = np.cross(n, _Z_REF)
    norm = np.linalg.norm(u)
    if norm < 1e-9:
        u = np.cross(n, _X_REF)
        norm = np.linalg.norm(u)
    u = u / norm
    v = np.cross(n, u)
    return u, v


def element_offsets(q: int, spacing: float) -> np.ndarray:
    """(q, 2) in-plane lattice offsets, sqrt(q) x sqrt(q), centered, row-major."""
    side = int(round(math.sqrt(q)))
    if side * side != q:
        raise ValueError(f"elements_per_surface={q} is not a perfect square")
    coords = (np.arange(side) - (side - 1) / 2.0) * spacing
    uu, vv = np.meshgrid(coords, coords, indexing="xy")
    return np.column_stack([uu.ravel(), vv.ravel()])


@dataclass
class Surface:
    """One activated antenna surface in world coordinates."""

    center: np.ndarray            # (3,)
    normal: np.ndarray            # (3,) unit
    offsets: np.ndarray           # (Q, 2) in-plane element offsets

    def __post_init__(self) -> None:
        self.center = np.asarray(self.center, dtype=float)
        self.normal = np.asarray(self.normal, dtype=float)
        u, v = tangent_frame(self.normal)
        self.u_axis = u
        self.v_axis = v

    @property
    def n_elements(self) -> int:
        return self.offsets.shape[0]

    def element_positions(self) -> np.ndarray:
        """(Q, 3) world coordinates of the elements."""
        return (self.center[None, :]
                + self.offsets[:, 0:1] * self.u_axis[None, :]
                + self.offsets[:, 1:2] * self.v_axis[None, :])


def surfaces_from_deployment(space: ConfigSpace, dep: Deployment,
                             params: RadioParams,
                             bs_center: np.ndarray) -> list[Surface]:
    """Resolve catalog entries into surfaces, sorted by (position, orientation)."""
    offs = element_offsets(params.elements_per_surface, params.element_spacing)
    surfaces = []
    for p, j in sorted(dep.entries):
        surfaces.append(Surface(
            center=np.asarray(bs_center, dtype=float) + space.positions[p],
            normal=space.orientations[p][j],
            offsets=offs,
        ))
    return surfaces


def local_angles(surface: Surface, point: np.ndarray) -> tuple[float, float]:
    """Departure angles of a point seen from a surface.

    theta is measured from the boresight normal; phi is the in-plane azimuth,
    zero along the u axis (and defined as 0 exactly at boresight).
    """
    d = np.asarray(point, dtype=float) - surface.center
    r = np.linalg.norm(d)
    if r < 1e-12:
        raise ValueError("point coincides with surface center")
    dhat = d / r
    ct = float(np.clip(dhat @ surface.normal, -1.0, 1.0))
    theta = math.acos(ct)
    par = dhat - ct * surface.normal
    if np.linalg.norm(par) < 1e-12:
        return theta, 0.0
    phi = math.atan2(float(par @ surface.v_axis), float(par @ surface.u_axis))
    return theta, phi


def element_gain_db(params: RadioParams, theta: float, phi: float) -> float:
    """3GPP-style element gain (dBi) at angles (radians) off boresight."""
    phi_deg = math.degrees(phi)
    theta_deg = math.degrees(theta)
    a_h = -min(12.0 * (phi_deg / params.phi_3db_deg) ** 2, params.a_m_db)
    a_v = -min(12.0 * (theta_deg / params.theta_3db_deg) ** 2, params.a_m_db)
    return params.g_max_dbi - min(-(a_h + a_v), params.a_m_db)


def element_gain_linear(params: RadioParams, theta, phi):
    """Vectorized linear gain; theta/phi arrays in radians."""
    phi_deg = np.degrees(phi)
    theta_deg = np.degrees(theta)
    a_h = np.minimum(12.0 * (phi_deg / params.phi_3db_deg) ** 2, params.a_m_db)
    a_v = np.minimum(12.0 * (theta_deg / params.theta_3db_deg) ** 2, params.a_m_db)
    g_db = params.g_max_dbi - np.minimum(a_h + a_v, params.a_m_db)
    return 10.0 ** (g_db / 10.0)


def los_probability(d: float, params: RadioParams):
    """Distance-dependent LoS probability, valid for d > 0."""
    d = np.asarray(d, dtype=float)
    decay = np.exp(-d / params.los_d2)
    return np.minimum(params.los_d1 / d, 1.0) * (1.0 - decay) + decay


def path_loss_los_db(d, f_ghz: float):
    """LoS path loss in dB; d clamped to the model's 1 m validity floor."""
    d = np.maximum(np.asarray(d, dtype=float), 1.0)
    return 32.4 + 21.0 * np.log10(d) + 20.0 * np.log10(f_ghz)


def path_loss_nlos_db(d, f_ghz: float, chi_db=0.0):
    """NLoS path loss in dB with shadow-fading term chi_db."""
    d = np.maximum(np.asarray(d, dtype=float), 1.0)
    return 35.3 * np.log10(d) + 22.4 + 21.3 * np.log10(f_ghz) + chi_db


def _surface_arrays(surfaces: list[Surface]):
    centers = np.array([s.center for s in surfaces])
    normals = np.array([s.normal for s in surfaces])
    u_axes = np.array([s.u_axis for s in surfaces])
    v_axes = np.array([s.v_axis for s in surfaces])
    elems = np.array([s.element_positions() for s in surfaces])  # (U, Q, 3)
    return centers, normals, u_axes, v_axes, elems


def assemble_channel(surfaces: list[Surface], user_positions: np.ndarray,
                     params: RadioParams, seed) -> np.ndarray:
    """Draw one channel realization H of shape (K, total_elements).

    Columns follow the surface list order (use surfaces_from_deployment for
    the catalog (position, orientation) sort), Q consecutive columns per
    surface. All randomness comes from a generator seeded with `seed` (an int
    or tuple, e.g. (master_seed, slot)); draws are fixed-shape arrays indexed
    by (user, surface), so the realization is independent of evaluation order
    and common across schemes with equal (K, U).
    """
    users = np.atleast_2d(np.asarray(user_positions, dtype=float))
    K = users.shape[0]
    U = len(surfaces)
    if U == 0 or K == 0:
        return np.zeros((K, 0), dtype=complex)
    q_each = {s.n_elements for s in surfaces}
    centers, normals, u_axes, v_axes, elems = _surface_arrays(surfaces)
    Qs = [s.n_elements for s in surfaces]

    diff = users[:, None, :] - centers[None, :, :]          # (K, U, 3)
    dist = np.linalg.norm(diff, axis=-1)                    # (K, U)
    if (dist < params.min_range).any():
        raise ValueError("a user is within min_range of a surface center")
    dhat = diff / dist[..., None]

    ct = np.clip(np.einsum("kus,us->ku", dhat, normals), -1.0, 1.0)
    theta = np.arccos(ct)
    par = dhat - ct[..., None] * normals[None, :, :]
    pu = np.einsum("kus,us->ku", par, u_axes)
    pv = np.einsum("kus,us->ku", par, v_axes)
    boresight = np.linalg.norm(par, axis=-1) < 1e-12
    phi = np.where(boresight, 0.0, np.arctan2(pv, pu))

    gain = element_gain_linear(params, theta, phi)          # (K, U)
    f_ghz = params.carrier_freq_ghz
    eta_los = 10.0 ** (-path_loss_los_db(dist, f_ghz) / 10.0)

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    n_nlos = params.n_nlos_paths
    # fixed draw order: LoS coin, shadow, LoS fading, NLoS fading
    los_u = rng.random((K, U))
    chi = rng.normal(0.0, params.shadow_std_db, size=(K, U, n_nlos))
    xi_los = rng.normal(size=(K, U, 2))
    xi_nlos = rng.normal(size=(K, U, n_nlos, 2))

    if params.los_mode == "always":
        has_los = np.ones((K, U), dtype=bool)
    elif params.los_mode == "never":
        has_los = np.zeros((K, U), dtype=bool)
    elif params.los_mode == "random":
        has_los = los_u < los_probability(dist, params)
    else:
        raise ValueError(f"unknown los_mode {params.los_mode!r}")

    if params.fading == "fixed":
        fade_los = np.ones((K, U), dtype=complex)
        fade_nlos = np.ones((K, U, n_nlos), dtype=complex)
    elif params.fading == "rayleigh":
        fade_los = (xi_los[..., 0] + 1j * xi_los[..., 1]) / math.sqrt(2.0)
        fade_nlos = (xi_nlos[..., 0] + 1j * xi_nlos[..., 1]) / math.sqrt(2.0)
    else:
        raise ValueError(f"unknown fading {params.fading!r}")

    amp = np.where(has_los, np.sqrt(eta_los * gain), 0.0) * fade_los
    if n_nlos > 0:
        eta_nlos = 10.0 ** (-path_loss_nlos_db(dist[..., None], f_ghz, chi) / 10.0)
        amp = amp + (np.sqrt(eta_nlos * gain[..., None]) * fade_nlos).sum(axis=-1)

    # exact per-element spherical-wavefront phase
    k_wave = 2.0 * np.pi / params.wavelength
    cols = []
    if len(q_each) == 1:
        edist = np.linalg.norm(users[:, None, None, :] - elems[None, :, :, :],
                               axis=-1)                     # (K, U, Q)
        H = amp[..., None] * np.exp(-1j * k_wave * edist)
        return H.reshape(K, U * Qs[0])
    for u in range(U):
        edist = np.linalg.norm(users[:, None, :] - elems[u][None, :, :], axis=-1)
        cols.append(amp[:, u:u + 1] * np.exp(-1j * k_wave * edist))
    return np.concatenate(cols, axis=1)


def sinr_and_rate(H: np.ndarray, params: RadioParams,
                  tx_power_w=None) -> tuple[np.ndarray, float]:
    """Matched-filter uplink SINR per user and the sum rate in bit/s.

    gamma_k = P_k ||h_k||^2 / (sum_{n != k} P_n |h_k^H h_n|^2 / (||h_k||^2 + eps)
              + sigma^2)
    """
    H = np.asarray(H)
    K = H.shape[0]
    if K == 0:
        return np.zeros(0), 0.0
    if tx_power_w is None:
        tx_power_w = params.tx_power_w
    P = np.broadcast_to(np.asarray(tx_power_w, dtype=float), (K,))

    gram = H @ H.conj().T
    norms = np.real(np.diag(gram))
    cross = np.abs(gram) ** 2
    np.fill_diagonal(cross, 0.0)
    interference = (cross * P[None, :]).sum(axis=1) / (norms + params.sinr_eps)
    gamma = P * norms / (interference + params.noise_power_w)
    rate = float(params.bandwidth_hz * np.sum(np.log2(1.0 + gamma)))
    return gamma, rate
