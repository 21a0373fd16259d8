"""Network geometry, large-scale fading and correlated Rayleigh channels.

The deployment area is a square with wrap-around distances (torus), so no UE
sits at an artificial cell edge. Large-scale coefficients follow a 3GPP urban
microcell NLoS pathloss with i.i.d. log-normal shadowing, and per-antenna
spatial correlation follows the Gaussian local scattering model for a
half-wavelength uniform linear array.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# 3GPP UMi NLoS pathloss: beta_dB = -30.5 - 36.7 log10(d3D / 1 m)
PATHLOSS_CONST_DB = -30.5
PATHLOSS_SLOPE_DB = 36.7
AP_HEIGHT_M = 10.0  # APs are elevated; enters d3D in quadrature and floors the distance


@dataclass
class NetworkRealization:
    """AP and UE positions of one setup, both (n, 2) arrays in meters."""
    ap_positions: np.ndarray
    ue_positions: np.ndarray
    area_side: float


@dataclass
class ChannelStatistics:
    """Large-scale state of one setup.

    beta:  (K, L) linear channel gains
    R:     (K, L, N, N) spatial correlation matrices, trace(R[k,l]) = N * beta[k,l]
    sqrt_R: (K, L, N, N) Hermitian square roots used to draw channel vectors
    """
    beta: np.ndarray
    R: np.ndarray
    sqrt_R: np.ndarray


def generate_network(config, rng):
    """Drop L APs and K UEs i.i.d. uniformly on the square.

    AP positions are drawn before UE positions so they do not depend on K.
    """
    side = config.area_side
    aps = rng.uniform(0.0, side, size=(config.L, 2))
    ues = rng.uniform(0.0, side, size=(config.K, 2))
    return NetworkRealization(ap_positions=aps, ue_positions=ues, area_side=side)


def wrapped_displacement(src, dst, side):
    """Minimal-image displacement vectors src -> dst on the torus.

    src (m, 2) and dst (n, 2) broadcast to (m, n, 2); each component lies in
    [-side/2, side/2).
    """
    delta = dst[None, :, :] - src[:, None, :]
    return (delta + side / 2.0) % side - side / 2.0


def wrapped_distance(src, dst, side):
    """Wrap-around 2-D distances, (m, n). Never exceeds side/sqrt(2)."""
    return np.linalg.norm(wrapped_displacement(src, dst, side), axis=-1)


def large_scale_coefficients(net, config, rng):
    """(K, L) linear gains from the UMi pathloss plus log-normal shadowing.

    The AP height enters the 3-D distance in quadrature, flooring it at
    AP_HEIGHT_M even for co-located positions. Shadowing is i.i.d. over
    (UE, AP) pairs.
    """
    d2 = wrapped_distance(net.ue_positions, net.ap_positions, net.area_side)
    d3 = np.hypot(d2, AP_HEIGHT_M)
    beta_db = PATHLOSS_CONST_DB - PATHLOSS_SLOPE_DB * np.log10(d3)
    if config.shadow_std_db > 0:
        beta_db = beta_db + rng.normal(0.0, config.shadow_std_db, size=d2.shape)
    return 10.0 ** (beta_db / 10.0)


def spatial_correlation_matrix(beta, nominal_angle_rad, asd_rad, n_antennas):
    """Gaussian local scattering correlation for a half-wavelength ULA.

    Entry (m, n) is
        beta * exp(j pi (m - n) sin(phi)) * exp(-asd^2/2 * (pi (m - n) cos(phi))^2)
    with phi the nominal azimuth angle. Hermitian PSD with trace N * beta.
    """
    offs = np.arange(n_antennas)
    diff = offs[:, None] - offs[None, :]
    phase = np.exp(1j * np.pi * diff * np.sin(nominal_angle_rad))
    spread = np.exp(-0.5 * (asd_rad * np.pi * diff * np.cos(nominal_angle_rad)) ** 2)
    return beta * phase * spread


def _hermitian_sqrt(R, tol_scale=1e-12):
    """Square roots of stacked Hermitian PSD matrices via eigendecomposition.

    Eigenvalues within -tol_scale*trace of zero are clamped to 0; anything
    more negative signals invalid statistics.
    """
    vals, vecs = np.linalg.eigh(R)
    trace = np.trace(R, axis1=-2, axis2=-1).real
    floor = -tol_scale * np.maximum(trace, 0.0)[..., None]
    if np.any(vals < floor):
        raise ValueError("correlation matrix is not PSD within tolerance")
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)[..., None, :]) @ np.conj(np.swapaxes(vecs, -1, -2))


def build_channel_statistics(net, config, rng):
    """Assemble per-setup large-scale statistics (beta, R, sqrt_R)."""
    beta = large_scale_coefficients(net, config, rng)
    disp = wrapped_displacement(net.ap_positions, net.ue_positions, net.area_side)
    angles = np.arctan2(disp[..., 1], disp[..., 0]).T        # (K, L) AP->UE bearing
    asd = np.deg2rad(config.asd_deg)
    offs = np.arange(config.N)
    diff = offs[:, None] - offs[None, :]
    phase = np.exp(1j * np.pi * diff * np.sin(angles)[..., None, None])
    spread = np.exp(-0.5 * (asd * np.pi * diff * np.cos(angles)[..., None, None]) ** 2)
    R = beta[..., None, None] * phase * spread
    return ChannelStatistics(beta=beta, R=R, sqrt_R=_hermitian_sqrt(R))


def draw_channel(stats, rng):
    """One correlated Rayleigh realization h = sqrt(R) z, shape (K, L, N).

    z is standard circularly-symmetric complex Gaussian; E{h h^H} = R.
    """
    shape = stats.sqrt_R.shape[:-1]  # (K, L, N)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    return (stats.sqrt_R @ z[..., None])[..., 0]
