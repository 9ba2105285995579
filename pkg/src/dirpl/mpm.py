"""Two-dimensional multi-elliptical scattering model.

Frame: Rx at the origin, Tx at ``(d, 0)``; azimuths are measured
counterclockwise from the Rx->Tx axis. Each delayed PDP tap becomes a
confocal ellipse of single-bounce scatterers with Tx and Rx at the foci.
Zero-delay power is split into a von Mises local-scattering term around the
Rx and, for LOS profiles, a discrete direct ray.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.special import i0e

from .errors import InvalidParameterError
from .patterns import azimuth_grid
from .tr38901 import PowerDelayProfile, pdp_split_tau0

DEFAULT_N_PHI = 3600


@dataclass(frozen=True)
class Ellipse:
    a: float
    b: float
    e: float
    tau: float
    cluster_power: float

    @classmethod
    def from_delay(cls, tau: float, d: float, cluster_power: float = 1.0) -> "Ellipse":
        if not tau > 0:
            raise InvalidParameterError(f"ellipse needs a positive excess delay, got {tau!r}")
        a = 0.5 * (SPEED_OF_LIGHT * tau + d)
        half = 0.5 * d
        # (a - d/2)(a + d/2) avoids cancellation for small excess delays
        b = math.sqrt((a - half) * (a + half))
        return cls(a=a, b=b, e=half / a, tau=tau, cluster_power=cluster_power)

    @property
    def semi_latus_rectum(self) -> float:
        return self.b**2 / self.a


@dataclass(frozen=True)
class MpmGeometry:
    d: float
    ellipses: Tuple[Ellipse, ...]
    local_power: float
    direct_power: float
    gamma: float


@dataclass(frozen=True)
class AngularSpectrum:
    """Power azimuth spectrum on a uniform grid plus discrete rays.

    ``density`` is in linear power per radian; ``deltas`` holds
    ``(angle_deg, power)`` pairs.
    """

    grid: np.ndarray
    density: np.ndarray
    deltas: Tuple[Tuple[float, float], ...] = ()

    @property
    def n_phi(self) -> int:
        return len(self.grid)


def build_geometry(pdp: PowerDelayProfile, d: float, gamma: float) -> MpmGeometry:
    if not math.isfinite(d) or d <= 0:
        raise InvalidParameterError(f"distance must be > 0, got {d!r}")
    if not math.isfinite(gamma) or gamma < 0:
        raise InvalidParameterError(f"gamma must be >= 0, got {gamma!r}")
    direct, local, delayed = pdp_split_tau0(pdp)
    ellipses = tuple(Ellipse.from_delay(t.delay, d, t.power) for t in sorted(delayed, key=lambda t: t.delay))
    return MpmGeometry(d=d, ellipses=ellipses, local_power=local, direct_power=direct, gamma=gamma)


def radius_from_rx(ell: Ellipse, phi_r):
    """Focal-polar radius seen from the Rx focus, ``phi_r`` in degrees."""
    phi = np.radians(phi_r)
    return ell.semi_latus_rectum / (1.0 - ell.e * np.cos(phi))


def _radius_derivative(ell: Ellipse, phi):
    # phi in radians
    den = 1.0 - ell.e * np.cos(phi)
    return -ell.semi_latus_rectum * ell.e * np.sin(phi) / den**2


def scatter_points(ell: Ellipse, phi_r):
    phi = np.radians(phi_r)
    r = radius_from_rx(ell, phi_r)
    return r * np.cos(phi), r * np.sin(phi)


def departure_angle(ell: Ellipse, phi_r, d: float):
    """Departure azimuth at the Tx (degrees, global frame) toward the scatterer at ``phi_r``."""
    x, y = scatter_points(ell, phi_r)
    return np.degrees(np.arctan2(y, x - d))


def _periodic_integral(values, n_phi):
    return float(np.sum(values)) * 2.0 * math.pi / n_phi


def cluster_pas(ell: Ellipse, tx, rx, alpha_t: float, alpha_r: float, grid, d: Optional[float] = None):
    """Arrival density of one ellipse with scatterers uniform in arc length.

    The arc-length element ``ds/dphi`` is normalized by the perimeter found
    with the same periodic quadrature, so under omni antennas the density
    integrates to ``cluster_power`` to rounding.
    """
    grid = np.asarray(grid, dtype=float)
    if d is None:
        d = 2.0 * ell.a * ell.e
    phi = np.radians(grid)
    r = radius_from_rx(ell, grid)
    dr = _radius_derivative(ell, phi)
    ds = np.sqrt(r**2 + dr**2)
    perimeter = _periodic_integral(ds, len(grid))
    base = ell.cluster_power * (ds / perimeter)
    phi_t = departure_angle(ell, grid, d)
    return base * (tx(phi_t - alpha_t) * rx(grid - alpha_r))


def von_mises_pdf(phi_deg, gamma: float, mean_deg: float = 0.0):
    """Von Mises density per radian, evaluated with the scaled Bessel ``I0``."""
    phi = np.radians(np.asarray(phi_deg, dtype=float) - mean_deg)
    return np.exp(gamma * (np.cos(phi) - 1.0)) / (2.0 * math.pi * i0e(gamma))


def local_pas(local_power: float, gamma: float, tx, rx, alpha_t: float, alpha_r: float, grid):
    grid = np.asarray(grid, dtype=float)
    base = local_power * von_mises_pdf(grid, gamma)
    # local scatterers hug the Rx, so every departure is taken toward it
    tx_w = float(tx(np.array(180.0 - alpha_t)))
    return base * (rx(grid - alpha_r) * tx_w)


def los_term(direct_power: float, tx, rx, alpha_t: float, alpha_r: float):
    """Direct ray at arrival angle 0, or ``None`` when there is no direct power."""
    if direct_power < 0:
        raise InvalidParameterError(f"direct power must be >= 0, got {direct_power!r}")
    if direct_power == 0:
        return None
    w = float(tx(np.array(180.0 - alpha_t))) * float(rx(np.array(0.0 - alpha_r)))
    return (0.0, direct_power * w)


def synthesize_pas(geom: MpmGeometry, tx, rx, alpha_t: float, alpha_r: float, n_phi: int = DEFAULT_N_PHI) -> AngularSpectrum:
    if n_phi < 360:
        raise InvalidParameterError(f"n_phi must be >= 360, got {n_phi}")
    grid = azimuth_grid(n_phi)
    density = local_pas(geom.local_power, geom.gamma, tx, rx, alpha_t, alpha_r, grid)
    # fixed index order keeps the sum reproducible
    for ell in geom.ellipses:
        density = density + cluster_pas(ell, tx, rx, alpha_t, alpha_r, grid, geom.d)
    deltas = []
    ray = los_term(geom.direct_power, tx, rx, alpha_t, alpha_r)
    if ray is not None:
        deltas.append(ray)
    return AngularSpectrum(grid=grid, density=density, deltas=tuple(deltas))


def integrate_pas(spec: AngularSpectrum) -> float:
    """Trapezoidal integral over the periodic grid plus the discrete rays."""
    return _periodic_integral(spec.density, spec.n_phi) + math.fsum(p for _, p in spec.deltas)


def write_pas_csv(fh, spec: AngularSpectrum):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["phi_deg", "density_linear"])
    for phi, p in zip(spec.grid, spec.density):
        w.writerow([f"{phi:.4f}", f"{p:.10e}"])
    for angle, power in spec.deltas:
        fh.write(f"# delta {angle:.4f} {power:.10e}\n")
