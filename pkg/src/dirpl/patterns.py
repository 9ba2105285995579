"""Azimuth power patterns.

Every pattern is peak-normalized (gain 1 at boresight, azimuth 0) and is
evaluated on azimuth offsets in degrees. Absolute gain is reported separately
through :func:`directivity_2d`.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import HpbwUndefinedError, InvalidParameterError

# 3GPP element defaults (azimuth cut only)
BS_ELEMENT_PHI3DB = 65.0
BS_ELEMENT_AM = 30.0
UE_ELEMENT_PHI3DB = 90.0
UE_ELEMENT_AM = 25.0
GNODEB_COLUMNS = 8
GNODEB_SPACING = 0.5

# attenuation slope placing exactly half power at phi3db/2
EXACT_HALF_POWER_SLOPE_DB = 40.0 * math.log10(2.0)


class PatternKind(str, enum.Enum):
    OMNI = "omni"
    GAUSSIAN = "gaussian"
    SINC = "sinc"
    ELEMENT_3GPP = "element3gpp"
    GNODEB_ARRAY = "gnodeb"
    UE_ELEMENT = "ue"


def wrap_deg(phi):
    """Wrap angles in degrees to [-180, 180)."""
    return (np.asarray(phi, dtype=float) + 180.0) % 360.0 - 180.0


def _check_positive(name, value):
    if value is None or not math.isfinite(value) or value <= 0:
        raise InvalidParameterError(f"{name} must be finite and > 0, got {value!r}")


def gaussian_gain(phi, hpbw):
    """Gaussian main-lobe model, exactly 0.5 at ``phi = ±hpbw/2``."""
    _check_positive("hpbw", hpbw)
    phi = np.asarray(phi, dtype=float)
    return np.exp(-4.0 * math.log(2.0) * (phi / hpbw) ** 2)


@lru_cache(maxsize=None)
def solve_sinc_halfpower() -> float:
    """Positive root of ``(sin x / x)**2 = 1/2`` in radians (about 1.39156)."""
    return brentq(lambda x: (math.sin(x) / x) ** 2 - 0.5, 1e-6, math.pi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def sinc_gain(phi, hpbw):
    """Squared-sinc model with side lobes; half power at ``phi = ±hpbw/2``."""
    _check_positive("hpbw", hpbw)
    mu = 2.0 * solve_sinc_halfpower() / hpbw
    x = mu * np.asarray(phi, dtype=float)
    # np.sinc is normalized (sin(pi t)/(pi t)) and handles t = 0
    return np.sinc(x / math.pi) ** 2


def element_gain_3gpp(phi, phi3db, a_m, slope_db=12.0):
    """3GPP parabolic element cut: ``A = min(slope*(phi/phi3db)**2, a_m)`` dB."""
    _check_positive("phi3db", phi3db)
    _check_positive("a_m", a_m)
    phi = np.asarray(phi, dtype=float)
    att = np.minimum(slope_db * (phi / phi3db) ** 2, a_m)
    return 10.0 ** (-att / 10.0)


def array_factor_power(phi, columns, spacing):
    """Normalized power array factor of a uniform broadside linear array."""
    psi = 2.0 * math.pi * spacing * np.sin(np.radians(np.asarray(phi, dtype=float)))
    half = psi / 2.0
    den = columns * np.sin(half)
    small = np.abs(den) < 1e-12
    af = np.where(small, 1.0, np.sin(columns * half) / np.where(small, 1.0, den))
    return af**2


@dataclass(frozen=True)
class PatternSpec:
    """Description of an azimuth pattern.

    Only the fields relevant to ``kind`` are used; the rest stay ``None``.
    Missing element/array fields fall back to the 3GPP defaults when the
    pattern is built.
    """

    kind: PatternKind
    hpbw: Optional[float] = None
    phi3db: Optional[float] = None
    a_m: Optional[float] = None
    columns: Optional[int] = None
    spacing: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PatternKind(self.kind))
        if self.kind in (PatternKind.GAUSSIAN, PatternKind.SINC):
            _check_positive("hpbw", self.hpbw)
            if self.hpbw >= 360.0:
                raise InvalidParameterError(f"hpbw must be < 360 deg, got {self.hpbw}")
        if self.phi3db is not None:
            _check_positive("phi3db", self.phi3db)
        if self.a_m is not None:
            _check_positive("a_m", self.a_m)
        if self.spacing is not None:
            _check_positive("spacing", self.spacing)
        if self.columns is not None and (int(self.columns) != self.columns or self.columns < 1):
            raise InvalidParameterError(f"columns must be an integer >= 1, got {self.columns!r}")
        if self.kind is PatternKind.GNODEB_ARRAY and self.columns is not None and self.columns < 2:
            raise InvalidParameterError("gnodeb array needs at least 2 columns")

    @classmethod
    def omni(cls):
        return cls(PatternKind.OMNI)

    @classmethod
    def gaussian(cls, hpbw):
        return cls(PatternKind.GAUSSIAN, hpbw=hpbw)

    @classmethod
    def sinc(cls, hpbw):
        return cls(PatternKind.SINC, hpbw=hpbw)

    @classmethod
    def gnodeb(cls, columns=GNODEB_COLUMNS, spacing=GNODEB_SPACING):
        return cls(PatternKind.GNODEB_ARRAY, columns=columns, spacing=spacing)

    @classmethod
    def ue(cls, phi3db=UE_ELEMENT_PHI3DB, a_m=UE_ELEMENT_AM):
        return cls(PatternKind.UE_ELEMENT, phi3db=phi3db, a_m=a_m)

    @classmethod
    def element3gpp(cls, phi3db=BS_ELEMENT_PHI3DB, a_m=BS_ELEMENT_AM):
        return cls(PatternKind.ELEMENT_3GPP, phi3db=phi3db, a_m=a_m)

    def label(self) -> str:
        k = self.kind
        if k in (PatternKind.GAUSSIAN, PatternKind.SINC):
            return f"{k.value} {self.hpbw:g} deg"
        return k.value


class AzimuthPattern:
    """Callable peak-normalized power pattern ``g(phi)``, phi in degrees.

    Angles are wrapped to [-180, 180) before evaluation, so the boresight
    offset may be passed unreduced.
    """

    def __init__(self, spec: PatternSpec):
        self.spec = spec
        k = spec.kind
        if k is PatternKind.OMNI:
            self._fn = lambda phi: np.ones_like(phi)
        elif k is PatternKind.GAUSSIAN:
            self._fn = lambda phi: gaussian_gain(phi, spec.hpbw)
        elif k is PatternKind.SINC:
            self._fn = lambda phi: sinc_gain(phi, spec.hpbw)
        elif k is PatternKind.ELEMENT_3GPP:
            phi3db = spec.phi3db if spec.phi3db is not None else BS_ELEMENT_PHI3DB
            a_m = spec.a_m if spec.a_m is not None else BS_ELEMENT_AM
            self._fn = lambda phi: element_gain_3gpp(phi, phi3db, a_m)
        elif k is PatternKind.UE_ELEMENT:
            phi3db = spec.phi3db if spec.phi3db is not None else UE_ELEMENT_PHI3DB
            a_m = spec.a_m if spec.a_m is not None else UE_ELEMENT_AM
            self._fn = lambda phi: element_gain_3gpp(phi, phi3db, a_m, EXACT_HALF_POWER_SLOPE_DB)
        elif k is PatternKind.GNODEB_ARRAY:
            columns = spec.columns if spec.columns is not None else GNODEB_COLUMNS
            spacing = spec.spacing if spec.spacing is not None else GNODEB_SPACING
            self._fn = _gnodeb_fn(columns, spacing)
        else:  # pragma: no cover
            raise InvalidParameterError(f"unknown pattern kind {k!r}")

    def __call__(self, phi):
        phi = wrap_deg(phi)
        return self._fn(phi)

    def __repr__(self):
        return f"AzimuthPattern({self.spec!r})"

    @property
    def is_omni(self) -> bool:
        return self.spec.kind is PatternKind.OMNI


def make_pattern(spec: PatternSpec) -> AzimuthPattern:
    return AzimuthPattern(spec)


def _gnodeb_fn(columns, spacing):
    if columns < 2:
        raise InvalidParameterError("gnodeb array needs at least 2 columns")
    _check_positive("spacing", spacing)

    def raw(phi):
        return element_gain_3gpp(phi, BS_ELEMENT_PHI3DB, BS_ELEMENT_AM) * array_factor_power(phi, columns, spacing)

    peak = float(raw(np.array(0.0)))
    return lambda phi: raw(phi) / peak


def synthesize_gnodeb_azimuth(columns: int = GNODEB_COLUMNS, spacing: float = GNODEB_SPACING) -> AzimuthPattern:
    """Azimuth cut of a broadside panel: 3GPP element times the column array factor."""
    return AzimuthPattern(PatternSpec.gnodeb(columns, spacing))


def _bisect(f, lo, hi, tol):
    flo = f(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def measure_hpbw(pattern, step=0.05, tol=1e-7) -> float:
    """Half-power beamwidth in degrees.

    Walks outward from boresight on each side until the gain falls below one
    half, then bisects the bracketing interval down to ``tol`` degrees.

    Raises:
        HpbwUndefinedError: if either side never reaches half power.
    """
    if abs(float(pattern(0.0)) - 1.0) > 1e-9:
        raise InvalidParameterError("pattern must be peak-normalized at boresight")

    def crossing(sign):
        f = lambda a: float(pattern(sign * a)) - 0.5
        prev = 0.0
        a = step
        while a <= 180.0 + 1e-12:
            if f(a) <= 0.0:
                return _bisect(f, prev, a, tol)
            prev, a = a, a + step
        raise HpbwUndefinedError(f"{pattern!r} never falls to half power")

    return crossing(1.0) + crossing(-1.0)


def azimuth_grid(n_phi: int) -> np.ndarray:
    """Uniform azimuth samples in degrees over [-180, 180)."""
    if n_phi < 1:
        raise InvalidParameterError(f"n_phi must be positive, got {n_phi}")
    return -180.0 + 360.0 * np.arange(n_phi) / n_phi


def directivity_2d(pattern, n_phi: int = 3600) -> float:
    """Azimuthal directivity ``2*pi / integral(g dphi)`` on a periodic grid."""
    g = pattern(azimuth_grid(n_phi))
    total = float(np.sum(g)) * 2.0 * math.pi / n_phi
    if not total > 0.0:
        raise InvalidParameterError("pattern is identically zero")
    return 2.0 * math.pi / total


def write_pattern_csv(fh, pattern, n_phi: int = 3600):
    """Write ``phi_deg,gain_linear,gain_db`` rows at grid resolution."""
    grid = azimuth_grid(n_phi)
    gain = pattern(grid)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["phi_deg", "gain_linear", "gain_db"])
    for phi, g in zip(grid, gain):
        g_db = 10.0 * math.log10(max(float(g), 1e-30))
        w.writerow([f"{phi:.4f}", f"{g:.10e}", f"{g_db:.4f}"])


@dataclass(frozen=True)
class HornAntenna:
    model: str
    hpbw_el_deg: float
    hpbw_az_deg: float
    gain_dbi: float


def ka_band_horns():
    """Reference Ka-band horn datasheet values (26-40 GHz)."""
    text = resources.files("dirpl").joinpath("data/eravant_ka_horns.csv").read_text()
    rows = csv.DictReader(line for line in text.splitlines() if not line.startswith("#"))
    return [
        HornAntenna(r["model"], float(r["hpbw_el_deg"]), float(r["hpbw_az_deg"]), float(r["gain_dbi"]))
        for r in rows
    ]
