"""UMa path loss and scaled tapped-delay-line profiles from 3GPP TR 38.901.

Shadow fading is not modelled; all path losses are deterministic means.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from importlib import resources
from typing import List, Optional, Tuple

from .errors import InvalidParameterError, OutOfRangeError

# TR 38.901 evaluates the breakpoint distance with c = 3.0e8 m/s
C_BREAKPOINT = 3.0e8
UMA_H_E = 1.0
UMA_D2D_MAX = 5000.0


@dataclass(frozen=True)
class UmaGeometry:
    d2d: float
    h_bs: float = 25.0
    h_ut: float = 1.5

    def __post_init__(self):
        for name in ("d2d", "h_bs", "h_ut"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise InvalidParameterError(f"{name} must be finite, got {v!r}")
        if self.d2d < 10.0:
            raise OutOfRangeError(f"d2d = {self.d2d} m violates d2d >= 10 m")
        if self.d2d > UMA_D2D_MAX:
            raise OutOfRangeError(f"d2d = {self.d2d} m violates d2d <= {UMA_D2D_MAX:g} m")
        if not 1.5 <= self.h_ut <= 22.5:
            raise OutOfRangeError(f"h_ut = {self.h_ut} m violates 1.5 <= h_ut <= 22.5 m")
        if self.h_bs <= self.h_ut:
            raise OutOfRangeError(f"h_bs = {self.h_bs} m violates h_bs > h_ut = {self.h_ut} m")

    @property
    def d3d(self) -> float:
        return math.hypot(self.d2d, self.h_bs - self.h_ut)


def _check_fc(fc):
    if not math.isfinite(fc) or not 0.5 <= fc <= 100.0:
        raise OutOfRangeError(f"fc = {fc} GHz violates 0.5 <= fc <= 100 GHz")


def breakpoint_distance(fc: float, geom: UmaGeometry) -> float:
    """Effective breakpoint distance ``4 h'_bs h'_ut fc / c`` in meters (fc in GHz)."""
    h_bs = geom.h_bs - UMA_H_E
    h_ut = geom.h_ut - UMA_H_E
    if h_bs <= 0 or h_ut <= 0:
        raise InvalidParameterError(f"effective antenna heights must be positive, got {h_bs} m and {h_ut} m")
    return 4.0 * h_bs * h_ut * fc * 1e9 / C_BREAKPOINT


def uma_pl_los(fc: float, geom: UmaGeometry) -> float:
    _check_fc(fc)
    d3d = geom.d3d
    d_bp = breakpoint_distance(fc, geom)
    if geom.d2d <= d_bp:
        return 28.0 + 22.0 * math.log10(d3d) + 20.0 * math.log10(fc)
    return (
        28.0
        + 40.0 * math.log10(d3d)
        + 20.0 * math.log10(fc)
        - 9.0 * math.log10(d_bp**2 + (geom.h_bs - geom.h_ut) ** 2)
    )


def uma_pl_nlos(fc: float, geom: UmaGeometry) -> float:
    _check_fc(fc)
    pl_nlos = 13.54 + 39.08 * math.log10(geom.d3d) + 20.0 * math.log10(fc) - 0.6 * (geom.h_ut - 1.5)
    return max(uma_pl_los(fc, geom), pl_nlos)


class TdlModel(str, enum.Enum):
    TDL_C = "TDL-C"
    TDL_E = "TDL-E"

    @property
    def is_los(self) -> bool:
        return self is TdlModel.TDL_E


_TDL_FILES = {TdlModel.TDL_C: "tdl_c.txt", TdlModel.TDL_E: "tdl_e.txt"}


@dataclass(frozen=True)
class PdpTap:
    delay: float
    power: float
    is_direct: bool = False


@dataclass(frozen=True)
class PowerDelayProfile:
    taps: Tuple[PdpTap, ...]
    model: Optional[TdlModel] = None
    sigma_tau: Optional[float] = None

    def __post_init__(self):
        taps = self.taps
        if not taps:
            raise InvalidParameterError("profile has no taps")
        if taps[0].delay != 0.0:
            raise InvalidParameterError("first tap must have zero delay")
        if any(b.delay < a.delay for a, b in zip(taps, taps[1:])):
            raise InvalidParameterError("taps must be sorted by nondecreasing delay")
        direct = [t for t in taps if t.is_direct]
        if len(direct) > 1 or (direct and direct[0].delay != 0.0):
            raise InvalidParameterError("at most one direct tap, at zero delay")
        if any(t.power < 0 or t.delay < 0 for t in taps):
            raise InvalidParameterError("tap delays and powers must be nonnegative")

    @property
    def total_power(self) -> float:
        return math.fsum(t.power for t in self.taps)


def load_tdl_table(model) -> List[Tuple[float, float, bool]]:
    """Read a normalized tap table: ``(normalized_delay, power_db, is_los)`` rows."""
    model = TdlModel(model)
    text = resources.files("dirpl").joinpath("data", _TDL_FILES[model]).read_text()
    return parse_tdl_table(text)


def parse_tdl_table(text: str):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[2] not in ("R", "L"):
            raise ValueError(f"line {lineno}: expected '<delay> <power_dB> <R|L>', got {raw!r}")
        rows.append((float(parts[0]), float(parts[1]), parts[2] == "L"))
    return rows


def scaled_tdl(model, sigma_tau: float, kappa_db: Optional[float] = None) -> PowerDelayProfile:
    """Scale a normalized TDL by the delay spread ``sigma_tau`` (seconds).

    Powers are converted to linear and renormalized to unit total. With
    ``kappa_db`` given, the LOS ray is re-leveled so it sits ``kappa_db``
    above the scattered tap that shares its zero delay.
    """
    try:
        model = TdlModel(model)
    except ValueError:
        raise InvalidParameterError(f"unknown TDL model {model!r}") from None
    if not math.isfinite(sigma_tau) or sigma_tau <= 0:
        raise InvalidParameterError(f"sigma_tau must be > 0, got {sigma_tau!r}")
    rows = load_tdl_table(model)
    if kappa_db is not None:
        if not model.is_los:
            raise InvalidParameterError(f"kappa_db only applies to a LOS profile, not {model.value}")
        ref = [p for d, p, los in rows if d == 0.0 and not los]
        rows = [(d, ref[0] + kappa_db if los else p, los) for d, p, los in rows]
    lin = [(d * sigma_tau, 10.0 ** (p / 10.0), los) for d, p, los in rows]
    total = math.fsum(p for _, p, _ in lin)
    # direct ray sorts ahead of the coincident scattered tap
    lin.sort(key=lambda r: (r[0], not r[2]))
    taps = tuple(PdpTap(d, p / total, los) for d, p, los in lin)
    return PowerDelayProfile(taps, model=model, sigma_tau=sigma_tau)


def pdp_split_tau0(pdp: PowerDelayProfile):
    """Split into ``(direct_power, local_power, delayed_taps)``."""
    direct = math.fsum(t.power for t in pdp.taps if t.is_direct)
    local = math.fsum(t.power for t in pdp.taps if t.delay == 0.0 and not t.is_direct)
    delayed = [t for t in pdp.taps if t.delay > 0.0]
    return direct, local, delayed
