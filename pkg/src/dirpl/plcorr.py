"""Directional path loss from an omnidirectional model.

The correction at each distance is the ratio of the total power collected
by omni antennas to the power collected by the scenario's antenna pair,
both taken from the MPM angular spectrum. Patterns are peak-normalized, so
the correction is zero for omni antennas and nonnegative otherwise.
"""

from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np

from . import mpm
from .errors import NumericWarning, ScenarioError
from .patterns import AzimuthPattern, PatternSpec
from .tr38901 import TdlModel, UmaGeometry, scaled_tdl, uma_pl_los, uma_pl_nlos

REFINEMENT_TOL_DB = 1e-3


class Condition(str, enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"

    @property
    def tdl(self) -> TdlModel:
        return TdlModel.TDL_E if self is Condition.LOS else TdlModel.TDL_C


@dataclass(frozen=True)
class Scenario:
    """One sweep configuration. ``sigma_tau`` is in seconds, angles in degrees."""

    fc: float
    condition: Condition
    d_min: float
    d_max: float
    d_step: float
    sigma_tau: float
    gamma: float
    tx: PatternSpec
    rx: PatternSpec
    kappa_db: Optional[float] = None
    alpha_t: float = 180.0
    alpha_r: float = 0.0
    n_phi: int = mpm.DEFAULT_N_PHI
    h_bs: float = 25.0
    h_ut: float = 1.5
    tdl: Optional[TdlModel] = None

    def __post_init__(self):
        try:
            cond = Condition(str(self.condition).upper() if isinstance(self.condition, str) else self.condition)
        except ValueError:
            raise ScenarioError(f"condition must be LOS or NLOS, got {self.condition!r}") from None
        object.__setattr__(self, "condition", cond)
        if self.tdl is None:
            object.__setattr__(self, "tdl", cond.tdl)
        else:
            try:
                tdl = TdlModel(self.tdl)
            except ValueError:
                raise ScenarioError(f"unknown TDL model {self.tdl!r}") from None
            if tdl is not cond.tdl:
                raise ScenarioError(f"{cond.value} scenarios use {cond.tdl.value}, not {tdl.value}")
            object.__setattr__(self, "tdl", tdl)
        for name in ("fc", "d_min", "d_max", "d_step", "sigma_tau", "gamma", "alpha_t", "alpha_r", "h_bs", "h_ut"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ScenarioError(f"{name} must be a finite number, got {v!r}")
        if self.d_min < 10.0:
            raise ScenarioError(f"d_min must be >= 10 m, got {self.d_min}")
        if self.d_step <= 0:
            raise ScenarioError(f"d_step must be > 0, got {self.d_step}")
        if self.d_max < self.d_min:
            raise ScenarioError(f"d_max ({self.d_max}) is below d_min ({self.d_min})")
        if self.sigma_tau <= 0:
            raise ScenarioError(f"sigma_tau must be > 0, got {self.sigma_tau}")
        if self.gamma < 0:
            raise ScenarioError(f"gamma must be >= 0, got {self.gamma}")
        if self.kappa_db is not None and cond is not Condition.LOS:
            raise ScenarioError("kappa_db is only meaningful for LOS scenarios")
        if int(self.n_phi) != self.n_phi or self.n_phi < 360:
            raise ScenarioError(f"n_phi must be an integer >= 360, got {self.n_phi}")
        # validates heights against the UMa ranges
        self.geometry(max(self.d_min, 10.0))

    def distances(self) -> np.ndarray:
        n = int(math.floor((self.d_max - self.d_min) / self.d_step + 1e-9)) + 1
        return self.d_min + self.d_step * np.arange(n)

    def geometry(self, d: float) -> UmaGeometry:
        return UmaGeometry(d2d=float(d), h_bs=self.h_bs, h_ut=self.h_ut)

    def profile(self):
        return scaled_tdl(self.tdl, self.sigma_tau, self.kappa_db)


class PlPoint(NamedTuple):
    pl_in: float
    pl_corr: float
    pl_out: float


class PlRow(NamedTuple):
    d: float
    pl_in: float
    pl_corr: float
    pl_out: float


@dataclass(frozen=True)
class PlCurve:
    rows: Tuple[PlRow, ...]
    flagged: Tuple[float, ...] = ()

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def input_pl(scenario: Scenario, d: float) -> float:
    geom = scenario.geometry(d)
    if scenario.condition is Condition.LOS:
        return uma_pl_los(scenario.fc, geom)
    return uma_pl_nlos(scenario.fc, geom)


def _collected_powers(scenario: Scenario, d: float, n_phi: int, pdp=None):
    pdp = pdp if pdp is not None else scenario.profile()
    geom = mpm.build_geometry(pdp, d, scenario.gamma)
    omni = AzimuthPattern(PatternSpec.omni())
    tx = AzimuthPattern(scenario.tx)
    rx = AzimuthPattern(scenario.rx)
    p_in = mpm.integrate_pas(mpm.synthesize_pas(geom, omni, omni, scenario.alpha_t, scenario.alpha_r, n_phi))
    p_out = mpm.integrate_pas(mpm.synthesize_pas(geom, tx, rx, scenario.alpha_t, scenario.alpha_r, n_phi))
    return p_in, p_out


def _correction_db(scenario, d, n_phi, pdp=None) -> float:
    p_in, p_out = _collected_powers(scenario, d, n_phi, pdp)
    if p_out <= 0:
        return math.inf
    return 10.0 * math.log10(p_in / p_out)


def _checked_correction(scenario, d, pdp=None):
    value = _correction_db(scenario, d, scenario.n_phi, pdp)
    fine = _correction_db(scenario, d, 2 * scenario.n_phi, pdp)
    ok = abs(value - fine) <= REFINEMENT_TOL_DB or value == fine
    return value, ok


def pl_correction(scenario: Scenario, d: float, check: bool = True) -> float:
    """Path-loss correction in dB at distance ``d``.

    With ``check`` set, the correction is recomputed on a grid twice as fine
    and a :class:`NumericWarning` is issued if the two differ by more than
    1e-3 dB.
    """
    if not check:
        return _correction_db(scenario, d, scenario.n_phi)
    value, ok = _checked_correction(scenario, d)
    if not ok:
        warnings.warn(f"quadrature refinement disagrees at d = {d:g} m", NumericWarning, stacklevel=2)
    return value


def directional_pl(scenario: Scenario, d: float, check: bool = True) -> PlPoint:
    pl_in = input_pl(scenario, d)
    corr = pl_correction(scenario, d, check=check)
    return PlPoint(pl_in, corr, pl_in + corr)


def sweep_curve(scenario: Scenario, workers: Optional[int] = None) -> PlCurve:
    """Evaluate the directional path loss at every sweep distance.

    Rows come back in ascending distance regardless of evaluation order.
    Distances whose refinement check failed are listed in ``flagged`` and
    reported once through :class:`NumericWarning`.
    """
    pdp = scenario.profile()
    ds = [float(d) for d in scenario.distances()]

    def point(d):
        corr, ok = _checked_correction(scenario, d, pdp)
        pl_in = input_pl(scenario, d)
        return PlRow(d, pl_in, corr, pl_in + corr), ok

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(point, ds))
    else:
        results = [point(d) for d in ds]
    rows = tuple(r for r, _ in results)
    flagged = tuple(r.d for r, ok in results if not ok)
    if flagged:
        warnings.warn(
            "quadrature refinement disagrees by more than "
            f"{REFINEMENT_TOL_DB:g} dB at d = {', '.join(f'{d:g}' for d in flagged)} m",
            NumericWarning,
            stacklevel=2,
        )
    return PlCurve(rows=rows, flagged=flagged)
