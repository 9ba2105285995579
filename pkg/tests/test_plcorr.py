import math

import numpy as np
import pytest

from dirpl import plcorr
from dirpl.errors import NumericWarning, ScenarioError
from dirpl.patterns import PatternSpec
from dirpl.plcorr import Scenario, directional_pl, pl_correction, sweep_curve
from dirpl.tr38901 import TdlModel


def scen(cond="LOS", fc=28.0, tx=None, rx=None, **kw):
    sigma = 266e-9 if fc == 28.0 else 249e-9
    return Scenario(
        fc, cond, 60, 180, 10, sigma, 60.0,
        tx or PatternSpec.sinc(8), rx or PatternSpec.ue(), **kw,
    )


def test_condition_tdl_pairing():
    assert scen("LOS").tdl is TdlModel.TDL_E
    assert scen("nlos").tdl is TdlModel.TDL_C
    with pytest.raises(ScenarioError):
        scen("LOS", tdl="TDL-C")
    with pytest.raises(ScenarioError):
        scen("NLOS", kappa_db=22.0)


@pytest.mark.parametrize(
    "kw",
    [dict(d_min=5), dict(d_step=0), dict(d_max=50), dict(sigma_tau=0), dict(gamma=-1), dict(n_phi=100), dict(h_ut=0.5)],
)
def test_scenario_validation(kw):
    base = dict(fc=28.0, condition="LOS", d_min=60, d_max=180, d_step=10, sigma_tau=266e-9, gamma=60.0,
                tx=PatternSpec.omni(), rx=PatternSpec.omni())
    base.update(kw)
    with pytest.raises((ScenarioError, ValueError)):
        Scenario(**base)


def test_distances():
    d = scen().distances()
    assert len(d) == 13
    assert d[0] == 60 and d[-1] == 180


def test_omni_identity():
    s = scen("NLOS", tx=PatternSpec.omni(), rx=PatternSpec.omni())
    for d in (60.0, 125.0):
        assert pl_correction(s, d) == 0.0
        p = directional_pl(s, d)
        assert p.pl_out == p.pl_in


def test_nonnegative_and_composition():
    s = scen("NLOS", tx=PatternSpec.gnodeb())
    for d in (60.0, 180.0):
        p = directional_pl(s, d)
        assert p.pl_corr >= 0
        assert p.pl_out == p.pl_in + p.pl_corr
        assert p.pl_out >= p.pl_in


def test_frequency_shift_of_input():
    a = directional_pl(scen("LOS", 28.0), 100.0)
    b = directional_pl(scen("LOS", 39.0), 100.0)
    assert b.pl_in - a.pl_in == pytest.approx(20 * math.log10(39 / 28), abs=1e-12)
    assert 20 * math.log10(39 / 28) == pytest.approx(2.88, abs=0.005)


def test_sweep_rows():
    curve = sweep_curve(scen("LOS"))
    assert len(curve.rows) == 13
    d = curve.column("d")
    assert np.all(np.diff(d) > 0)
    assert np.all(np.diff(curve.column("pl_in")) > 0)
    for r in curve.rows:
        assert r.pl_out == r.pl_in + r.pl_corr
    assert curve.flagged == ()


def test_parallel_sweep_matches_serial():
    s = scen("NLOS", tx=PatternSpec.sinc(16))
    assert sweep_curve(s, workers=4).rows == sweep_curve(s).rows


def test_refinement_warning(monkeypatch):
    monkeypatch.setattr(plcorr, "REFINEMENT_TOL_DB", -1.0)
    s = scen("NLOS", tx=PatternSpec.sinc(16))
    with pytest.warns(NumericWarning):
        pl_correction(s, 100.0)
    with pytest.warns(NumericWarning):
        curve = sweep_curve(s)
    assert len(curve.flagged) == 13


def test_hpbw_ordering_nlos():
    outs = [directional_pl(scen("NLOS", tx=PatternSpec.sinc(h)), 120.0).pl_out for h in (8, 16, 24)]
    assert outs[0] >= outs[1] >= outs[2]


def test_misaligned_rx_costs_more():
    aligned = pl_correction(scen("LOS"), 100.0)
    off = pl_correction(scen("LOS", alpha_r=90.0), 100.0)
    assert off > aligned
