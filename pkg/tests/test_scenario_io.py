from importlib import resources

import pytest

from dirpl.cli import preset_dir, preset_names
from dirpl.errors import ScenarioError
from dirpl.patterns import PatternKind, PatternSpec
from dirpl.plcorr import Condition, PlCurve, PlRow
from dirpl.scenario_io import (
    CurveFormatError,
    dumps_scenario,
    loads_scenario,
    parse_scenario,
    read_curve_csv,
    write_curve_csv,
)

MINIMAL = """\
[scenario]
fc_ghz = 28
condition = los
d_min_m = 60
d_max_m = 180
d_step_m = 10
sigma_tau_ns = 266
gamma = 60

[tx]
type = sinc
hpbw_deg = 8

[rx]
type = ue
"""


def test_minimal_file_defaults():
    s = loads_scenario(MINIMAL)
    assert s.fc == 28 and s.gamma == 60
    assert s.sigma_tau == pytest.approx(266e-9, rel=1e-15)
    assert (s.d_min, s.d_max) == (60, 180)
    assert s.condition is Condition.LOS
    assert (s.alpha_t, s.alpha_r) == (180.0, 0.0)
    assert s.n_phi == 3600 and (s.h_bs, s.h_ut) == (25.0, 1.5)
    assert s.tx == PatternSpec.sinc(8)
    assert s.rx.kind is PatternKind.UE_ELEMENT


def test_missing_key_names_key_and_line():
    text = MINIMAL.replace("fc_ghz = 28\n", "")
    with pytest.raises(ScenarioError, match="fc_ghz") as exc:
        loads_scenario(text)
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "old, new, needle, line",
    [
        ("gamma = 60", "gama = 60", "unknown key", 8),
        ("gamma = 60", "gamma = sixty", "bad value", 8),
        ("hpbw_deg = 8", "hpbw_deg = 8\ncolumns = 4", "does not apply", 13),
        ("type = ue", "type = horn", "unknown pattern type", 15),
        ("gamma = 60", "gamma = 60\ngamma = 61", "duplicate key", 9),
        ("[rx]", "[rxx]", "unknown section", 14),
        ("gamma = 60", "gamma 60", "expected 'key = value'", 8),
    ],
)
def test_line_numbered_errors(old, new, needle, line):
    with pytest.raises(ScenarioError, match=needle) as exc:
        loads_scenario(MINIMAL.replace(old, new, 1))
    assert exc.value.line == line


def test_required_pattern_key():
    with pytest.raises(ScenarioError, match="hpbw_deg"):
        loads_scenario(MINIMAL.replace("hpbw_deg = 8\n", ""))


def test_cross_field_validation():
    with pytest.raises(ScenarioError, match="TDL-E"):
        loads_scenario(MINIMAL.replace("condition = los", "condition = los\ntdl = TDL-C"))
    with pytest.raises(ScenarioError, match="kappa"):
        loads_scenario(MINIMAL.replace("condition = los", "condition = nlos\nkappa_db = 22"))


def test_presets_round_trip():
    names = preset_names()
    assert len(names) == 28
    for name in names:
        with resources.as_file(preset_dir().joinpath(name + ".ini")) as p:
            s = parse_scenario(p)
        assert loads_scenario(dumps_scenario(s)) == s
        if "_los_" in name:
            assert s.condition is Condition.LOS and s.kappa_db == 22.0
        expected_sigma = 266e-9 if "28ghz" in name else 249e-9
        assert s.sigma_tau == pytest.approx(expected_sigma, rel=1e-15)
        assert s.gamma == 60 and (s.d_min, s.d_max, s.d_step) == (60, 180, 10)


def test_curve_csv_round_trip(tmp_path):
    curve = PlCurve(rows=(PlRow(60.0, 96.74431, 0.45855, 97.20286), PlRow(70.0, 98.0, 0.0, 98.0)))
    path = tmp_path / "c.csv"
    with open(path, "w", newline="") as fh:
        write_curve_csv(fh, curve)
    text = path.read_text()
    assert text.splitlines()[0] == "d_m,pl_in_db,pl_corr_db,pl_out_db"
    assert text.splitlines()[1] == "60.0000,96.7443,0.4586,97.2029"
    back = read_curve_csv(path)
    assert len(back.rows) == 2 and back.rows[1] == PlRow(70.0, 98.0, 0.0, 98.0)


def test_malformed_curve_csv(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("d_m,pl_in_db,pl_corr_db,pl_out_db\n60,1,2,3\n70,1,x,3\n")
    with pytest.raises(CurveFormatError, match=r"bad\.csv: row 3"):
        read_curve_csv(path)
