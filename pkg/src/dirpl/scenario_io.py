"""Scenario files and curve CSVs.

Scenario files are INI-like::

    [scenario]
    fc_ghz = 28
    condition = los
    ...
    [tx]
    type = sinc
    hpbw_deg = 8

Units are fixed by the key suffix. Unknown keys, duplicate keys and keys
that do not apply to the pattern type are rejected with the line number.
"""

from __future__ import annotations

import csv
import math
import os
from typing import Dict, List, Optional, Tuple

from .errors import InvalidParameterError, ScenarioError
from .patterns import PatternKind, PatternSpec
from .plcorr import PlCurve, PlRow, Scenario

SCENARIO_KEYS = {
    "fc_ghz": float,
    "condition": str,
    "tdl": str,
    "d_min_m": float,
    "d_max_m": float,
    "d_step_m": float,
    "sigma_tau_ns": float,
    "gamma": float,
    "kappa_db": float,
    "alpha_t_deg": float,
    "alpha_r_deg": float,
    "n_phi": int,
    "h_bs_m": float,
    "h_ut_m": float,
}
REQUIRED_SCENARIO_KEYS = ("fc_ghz", "condition", "d_min_m", "d_max_m", "d_step_m", "sigma_tau_ns", "gamma")

PATTERN_KEYS = {
    "type": str,
    "hpbw_deg": float,
    "phi3db_deg": float,
    "a_m_db": float,
    "columns": int,
    "spacing_wl": float,
}
# (required, optional) keys per pattern type, besides "type"
PATTERN_TYPE_KEYS = {
    PatternKind.OMNI: ((), ()),
    PatternKind.GAUSSIAN: (("hpbw_deg",), ()),
    PatternKind.SINC: (("hpbw_deg",), ()),
    PatternKind.ELEMENT_3GPP: ((), ("phi3db_deg", "a_m_db")),
    PatternKind.UE_ELEMENT: ((), ("phi3db_deg", "a_m_db")),
    PatternKind.GNODEB_ARRAY: ((), ("columns", "spacing_wl")),
}
SECTIONS = {"scenario": SCENARIO_KEYS, "tx": PATTERN_KEYS, "rx": PATTERN_KEYS}

CURVE_HEADER = ["d_m", "pl_in_db", "pl_corr_db", "pl_out_db"]


def _convert(kind, raw, key, lineno, path):
    try:
        if kind is int:
            value = float(raw)
            if value != int(value):
                raise ValueError
            return int(value)
        if kind is float:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError
            return value
        return raw
    except ValueError:
        raise ScenarioError(f"bad value {raw!r} for {key}", lineno, path) from None


def _read_sections(text: str, path=None):
    sections: Dict[str, Tuple[int, Dict[str, Tuple[object, int]]]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ScenarioError(f"malformed section header {raw.strip()!r}", lineno, path)
            name = line[1:-1].strip().lower()
            if name not in SECTIONS:
                raise ScenarioError(f"unknown section [{name}]", lineno, path)
            if name in sections:
                raise ScenarioError(f"duplicate section [{name}]", lineno, path)
            current = name
            sections[name] = (lineno, {})
            continue
        if "=" not in line:
            raise ScenarioError(f"expected 'key = value', got {raw.strip()!r}", lineno, path)
        if current is None:
            raise ScenarioError("key outside of any section", lineno, path)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        schema = SECTIONS[current]
        if key not in schema:
            raise ScenarioError(f"unknown key {key!r} in [{current}]", lineno, path)
        entries = sections[current][1]
        if key in entries:
            raise ScenarioError(f"duplicate key {key!r} in [{current}]", lineno, path)
        if len(value) >= 2 and value[0] == value[-1] and value[0] in "\"'":
            value = value[1:-1]
        entries[key] = (_convert(schema[key], value, key, lineno, path), lineno)
    return sections, len(text.splitlines())


def _pattern_from_section(name, header_line, entries, path) -> PatternSpec:
    if "type" not in entries:
        raise ScenarioError(f"missing required key 'type' in [{name}]", header_line, path)
    type_value, type_line = entries["type"]
    try:
        kind = PatternKind(str(type_value).lower())
    except ValueError:
        choices = "|".join(k.value for k in PatternKind)
        raise ScenarioError(f"unknown pattern type {type_value!r} (expected {choices})", type_line, path) from None
    required, optional = PATTERN_TYPE_KEYS[kind]
    for key, (_, lineno) in entries.items():
        if key != "type" and key not in required and key not in optional:
            raise ScenarioError(f"key {key!r} does not apply to pattern type {kind.value}", lineno, path)
    for key in required:
        if key not in entries:
            raise ScenarioError(f"missing required key {key!r} for pattern type {kind.value} in [{name}]", header_line, path)

    def get(key):
        return entries[key][0] if key in entries else None

    try:
        return PatternSpec(
            kind,
            hpbw=get("hpbw_deg"),
            phi3db=get("phi3db_deg"),
            a_m=get("a_m_db"),
            columns=get("columns"),
            spacing=get("spacing_wl"),
        )
    except InvalidParameterError as exc:
        raise ScenarioError(f"[{name}]: {exc}", header_line, path) from None


def loads_scenario(text: str, path=None) -> Scenario:
    sections, n_lines = _read_sections(text, path)
    for name in ("scenario", "tx", "rx"):
        if name not in sections:
            raise ScenarioError(f"missing section [{name}]", n_lines or 1, path)
    header_line, entries = sections["scenario"]
    for key in REQUIRED_SCENARIO_KEYS:
        if key not in entries:
            raise ScenarioError(f"missing required key {key!r} in [scenario]", header_line, path)

    def get(key, default=None):
        return entries[key][0] if key in entries else default

    cond = str(get("condition")).upper()
    if cond not in ("LOS", "NLOS"):
        raise ScenarioError(f"condition must be los or nlos, got {get('condition')!r}", entries["condition"][1], path)
    tx = _pattern_from_section("tx", *sections["tx"], path)
    rx = _pattern_from_section("rx", *sections["rx"], path)
    tdl = get("tdl")
    try:
        return Scenario(
            fc=get("fc_ghz"),
            condition=cond,
            d_min=get("d_min_m"),
            d_max=get("d_max_m"),
            d_step=get("d_step_m"),
            sigma_tau=get("sigma_tau_ns") / 1e9,
            gamma=get("gamma"),
            tx=tx,
            rx=rx,
            kappa_db=get("kappa_db"),
            alpha_t=get("alpha_t_deg", 180.0),
            alpha_r=get("alpha_r_deg", 0.0),
            n_phi=get("n_phi", 3600),
            h_bs=get("h_bs_m", 25.0),
            h_ut=get("h_ut_m", 1.5),
            tdl=tdl.upper() if tdl else None,
        )
    except ScenarioError as exc:
        raise ScenarioError(str(exc), header_line, path) from None
    except InvalidParameterError as exc:
        raise ScenarioError(str(exc), header_line, path) from None


def parse_scenario(path) -> Scenario:
    """Read and fully validate a scenario file."""
    with open(path, encoding="utf-8") as fh:
        return loads_scenario(fh.read(), path=os.fspath(path))


def _fmt(x) -> str:
    return f"{x:.12g}"


def _pattern_lines(spec: PatternSpec) -> List[str]:
    lines = [f"type = {spec.kind.value}"]
    for attr, key in (("hpbw", "hpbw_deg"), ("phi3db", "phi3db_deg"), ("a_m", "a_m_db"), ("columns", "columns"), ("spacing", "spacing_wl")):
        v = getattr(spec, attr)
        if v is not None:
            lines.append(f"{key} = {_fmt(v)}")
    return lines


def dumps_scenario(s: Scenario, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out += [
        "[scenario]",
        f"fc_ghz = {_fmt(s.fc)}",
        f"condition = {s.condition.value.lower()}",
        f"tdl = {s.tdl.value}",
        f"d_min_m = {_fmt(s.d_min)}",
        f"d_max_m = {_fmt(s.d_max)}",
        f"d_step_m = {_fmt(s.d_step)}",
        f"sigma_tau_ns = {_fmt(s.sigma_tau * 1e9)}",
        f"gamma = {_fmt(s.gamma)}",
    ]
    if s.kappa_db is not None:
        out.append(f"kappa_db = {_fmt(s.kappa_db)}")
    out += [
        f"alpha_t_deg = {_fmt(s.alpha_t)}",
        f"alpha_r_deg = {_fmt(s.alpha_r)}",
        f"n_phi = {s.n_phi}",
        f"h_bs_m = {_fmt(s.h_bs)}",
        f"h_ut_m = {_fmt(s.h_ut)}",
        "",
        "[tx]",
        *_pattern_lines(s.tx),
        "",
        "[rx]",
        *_pattern_lines(s.rx),
    ]
    return "\n".join(out) + "\n"


def write_scenario(s: Scenario, path, comment: Optional[str] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_scenario(s, comment))


def write_curve_csv(fh, curve: PlCurve) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for r in curve.rows:
        w.writerow([f"{r.d:.4f}", f"{r.pl_in:.4f}", f"{r.pl_corr:.4f}", f"{r.pl_out:.4f}"])


class CurveFormatError(ValueError):
    pass


def read_curve_csv(path) -> PlCurve:
    """Parse a curve CSV; errors name the file and the 1-based row."""
    name = os.fspath(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != CURVE_HEADER:
        raise CurveFormatError(f"{name}: row 1: expected header {','.join(CURVE_HEADER)}")
    out = []
    for i, row in enumerate(rows[1:], 2):
        if not row:
            continue
        try:
            if len(row) != 4:
                raise ValueError
            vals = [float(c) for c in row]
            if not all(math.isfinite(v) for v in vals):
                raise ValueError
        except ValueError:
            raise CurveFormatError(f"{name}: row {i}: expected 4 numeric fields, got {row!r}") from None
        out.append(PlRow(*vals))
    if not out:
        raise CurveFormatError(f"{name}: no data rows")
    return PlCurve(rows=tuple(out))
