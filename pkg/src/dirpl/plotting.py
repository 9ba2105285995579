"""Figure output.

``svg_line_chart`` writes a small dependency-free SVG whose bytes depend
only on the input data. ``save_curve_figure`` renders a curve with
matplotlib for reports.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple
from xml.sax.saxutils import escape

import numpy as np

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

WIDTH, HEIGHT = 720, 450
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 190, 30, 55


def nice_ticks(lo: float, hi: float, target: int = 6):
    if hi <= lo:
        lo, hi = lo - 1.0, hi + 1.0
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    stop = math.ceil(hi / step) * step
    n = int(round((stop - start) / step))
    return [start + i * step for i in range(n + 1)]


def _num(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def svg_line_chart(series: Sequence[Tuple[str, Sequence[float], Sequence[float]]], x_label="Distance (m)", y_label="Path loss (dB)") -> str:
    """One polyline per ``(label, xs, ys)`` series, with a legend on the right."""
    if not series:
        raise ValueError("need at least one series")
    xs_all = np.concatenate([np.asarray(x, float) for _, x, _ in series])
    ys_all = np.concatenate([np.asarray(y, float) for _, _, y in series])
    xt = nice_ticks(float(xs_all.min()), float(xs_all.max()))
    yt = nice_ticks(float(ys_all.min()), float(ys_all.max()))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<g class="grid" stroke="#dddddd" stroke-width="1">',
    ]
    for x in xt:
        out.append(f'<line x1="{_num(px(x))}" y1="{MARGIN_T}" x2="{_num(px(x))}" y2="{MARGIN_T + ph}"/>')
    for y in yt:
        out.append(f'<line x1="{MARGIN_L}" y1="{_num(py(y))}" x2="{MARGIN_L + pw}" y2="{_num(py(y))}"/>')
    out.append("</g>")
    out.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    out.append('<g class="ticks" fill="black">')
    for x in xt:
        out.append(f'<text x="{_num(px(x))}" y="{MARGIN_T + ph + 18}" text-anchor="middle">{_num(x)}</text>')
    for y in yt:
        out.append(f'<text x="{MARGIN_L - 8}" y="{_num(py(y) + 4)}" text-anchor="end">{_num(y)}</text>')
    out.append("</g>")
    out.append(f'<text x="{_num(MARGIN_L + pw / 2)}" y="{HEIGHT - 12}" text-anchor="middle">{escape(x_label)}</text>')
    cy = MARGIN_T + ph / 2
    out.append(f'<text x="18" y="{_num(cy)}" text-anchor="middle" transform="rotate(-90 18 {_num(cy)})">{escape(y_label)}</text>')
    for i, (label, xs, ys) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in zip(xs, ys))
        out.append(f'<polyline class="curve" fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
    out.append('<g class="legend">')
    lx = MARGIN_L + pw + 15
    for i, (label, _, _) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        ly = MARGIN_T + 10 + 20 * i
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 24}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text class="legend-label" x="{lx + 30}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def save_curve_figure(curve, path, title=None) -> None:
    """Plot input and directional path loss against distance with matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    d = curve.column("d")
    fig, ax = plt.subplots(figsize=(6.4, 4.0), dpi=120)
    ax.plot(d, curve.column("pl_in"), "k--", label="omnidirectional (input)")
    ax.plot(d, curve.column("pl_out"), "b-o", ms=3, label="directional (output)")
    ax.set_xlabel("Distance (m)")
    ax.set_ylabel("Path loss (dB)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.tight_layout()
    metadata = {"Date": None} if str(path).lower().endswith(".svg") else None
    fig.savefig(path, metadata=metadata)
    plt.close(fig)
