"""Static SVG figures and TSV serialization for estimate paths and curves.

SVG output is assembled from a small primitive subset (rect, polyline, line,
text) with no rendering dependency, and is byte-deterministic for a given
spec.  Non-finite points are dropped from figures with a count note embedded
as an XML comment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tailindex import EstimatePath

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
_PANEL_W = 640
_PANEL_H = 360
_MARGIN = {"left": 70, "right": 24, "top": 42, "bottom": 52}


@dataclass(frozen=True)
class PlotSpec:
    """One panel: labelled line series, axis labels, optional reference lines.

    reference_lines entries are (axis, value, label); axis "y" draws a
    horizontal rule at that y value, axis "x" a vertical rule.
    """

    series: tuple
    x_label: str = ""
    y_label: str = ""
    title: str = ""
    reference_lines: tuple = field(default_factory=tuple)
    x_range: tuple | None = None


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw_step = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw_step))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw_step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _finite_points(series):
    cleaned = []
    dropped = 0
    for label, pts in series:
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ValueError(f"series {label!r} must be a nonempty (n, 2) point array")
        ok = np.isfinite(pts).all(axis=1)
        dropped += int((~ok).sum())
        cleaned.append((label, pts[ok]))
    return cleaned, dropped


def _panel_elements(spec: PlotSpec, x_off: float, y_off: float) -> list[str]:
    if not spec.series:
        raise ValueError("plot spec has no series")
    series, dropped = _finite_points(spec.series)
    if all(pts.shape[0] == 0 for _, pts in series):
        raise ValueError("plot spec has no finite points")

    all_x = np.concatenate([pts[:, 0] for _, pts in series if pts.shape[0]])
    all_y = np.concatenate([pts[:, 1] for _, pts in series if pts.shape[0]])
    x_lo, x_hi = (float(all_x.min()), float(all_x.max())) if spec.x_range is None else spec.x_range
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    for axis, value, _ in spec.reference_lines:
        if axis == "y":
            y_lo, y_hi = min(y_lo, value), max(y_hi, value)
        else:
            x_lo, x_hi = min(x_lo, value), max(x_hi, value)
    if x_hi <= x_lo:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    if y_hi <= y_lo:
        pad = max(abs(y_lo) * 0.1, 1.0)
        y_lo, y_hi = y_lo - pad, y_hi + pad
    y_pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    px0 = x_off + _MARGIN["left"]
    py0 = y_off + _MARGIN["top"]
    pw = _PANEL_W - _MARGIN["left"] - _MARGIN["right"]
    ph = _PANEL_H - _MARGIN["top"] - _MARGIN["bottom"]

    def sx(x):
        return px0 + (x - x_lo) / (x_hi - x_lo) * pw

    def sy(y):
        return py0 + ph - (y - y_lo) / (y_hi - y_lo) * ph

    el: list[str] = []
    if dropped:
        el.append(f"<!-- dropped {dropped} undefined points -->")
    el.append(
        f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(pw)}" height="{_fmt(ph)}" '
        'fill="white" stroke="#333333" stroke-width="1"/>'
    )
    if spec.title:
        el.append(
            f'<text x="{_fmt(x_off + _PANEL_W / 2)}" y="{_fmt(y_off + 24)}" '
            f'text-anchor="middle" font-size="15" font-family="sans-serif">{_escape(spec.title)}</text>'
        )
    for t in _nice_ticks(x_lo, x_hi):
        x = sx(t)
        el.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(py0 + ph)}" x2="{_fmt(x)}" y2="{_fmt(py0 + ph + 5)}" '
            'stroke="#333333" stroke-width="1"/>'
        )
        el.append(
            f'<text x="{_fmt(x)}" y="{_fmt(py0 + ph + 18)}" text-anchor="middle" '
            f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
        )
    for t in _nice_ticks(y_lo, y_hi):
        y = sy(t)
        el.append(
            f'<line x1="{_fmt(px0 - 5)}" y1="{_fmt(y)}" x2="{_fmt(px0)}" y2="{_fmt(y)}" '
            'stroke="#333333" stroke-width="1"/>'
        )
        el.append(
            f'<text x="{_fmt(px0 - 8)}" y="{_fmt(y + 4)}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{_fmt(t)}</text>'
        )
    if spec.x_label:
        el.append(
            f'<text x="{_fmt(px0 + pw / 2)}" y="{_fmt(py0 + ph + 38)}" text-anchor="middle" '
            f'font-size="12" font-family="sans-serif">{_escape(spec.x_label)}</text>'
        )
    if spec.y_label:
        el.append(
            f'<text x="{_fmt(x_off + 16)}" y="{_fmt(py0 + 12)}" text-anchor="start" '
            f'font-size="12" font-family="sans-serif">{_escape(spec.y_label)}</text>'
        )
    for axis, value, label in spec.reference_lines:
        if axis == "y":
            y = sy(value)
            el.append(
                f'<line x1="{_fmt(px0)}" y1="{_fmt(y)}" x2="{_fmt(px0 + pw)}" y2="{_fmt(y)}" '
                'stroke="#888888" stroke-width="1" stroke-dasharray="5,4"/>'
            )
            if label:
                el.append(
                    f'<text x="{_fmt(px0 + pw - 4)}" y="{_fmt(y - 4)}" text-anchor="end" '
                    f'font-size="11" font-family="sans-serif" fill="#555555">{_escape(label)}</text>'
                )
        else:
            x = sx(value)
            el.append(
                f'<line x1="{_fmt(x)}" y1="{_fmt(py0)}" x2="{_fmt(x)}" y2="{_fmt(py0 + ph)}" '
                'stroke="#888888" stroke-width="1" stroke-dasharray="5,4"/>'
            )
            if label:
                el.append(
                    f'<text x="{_fmt(x + 4)}" y="{_fmt(py0 + 12)}" text-anchor="start" '
                    f'font-size="11" font-family="sans-serif" fill="#555555">{_escape(label)}</text>'
                )
    for idx, (label, pts) in enumerate(series):
        if pts.shape[0] == 0:
            continue
        color = _PALETTE[idx % len(_PALETTE)]
        coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in pts)
        el.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.4"/>'
        )
        el.append(
            f'<text x="{_fmt(px0 + pw - 8)}" y="{_fmt(py0 + 16 + 14 * idx)}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif" fill="{color}">{_escape(label)}</text>'
        )
    return el


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_panels_svg(specs: list[PlotSpec]) -> bytes:
    """One SVG document with the given panels stacked vertically."""
    if not specs:
        raise ValueError("no panels to render")
    height = _PANEL_H * len(specs)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_PANEL_W}" height="{height}" '
        f'viewBox="0 0 {_PANEL_W} {height}">',
        f'<rect x="0" y="0" width="{_PANEL_W}" height="{height}" fill="white"/>',
    ]
    for i, spec in enumerate(specs):
        parts.extend(_panel_elements(spec, 0.0, i * _PANEL_H))
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode("utf-8")


def render_svg(spec: PlotSpec) -> bytes:
    """Standalone single-panel SVG document."""
    return render_panels_svg([spec])


def write_tsv(path: EstimatePath) -> bytes:
    """Estimate path as 'k<TAB>xi_hat' rows at 12 significant digits; undefined points omitted."""
    ks, values = path.defined()
    lines = ["k\txi_hat"]
    lines.extend(f"{int(k)}\t{v:.12f}" for k, v in zip(ks, values))
    return ("\n".join(lines) + "\n").encode("utf-8")


def write_xy_tsv(header: tuple[str, str], rows) -> bytes:
    """Generic two-column TSV used for density and hazard curves."""
    lines = [f"{header[0]}\t{header[1]}"]
    lines.extend(f"{x:.12g}\t{y:.12g}" for x, y in rows)
    return ("\n".join(lines) + "\n").encode("utf-8")
