"""Self-contained SVG figures built from the CSV tables.

Every renderer takes the parsed table (or plain arrays) and nothing else, so
re-reading a CSV and rendering again yields a byte-identical file.
"""
from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

import numpy as np

WIDTH, HEIGHT = 800, 600
MARGIN = dict(left=70, right=20, top=30, bottom=50)
FONT = "font-family:sans-serif;font-size:12px"
STROKE_MIN, STROKE_MAX = 0.4, 2.4
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
           "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
REGION_COLORS = {"I_a": "#c6dbef", "I_0": "#9ecae1", "II_a": "#c7e9c0", "II_0": "#a1d99b",
                 "III_a": "#fdd0a2", "III_0": "#fdae6b", "IV": "#fcbba1", "IV_a": "#fb6a4a",
                 "V": "#dadaeb", "VI": "#fff7bc", "Unclassifiable": "#000000"}
DEFAULT_FILL = "#eeeeee"


def _num(v: float) -> str:
    return "%.2f" % v


class Panel:
    """Linear map from a data box onto a pixel box."""

    def __init__(self, box: Tuple[float, float, float, float], xlim, ylim):
        self.x0, self.y0, self.w, self.h = box
        self.xlim = _pad(xlim)
        self.ylim = _pad(ylim)

    def px(self, x):
        lo, hi = self.xlim
        return self.x0 + (np.asarray(x, float) - lo) / (hi - lo) * self.w

    def py(self, y):
        lo, hi = self.ylim
        return self.y0 + self.h - (np.asarray(y, float) - lo) / (hi - lo) * self.h


def _pad(lim) -> Tuple[float, float]:
    lo, hi = float(lim[0]), float(lim[1])
    if not (np.isfinite(lo) and np.isfinite(hi)):
        return 0.0, 1.0
    if hi - lo <= 1e-12 * max(1.0, abs(lo), abs(hi)):
        d = 0.5 * max(1.0, abs(lo))
        return lo - d, hi + d
    return lo, hi


def _finite_range(*arrays) -> Tuple[float, float]:
    vals = np.concatenate([np.ravel(np.asarray(a, float)) for a in arrays]) if arrays else np.empty(0)
    vals = vals[np.isfinite(vals)]
    if vals.size == 0:
        return 0.0, 1.0
    return float(vals.min()), float(vals.max())


def _polylines(panel: Panel, x, y, color: str, width: float, dash: str = "") -> List[str]:
    """Polyline pieces, split wherever a coordinate is not finite."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    good = np.isfinite(x) & np.isfinite(y)
    out = []
    extra = f' stroke-dasharray="{dash}"' if dash else ""
    idx = np.flatnonzero(good)
    if idx.size == 0:
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1) + 1
    for run in np.split(idx, breaks):
        pts = " ".join(f"{_num(a)},{_num(b)}" for a, b in zip(panel.px(x[run]), panel.py(y[run])))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="{_num(width)}"{extra} '
                   f'points="{pts}"/>')
    return out


def _axes(panel: Panel, xlabel: str, ylabel: str, title: str = "") -> List[str]:
    x0, y0, w, h = panel.x0, panel.y0, panel.w, panel.h
    out = [f'<rect x="{_num(x0)}" y="{_num(y0)}" width="{_num(w)}" height="{_num(h)}" '
           f'fill="none" stroke="#000000" stroke-width="1"/>']
    for frac in (0.0, 0.5, 1.0):
        xv = panel.xlim[0] + frac * (panel.xlim[1] - panel.xlim[0])
        yv = panel.ylim[0] + frac * (panel.ylim[1] - panel.ylim[0])
        out.append(f'<text x="{_num(x0 + frac * w)}" y="{_num(y0 + h + 14)}" text-anchor="middle" '
                   f'style="{FONT}">{xv:.4g}</text>')
        out.append(f'<text x="{_num(x0 - 4)}" y="{_num(y0 + h - frac * h + 4)}" text-anchor="end" '
                   f'style="{FONT}">{yv:.4g}</text>')
    out.append(f'<text x="{_num(x0 + w / 2)}" y="{_num(y0 + h + 30)}" text-anchor="middle" '
               f'style="{FONT}">{_esc(xlabel)}</text>')
    out.append(f'<text x="{_num(x0 - 50)}" y="{_num(y0 + h / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 {_num(x0 - 50)} {_num(y0 + h / 2)})" style="{FONT}">{_esc(ylabel)}</text>')
    if title:
        out.append(f'<text x="{_num(x0 + w / 2)}" y="{_num(y0 - 8)}" text-anchor="middle" '
                   f'style="{FONT}">{_esc(title)}</text>')
    return out


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _document(body: Sequence[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {WIDTH} {HEIGHT}" '
            f'width="{WIDTH}" height="{HEIGHT}">')
    return "\n".join([head, f'<rect width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>', *body, "</svg>"]) + "\n"


def _stack(n: int) -> List[Tuple[float, float, float, float]]:
    """Pixel boxes for n panels stacked vertically."""
    top, bottom = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    left, right = MARGIN["left"], WIDTH - MARGIN["right"]
    gap = 50
    h = (bottom - top - gap * (n - 1)) / n
    return [(left, top + k * (h + gap), right - left, h) for k in range(n)]


def _row(n: int) -> List[Tuple[float, float, float, float]]:
    top, bottom = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    left, right = MARGIN["left"], WIDTH - MARGIN["right"]
    gap = 70
    w = (right - left - gap * (n - 1)) / n
    return [(left + k * (w + gap), top, w, bottom - top) for k in range(n)]


def widths(n: int) -> np.ndarray:
    """Stroke widths growing with time so later snapshots sit on top, thicker."""
    if n == 1:
        return np.array([STROKE_MAX])
    return np.linspace(STROKE_MIN, STROKE_MAX, n)


def profile_svg(table: Dict[str, np.ndarray], title: str = "") -> str:
    """rho and u_tilde against x, one polyline per stored time."""
    t = table["t"]
    times = np.unique(t)
    boxes = _stack(2)
    xr = _finite_range(table["x"])
    body = []
    for box, col, label in zip(boxes, ("rho", "u_tilde"), ("rho", "u_tilde")):
        panel = Panel(box, xr, _finite_range(table[col]))
        body += _axes(panel, "x", label, title if col == "rho" else "")
        for tk, wk in zip(times, widths(times.size)):
            sel = t == tk
            body += _polylines(panel, table["x"][sel], table[col][sel], PALETTE[0], wk)
    return _document(body)


def state_space_svg(grid: Dict[str, np.ndarray], curves: Dict[str, tuple], title: str = "") -> str:
    """Region map as filled cells with boundary curves drawn over it."""
    rho, u, labels = grid["rho"], grid["u_tilde"], grid["region"]
    rs, us = np.unique(rho), np.unique(u)
    dr = (rs[1] - rs[0]) if rs.size > 1 else 1.0
    du = (us[1] - us[0]) if us.size > 1 else 1.0
    panel = Panel((MARGIN["left"], MARGIN["top"], WIDTH - MARGIN["left"] - 150,
                   HEIGHT - MARGIN["top"] - MARGIN["bottom"]),
                  (rs[0] - dr / 2, rs[-1] + dr / 2), (us[0] - du / 2, us[-1] + du / 2))
    body = []
    cw = abs(float(panel.px(dr) - panel.px(0.0)))
    ch = abs(float(panel.py(0.0) - panel.py(du)))
    for r, v, lab in zip(rho, u, labels):
        fill = REGION_COLORS.get(str(lab), DEFAULT_FILL)
        body.append(f'<rect x="{_num(float(panel.px(r - dr / 2)))}" y="{_num(float(panel.py(v + du / 2)))}" '
                    f'width="{_num(cw)}" height="{_num(ch)}" fill="{fill}" stroke="none"/>')
    names = sorted(curves)
    for k, name in enumerate(names):
        cr, cu = curves[name]
        keep = (cr >= panel.xlim[0]) & (cr <= panel.xlim[1]) & (cu >= panel.ylim[0]) & (cu <= panel.ylim[1])
        cr = np.where(keep, cr, np.nan)
        if name == "overcompressive":
            for a, b in zip(panel.px(cr[keep]), panel.py(cu[keep])):
                body.append(f'<circle cx="{_num(a)}" cy="{_num(b)}" r="1.5" fill="#000000"/>')
            continue
        body += _polylines(panel, cr, cu, PALETTE[(k + 1) % len(PALETTE)], 1.5, "4,2" if k % 2 else "")
    body += _axes(panel, "rho", "u_tilde", title)
    legend_x = WIDTH - 140
    y = MARGIN["top"] + 10
    for lab in sorted(set(labels.tolist())):
        body.append(f'<rect x="{legend_x}" y="{y - 9}" width="10" height="10" '
                    f'fill="{REGION_COLORS.get(lab, DEFAULT_FILL)}" stroke="#000000" stroke-width="0.5"/>')
        body.append(f'<text x="{legend_x + 14}" y="{y}" style="{FONT}">{_esc(lab)}</text>')
        y += 16
    y += 10
    for k, name in enumerate(names):
        color = "#000000" if name == "overcompressive" else PALETTE[(k + 1) % len(PALETTE)]
        body.append(f'<line x1="{legend_x}" y1="{y - 4}" x2="{legend_x + 10}" y2="{y - 4}" '
                    f'stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{legend_x + 14}" y="{y}" style="{FONT}">{_esc(name)}</text>')
        y += 16
    return _document(body)


def curves_svg(curves: Dict[str, tuple], title: str = "") -> str:
    names = sorted(curves)
    rr = _finite_range(*[curves[n][0] for n in names]) if names else (0.0, 1.0)
    ur = _finite_range(*[curves[n][1] for n in names]) if names else (0.0, 1.0)
    panel = Panel((MARGIN["left"], MARGIN["top"], WIDTH - MARGIN["left"] - 150,
                   HEIGHT - MARGIN["top"] - MARGIN["bottom"]), rr, ur)
    body = _axes(panel, "rho", "u_tilde", title)
    y = MARGIN["top"] + 10
    for k, name in enumerate(names):
        color = PALETTE[k % len(PALETTE)]
        body += _polylines(panel, curves[name][0], curves[name][1], color, 1.5)
        body.append(f'<line x1="{WIDTH - 140}" y1="{y - 4}" x2="{WIDTH - 130}" y2="{y - 4}" '
                    f'stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{WIDTH - 126}" y="{y}" style="{FONT}">{_esc(name)}</text>')
        y += 16
    return _document(body)


def scan_svg(table: Dict[str, np.ndarray], title: str = "") -> str:
    """One panel per scan time; overcompressive cells filled."""
    times = np.unique(table["t"])
    body = []
    for box, tk in zip(_row(max(times.size, 1)), times):
        sel = table["t"] == tk
        rho, u, hit = table["rho"][sel], table["u_tilde"][sel], table["overcompressive"][sel]
        rs, us = np.unique(rho), np.unique(u)
        dr = (rs[1] - rs[0]) if rs.size > 1 else 1.0
        du = (us[1] - us[0]) if us.size > 1 else 1.0
        panel = Panel(box, (rs[0] - dr / 2, rs[-1] + dr / 2), (us[0] - du / 2, us[-1] + du / 2))
        cw = abs(float(panel.px(dr) - panel.px(0.0)))
        ch = abs(float(panel.py(0.0) - panel.py(du)))
        for r, v in zip(rho[hit > 0], u[hit > 0]):
            body.append(f'<rect x="{_num(float(panel.px(r - dr / 2)))}" y="{_num(float(panel.py(v + du / 2)))}" '
                        f'width="{_num(cw)}" height="{_num(ch)}" fill="#fb6a4a" stroke="none"/>')
        body += _axes(panel, "rho", "u_tilde", f"{title} t={tk:.6g}".strip())
    return _document(body)


def trajectory_svg(table: Dict[str, np.ndarray], title: str = "") -> str:
    boxes = _stack(2)
    t = table["t"]
    tr = _finite_range(t)
    body = []
    for box, col in zip(boxes, ("x", "zeta")):
        panel = Panel(box, tr, _finite_range(table[col]))
        body += _axes(panel, "t", col, title if col == "x" else "")
        body += _polylines(panel, t, table[col], PALETTE[1], 1.5)
    return _document(body)
