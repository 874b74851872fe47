"""Minimal deterministic SVG charts (no rendering dependency).

All coordinates are printed with fixed precision so identical input gives
identical bytes.
"""
from __future__ import annotations

import math
from html import escape

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=64, right=150, top=36, bottom=48)
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
OUTCOME_COLORS = {
    "spreading/spreading": "#2ca02c",
    "spreading/vanishing": "#1f77b4",
    "vanishing/spreading": "#d62728",
    "vanishing/vanishing": "#7f7f7f",
}
UNKNOWN_COLOR = "#ffffff"


def _num(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def _nice_ticks(lo: float, hi: float, count: int = 5):
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    k = 0
    while first + k * step <= hi + 1e-9 * step:
        ticks.append(first + k * step)
        k += 1
    return ticks


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.2e}"
    return f"{v:.6g}"


class _Frame:
    def __init__(self, xlo, xhi, ylo, yhi):
        if xhi <= xlo:
            xhi = xlo + 1.0
        if yhi <= ylo:
            yhi = ylo + 1.0
        self.xlo, self.xhi, self.ylo, self.yhi = xlo, xhi, ylo, yhi
        self.x0, self.x1 = MARGIN["left"], WIDTH - MARGIN["right"]
        self.y0, self.y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]

    def px(self, x):
        return self.x0 + (x - self.xlo) / (self.xhi - self.xlo) * (self.x1 - self.x0)

    def py(self, y):
        return self.y0 + (y - self.ylo) / (self.yhi - self.ylo) * (self.y1 - self.y0)


def _header(title):
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]


def _axes(frame, xlabel, ylabel, xticks=None, yticks=None):
    out = [f'<rect x="{frame.x0}" y="{frame.y1}" width="{frame.x1 - frame.x0}" '
           f'height="{frame.y0 - frame.y1}" fill="none" stroke="black"/>']
    for t in xticks if xticks is not None else _nice_ticks(frame.xlo, frame.xhi):
        x = _num(frame.px(t))
        out.append(f'<line x1="{x}" y1="{frame.y0}" x2="{x}" y2="{frame.y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{frame.y0 + 18}" text-anchor="middle">{_fmt_tick(t)}</text>')
    for t in yticks if yticks is not None else _nice_ticks(frame.ylo, frame.yhi):
        y = _num(frame.py(t))
        out.append(f'<line x1="{frame.x0 - 5}" y1="{y}" x2="{frame.x0}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{frame.x0 - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">'
                   f'{_fmt_tick(t)}</text>')
    out.append(f'<text x="{(frame.x0 + frame.x1) / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">'
               f'{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{(frame.y0 + frame.y1) / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 16 {(frame.y0 + frame.y1) / 2:.1f})">{escape(ylabel)}</text>')
    return out


def line_chart(series, title="", xlabel="", ylabel="") -> str:
    """series: list of dicts with keys x, y, label and optional dash (bool)."""
    series = [s for s in series if len(s["x"])]
    if not series:
        raise ValueError("nothing to plot: all series are empty")
    xs = [float(v) for s in series for v in s["x"]]
    ys = [float(v) for s in series for v in s["y"]]
    if not all(math.isfinite(v) for v in xs + ys):
        raise ValueError("non-finite values in plot input")
    ylo, yhi = min(ys), max(ys)
    pad = 0.05 * (yhi - ylo) if yhi > ylo else 1.0
    frame = _Frame(min(xs), max(xs), min(0.0, ylo) if ylo >= 0 else ylo - pad, yhi + pad)
    out = _header(title) + _axes(frame, xlabel, ylabel)
    for i, s in enumerate(series):
        color = COLORS[i % len(COLORS)]
        pts = " ".join(f"{_num(frame.px(float(x)))},{_num(frame.py(float(y)))}" for x, y in zip(s["x"], s["y"]))
        dash = ' stroke-dasharray="6 4"' if s.get("dash") else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{pts}"/>')
        ly = MARGIN["top"] + 16 + 18 * i
        lx = WIDTH - MARGIN["right"] + 10
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{lx + 26}" y="{ly}" dominant-baseline="middle">{escape(s["label"])}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def fronts_plot(t, g, h, kbar_beta=None, kund_mu=None, title="fronts") -> str:
    """g(t), h(t) with dashed reference lines g0 + kbar_beta t and h0 + kund_mu t."""
    if len(t) == 0:
        raise ValueError("empty time series")
    t = [float(v) for v in t]
    series = [{"x": t, "y": list(g), "label": "g(t)"}, {"x": t, "y": list(h), "label": "h(t)"}]
    if kbar_beta is not None:
        series.append({"x": t, "y": [g[0] + kbar_beta * (v - t[0]) for v in t],
                       "label": f"slope {kbar_beta:.4g}", "dash": True})
    if kund_mu is not None:
        series.append({"x": t, "y": [h[0] + kund_mu * (v - t[0]) for v in t],
                       "label": f"slope {kund_mu:.4g}", "dash": True})
    return line_chart(series, title, "t", "front position")


def profile_plot(x, u, v, t=None) -> str:
    if len(x) == 0:
        raise ValueError("empty profile")
    title = "profiles" if t is None else f"profiles at t = {t:.6g}"
    return line_chart([{"x": list(x), "y": list(u), "label": "u(x)"},
                       {"x": list(x), "y": list(v), "label": "v(x)"}], title, "x", "density")


def phase_plot(xvals, yvals, labels, xname="x", yname="y", title="outcomes") -> str:
    """Heat map of outcome labels; labels[(i, j)] is "prey/predator" for xvals[i], yvals[j]."""
    if not xvals or not yvals:
        raise ValueError("empty sweep grid")
    nx, ny = len(xvals), len(yvals)
    frame = _Frame(-0.5, nx - 0.5, -0.5, ny - 0.5)
    out = _header(title) + _axes(frame, xname, yname, xticks=[], yticks=[])
    cw = (frame.x1 - frame.x0) / nx
    ch = (frame.y0 - frame.y1) / ny
    for i in range(nx):
        for j in range(ny):
            color = OUTCOME_COLORS.get(labels.get((i, j)), UNKNOWN_COLOR)
            out.append(f'<rect x="{_num(frame.px(i - 0.5))}" y="{_num(frame.py(j + 0.5))}" width="{_num(cw)}" '
                       f'height="{_num(ch)}" fill="{color}" stroke="black" stroke-width="0.5"/>')
    for i, xv in enumerate(xvals):
        out.append(f'<text x="{_num(frame.px(i))}" y="{frame.y0 + 18}" text-anchor="middle">{_fmt_tick(xv)}</text>')
    for j, yv in enumerate(yvals):
        out.append(f'<text x="{frame.x0 - 8}" y="{_num(frame.py(j))}" text-anchor="end" '
                   f'dominant-baseline="middle">{_fmt_tick(yv)}</text>')
    for k, (name, color) in enumerate(list(OUTCOME_COLORS.items()) + [("other/failed", UNKNOWN_COLOR)]):
        ly = MARGIN["top"] + 16 + 18 * k
        lx = WIDTH - MARGIN["right"] + 10
        out.append(f'<rect x="{lx}" y="{ly - 6}" width="12" height="12" fill="{color}" stroke="black" stroke-width="0.5"/>')
        out.append(f'<text x="{lx + 18}" y="{ly}" dominant-baseline="middle">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
