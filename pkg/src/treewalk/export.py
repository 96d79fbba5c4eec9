"""Text artifacts: CSV traces, comment headers and a minimal SVG line plot."""
from __future__ import annotations

import html
import math

import numpy as np

FLOAT = "%.17g"


def header_lines(config: dict, prefix: str = "# ") -> list[str]:
    return [f"{prefix}{key}={config[key]}" for key in sorted(config)]


def fmt(x) -> str:
    return FLOAT % x


def trace_csv(series, config: dict | None = None) -> str:
    """``t,P_v<i>,...[,cum_v<i>,...]`` with 17 significant digits."""
    lines = header_lines(config or {})
    cols = ["t"] + [f"P_v{v}" for v in series.vertices]
    data = [series.times, *series.probabilities]
    if series.cumulative is not None:
        cols += [f"cum_v{v}" for v in series.vertices]
        data += list(series.cumulative)
    lines.append(",".join(cols))
    stacked = np.vstack(data).T
    lines.extend(",".join(fmt(x) for x in row) for row in stacked)
    return "\n".join(lines) + "\n"


def density_csv(run, config: dict | None = None, subsample: int = 1) -> str:
    """``t,P_1,...,P_nv,trace_err`` for a Lindblad run."""
    lines = header_lines(config or {})
    s = run.series
    lines.append(",".join(["t"] + [f"P_{v}" for v in s.vertices] + ["trace_err"]))
    idx = np.arange(0, s.times.size, max(1, int(subsample)))
    if idx[-1] != s.times.size - 1:
        idx = np.append(idx, s.times.size - 1)
    for k in idx:
        row = [s.times[k], *s.probabilities[:, k], run.trace_errors[k]]
        lines.append(",".join(fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def table_csv(columns: list[str], rows, config: dict | None = None) -> str:
    lines = header_lines(config or {})
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(x) if isinstance(x, (float, np.floating)) else str(x) for x in row))
    return "\n".join(lines) + "\n"


_COLORS = ["#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


def svg_plot(
    curves,
    xlabel: str = "t",
    ylabel: str = "P",
    title: str = "",
    log_x: bool = False,
    log_y: bool = False,
    config: dict | None = None,
) -> str:
    """Render ``[(label, x, y), ...]`` as polylines on an 800x600 canvas."""
    W, H = 800, 600
    left, right, top, bottom = 80, 160, 40, 60
    pw, ph = W - left - right, H - top - bottom

    def tx(v):
        return np.log10(v) if log_x else v

    def ty(v):
        return np.log10(v) if log_y else v

    xs, ys = [], []
    for _, x, y in curves:
        x, y = np.asarray(x, float), np.asarray(y, float)
        keep = np.isfinite(x) & np.isfinite(y)
        if log_x:
            keep &= x > 0
        if log_y:
            keep &= y > 0
        xs.append(tx(x[keep]))
        ys.append(ty(y[keep]))
    all_x = np.concatenate(xs) if xs else np.array([0.0, 1.0])
    all_y = np.concatenate(ys) if ys else np.array([0.0, 1.0])
    x0, x1 = (float(all_x.min()), float(all_x.max())) if all_x.size else (0.0, 1.0)
    y0, y1 = (float(all_y.min()), float(all_y.max())) if all_y.size else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(v):
        return left + (v - x0) / (x1 - x0) * pw

    def py(v):
        return top + ph - (v - y0) / (y1 - y0) * ph

    out = ['<?xml version="1.0" encoding="UTF-8"?>']
    for line in header_lines(config or {}, prefix=""):
        out.append(f"<!-- {html.escape(line)} -->")
    out.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
               f'viewBox="0 0 {W} {H}">')
    out.append(f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>')
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for k in range(5):
        fx = x0 + (x1 - x0) * k / 4
        fy = y0 + (y1 - y0) * k / 4
        lx = f"1e{fx:.2g}" if log_x else f"{fx:.3g}"
        ly = f"1e{fy:.2g}" if log_y else f"{fy:.3g}"
        out.append(f'<text x="{px(fx):.2f}" y="{top + ph + 18}" font-size="12" '
                   f'text-anchor="middle">{lx}</text>')
        out.append(f'<text x="{left - 6}" y="{py(fy) + 4:.2f}" font-size="12" '
                   f'text-anchor="end">{ly}</text>')
    out.append(f'<text x="{left + pw / 2}" y="{H - 15}" font-size="14" '
               f'text-anchor="middle">{html.escape(xlabel)}</text>')
    out.append(f'<text x="20" y="{top + ph / 2}" font-size="14" text-anchor="middle" '
               f'transform="rotate(-90 20 {top + ph / 2})">{html.escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{left + pw / 2}" y="24" font-size="15" '
                   f'text-anchor="middle">{html.escape(title)}</text>')
    for k, ((label, _, _), x, y) in enumerate(zip(curves, xs, ys)):
        color = _COLORS[k % len(_COLORS)]
        step = max(1, math.ceil(x.size / 2000))
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[::step], y[::step]))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = top + 20 + 20 * k
        out.append(f'<line x1="{left + pw + 10}" y1="{ly}" x2="{left + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{left + pw + 36}" y="{ly + 4}" font-size="12">'
                   f'{html.escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
