"""CSV, JSON and SVG emitters for experiment reports."""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

from .experiment import Report, VerifyReport

CSV_COLUMNS = ("n", "logdet_measured", "trace_log_measured", "predicted_total", "residual")


def _plain(v):
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


def report_json(report: Report) -> str:
    """Deterministic JSON: keys sorted, floats at full ``repr`` precision."""
    payload = {
        "config": report.config,
        "coefficients": report.coefficients,
        "diagnostics": report.diagnostics,
        "points": report.points,
    }
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"


def verify_json(report: VerifyReport) -> str:
    payload = {
        "kind": report.kind,
        "seed": report.seed,
        "checked": report.checked,
        "passed": report.passed,
        "counterexamples": report.counterexamples,
        "details": report.details,
    }
    return json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n"


def report_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.points:
        writer.writerow([row["n"]] + [repr(float(row[c])) for c in CSV_COLUMNS[1:]])
    return buf.getvalue()


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=10 * mag)
    start = math.floor(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(t)
        t += step
    return ticks


def residual_svg(report: Report, key: str = "residual", width: int = 560, height: int = 360) -> str:
    """Line chart of ``residual * n^2`` against ``n``."""
    ns = [p["n"] for p in report.points]
    ys = [p[key] * p["n"] ** 2 for p in report.points]
    left, right, top, bottom = 70, 20, 30, 50
    pw, ph = width - left - right, height - top - bottom
    yticks = _nice_ticks(min(ys + [0.0]), max(ys + [0.0]))
    ylo, yhi = yticks[0], yticks[-1]
    if yhi == ylo:
        yhi = ylo + 1.0
    xlo, xhi = min(ns), max(ns)
    if xhi == xlo:
        xhi = xlo + 1

    def sx(x):
        return left + pw * (x - xlo) / (xhi - xlo)

    def sy(y):
        return top + ph * (1 - (y - ylo) / (yhi - ylo))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="18" text-anchor="middle" font-size="13">{key} &#215; n&#178; vs n</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for t in yticks:
        y = sy(t)
        out.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    for n in ns:
        x = sx(n)
        out.append(f'<line x1="{x:.2f}" y1="{top + ph}" x2="{x:.2f}" y2="{top + ph + 4}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{top + ph + 16}" text-anchor="middle">{n}</text>')
    out.append(f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">n</text>')
    pts = " ".join(f"{sx(n):.2f},{sy(y):.2f}" for n, y in zip(ns, ys))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#1f5fa8" stroke-width="1.5"/>')
    for n, y in zip(ns, ys):
        out.append(f'<circle cx="{sx(n):.2f}" cy="{sy(y):.2f}" r="2.5" fill="#1f5fa8"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_text(path, text: str) -> None:
    Path(path).write_text(text)
