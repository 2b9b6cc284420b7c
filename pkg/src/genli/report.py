"""CSV / JSON / SVG writers for run reports.

Numbers are written as decimal strings at full working precision so runs can be
compared across implementations; nothing time- or host-dependent is emitted,
so identical configurations give byte-identical files.
"""
from __future__ import annotations

import csv
import io
import json
from html import escape
from pathlib import Path
from typing import Iterable, Sequence

SCHEMA_VERSION = 1
LI_COLUMNS = ("n", "a", "k_zero_sum", "tail_bound", "k_taylor", "residual", "budget", "pass")

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")


def fmt(x, digits: int | None = None) -> str:
    """Decimal string for mpf/mpc/float/int/bool/None."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    ctx = getattr(x, "context", None)
    if ctx is not None:
        d = digits or int(ctx.prec * 0.30103) + 1
        if hasattr(x, "imag") and not hasattr(x, "man"):
            return f"{ctx.nstr(x.real, d)}{'+' if x.imag >= 0 else '-'}{ctx.nstr(abs(x.imag), d)}j"
        return ctx.nstr(x, d)
    return str(x)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    return fmt(obj)


def json_text(payload: dict) -> str:
    body = {"schema_version": SCHEMA_VERSION}
    body.update(_jsonable(payload))
    return json.dumps(body, indent=1, sort_keys=False) + "\n"


def svg_from_csv(text: str, x: str = "n", y: str = "k_zero_sum", group: str = "a", title: str = "") -> str:
    """Line chart of column ``y`` against ``x``, one polyline per value of ``group``."""
    rows = list(csv.DictReader(io.StringIO(text)))
    series: dict = {}
    for r in rows:
        if not r.get(y):
            continue
        series.setdefault(r.get(group, ""), []).append((float(r[x]), float(r[y])))
    W, H, L, R, T, B = 640, 400, 70, 20, 30, 45
    pts = [p for s in series.values() for p in s]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(v):
        return L + (v - x0) / (x1 - x0) * (W - L - R)

    def py(v):
        return H - B - (v - y0) / (y1 - y0) * (H - T - B)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.1f}" y="18" text-anchor="middle" font-size="14">{escape(title or f"{y} vs {x}")}</text>',
        f'<line x1="{L}" y1="{H - B}" x2="{W - R}" y2="{H - B}" stroke="black"/>',
        f'<line x1="{L}" y1="{T}" x2="{L}" y2="{H - B}" stroke="black"/>',
    ]
    for i in range(5):
        xv = x0 + (x1 - x0) * i / 4
        yv = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(xv):.1f}" y="{H - B + 16}" text-anchor="middle" font-size="11">{xv:.4g}</text>')
        out.append(f'<text x="{L - 6}" y="{py(yv) + 4:.1f}" text-anchor="end" font-size="11">{yv:.4g}</text>')
    if y0 < 0 < y1:
        out.append(f'<line x1="{L}" y1="{py(0):.1f}" x2="{W - R}" y2="{py(0):.1f}" stroke="#bbb" stroke-dasharray="4 3"/>')
    for i, (key, s) in enumerate(sorted(series.items())):
        color = _PALETTE[i % len(_PALETTE)]
        path = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in sorted(s))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{path}"/>')
        out.append(f'<text x="{W - R - 4}" y="{T + 14 * (i + 1)}" text-anchor="end" font-size="11" fill="{color}">{escape(group)}={escape(key)}</text>')
    out.append(f'<text x="{(L + W - R) / 2:.1f}" y="{H - 8}" text-anchor="middle" font-size="12">{escape(x)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_outputs(out_dir: str | Path | None, stem: str, formats: Sequence[str], *, csv_body: str | None = None,
                  json_body: str | None = None) -> list[Path]:
    if out_dir is None:
        return []
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in formats and csv_body is not None:
        (d / f"{stem}.csv").write_text(csv_body)
        written.append(d / f"{stem}.csv")
    if "json" in formats and json_body is not None:
        (d / f"{stem}.json").write_text(json_body)
        written.append(d / f"{stem}.json")
    if "svg" in formats and csv_body is not None:
        (d / f"{stem}.svg").write_text(svg_from_csv(csv_body, title=stem))
        written.append(d / f"{stem}.svg")
    return written
