"""JSON, CSV and SVG emission.  Output is byte-deterministic for equal
inputs; SVG files additionally carry a generator header line."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from .geometry import RegionCell, format_rational

GENERATOR = "epscns-svg 1"


def _plain(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if hasattr(value, "to_json"):
        return _plain(value.to_json())
    return value


def dumps(obj) -> str:
    return json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n"


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj))
    return path


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_plain(v) for v in row])
    return buf.getvalue()


def write_csv(path: Path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(csv_text(header, rows))
    return path


# ---------------------------------------------------------------------------
# SVG

_FILL = {"in": "#2b7a3d", "out": "#c23b22", "inconclusive": "#b0b0b0"}
_STROKE = {"B": "#1f4e9c", "D": "#7a3d9c", "T": "#d98a00"}
SIZE = 480
PAD = 20


def _px(x: Fraction, y: Fraction):
    # the window [-1, 1] x [-1, 2] covers E_2
    scale = Fraction(SIZE - 2 * PAD, 3)
    return PAD + (x + 1) * scale, PAD + (2 - y) * scale


def _num(v: Fraction) -> str:
    return f"{float(v):.3f}"


def _outline(cell: RegionCell, color: str, label: str) -> str:
    if cell.is_empty:
        return ""
    pts = " ".join(f"{_num(a)},{_num(b)}" for a, b in (_px(x, y) for x, y in cell.vertices))
    return (f'<polygon points="{pts}" fill="none" stroke="{color}" stroke-width="1.5">'
            f"<title>{label}</title></polygon>")


def sample_svg(eps: Fraction, grid: int, samples, overlays: dict) -> str:
    """Grid verdict dots with region outlines; ``overlays`` maps a label to
    a closed cell."""
    r = max(1.0, (SIZE - 2 * PAD) / (3 * 4 * grid))
    out = [
        f"<!-- generator: {GENERATOR} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>eps = {format_rational(eps)}, grid 1/{grid}</title>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    for x, y, verdict in samples:
        cx, cy = _px(x, y)
        out.append(f'<circle cx="{_num(cx)}" cy="{_num(cy)}" r="{r:.2f}" fill="{_FILL[verdict]}"/>')
    for label in sorted(overlays):
        out.append(_outline(overlays[label], _STROKE.get(label, "black"), label))
    out.append("</svg>")
    return "\n".join(line for line in out if line) + "\n"


def write_svg(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
