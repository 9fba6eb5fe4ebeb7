"""Static figure and trace export: SVG 1.1 drawings and CSV trace tables."""

from __future__ import annotations

import csv

_SVG_HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    'width="{w}" height="{h}" viewBox="0 0 {w} {h}">\n'
)


def _bounds(point_sets, pad=0.08):
    xs = [p.real for pts in point_sets for p in pts]
    ys = [p.imag for pts in point_sets for p in pts]
    if not xs:
        return -1.0, 1.0, -1.0, 1.0
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    dx = max(x1 - x0, 1e-9)
    dy = max(y1 - y0, 1e-9)
    return x0 - pad * dx, x1 + pad * dx, y0 - pad * dy, y1 + pad * dy


class SvgCanvas:
    """Minimal SVG writer mapping the complex plane onto a pixel canvas."""

    def __init__(self, point_sets, size: int = 640):
        self.size = size
        self.x0, self.x1, self.y0, self.y1 = _bounds(point_sets)
        span = max(self.x1 - self.x0, self.y1 - self.y0)
        self.scale = (size - 20) / span
        self.parts = [_SVG_HEADER.format(w=size, h=size)]

    def _pix(self, z: complex):
        px = 10 + (z.real - self.x0) * self.scale
        py = self.size - 10 - (z.imag - self.y0) * self.scale
        return px, py

    def polyline(self, points, color: str = "#1f6fb5", width: float = 1.2, dashed: bool = False):
        coords = " ".join("%.2f,%.2f" % self._pix(p) for p in points)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{color}" '
            f'stroke-width="{width}"{dash}/>\n'
        )

    def marker(self, z: complex, color: str = "#c23b22", radius: float = 3.5):
        px, py = self._pix(z)
        self.parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{radius}" fill="{color}"/>\n')

    def label(self, z: complex, text: str, color: str = "#333333"):
        px, py = self._pix(z)
        self.parts.append(
            f'<text x="{px + 5:.2f}" y="{py - 5:.2f}" font-size="11" '
            f'fill="{color}">{text}</text>\n'
        )

    def write(self, path: str):
        with open(path, "w") as fh:
            fh.writelines(self.parts)
            fh.write("</svg>\n")


def trace_figure(path: str, traces, roots=(), basepoint=None, labels=None):
    """SVG of v-plane trace projections with the infinite-line roots marked.

    traces: list of [(v, u), ...]; drawn in distinct colors, first solid then
    dashed (matching the usual cycle-pair convention).
    """
    colors = ["#1f6fb5", "#c23b22", "#3f8f3f", "#8455b0"]
    point_sets = [[v for v, _ in tr] for tr in traces]
    if roots:
        point_sets.append(list(roots))
    canvas = SvgCanvas(point_sets)
    for k, tr in enumerate(traces):
        canvas.polyline([v for v, _ in tr], color=colors[k % len(colors)], dashed=(k % 2 == 1))
    for i, a in enumerate(roots):
        canvas.marker(a)
        canvas.label(a, (labels or {}).get(i, f"a{i + 1}"))
    if basepoint is not None:
        canvas.marker(basepoint, color="#222222", radius=2.5)
    canvas.write(path)


def trace_csv(path: str, trace, extra_columns=None):
    """CSV of a lift trace: index, re/im of v and u, plus optional columns."""
    extra_columns = extra_columns or {}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re_v", "im_v", "re_u", "im_u", *extra_columns])
        for k, (v, u) in enumerate(trace):
            row = [k, repr(v.real), repr(v.imag), repr(u.real), repr(u.imag)]
            row.extend(repr(extra_columns[c][k]) for c in extra_columns)
            writer.writerow(row)
