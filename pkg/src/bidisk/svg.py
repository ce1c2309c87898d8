"""Minimal deterministic SVG output for curves in the upper half-plane."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

STYLES = {
    "solid": 'stroke="black" stroke-width="1.2" fill="none"',
    "dashed": 'stroke="black" stroke-width="1" fill="none" stroke-dasharray="6 4"',
    "thick": 'stroke="black" stroke-width="2.6" fill="none"',
    "ray": 'stroke="gray" stroke-width="1" fill="none" stroke-dasharray="3 3"',
}


def num(v: float) -> str:
    """Fixed pixel formatting, so output is stable byte for byte."""
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@dataclass(frozen=True)
class PlotSpec:
    x_min: float = -4.0
    x_max: float = 4.0
    y_min: float = 0.0
    y_max: float = 4.0
    width: int = 640
    height: int = 320

    def __post_init__(self):
        if self.y_min < 0:
            raise ValueError("window must lie in the upper half-plane (y_min >= 0)")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("empty window")
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")

    def px(self, x, y):
        sx = (np.asarray(x, dtype=float) - self.x_min) / (self.x_max - self.x_min) * self.width
        sy = (self.y_max - np.asarray(y, dtype=float)) / (self.y_max - self.y_min) * self.height
        return sx, sy


@dataclass
class Figure:
    spec: PlotSpec
    items: list[str] = field(default_factory=list)

    def polyline(self, x: Sequence[float], y: Sequence[float], style: str = "solid",
                 attrs: Optional[dict] = None):
        sx, sy = self.spec.px(x, y)
        # keep coordinates bounded; the clip path hides what lies outside the window
        lim = 4.0 * max(self.spec.width, self.spec.height)
        sx, sy = np.clip(sx, -lim, lim), np.clip(sy, -lim, lim)
        pts = " ".join(f"{num(a)},{num(b)}" for a, b in zip(sx, sy))
        extra = "".join(f' {k}="{v}"' for k, v in (attrs or {}).items())
        self.items.append(f'<polyline{extra} {STYLES[style]} points="{pts}"/>')

    def circle(self, x: float, y: float, r: float = 4.0, attrs: Optional[dict] = None):
        sx, sy = self.spec.px(x, y)
        extra = "".join(f' {k}="{v}"' for k, v in (attrs or {}).items())
        self.items.append(f'<circle{extra} cx="{num(float(sx))}" cy="{num(float(sy))}" '
                          f'r="{num(r)}" stroke="black" fill="none"/>')

    def axis(self):
        sx, sy = self.spec.px([self.spec.x_min, self.spec.x_max], [0.0, 0.0])
        self.items.append(f'<line class="boundary" x1="{num(sx[0])}" y1="{num(sy[0])}" '
                          f'x2="{num(sx[1])}" y2="{num(sy[1])}" stroke="gray"/>')

    def render(self) -> str:
        w, h = self.spec.width, self.spec.height
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
            f'viewBox="0 0 {w} {h}">',
            f'<defs><clipPath id="window"><rect x="0" y="0" width="{w}" height="{h}"/>'
            '</clipPath></defs>',
            '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
            '<g clip-path="url(#window)">',
        ]
        return "\n".join(head + self.items + ["</g>", "</svg>"]) + "\n"
