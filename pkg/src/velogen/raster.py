"""Deterministic scanline rasterization of vector scenes.

The scene is uniformly scaled and centered into the canvas with a 5%
margin, then painted at ``supersample`` times the output resolution with
hard edges: each subsample is covered iff its center lies inside a
primitive, evaluated row by row from closed-form interval endpoints
(capsules and rings have analytic scanline cross-sections; polygons use
even-odd crossings). The supersampled canvas is box-filtered down with
integer round-half-up averaging, so a given scene always produces the
same bytes: coverage is a subsample count, never a floating-point blend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .scene import Circle, Line, Polygon, Polyline, SvgScene

MARGIN_FRACTION = 0.05
DEFAULT_WIDTH = 1070
DEFAULT_HEIGHT = 679


@dataclass(frozen=True)
class RasterImage:
    """Row-major 8-bit RGB image."""

    width: int
    height: int
    pixels: np.ndarray          # (height, width, 3) uint8

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(f"pixel buffer shape {self.pixels.shape} != "
                             f"({self.height}, {self.width}, 3)")
        if self.pixels.dtype != np.uint8:
            raise ValueError("pixel buffer must be uint8")

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()

    def __eq__(self, other):
        return (isinstance(other, RasterImage)
                and self.width == other.width and self.height == other.height
                and np.array_equal(self.pixels, other.pixels))


def blank_image(width: int, height: int,
                color: tuple[int, int, int] = (255, 255, 255)) -> RasterImage:
    px = np.empty((height, width, 3), dtype=np.uint8)
    px[:] = np.array(color, dtype=np.uint8)
    return RasterImage(width, height, px)


def _row_range(lo: float, hi: float, n: int) -> tuple[int, int]:
    """Indices whose centers (i + 0.5) lie in [lo, hi], clamped to [0, n)."""
    a = int(math.ceil(lo - 0.5))
    b = int(math.floor(hi - 0.5))
    return max(a, 0), min(b, n - 1)


class _Painter:
    """Paints primitives into a supersampled uint8 canvas."""

    def __init__(self, sub_w: int, sub_h: int, background):
        self.w = sub_w
        self.h = sub_h
        self.canvas = np.empty((sub_h, sub_w, 3), dtype=np.uint8)
        self.canvas[:] = np.array(background, dtype=np.uint8)

    def _paint_rows(self, y0: int, rows_lo: np.ndarray, rows_hi: np.ndarray,
                    color) -> None:
        col = np.array(color, dtype=np.uint8)
        canvas = self.canvas
        w = self.w
        for i in range(rows_lo.shape[0]):
            lo = rows_lo[i]
            hi = rows_hi[i]
            if not (lo <= hi):        # NaN-safe: empty cross-section
                continue
            a = int(math.ceil(lo - 0.5))
            b = int(math.floor(hi - 0.5))
            if b < 0 or a >= w:
                continue
            canvas[y0 + i, max(a, 0):min(b, w - 1) + 1] = col

    def capsule(self, p1, p2, radius: float, color) -> None:
        """Stroked segment with round caps: dist(p, seg) <= radius."""
        x1, y1 = p1
        x2, y2 = p2
        ymin = min(y1, y2) - radius
        ymax = max(y1, y2) + radius
        r0, r1 = _row_range(ymin, ymax, self.h)
        if r1 < r0:
            return
        ys = np.arange(r0, r1 + 1, dtype=np.float64) + 0.5
        lo = np.full(ys.shape, np.inf)
        hi = np.full(ys.shape, -np.inf)
        # cap disks
        for cx, cy in ((x1, y1), (x2, y2)):
            dy = ys - cy
            inside = np.abs(dy) <= radius
            s = np.sqrt(np.maximum(radius * radius - dy * dy, 0.0))
            lo = np.where(inside, np.minimum(lo, cx - s), lo)
            hi = np.where(inside, np.maximum(hi, cx + s), hi)
        # body rectangle (p1,p2 offset +-radius along the normal)
        dx, dy_ = x2 - x1, y2 - y1
        norm = math.hypot(dx, dy_)
        if norm > 0.0:
            nx, ny = -dy_ / norm * radius, dx / norm * radius
            corners = ((x1 + nx, y1 + ny), (x2 + nx, y2 + ny),
                       (x2 - nx, y2 - ny), (x1 - nx, y1 - ny))
            for k in range(4):
                ax, ay = corners[k]
                bx, by = corners[(k + 1) % 4]
                if ay == by:
                    continue
                t = (ys - ay) / (by - ay)
                on = (t >= 0.0) & (t <= 1.0)
                x = ax + t * (bx - ax)
                lo = np.where(on, np.minimum(lo, x), lo)
                hi = np.where(on, np.maximum(hi, x), hi)
        self._paint_rows(r0, lo, hi, color)

    def ring(self, center, radius: float, stroke: float, color) -> None:
        """Stroked circle: | dist(p, c) - radius | <= stroke / 2."""
        cx, cy = center
        r_out = radius + stroke / 2.0
        r_in = max(radius - stroke / 2.0, 0.0)
        r0, r1 = _row_range(cy - r_out, cy + r_out, self.h)
        if r1 < r0:
            return
        ys = np.arange(r0, r1 + 1, dtype=np.float64) + 0.5
        dy = ys - cy
        so = np.sqrt(np.maximum(r_out * r_out - dy * dy, 0.0))
        has_inner = np.abs(dy) < r_in
        si = np.where(has_inner,
                      np.sqrt(np.maximum(r_in * r_in - dy * dy, 0.0)), 0.0)
        # left band [cx-so, cx-si], right band [cx+si, cx+so]; bands meet
        # when the row misses the inner disk (si = 0)
        outer_ok = np.abs(dy) <= r_out
        left_lo = np.where(outer_ok, cx - so, np.inf)
        left_hi = np.where(outer_ok, cx - si, -np.inf)
        self._paint_rows(r0, left_lo, left_hi, color)
        right_lo = np.where(outer_ok, cx + si, np.inf)
        right_hi = np.where(outer_ok, cx + so, -np.inf)
        self._paint_rows(r0, right_lo, right_hi, color)

    def disk(self, center, radius: float, color) -> None:
        cx, cy = center
        r0, r1 = _row_range(cy - radius, cy + radius, self.h)
        if r1 < r0:
            return
        ys = np.arange(r0, r1 + 1, dtype=np.float64) + 0.5
        dy = ys - cy
        ok = np.abs(dy) <= radius
        s = np.sqrt(np.maximum(radius * radius - dy * dy, 0.0))
        self._paint_rows(r0, np.where(ok, cx - s, np.inf),
                         np.where(ok, cx + s, -np.inf), color)

    def polygon(self, points, color) -> None:
        ys_pts = [p[1] for p in points]
        r0, r1 = _row_range(min(ys_pts), max(ys_pts), self.h)
        if r1 < r0:
            return
        n = len(points)
        canvas = self.canvas
        col = np.array(color, dtype=np.uint8)
        w = self.w
        for row in range(r0, r1 + 1):
            y = row + 0.5
            xs = []
            for k in range(n):
                ax, ay = points[k]
                bx, by = points[(k + 1) % n]
                if ay == by:
                    continue
                # half-open rule: count edge iff y in [min, max)
                if (ay <= y < by) or (by <= y < ay):
                    xs.append(ax + (y - ay) / (by - ay) * (bx - ax))
            xs.sort()
            for k in range(0, len(xs) - 1, 2):
                a = int(math.ceil(xs[k] - 0.5))
                b = int(math.floor(xs[k + 1] - 0.5))
                if b < 0 or a >= w:
                    continue
                canvas[row, max(a, 0):min(b, w - 1) + 1] = col


def rasterize(scene: SvgScene, width: int = DEFAULT_WIDTH,
              height: int = DEFAULT_HEIGHT, supersample: int = 4) -> RasterImage:
    """Rasterize a scene to an RGB image.

    An empty scene (or one with a degenerate viewbox) yields a plain
    background image.
    """
    if width <= 0 or height <= 0:
        raise ValueError("canvas dimensions must be positive")
    if supersample not in (1, 2, 4):
        raise ValueError("supersample must be 1, 2, or 4")
    vx, vy, vw, vh = scene.viewbox
    if not scene.primitives or vw <= 0.0 or vh <= 0.0:
        return blank_image(width, height, scene.background)

    ss = supersample
    usable_w = width * (1.0 - 2.0 * MARGIN_FRACTION)
    usable_h = height * (1.0 - 2.0 * MARGIN_FRACTION)
    scale = min(usable_w / vw, usable_h / vh) * ss
    cx, cy = vx + vw / 2.0, vy + vh / 2.0
    ox, oy = width * ss / 2.0, height * ss / 2.0

    def tx(p):
        # y flips: scene is y-up, canvas row index grows downward
        return (ox + (p[0] - cx) * scale, oy - (p[1] - cy) * scale)

    painter = _Painter(width * ss, height * ss, scene.background)
    for prim in scene.primitives:
        if isinstance(prim, Line):
            painter.capsule(tx(prim.p1), tx(prim.p2),
                            prim.width / 2.0 * scale, prim.color)
        elif isinstance(prim, Circle):
            c = tx(prim.center)
            if prim.fill_color is not None:
                painter.disk(c, prim.radius * scale, prim.fill_color)
            if prim.stroke_color is not None and prim.stroke_width > 0.0:
                painter.ring(c, prim.radius * scale,
                             prim.stroke_width * scale, prim.stroke_color)
        elif isinstance(prim, Polyline):
            r = prim.width / 2.0 * scale
            pts = [tx(p) for p in prim.points]
            for a, b in zip(pts, pts[1:]):
                painter.capsule(a, b, r, prim.color)
        elif isinstance(prim, Polygon):
            painter.polygon([tx(p) for p in prim.points], prim.fill_color)

    if ss == 1:
        return RasterImage(width, height, painter.canvas)
    sums = painter.canvas.reshape(height, ss, width, ss, 3).astype(np.uint32)
    sums = sums.sum(axis=(1, 3))
    out = ((sums + ss * ss // 2) // (ss * ss)).astype(np.uint8)
    return RasterImage(width, height, out)
