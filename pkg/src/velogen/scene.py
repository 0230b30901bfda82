"""Vector scene construction from solved geometry.

The draw list is emitted in a fixed z-order: wheels (tire ring, then
rim), frame tubes in the design color, fork glyph, seat post and stem,
saddle, handlebar. Scene coordinates are the geometry's (mm, y-up);
rasterization flips the axis.

Glyph definitions (anchored to BikeGeometry points, sizes in mm):

* rigid fork: one line, head tube bottom to front axle.
* suspension fork: twin legs offset +-15 from the fork axis plus a
  44 x 36 crown box at the head tube bottom; two primitives more than
  the rigid glyph.
* drop handlebar: forward-curling hook polyline scaled by
  handlebar_size / 120; flat handlebar: a near-straight two-point
  polyline with the same scaling.
* saddle: six-corner polygon around the saddle reference point, long
  axis saddle_length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .cad_doc import CadDocument, parse_color
from .geometry import BikeGeometry, solve_geometry_values

RGB = tuple[int, int, int]
Point = tuple[float, float]


@dataclass(frozen=True)
class Line:
    p1: Point
    p2: Point
    width: float
    color: RGB


@dataclass(frozen=True)
class Circle:
    center: Point
    radius: float
    stroke_width: float = 0.0
    stroke_color: RGB | None = None
    fill_color: RGB | None = None


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point, ...]
    width: float
    color: RGB


@dataclass(frozen=True)
class Polygon:
    points: tuple[Point, ...]
    fill_color: RGB


Primitive = Line | Circle | Polyline | Polygon


@dataclass(frozen=True)
class SvgScene:
    primitives: tuple[Primitive, ...]
    viewbox: tuple[float, float, float, float]    # x, y, w, h (y-up)
    background: RGB = (255, 255, 255)


@dataclass(frozen=True)
class Style:
    """Colors, stroke widths, and glyph selections for one document."""

    frame_color: RGB
    tire_color: RGB
    rim_color: RGB
    fork_color: RGB
    detail_color: RGB
    saddle_color: RGB
    background: RGB
    rim_stroke_width: float
    handlebar_style: str
    fork_style: str
    handlebar_size: float
    saddle_length: float

    @staticmethod
    def from_doc(doc: CadDocument) -> "Style":
        return Style(
            frame_color=parse_color(doc.get_str("frame_color")),
            tire_color=parse_color(doc.get_str("tire_color")),
            rim_color=parse_color(doc.get_str("rim_color")),
            fork_color=parse_color(doc.get_str("fork_color")),
            detail_color=parse_color(doc.get_str("detail_color")),
            saddle_color=parse_color(doc.get_str("saddle_color")),
            background=parse_color(doc.get_str("background_color")),
            rim_stroke_width=doc.get_float("rim_stroke_width"),
            handlebar_style=doc.get_str("handlebar_style"),
            fork_style=doc.get_str("fork_style"),
            handlebar_size=doc.get_float("handlebar_size"),
            saddle_length=doc.get_float("saddle_length"),
        )


def _unit(p1: Point, p2: Point) -> tuple[float, float, float]:
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return 1.0, 0.0, 0.0
    return dx / norm, dy / norm, norm


DROP_BAR_SHAPE = ((0.0, 0.0), (55.0, 0.0), (75.0, -12.0), (78.0, -35.0),
                  (62.0, -55.0), (40.0, -52.0))
FLAT_BAR_SHAPE = ((-35.0, -6.0), (45.0, 8.0))
SADDLE_SHAPE = ((-0.55, 6.0), (-0.15, 14.0), (0.30, 10.0),
                (0.45, 2.0), (0.30, -8.0), (-0.45, -10.0))

SUSPENSION_LEG_OFFSET = 15.0
SUSPENSION_CROWN_HALF = (22.0, 18.0)


def _fork_primitives(geom: BikeGeometry, style: Style) -> list[Primitive]:
    hb, fa = geom.head_tube_bottom, geom.front_axle
    if style.fork_style != "suspension":
        return [Line(hb, fa, width=geom.tube_thickness * 0.7,
                     color=style.fork_color)]
    ux, uy, _ = _unit(hb, fa)
    px, py = -uy, ux
    o = SUSPENSION_LEG_OFFSET
    legs = [Line((hb[0] + s * o * px, hb[1] + s * o * py),
                 (fa[0] + s * o * px, fa[1] + s * o * py),
                 width=geom.tube_thickness * 0.55, color=style.fork_color)
            for s in (-1.0, 1.0)]
    ca, cb = SUSPENSION_CROWN_HALF
    crown = Polygon(tuple(
        (hb[0] + sa * ca * px + sb * cb * ux, hb[1] + sa * ca * py + sb * cb * uy)
        for sa, sb in ((-1, -1), (1, -1), (1, 1), (-1, 1))),
        fill_color=style.fork_color)
    return legs + [crown]


def _handlebar(geom: BikeGeometry, style: Style) -> Polyline:
    shape = DROP_BAR_SHAPE if style.handlebar_style == "drop" else FLAT_BAR_SHAPE
    s = style.handlebar_size / 120.0
    hx, hy = geom.handlebar_ref
    return Polyline(tuple((hx + x * s, hy + y * s) for x, y in shape),
                    width=11.0, color=style.detail_color)


def _saddle(geom: BikeGeometry, style: Style) -> Polygon:
    sx, sy = geom.saddle_ref
    L = style.saddle_length
    return Polygon(tuple((sx + fx * L, sy + fy) for fx, fy in SADDLE_SHAPE),
                   fill_color=style.saddle_color)


def to_svg(geom: BikeGeometry, style: Style) -> SvgScene:
    """Build the deterministic draw list for one solved design."""
    prims: list[Primitive] = []
    for axle, rim_r, tire_w in (
            (geom.rear_axle, geom.rear_rim_radius, geom.rear_tire_width),
            (geom.front_axle, geom.front_rim_radius, geom.front_tire_width)):
        prims.append(Circle(axle, rim_r + tire_w / 2.0, stroke_width=tire_w,
                            stroke_color=style.tire_color))
        prims.append(Circle(axle, rim_r, stroke_width=style.rim_stroke_width,
                            stroke_color=style.rim_color))
    for _, p1, p2 in geom.frame_segments():
        prims.append(Line(p1, p2, width=geom.tube_thickness,
                          color=style.frame_color))
    prims.extend(_fork_primitives(geom, style))
    prims.append(Line(geom.seat_tube_top, geom.saddle_ref, width=14.0,
                      color=style.detail_color))
    prims.append(Line(geom.head_tube_top, geom.handlebar_ref, width=13.0,
                      color=style.detail_color))
    prims.append(_saddle(geom, style))
    prims.append(_handlebar(geom, style))
    return SvgScene(primitives=tuple(prims), viewbox=scene_bounds(prims),
                    background=style.background)


def scene_from_doc(doc: CadDocument) -> SvgScene:
    geom = solve_geometry_values({k: doc.get_float(k) for k in (
        "chain_stay_length", "bb_drop", "wheel_diameter_rear",
        "wheel_diameter_front", "tire_width_rear", "tire_width_front",
        "seat_angle", "head_angle", "seat_tube_length", "top_tube_length",
        "head_tube_length", "fork_length", "fork_offset", "stem_reach",
        "stem_stack", "seat_post_extension", "tube_thickness")})
    return to_svg(geom, Style.from_doc(doc))


def _prim_bounds(p: Primitive) -> tuple[float, float, float, float]:
    if isinstance(p, Line):
        h = p.width / 2.0
        xs, ys = (p.p1[0], p.p2[0]), (p.p1[1], p.p2[1])
        return min(xs) - h, min(ys) - h, max(xs) + h, max(ys) + h
    if isinstance(p, Circle):
        r = p.radius + p.stroke_width / 2.0
        return p.center[0] - r, p.center[1] - r, p.center[0] + r, p.center[1] + r
    h = p.width / 2.0 if isinstance(p, Polyline) else 0.0
    xs = [q[0] for q in p.points]
    ys = [q[1] for q in p.points]
    return min(xs) - h, min(ys) - h, max(xs) + h, max(ys) + h


def scene_bounds(prims) -> tuple[float, float, float, float]:
    if not prims:
        return (0.0, 0.0, 1.0, 1.0)
    boxes = [_prim_bounds(p) for p in prims]
    x0 = min(b[0] for b in boxes)
    y0 = min(b[1] for b in boxes)
    x1 = max(b[2] for b in boxes)
    y1 = max(b[3] for b in boxes)
    return (x0, y0, x1 - x0, y1 - y0)


def _hex(c: RGB) -> str:
    return "#{:02X}{:02X}{:02X}".format(*c)


def _fmt(x: float) -> str:
    return f"{x:.3f}".rstrip("0").rstrip(".")


def svg_text(scene: SvgScene) -> str:
    """Emit the scene as an SVG 1.1 subset document (y flipped to SVG's
    down axis). line, circle, polyline, polygon only; no paths."""
    vx, vy, vw, vh = scene.viewbox
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" '
           f'viewBox="{_fmt(vx)} {_fmt(-(vy + vh))} {_fmt(vw)} {_fmt(vh)}">',
           f'  <rect x="{_fmt(vx)}" y="{_fmt(-(vy + vh))}" width="{_fmt(vw)}" '
           f'height="{_fmt(vh)}" fill="{_hex(scene.background)}"/>']
    for p in scene.primitives:
        if isinstance(p, Line):
            out.append(
                f'  <line x1="{_fmt(p.p1[0])}" y1="{_fmt(-p.p1[1])}" '
                f'x2="{_fmt(p.p2[0])}" y2="{_fmt(-p.p2[1])}" '
                f'stroke="{_hex(p.color)}" stroke-width="{_fmt(p.width)}" '
                f'stroke-linecap="round"/>')
        elif isinstance(p, Circle):
            attrs = [f'cx="{_fmt(p.center[0])}"', f'cy="{_fmt(-p.center[1])}"',
                     f'r="{_fmt(p.radius)}"']
            if p.stroke_color is not None:
                attrs += [f'stroke="{_hex(p.stroke_color)}"',
                          f'stroke-width="{_fmt(p.stroke_width)}"']
            attrs.append(f'fill="{_hex(p.fill_color)}"' if p.fill_color is not None
                         else 'fill="none"')
            out.append('  <circle ' + ' '.join(attrs) + '/>')
        elif isinstance(p, Polyline):
            pts = ' '.join(f"{_fmt(x)},{_fmt(-y)}" for x, y in p.points)
            out.append(
                f'  <polyline points="{pts}" fill="none" '
                f'stroke="{_hex(p.color)}" stroke-width="{_fmt(p.width)}" '
                f'stroke-linecap="round" stroke-linejoin="round"/>')
        else:
            pts = ' '.join(f"{_fmt(x)},{_fmt(-y)}" for x, y in p.points)
            out.append(f'  <polygon points="{pts}" fill="{_hex(p.fill_color)}"/>')
    out.append('</svg>')
    return "\n".join(out) + "\n"
