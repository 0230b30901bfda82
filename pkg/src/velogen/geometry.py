"""2-D bicycle geometry solver.

Coordinate convention (schema units, mm): bottom bracket at the origin,
x positive toward the front wheel, y positive up. The rear axle sits at
(-sqrt(cs^2 - drop^2), +drop): ``bb_drop`` means the bottom bracket is
that far below the axle line. The ground line is where the rear wheel's
outer radius touches: y = drop - rear_outer_radius. The front axle is
placed on the ground-consistent height for its own wheel; its x position
closes the chain seat tube -> top tube -> head tube -> fork so that the
head angle, tube lengths, fork length, and fork offset are all honored.

Wheel radii: the rim circle has radius wheel_diameter / 2; the tire is a
stroke of width tire_width centered at rim_radius + tire_width / 2, so
the outer radius is rim_radius + tire_width.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GeometryError

Point = tuple[float, float]


@dataclass(frozen=True)
class BikeGeometry:
    """Solved anchor points and radii for one design."""

    bottom_bracket: Point
    rear_axle: Point
    front_axle: Point
    seat_tube_top: Point
    head_tube_top: Point
    head_tube_bottom: Point
    handlebar_ref: Point
    saddle_ref: Point
    ground_y: float
    rear_rim_radius: float
    front_rim_radius: float
    rear_tire_width: float
    front_tire_width: float
    tube_thickness: float

    @property
    def rear_outer_radius(self) -> float:
        return self.rear_rim_radius + self.rear_tire_width

    @property
    def front_outer_radius(self) -> float:
        return self.front_rim_radius + self.front_tire_width

    def frame_segments(self) -> list[tuple[str, Point, Point]]:
        """Named frame members, each a straight tube."""
        return [
            ("chain_stay", self.bottom_bracket, self.rear_axle),
            ("seat_stay", self.rear_axle, self.seat_tube_top),
            ("seat_tube", self.bottom_bracket, self.seat_tube_top),
            ("top_tube", self.seat_tube_top, self.head_tube_top),
            ("head_tube", self.head_tube_top, self.head_tube_bottom),
            ("down_tube", self.bottom_bracket, self.head_tube_bottom),
        ]


def solve_geometry_values(v: dict[str, float]) -> BikeGeometry:
    """Solve geometry from a mapping of the reference parameter names.

    Raises GeometryError when the rear triangle is unsolvable
    (chain stay <= bb drop); the constraint pass should have rejected
    such designs, so reaching it here is an internal inconsistency.
    """
    cs = v["chain_stay_length"]
    drop = v["bb_drop"]
    if cs <= abs(drop):
        raise GeometryError(
            f"rear triangle unsolvable: chain stay {cs} <= bb drop {drop}")
    rear_rim = v["wheel_diameter_rear"] / 2.0
    front_rim = v["wheel_diameter_front"] / 2.0
    rear_outer = rear_rim + v["tire_width_rear"]
    front_outer = front_rim + v["tire_width_front"]

    rear_axle = (-math.sqrt(cs * cs - drop * drop), drop)
    ground_y = drop - rear_outer

    sa = math.radians(v["seat_angle"])
    seat_top = (-math.cos(sa) * v["seat_tube_length"],
                math.sin(sa) * v["seat_tube_length"])

    ha = math.radians(v["head_angle"])
    # steering axis unit vector pointing down-forward, and its normal
    d = (math.cos(ha), -math.sin(ha))
    n = (math.sin(ha), math.cos(ha))
    strut = v["fork_length"] + v["head_tube_length"]

    front_axle_y = ground_y + front_outer
    front_axle_x = (seat_top[0] + v["top_tube_length"]
                    + strut * d[0] + v["fork_offset"] * n[0])
    front_axle = (front_axle_x, front_axle_y)

    head_bottom = (front_axle[0] - v["fork_length"] * d[0] - v["fork_offset"] * n[0],
                   front_axle[1] - v["fork_length"] * d[1] - v["fork_offset"] * n[1])
    head_top = (head_bottom[0] - v["head_tube_length"] * d[0],
                head_bottom[1] - v["head_tube_length"] * d[1])

    handlebar = (head_top[0] + v["stem_reach"], head_top[1] + v["stem_stack"])
    saddle = (seat_top[0] - math.cos(sa) * v["seat_post_extension"],
              seat_top[1] + math.sin(sa) * v["seat_post_extension"])

    return BikeGeometry(
        bottom_bracket=(0.0, 0.0),
        rear_axle=rear_axle,
        front_axle=front_axle,
        seat_tube_top=seat_top,
        head_tube_top=head_top,
        head_tube_bottom=head_bottom,
        handlebar_ref=handlebar,
        saddle_ref=saddle,
        ground_y=ground_y,
        rear_rim_radius=rear_rim,
        front_rim_radius=front_rim,
        rear_tire_width=v["tire_width_rear"],
        front_tire_width=v["tire_width_front"],
        tube_thickness=v["tube_thickness"],
    )


GEOMETRY_KEYS = (
    "chain_stay_length", "bb_drop", "wheel_diameter_rear",
    "wheel_diameter_front", "tire_width_rear", "tire_width_front",
    "seat_angle", "head_angle", "seat_tube_length", "top_tube_length",
    "head_tube_length", "fork_length", "fork_offset", "stem_reach",
    "stem_stack", "seat_post_extension", "tube_thickness",
)
