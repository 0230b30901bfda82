"""Feasibility rules that weed out grossly infeasible designs.

The reference rule set:

  R1  all tube lengths, diameters, and widths strictly positive
  R2  rear triangle solvable: chain stay length > bottom-bracket drop
  R3  frame member segments pairwise non-crossing
  R4  front and rear wheels clear of each other (5 mm clearance)
  R5  wheels clear of the seat tube
  R6  head and seat angles inside (45, 90) degrees
  R7  front wheel clear of the down tube

All enabled rules are evaluated (no short-circuit) so per-rule rejection
tallies are meaningful; the only exception is that the geometry-derived
rules R3/R4/R5/R7 cannot be evaluated when R2 already failed, since there
is no geometry to test. Infeasibility is data, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .design_schema import DesignSchema, DesignVector
from .errors import GeometryError
from .geometry import BikeGeometry, solve_geometry_values

Point = tuple[float, float]

POSITIVE_LENGTH_PARAMS = (
    "seat_tube_length", "top_tube_length", "head_tube_length",
    "chain_stay_length", "tube_thickness", "wheel_diameter_front",
    "wheel_diameter_rear", "tire_width_front", "tire_width_rear",
    "fork_length", "saddle_length", "handlebar_size",
)

ANGLE_PARAMS = ("seat_angle", "head_angle")
ANGLE_MIN, ANGLE_MAX = 45.0, 90.0


# -- geometric predicates ------------------------------------------------

def segments_intersect(a1: Point, a2: Point, b1: Point, b2: Point,
                       eps: float = 1e-9) -> bool:
    """True iff the open segments properly cross.

    A proper crossing is a single transversal intersection point interior
    to both segments. Endpoints coinciding within ``eps`` never count:
    frame joints are touching members by construction. Collinear overlap
    is not a crossing.
    """
    for p in (a1, a2):
        for q in (b1, b2):
            if math.hypot(p[0] - q[0], p[1] - q[1]) <= eps:
                return False

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    d1 = cross(b1, b2, a1)
    d2 = cross(b1, b2, a2)
    d3 = cross(a1, a2, b1)
    d4 = cross(a1, a2, b2)
    return ((d1 > 0.0) != (d2 > 0.0) and d1 != 0.0 and d2 != 0.0
            and (d3 > 0.0) != (d4 > 0.0) and d3 != 0.0 and d4 != 0.0)


def circles_overlap(c1: Point, r1: float, c2: Point, r2: float,
                    clearance: float = 0.0) -> bool:
    """True iff distance(c1, c2) < r1 + r2 + clearance."""
    if r1 <= 0.0 or r2 <= 0.0:
        raise ValueError(f"radii must be positive, got {r1}, {r2}")
    return math.hypot(c1[0] - c2[0], c1[1] - c2[1]) < r1 + r2 + clearance


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den == 0.0:
        return math.hypot(p[0] - ax, p[1] - ay)
    t = ((p[0] - ax) * dx + (p[1] - ay) * dy) / den
    t = min(1.0, max(0.0, t))
    return math.hypot(p[0] - (ax + t * dx), p[1] - (ay + t * dy))


# -- rule set -------------------------------------------------------------

@dataclass(frozen=True)
class Rule:
    id: str
    enabled: bool = True
    tolerance: float = 0.0      # clearance (mm) or epsilon, per rule

    def __post_init__(self):
        if self.tolerance < 0:
            raise ValueError(f"rule {self.id}: tolerance must be non-negative")


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        ids = [r.id for r in self.rules]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate rule ids")

    def enabled_ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.rules if r.enabled)

    def get(self, rule_id: str) -> Rule:
        for r in self.rules:
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def disabling(self, *rule_ids: str) -> "RuleSet":
        return RuleSet(tuple(
            Rule(r.id, enabled=r.enabled and r.id not in rule_ids,
                 tolerance=r.tolerance)
            for r in self.rules))

    def to_dict(self) -> list[dict]:
        return [{"id": r.id, "enabled": r.enabled, "tolerance": r.tolerance}
                for r in self.rules]

    @staticmethod
    def from_dict(rows: list[dict]) -> "RuleSet":
        return RuleSet(tuple(Rule(r["id"], r["enabled"], r["tolerance"])
                             for r in rows))


def reference_rules() -> RuleSet:
    return RuleSet((
        Rule("R1_positive_lengths"),
        Rule("R2_rear_triangle"),
        Rule("R3_frame_self_intersection", tolerance=1e-9),
        Rule("R4_wheel_overlap", tolerance=5.0),
        Rule("R5_wheel_seat_tube"),
        Rule("R6_angle_range"),
        Rule("R7_front_wheel_down_tube"),
    ))


@dataclass(frozen=True)
class ConstraintViolation:
    rule_id: str
    message: str
    values: tuple[float, ...] = ()


@dataclass
class ConstraintReport:
    violations: list[ConstraintViolation] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return not self.violations

    def rule_ids(self) -> list[str]:
        return [v.rule_id for v in self.violations]


# -- evaluation -----------------------------------------------------------

def check(design: DesignVector, schema: DesignSchema,
          rules: RuleSet | None = None) -> ConstraintReport:
    """Evaluate all enabled rules against one design."""
    if rules is None:
        rules = reference_rules()
    values = {p.name: v for p, v in zip(schema.parameters, design.values)}
    report = ConstraintReport()
    enabled = set(rules.enabled_ids())

    def add(rule_id, message, *vals):
        report.violations.append(ConstraintViolation(rule_id, message,
                                                     tuple(float(x) for x in vals)))

    if "R1_positive_lengths" in enabled:
        for name in POSITIVE_LENGTH_PARAMS:
            if name in values and values[name] <= 0.0:
                add("R1_positive_lengths",
                    f"{name} = {values[name]} must be strictly positive",
                    values[name])

    triangle_ok = True
    if "R2_rear_triangle" in enabled:
        cs, drop = values["chain_stay_length"], values["bb_drop"]
        if cs <= abs(drop):
            triangle_ok = False
            add("R2_rear_triangle",
                f"chain stay {cs} <= bb drop {drop}: rear axle position "
                f"has no real solution", cs, drop)

    if "R6_angle_range" in enabled:
        for name in ANGLE_PARAMS:
            a = values[name]
            if not ANGLE_MIN < a < ANGLE_MAX:
                add("R6_angle_range",
                    f"{name} = {a} outside ({ANGLE_MIN}, {ANGLE_MAX})", a)

    geom: BikeGeometry | None = None
    if triangle_ok:
        try:
            geom = solve_geometry_values(values)
        except GeometryError:
            geom = None
    if geom is not None:
        half_tube = geom.tube_thickness / 2.0

        if "R3_frame_self_intersection" in enabled:
            eps = rules.get("R3_frame_self_intersection").tolerance
            segs = geom.frame_segments()
            for i in range(len(segs)):
                for j in range(i + 1, len(segs)):
                    na, a1, a2 = segs[i]
                    nb, b1, b2 = segs[j]
                    if segments_intersect(a1, a2, b1, b2, eps=eps):
                        add("R3_frame_self_intersection",
                            f"{na} crosses {nb}")

        if "R4_wheel_overlap" in enabled:
            clearance = rules.get("R4_wheel_overlap").tolerance
            if circles_overlap(geom.rear_axle, geom.rear_outer_radius,
                               geom.front_axle, geom.front_outer_radius,
                               clearance=clearance):
                gap = math.hypot(geom.rear_axle[0] - geom.front_axle[0],
                                 geom.rear_axle[1] - geom.front_axle[1])
                add("R4_wheel_overlap",
                    f"axle distance {gap:.1f} < {geom.rear_outer_radius:.1f} "
                    f"+ {geom.front_outer_radius:.1f} + {clearance}",
                    gap, geom.rear_outer_radius, geom.front_outer_radius)

        if "R5_wheel_seat_tube" in enabled:
            clearance = rules.get("R5_wheel_seat_tube").tolerance
            st = (geom.bottom_bracket, geom.seat_tube_top)
            for label, axle, outer in (
                    ("rear", geom.rear_axle, geom.rear_outer_radius),
                    ("front", geom.front_axle, geom.front_outer_radius)):
                dist = point_segment_distance(axle, *st)
                if dist < outer + half_tube + clearance:
                    add("R5_wheel_seat_tube",
                        f"{label} wheel (outer {outer:.1f}) within "
                        f"{dist:.1f} of seat tube", dist, outer)

        if "R7_front_wheel_down_tube" in enabled:
            clearance = rules.get("R7_front_wheel_down_tube").tolerance
            dist = point_segment_distance(
                geom.front_axle, geom.bottom_bracket, geom.head_tube_bottom)
            if dist < geom.front_outer_radius + half_tube + clearance:
                add("R7_front_wheel_down_tube",
                    f"front wheel (outer {geom.front_outer_radius:.1f}) "
                    f"within {dist:.1f} of down tube",
                    dist, geom.front_outer_radius)

    return report


def checker(schema: DesignSchema,
            rules: RuleSet | None = None) -> Callable[[DesignVector], list[str]]:
    """Adapter for sample_feasible: design -> violated rule ids."""
    rules = rules if rules is not None else reference_rules()

    def run(design: DesignVector) -> list[str]:
        return check(design, schema, rules).rule_ids()

    return run
