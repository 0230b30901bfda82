"""Template-defaulted CAD documents and their XML dialect.

A document is a flat set of (key, value) entries: every property the
renderer reads, pre-filled with defaults from a template. Converting a
design overlays exactly the schema-mapped keys onto the template. The
three color channels red/green/blue map jointly to the single key
``frame_color`` as ``#RRGGBB`` (8-bit per channel, round half up);
every other parameter maps to the key of its own name, with categorical
values stored as label strings.

Serialization (`.bcadx`) is canonical: fixed header, entries sorted by
key, floats printed as the shortest decimal string that round-trips the
binary value. The same document always serializes to identical bytes.
"""

from __future__ import annotations

import hashlib
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from xml.sax.saxutils import escape

from .design_schema import DesignSchema, DesignVector, reference_schema
from .errors import DataFormatError, VelogenError

COLOR_CHANNELS = ("red", "green", "blue")
FRAME_COLOR_KEY = "frame_color"

STYLE_DEFAULTS: dict[str, float | str] = {
    "background_color": "#FFFFFF",
    "tire_color": "#000000",
    "rim_color": "#404040",
    "rim_stroke_width": 8.0,
    "fork_color": "#303030",
    "detail_color": "#303030",
    "saddle_color": "#202020",
}

Value = float | str


def format_value(v: Value) -> str:
    if isinstance(v, str):
        return v
    return repr(float(v))


def quantize_channel(c: float) -> int:
    """Unit-interval channel to 8-bit, rounding half up."""
    return min(255, max(0, int(math.floor(c * 255.0 + 0.5))))


def color_hex(r: float, g: float, b: float) -> str:
    return "#{:02X}{:02X}{:02X}".format(
        quantize_channel(r), quantize_channel(g), quantize_channel(b))


def parse_color(s: str) -> tuple[int, int, int]:
    if len(s) != 7 or not s.startswith("#"):
        raise DataFormatError(f"bad color literal {s!r}")
    try:
        return (int(s[1:3], 16), int(s[3:5], 16), int(s[5:7], 16))
    except ValueError:
        raise DataFormatError(f"bad color literal {s!r}") from None


@dataclass(frozen=True)
class CadTemplate:
    """Default values for every renderable property."""

    entries: dict[str, Value]
    schema_version: str

    def keys(self) -> set[str]:
        return set(self.entries)


@dataclass
class CadDocument:
    """Template entries with one design's overrides applied."""

    entries: dict[str, Value]
    schema_version: str
    design_id: str
    warnings: list[str] = field(default_factory=list, compare=False)

    def get_float(self, key: str) -> float:
        v = self.entries[key]
        if isinstance(v, str):
            raise DataFormatError(f"entry {key!r} is not numeric: {v!r}")
        return float(v)

    def get_str(self, key: str) -> str:
        return str(self.entries[key])

    def same_values(self, other: "CadDocument | CadTemplate") -> bool:
        return self.entries == other.entries


def default_template(schema: DesignSchema | None = None) -> CadTemplate:
    """Template from schema defaults plus the fixed style keys."""
    schema = schema if schema is not None else reference_schema()
    entries: dict[str, Value] = dict(STYLE_DEFAULTS)
    colors = {}
    for p in schema.parameters:
        if p.name in COLOR_CHANNELS:
            colors[p.name] = float(p.default)
        elif p.is_continuous:
            entries[p.name] = float(p.default)
        else:
            entries[p.name] = p.categories[int(p.default)]
    if len(colors) == len(COLOR_CHANNELS):
        entries[FRAME_COLOR_KEY] = color_hex(*(colors[c] for c in COLOR_CHANNELS))
    elif colors:
        raise VelogenError("schema defines a partial red/green/blue triple")
    else:
        entries[FRAME_COLOR_KEY] = "#808080"
    return CadTemplate(entries=entries, schema_version=schema.version)


def load_template(path) -> CadTemplate:
    with open(path, "rb") as f:
        doc = parse_xml(f.read())
    return CadTemplate(entries=doc.entries, schema_version=doc.schema_version)


def bundled_template() -> CadTemplate:
    raw = resources.files("velogen.data").joinpath("template.bcadx").read_bytes()
    doc = parse_xml(raw)
    return CadTemplate(entries=doc.entries, schema_version=doc.schema_version)


def design_hash(design: DesignVector) -> str:
    h = hashlib.sha256(repr(design.values).encode("ascii")).hexdigest()
    return h[:12]


def to_cad(design: DesignVector, template: CadTemplate, schema: DesignSchema,
           design_id: str | None = None) -> CadDocument:
    """Overlay a design's parameters onto the template.

    Pure and idempotent: the output holds template values for every key
    the schema does not map. The design is assumed feasible; the pipeline
    enforces that before conversion.
    """
    entries = dict(template.entries)
    colors: dict[str, float] = {}
    for p, v in zip(schema.parameters, design.values):
        if p.name in COLOR_CHANNELS:
            colors[p.name] = float(v)
            continue
        if p.name not in template.entries:
            raise VelogenError(
                f"schema parameter {p.name!r} has no key in the template")
        entries[p.name] = float(v) if p.is_continuous else p.categories[int(v)]
    if len(colors) == len(COLOR_CHANNELS):
        entries[FRAME_COLOR_KEY] = color_hex(*(colors[c] for c in COLOR_CHANNELS))
    elif colors:
        raise VelogenError("schema defines a partial red/green/blue triple")
    return CadDocument(entries=entries, schema_version=schema.version,
                       design_id=design_id or design_hash(design))


# -- XML serialization ---------------------------------------------------

def write_xml(doc: CadDocument | CadTemplate) -> bytes:
    if isinstance(doc, CadTemplate):
        doc = CadDocument(entries=dict(doc.entries),
                          schema_version=doc.schema_version,
                          design_id="template")
    lines = ['<?xml version="1.0" encoding="UTF-8"?>',
             '<bcadx format="1" schema_version="{}" design_id="{}">'.format(
                 escape(doc.schema_version, {'"': "&quot;"}),
                 escape(doc.design_id, {'"': "&quot;"}))]
    for key in sorted(doc.entries):
        val = escape(format_value(doc.entries[key]))
        lines.append('  <entry key="{}">{}</entry>'.format(
            escape(key, {'"': "&quot;"}), val))
    lines.append('</bcadx>')
    return ("\n".join(lines) + "\n").encode("utf-8")


def _byte_offset(data: bytes, line: int, column: int) -> int:
    rows = data.split(b"\n")
    return sum(len(r) + 1 for r in rows[:line - 1]) + column


def parse_xml(data: bytes, known_keys: set[str] | None = None) -> CadDocument:
    """Parse the `.bcadx` dialect.

    Unknown keys and unexpected elements are reported as warnings on the
    returned document and otherwise ignored (forward compatibility).
    Malformed XML raises DataFormatError with the failing byte offset.
    """
    try:
        root = ET.fromstring(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise DataFormatError(f"not UTF-8: {e.reason}", offset=e.start) from None
    except ET.ParseError as e:
        line, col = e.position
        raise DataFormatError(f"malformed XML: {e.msg}",
                              offset=_byte_offset(data, line, col)) from None
    if root.tag != "bcadx":
        raise DataFormatError(f"root element is {root.tag!r}, expected 'bcadx'")
    if root.get("format") != "1":
        raise DataFormatError(f"unsupported format {root.get('format')!r}")
    if known_keys is None:
        known_keys = set(default_template().entries)
    warnings: list[str] = []
    entries: dict[str, Value] = {}
    for child in root:
        if child.tag != "entry":
            warnings.append(f"ignoring unexpected element <{child.tag}>")
            continue
        key = child.get("key")
        if key is None:
            raise DataFormatError("entry element without key attribute")
        if key in entries:
            raise DataFormatError(f"duplicate entry key {key!r}")
        text = child.text or ""
        if key not in known_keys:
            warnings.append(f"unknown key {key!r}")
        try:
            entries[key] = float(text)
        except ValueError:
            entries[key] = text
    return CadDocument(entries=entries,
                       schema_version=root.get("schema_version", "unversioned"),
                       design_id=root.get("design_id", ""),
                       warnings=warnings)
