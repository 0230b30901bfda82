"""Rendering facade: geometry solving, scene building, rasterization, PNG.

The full chain for one design document:

    doc -> solve_geometry -> to_svg -> rasterize -> encode_png

Everything here is pure; the pipeline parallelizes by rendering designs
in independent worker processes.
"""

from __future__ import annotations

from .cad_doc import CadDocument
from .geometry import BikeGeometry, GEOMETRY_KEYS, solve_geometry_values
from .raster import DEFAULT_HEIGHT, DEFAULT_WIDTH, RasterImage, blank_image, rasterize
from .png_io import decode_png, encode_png, read_png, write_png
from .scene import Style, SvgScene, scene_from_doc, svg_text, to_svg

__all__ = [
    "BikeGeometry", "RasterImage", "SvgScene", "Style",
    "solve_geometry", "to_svg", "rasterize", "encode_png", "decode_png",
    "read_png", "write_png", "render_doc", "scene_from_doc", "svg_text",
    "blank_image", "DEFAULT_WIDTH", "DEFAULT_HEIGHT",
]


def solve_geometry(doc: CadDocument) -> BikeGeometry:
    """Solve 2-D geometry from a CAD document's keys."""
    return solve_geometry_values({k: doc.get_float(k) for k in GEOMETRY_KEYS})


def render_doc(doc: CadDocument, width: int = DEFAULT_WIDTH,
               height: int = DEFAULT_HEIGHT, supersample: int = 4) -> RasterImage:
    """Document straight to pixels."""
    return rasterize(scene_from_doc(doc), width=width, height=height,
                     supersample=supersample)
