"""Minimal PNG codec for 8-bit RGB images.

Hand-rolled so encoding is canonical: fixed chunk layout (IHDR, one
IDAT, IEND), filter type 0 on every row, zlib level 6. The same pixels
always encode to the same bytes. Decoding accepts the full filter set
(0-4) for robustness but only 8-bit RGB, non-interlaced images; errors
carry the byte offset of the offending chunk.
"""

from __future__ import annotations

import struct
import zlib

import numpy as np

from .errors import DataFormatError
from .raster import RasterImage

_SIGNATURE = b"\x89PNG\r\n\x1a\n"
_ZLIB_LEVEL = 6


def encode_png(img: RasterImage) -> bytes:
    raw = bytearray()
    px = img.pixels
    for r in range(img.height):
        raw.append(0)                     # filter type None
        raw += px[r].tobytes()
    ihdr = struct.pack(">IIBBBBB", img.width, img.height, 8, 2, 0, 0, 0)
    idat = zlib.compress(bytes(raw), _ZLIB_LEVEL)
    out = bytearray(_SIGNATURE)
    for tag, body in ((b"IHDR", ihdr), (b"IDAT", idat), (b"IEND", b"")):
        out += struct.pack(">I", len(body)) + tag + body
        out += struct.pack(">I", zlib.crc32(tag + body) & 0xFFFFFFFF)
    return bytes(out)


def _unfilter(data: bytes, width: int, height: int) -> np.ndarray:
    stride = width * 3
    if len(data) != (stride + 1) * height:
        raise DataFormatError(
            f"decompressed size {len(data)} != expected {(stride + 1) * height}")
    out = np.zeros((height, stride), dtype=np.uint8)
    prev = np.zeros(stride, dtype=np.int32)
    for r in range(height):
        ftype = data[r * (stride + 1)]
        row = np.frombuffer(
            data, dtype=np.uint8, count=stride,
            offset=r * (stride + 1) + 1).astype(np.int32)
        if ftype == 0:
            cur = row
        elif ftype == 2:                  # Up
            cur = (row + prev) & 0xFF
        elif ftype in (1, 3, 4):          # Sub / Average / Paeth need a scan
            cur = np.zeros(stride, dtype=np.int32)
            for i in range(stride):
                a = cur[i - 3] if i >= 3 else 0
                b = prev[i]
                c = prev[i - 3] if i >= 3 else 0
                if ftype == 1:
                    v = row[i] + a
                elif ftype == 3:
                    v = row[i] + (a + b) // 2
                else:
                    p = a + b - c
                    pa, pb, pc = abs(p - a), abs(p - b), abs(p - c)
                    pred = a if (pa <= pb and pa <= pc) else (b if pb <= pc else c)
                    v = row[i] + pred
                cur[i] = v & 0xFF
        else:
            raise DataFormatError(f"unknown filter type {ftype} on row {r}")
        out[r] = cur.astype(np.uint8)
        prev = cur
    return out.reshape(height, width, 3)


def decode_png(data: bytes) -> RasterImage:
    if data[:8] != _SIGNATURE:
        raise DataFormatError("not a PNG stream (bad signature)", offset=0)
    pos = 8
    width = height = None
    idat = bytearray()
    seen_end = False
    while pos < len(data):
        if pos + 8 > len(data):
            raise DataFormatError("truncated chunk header", offset=pos)
        (length,) = struct.unpack(">I", data[pos:pos + 4])
        tag = data[pos + 4:pos + 8]
        body_start = pos + 8
        if body_start + length + 4 > len(data):
            raise DataFormatError(f"truncated {tag!r} chunk", offset=pos)
        body = data[body_start:body_start + length]
        (crc,) = struct.unpack(">I", data[body_start + length:body_start + length + 4])
        if crc != (zlib.crc32(tag + body) & 0xFFFFFFFF):
            raise DataFormatError(f"CRC mismatch in {tag!r} chunk", offset=pos)
        if tag == b"IHDR":
            width, height, depth, ctype, comp, filt, ilace = struct.unpack(
                ">IIBBBBB", body)
            if depth != 8 or ctype != 2:
                raise DataFormatError(
                    f"unsupported PNG: bit depth {depth}, color type {ctype} "
                    f"(only 8-bit RGB)", offset=pos)
            if ilace != 0:
                raise DataFormatError("interlaced PNG not supported", offset=pos)
        elif tag == b"IDAT":
            idat += body
        elif tag == b"IEND":
            seen_end = True
            break
        pos = body_start + length + 4
    if width is None:
        raise DataFormatError("missing IHDR chunk")
    if not seen_end:
        raise DataFormatError("missing IEND chunk (truncated stream)",
                              offset=len(data))
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as e:
        raise DataFormatError(f"corrupt IDAT stream: {e}") from None
    return RasterImage(width, height, _unfilter(raw, width, height))


def write_png(path, img: RasterImage) -> bytes:
    data = encode_png(img)
    with open(path, "wb") as f:
        f.write(data)
    return data


def read_png(path) -> RasterImage:
    with open(path, "rb") as f:
        return decode_png(f.read())
