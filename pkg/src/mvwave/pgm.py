"""Binary 8-bit PGM (P5) reading and writing.

Files are always written with the canonical header ``P5\\n<w> <h>\\n255\\n``.
The reader also accepts the other header spellings allowed by netpbm
(arbitrary whitespace, ``#`` comments) but only maxval 255.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .errors import FormatError
from .reffun import DisplayConfig
from .synth import MultiviewImage

__all__ = ["encode_pgm", "decode_pgm", "write_pgm", "read_pgm", "write_pgm_array", "read_pgm_array"]

_WS = b" \t\n\r\v\f"


def encode_pgm(pixels) -> bytes:
    a = np.asarray(pixels)
    if a.ndim != 2:
        raise FormatError(f"PGM needs a 2-D array, got shape {a.shape}")
    if a.size and (a.min() < 0 or a.max() > 255):
        raise FormatError("PGM payload must lie in [0, 255]")
    h, w = a.shape
    return b"P5\n%d %d\n255\n" % (w, h) + a.astype(np.uint8).tobytes()


def _token(data: bytes, pos: int, what: str) -> tuple[bytes, int]:
    while pos < len(data):
        c = data[pos:pos + 1]
        if c == b"#":
            nl = data.find(b"\n", pos)
            pos = len(data) if nl < 0 else nl + 1
        elif c in _WS:
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos:pos + 1] not in _WS and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise FormatError(f"offset {start}: missing {what}")
    return data[start:pos], pos


def _int_token(data, pos, what):
    tok, end = _token(data, pos, what)
    if not tok.isdigit():
        raise FormatError(f"offset {end - len(tok)}: {what} is not a decimal integer: {tok!r}")
    return int(tok), end


def decode_pgm(data: bytes) -> np.ndarray:
    if data[:2] != b"P5":
        raise FormatError(f"offset 0: expected magic b'P5', got {data[:2]!r}")
    pos = 2
    width, pos = _int_token(data, pos, "width")
    height, pos = _int_token(data, pos, "height")
    maxval_at = pos
    maxval, pos = _int_token(data, pos, "maxval")
    if maxval != 255:
        raise FormatError(f"offset {maxval_at}: maxval {maxval} unsupported, only 255")
    if pos >= len(data) or data[pos:pos + 1] not in _WS:
        raise FormatError(f"offset {pos}: missing whitespace after maxval")
    pos += 1
    need = width * height
    have = len(data) - pos
    if have < need:
        raise FormatError(f"offset {pos}: truncated payload, need {need} bytes, have {have}")
    return np.frombuffer(data, dtype=np.uint8, count=need, offset=pos).reshape(height, width).copy()


def write_pgm_array(pixels, path) -> Path:
    path = Path(path)
    path.write_bytes(encode_pgm(pixels))
    return path


def read_pgm_array(path) -> np.ndarray:
    try:
        return decode_pgm(Path(path).read_bytes())
    except FormatError as exc:
        raise FormatError(f"{os.fspath(path)}: {exc}") from None


def write_pgm(img: MultiviewImage, path) -> Path:
    return write_pgm_array(img.pixels, path)


def read_pgm(path, cfg: DisplayConfig | None = None) -> MultiviewImage:
    pixels = read_pgm_array(path)
    try:
        return MultiviewImage(pixels, cfg or DisplayConfig())
    except FormatError as exc:
        raise FormatError(f"{os.fspath(path)}: {exc}") from None
