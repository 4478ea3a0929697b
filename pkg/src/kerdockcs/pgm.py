"""Reading and writing grayscale PGM images (P2 ASCII and P5 binary)."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from ._validation import log2_length

__all__ = ["PGMError", "load_pgm", "read_pgm", "write_pgm"]


class PGMError(ValueError):
    """Malformed or unsupported PGM file."""


_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def _header_tokens(data: bytes, count: int):
    pos, out = 0, []
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise PGMError("truncated PGM header")
        out.append(m.group(1))
        pos = m.end()
    return out, pos


def read_pgm(path) -> tuple[np.ndarray, int]:
    """Raw integer pixels and ``maxval`` of a P2/P5 file, any size."""
    data = Path(path).read_bytes()
    tokens, pos = _header_tokens(data, 4)
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise PGMError(f"unsupported magic number {magic!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PGMError("non-integer PGM header field") from None
    if width < 1 or height < 1 or not 0 < maxval <= 65535:
        raise PGMError(f"bad PGM header: {width}x{height}, maxval {maxval}")

    n = width * height
    if magic == b"P5":
        pos += 1  # single whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        if len(data) - pos < n * dtype.itemsize:
            raise PGMError("truncated P5 pixel data")
        pixels = np.frombuffer(data, dtype=dtype, count=n, offset=pos).astype(np.int64)
    else:
        body = re.sub(rb"#[^\n]*", b"", data[pos:]).split()
        if len(body) < n:
            raise PGMError("truncated P2 pixel data")
        pixels = np.array([int(t) for t in body[:n]], dtype=np.int64)
    if pixels.max(initial=0) > maxval:
        raise PGMError("pixel value exceeds maxval")
    return pixels.reshape(height, width), maxval


def load_pgm(path) -> np.ndarray:
    """Square power-of-two PGM image scaled to ``[0, 1]``."""
    pixels, maxval = read_pgm(path)
    h, w = pixels.shape
    if h != w:
        raise PGMError(f"image must be square, got {w}x{h}")
    try:
        log2_length(h)
    except ValueError:
        raise PGMError(f"image side must be a power of two, got {h}") from None
    return pixels / maxval


def write_pgm(image, path, maxval: int = 255, binary: bool = True) -> None:
    """Write an image with values in ``[0, 1]``; out-of-range values are clamped."""
    if not 0 < maxval <= 65535:
        raise ValueError("maxval must be in 1..65535")
    img = np.asarray(image, dtype=float)
    if img.ndim != 2:
        raise ValueError("expected a 2D image")
    pixels = np.rint(np.clip(img, 0.0, 1.0) * maxval).astype(np.int64)
    h, w = pixels.shape
    magic = "P5" if binary else "P2"
    header = f"{magic}\n{w} {h}\n{maxval}\n".encode("ascii")
    if binary:
        dtype = ">u2" if maxval > 255 else "u1"
        body = pixels.astype(dtype).tobytes()
    else:
        body = "\n".join(" ".join(map(str, row)) for row in pixels).encode("ascii") + b"\n"
    Path(path).write_bytes(header + body)
