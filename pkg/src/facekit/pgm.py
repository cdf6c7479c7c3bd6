"""PGM (P5, 8-bit) image I/O, plus optional PNG reading via Pillow."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .image import as_binary, as_image, iround

__all__ = ["read_pgm", "write_pgm", "write_binary_pgm", "read_image"]

_TOKEN = re.compile(rb"(?:#[^\n]*\n|\s)*(\S+)")


def _tokens(data: bytes, count: int) -> tuple[list[bytes], int]:
    """First `count` whitespace/comment-delimited header tokens and end offset."""
    out = []
    pos = 0
    for _ in range(count):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise ValueError("truncated PGM header")
        out.append(m.group(1))
        pos = m.end()
    return out, pos


def read_pgm(path) -> np.ndarray:
    """Read an 8-bit binary PGM (P5) as a float64 image."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), pos = _tokens(data, 4)
    if magic != b"P5":
        raise ValueError(f"not a P5 PGM file: {path}")
    w, h, maxval = int(w), int(h), int(maxval)
    if maxval > 255:
        raise ValueError(f"only 8-bit PGM supported, maxval={maxval}")
    pos += 1  # single whitespace byte after maxval
    px = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=pos)
    if px.size != w * h:
        raise ValueError(f"truncated PGM data in {path}")
    return px.reshape(h, w).astype(np.float64)


def write_pgm(path, img) -> None:
    """Write an integer-mode image as binary PGM (P5, maxval 255)."""
    img = as_image(img)
    px = np.clip(iround(img), 0, 255).astype(np.uint8)
    h, w = px.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(px.tobytes())


def write_binary_pgm(path, bw) -> None:
    """Serialize a binary image as PGM with values {0, 255}."""
    write_pgm(path, as_binary(bw).astype(np.float64) * 255.0)


def read_image(path) -> np.ndarray:
    """Read PGM, or PNG when Pillow is available."""
    p = Path(path)
    if p.suffix.lower() in (".pgm", ""):
        return read_pgm(p)
    if p.suffix.lower() == ".png":
        try:
            from PIL import Image
        except ImportError as e:  # pragma: no cover
            raise ValueError("PNG support requires Pillow") from e
        return np.asarray(Image.open(p).convert("L"), dtype=np.float64)
    raise ValueError(f"unsupported image format: {p.suffix}")
