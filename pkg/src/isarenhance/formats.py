"""File formats: scene text files, CF64 complex matrices, 16-bit PGM, CSV.

CF64 layout (all little-endian)::

    b"CF64" | uint32 version (=1) | uint32 rows | uint32 cols | rows*cols x (float64 re, float64 im)
"""

import json
import math
import struct

import numpy as np

from .errors import DomainError, FormatError
from .radar_sim import Scatterer

CF64_MAGIC = b"CF64"
CF64_VERSION = 1
_CF64_HEADER = struct.Struct("<4sIII")

PGM_MAXVAL = 65535
DB_FLOOR = -60.0


# -- scene files -------------------------------------------------------------

def parse_scene(text: str) -> list:
    """Parse ``range_m,cross_range_m,reflectivity`` lines; ``#`` lines and blank lines are skipped."""
    scene = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != 3:
            raise FormatError(f"scene line {lineno}: expected 3 comma-separated fields, got {len(fields)}: {raw!r}")
        try:
            r, x, a = (float(f) for f in fields)
        except ValueError:
            raise FormatError(f"scene line {lineno}: non-numeric field in {raw!r}") from None
        if not all(math.isfinite(v) for v in (r, x, a)):
            raise FormatError(f"scene line {lineno}: non-finite value in {raw!r}")
        if a < 0:
            raise DomainError(f"scene line {lineno}: reflectivity must be >= 0, got {a}")
        scene.append(Scatterer(r, x, a))
    return scene


def read_scene(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_scene(fh.read())


def write_scene(path, scene) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# range_m,cross_range_m,reflectivity\n")
        for s in scene:
            fh.write(f"{s.range_m!r},{s.cross_range_m!r},{s.reflectivity!r}\n")


# -- CF64 --------------------------------------------------------------------

def write_cf64(path, matrix) -> None:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2:
        raise FormatError(f"CF64 holds 2-D matrices, got shape {m.shape}")
    with open(path, "wb") as fh:
        fh.write(_CF64_HEADER.pack(CF64_MAGIC, CF64_VERSION, *m.shape))
        fh.write(np.ascontiguousarray(m, dtype="<c16").tobytes())


def read_cf64(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _CF64_HEADER.size:
        raise FormatError(f"{path}: too short for a CF64 header ({len(data)} bytes)")
    magic, version, rows, cols = _CF64_HEADER.unpack_from(data)
    if magic != CF64_MAGIC:
        raise FormatError(f"{path}: bad magic, expected {CF64_MAGIC!r}, got {magic!r}")
    if version != CF64_VERSION:
        raise FormatError(f"{path}: unsupported CF64 version {version}, expected {CF64_VERSION}")
    expected = _CF64_HEADER.size + 16 * rows * cols
    if len(data) != expected:
        raise FormatError(f"{path}: expected {expected} bytes for {rows}x{cols}, got {len(data)}")
    return np.frombuffer(data, dtype="<c16", offset=_CF64_HEADER.size).reshape(rows, cols).astype(np.complex128)


def is_cf64(path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == CF64_MAGIC


# -- PGM ---------------------------------------------------------------------

def display_levels(img, db: bool = False) -> np.ndarray:
    """Min-max map a magnitude image onto 0..65535 (optionally in dB first)."""
    img = np.abs(np.asarray(img))
    if img.ndim == 3 and img.shape[2] == 1:
        img = img[:, :, 0]
    if db:
        peak = img.max()
        if peak > 0:
            with np.errstate(divide="ignore"):
                img = np.maximum(20.0 * np.log10(img / peak), DB_FLOOR)
        else:
            img = np.zeros_like(img)
    lo, hi = img.min(), img.max()
    scaled = (img - lo) / (hi - lo) if hi > lo else np.zeros_like(img)
    return np.round(scaled * PGM_MAXVAL).astype(np.uint16)


def write_pgm(path, levels) -> None:
    """Binary P5 PGM, maxval 65535, big-endian samples."""
    levels = np.asarray(levels)
    if levels.ndim != 2:
        raise FormatError(f"PGM images are 2-D, got shape {levels.shape}")
    h, w = levels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{PGM_MAXVAL}\n".encode("ascii"))
        fh.write(levels.astype(">u2").tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM and return values scaled to [0, 1]."""
    with open(path, "rb") as fh:
        data = fh.read()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FormatError(f"{path}: truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1
    if tokens[0] != b"P5":
        raise FormatError(f"{path}: bad magic, expected b'P5', got {tokens[0]!r}")
    try:
        w, h, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError(f"{path}: malformed PGM header") from None
    if not 0 < maxval <= 65535:
        raise FormatError(f"{path}: invalid maxval {maxval}")
    dtype = ">u2" if maxval > 255 else "u1"
    count = w * h
    body = data[pos:]
    if len(body) != count * np.dtype(dtype).itemsize:
        raise FormatError(f"{path}: expected {count} samples for {w}x{h}, got {len(body)} bytes")
    return np.frombuffer(body, dtype=dtype).reshape(h, w).astype(np.float64) / maxval


# -- CSV / sidecars ----------------------------------------------------------

def fmt(value) -> str:
    """17 significant digits, enough to round-trip any float64."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def read_csv(path):
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    header = lines[0].split(",")
    return header, [line.split(",") for line in lines[1:]]


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
