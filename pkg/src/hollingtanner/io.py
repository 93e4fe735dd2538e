"""Config parsing and the on-disk formats shared by the command-line tools."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import HollingTannerError


class ConfigError(HollingTannerError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


@dataclass
class ConfigEntry:
    value: str
    line: int


def fmt(x) -> str:
    """Float formatting used in every output file (17 significant digits)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, (tuple, list)):
        return ",".join(fmt(v) for v in x)
    return str(x)


def parse_config_text(text: str) -> dict[str, ConfigEntry]:
    """Flat ``key=value`` lines; ``#`` starts a comment; dotted keys name blocks."""
    out: dict[str, ConfigEntry] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError("empty key", lineno)
        if key in out:
            raise ConfigError(f"duplicate key {key!r} (first set on line {out[key].line})", lineno)
        out[key] = ConfigEntry(value, lineno)
    return out


def parse_config(path) -> dict[str, ConfigEntry]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def manifest_lines(manifest: Mapping[str, object]) -> list[str]:
    return [f"{k}={fmt(v)}" for k, v in manifest.items()]


def write_manifest(path, manifest: Mapping[str, object]):
    Path(path).write_text("".join(line + "\n" for line in manifest_lines(manifest)))


def read_key_values(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.lstrip("# ").strip()
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def _header(fh, manifest: Mapping[str, object]):
    for line in manifest_lines(manifest):
        fh.write(f"# {line}\n")


# ---------------------------------------------------------------- 1D


def write_snapshot_csv(path, x, u, v, manifest: Mapping[str, object]):
    with open(path, "w", newline="") as fh:
        _header(fh, manifest)
        fh.write("x,u,v\n")
        for row in zip(x, u, v):
            fh.write(",".join(fmt(float(val)) for val in row) + "\n")


def read_snapshot_csv(path) -> tuple[dict[str, str], np.ndarray, np.ndarray, np.ndarray]:
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            if line.startswith("#"):
                k, _, val = line[1:].strip().partition("=")
                meta[k] = val
            elif line.startswith("x,"):
                continue
            elif line.strip():
                rows.append([float(s) for s in line.split(",")])
    arr = np.array(rows)
    return meta, arr[:, 0], arr[:, 1], arr[:, 2]


def write_spacetime_csv(path, times, x, data, manifest: Mapping[str, object]):
    """Rows are times, columns grid points; the first column holds t."""
    with open(path, "w", newline="") as fh:
        _header(fh, manifest)
        fh.write("t," + ",".join(fmt(float(xi)) for xi in x) + "\n")
        for t, row in zip(times, data):
            fh.write(fmt(float(t)) + "," + ",".join(fmt(float(val)) for val in row) + "\n")


def read_spacetime_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    with open(path) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    x = np.array([float(s) for s in lines[0].split(",")[1:]])
    body = np.array([[float(s) for s in line.split(",")] for line in lines[1:] if line.strip()])
    return body[:, 0], x, body[:, 1:]


# ---------------------------------------------------------------- 2D


def write_matrix(path, data: np.ndarray, spacing: float, time: float, manifest: Mapping[str, object]):
    """Header line "nx ny spacing time", then ny rows of nx numbers."""
    ny, nx = data.shape
    with open(path, "w") as fh:
        _header(fh, manifest)
        fh.write(f"{nx} {ny} {fmt(float(spacing))} {fmt(float(time))}\n")
        for row in data:
            fh.write(" ".join(fmt(float(val)) for val in row) + "\n")


def read_matrix(path) -> tuple[np.ndarray, float, float, dict[str, str]]:
    meta = {}
    with open(path) as fh:
        lines = []
        for line in fh:
            if line.startswith("#"):
                k, _, val = line[1:].strip().partition("=")
                meta[k] = val
            elif line.strip():
                lines.append(line)
    nx, ny, spacing, time = lines[0].split()
    data = np.array([[float(s) for s in line.split()] for line in lines[1:]])
    if data.shape != (int(ny), int(nx)):
        raise ValueError(f"matrix body shape {data.shape} does not match header {ny}x{nx}")
    return data, float(spacing), float(time), meta


def to_gray(data: np.ndarray, lo: float | None = None, hi: float | None = None) -> tuple[np.ndarray, float, float]:
    lo = float(data.min()) if lo is None else lo
    hi = float(data.max()) if hi is None else hi
    if hi > lo:
        scaled = np.rint((data - lo) / (hi - lo) * 255.0)
    else:
        scaled = np.zeros_like(data)
    return np.clip(scaled, 0, 255).astype(np.uint8), lo, hi


def write_pgm(path, pixels: np.ndarray, comments: Iterable[str] = ()):
    """Binary 8-bit PGM; row 0 of ``pixels`` is written first."""
    ny, nx = pixels.shape
    with open(path, "wb") as fh:
        fh.write(b"P5\n")
        for c in comments:
            fh.write(f"# {c}\n".encode())
        fh.write(f"{nx} {ny}\n255\n".encode())
        fh.write(np.ascontiguousarray(pixels, dtype=np.uint8).tobytes())


def read_pgm(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    tokens, pos = [], 0
    while len(tokens) < 4:
        while raw[pos : pos + 1].isspace():
            pos += 1
        if raw[pos : pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        end = pos
        while not raw[end : end + 1].isspace():
            end += 1
        tokens.append(raw[pos:end].decode())
        pos = end
    pos += 1
    nx, ny = int(tokens[1]), int(tokens[2])
    return np.frombuffer(raw[pos : pos + nx * ny], dtype=np.uint8).reshape(ny, nx)


def write_field_raster(path, data: np.ndarray, manifest: Mapping[str, object]):
    pixels, lo, hi = to_gray(data)
    write_pgm(path, pixels, [f"field_min={fmt(lo)}", f"field_max={fmt(hi)}"] + manifest_lines(manifest))


def write_rows_csv(path, header: list[str], rows: Iterable[Iterable], manifest: Mapping[str, object]):
    with open(path, "w", newline="") as fh:
        _header(fh, manifest)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])
