"""File formats: CSV scalar/vector fields, JSON patches and snapshots, OBJ meshes.

All writers are deterministic (fixed 17-significant-digit floats, sorted
JSON keys) and atomic (write to a temp file in the target directory, then
rename), so identical inputs produce byte-identical outputs and readers
never observe partial files.

Scalar field CSV layout:

    nx,ny,hx,hy,x0,y0
    <the six values>
    row 0 of the field (ny comma-separated values)
    ...
    row nx-1

Vector field CSV appends one line per grid point in row-major order after
the same two header lines.  OBJ meshes list "v" and "vn" lines in grid
row-major order and split each grid quad into two triangles.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Iterable

import numpy as np

from .errors import ConfigError
from .grids import Grid

__all__ = [
    "atomic_write_text",
    "fmt",
    "write_scalar_csv",
    "read_scalar_csv",
    "write_vector_csv",
    "read_vector_csv",
    "write_patch_json",
    "read_patch_json",
    "write_connection_json",
    "write_frames_json",
    "write_obj",
    "json_dumps",
]

_HEADER = "nx,ny,hx,hy,x0,y0"


def fmt(x: float) -> str:
    """Fixed 17-significant-digit decimal rendering (round-trips doubles)."""
    return f"{float(x):.17g}"


def atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", suffix="~")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1)


def _grid_header_lines(grid: Grid) -> list[str]:
    vals = grid.header_values()
    return [_HEADER, ",".join([str(grid.nx), str(grid.ny)] + [fmt(v) for v in vals[2:]])]


def _parse_grid_header(lines: list[str]) -> Grid:
    if not lines or lines[0].strip() != _HEADER:
        raise ConfigError(f"expected header line {_HEADER!r}", field="csv.header")
    parts = lines[1].strip().split(",")
    if len(parts) != 6:
        raise ConfigError("expected 6 grid values on line 2", field="csv.grid")
    nx, ny = int(parts[0]), int(parts[1])
    hx, hy, x0, y0 = (float(p) for p in parts[2:])
    return Grid(nx, ny, hx, hy, x0, y0)


def write_scalar_csv(path: str, grid: Grid, field: np.ndarray) -> None:
    field = np.asarray(field, dtype=float)
    if field.shape != grid.shape:
        raise ValueError(f"field shape {field.shape} does not match grid {grid.shape}")
    lines = _grid_header_lines(grid)
    for i in range(grid.nx):
        lines.append(",".join(fmt(v) for v in field[i]))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_scalar_csv(path: str) -> tuple[Grid, np.ndarray]:
    with open(path) as handle:
        lines = handle.read().splitlines()
    grid = _parse_grid_header(lines)
    rows = lines[2 : 2 + grid.nx]
    if len(rows) != grid.nx:
        raise ConfigError(f"expected {grid.nx} data rows, found {len(rows)}", field="csv.rows")
    field = np.array([[float(v) for v in row.split(",")] for row in rows])
    if field.shape != grid.shape:
        raise ConfigError(f"row width mismatch: {field.shape} vs {grid.shape}", field="csv.rows")
    return grid, field


def write_vector_csv(path: str, grid: Grid, field: np.ndarray) -> None:
    """Vector field of shape (nx, ny, d): one point per line, row-major."""
    field = np.asarray(field, dtype=float)
    if field.shape[:2] != grid.shape or field.ndim != 3:
        raise ValueError(f"field shape {field.shape} does not match grid {grid.shape}")
    lines = _grid_header_lines(grid)
    flat = field.reshape(-1, field.shape[-1])
    for row in flat:
        lines.append(",".join(fmt(v) for v in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_vector_csv(path: str) -> tuple[Grid, np.ndarray]:
    with open(path) as handle:
        lines = handle.read().splitlines()
    grid = _parse_grid_header(lines)
    rows = [r for r in lines[2:] if r.strip()]
    if len(rows) != grid.nx * grid.ny:
        raise ConfigError(
            f"expected {grid.nx * grid.ny} point rows, found {len(rows)}", field="csv.rows"
        )
    flat = np.array([[float(v) for v in row.split(",")] for row in rows])
    return grid, flat.reshape(grid.nx, grid.ny, -1)


def _grid_dict(grid: Grid) -> dict:
    return {
        "nx": grid.nx,
        "ny": grid.ny,
        "hx": grid.hx,
        "hy": grid.hy,
        "x0": grid.x0,
        "y0": grid.y0,
    }


def grid_from_dict(d: dict) -> Grid:
    try:
        return Grid(
            int(d["nx"]),
            int(d["ny"]),
            float(d["hx"]),
            float(d["hy"]),
            float(d.get("x0", 0.0)),
            float(d.get("y0", 0.0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc), field="grid") from exc


def write_patch_json(path: str, patch) -> None:
    doc = {
        "grid": _grid_dict(patch.grid),
        "u": patch.u.tolist(),
        "k1": patch.k1.tolist(),
        "k2": patch.k2.tolist(),
    }
    atomic_write_text(path, json_dumps(doc) + "\n")


def read_patch_json(path: str):
    from .patches import IsothermicPatch

    with open(path) as handle:
        doc = json.load(handle)
    grid = grid_from_dict(doc.get("grid", {}))
    try:
        return IsothermicPatch(
            grid,
            np.array(doc["u"], dtype=float),
            np.array(doc["k1"], dtype=float),
            np.array(doc["k2"], dtype=float),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc), field="patch") from exc


def write_connection_json(path: str, form) -> None:
    """Debug snapshot of a connection form (not a stable interchange format)."""
    doc = {
        "grid": _grid_dict(form.grid),
        "lambda": form.lam,
        "Ax": form.Ax.reshape(form.grid.nx, form.grid.ny, 25).tolist(),
        "Ay": form.Ay.reshape(form.grid.nx, form.grid.ny, 25).tolist(),
    }
    atomic_write_text(path, json_dumps(doc) + "\n")


def write_frames_json(path: str, frames) -> None:
    doc = {
        "grid": _grid_dict(frames.grid),
        "base_frame": frames.base_frame.reshape(25).tolist(),
        "F": frames.F.reshape(frames.grid.nx, frames.grid.ny, 25).tolist(),
    }
    atomic_write_text(path, json_dumps(doc) + "\n")


def write_obj(path: str, points: np.ndarray, normals: np.ndarray | None = None) -> None:
    """Triangulated grid mesh: vertices (and normals) in row-major order."""
    points = np.asarray(points, dtype=float)
    nx, ny = points.shape[:2]
    lines = []
    flat = points.reshape(-1, 3)
    for p in flat:
        lines.append(f"v {fmt(p[0])} {fmt(p[1])} {fmt(p[2])}")
    with_normals = normals is not None
    if with_normals:
        for nvec in np.asarray(normals, dtype=float).reshape(-1, 3):
            lines.append(f"vn {fmt(nvec[0])} {fmt(nvec[1])} {fmt(nvec[2])}")

    def vid(i: int, j: int) -> int:
        return i * ny + j + 1

    for i in range(nx - 1):
        for j in range(ny - 1):
            a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
            if with_normals:
                lines.append(f"f {a}//{a} {b}//{b} {c}//{c}")
                lines.append(f"f {a}//{a} {c}//{c} {d}//{d}")
            else:
                lines.append(f"f {a} {b} {c}")
                lines.append(f"f {a} {c} {d}")
    atomic_write_text(path, "\n".join(lines) + "\n")
