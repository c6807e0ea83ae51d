"""Shared CSV loading, schema validation, and pinned plot style."""

from __future__ import annotations

import sys

import matplotlib
import numpy as np

matplotlib.use("Agg")

SCHEMA_PREFIX = "halfcavity"
SUPPORTED_VERSION = 1

# pinned style so identical CSVs render to identical bytes
STYLE = {
    "figure.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "halfcavity",
}


class SchemaError(RuntimeError):
    pass


def load_csv(path: str, kind: str) -> tuple[list[str], np.ndarray]:
    """Read one CLI CSV, checking its schema line and column header.

    Returns (column names, data array); raises SchemaError on a missing or
    mismatched schema tag, wrong kind, or empty data section.
    """
    with open(path) as fh:
        schema_line = fh.readline().strip()
        header_line = fh.readline().strip()
        try:
            data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise SchemaError(f"{path}: unreadable data section ({exc})") from exc
    if not schema_line.startswith("# schema="):
        raise SchemaError(f"{path}: missing schema line")
    tag = schema_line.split("=", 1)[1]
    parts = tag.split("/")
    if len(parts) != 3 or parts[0] != SCHEMA_PREFIX:
        raise SchemaError(f"{path}: unrecognized schema tag {tag!r}")
    if parts[1] != kind:
        raise SchemaError(f"{path}: expected a {kind!r} file, found {parts[1]!r}")
    if int(parts[2]) != SUPPORTED_VERSION:
        raise SchemaError(
            f"{path}: schema version {parts[2]} unsupported "
            f"(this tool reads version {SUPPORTED_VERSION})"
        )
    columns = header_line.split(",")
    if data.size == 0:
        raise SchemaError(f"{path}: no data rows")
    if data.shape[1] != len(columns):
        raise SchemaError(
            f"{path}: {data.shape[1]} columns but header names {len(columns)}"
        )
    return columns, data


def column(columns: list[str], data: np.ndarray, name: str) -> np.ndarray:
    if name not in columns:
        raise SchemaError(f"missing column {name!r} (have {columns})")
    return data[:, columns.index(name)]


def save(fig, out: str, dpi: float) -> None:
    # strip the writer's software tag so identical inputs give identical bytes
    fig.savefig(out, dpi=dpi, metadata={"Software": None})


def run_script(render, argv=None) -> int:
    """Shared CLI wrapper: render(args) inside pinned style, loud failures."""
    import matplotlib.pyplot as plt

    try:
        with matplotlib.rc_context(STYLE):
            render(argv)
            plt.close("all")
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0
