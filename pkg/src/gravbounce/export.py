"""Deterministic CSV export with a self-describing metadata block.

File layout::

    # gravbounce export
    # meta.version = 0.1.0
    # meta.<derived quantity> = ...
    # <config key> = <value>          (every RunConfig field, canonical units)
    col_a,col_b,...
    <rows, 17 significant digits>

Identical inputs give byte-identical files: no timestamps or host data are
written, and numbers are printed with a fixed format.
"""
from __future__ import annotations

import io
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .airy import get_backend
from .config import EXPORT_MARKER, RunConfig, emit_config


@dataclass(frozen=True)
class Table:
    """Column names, a 2-D array of rows and derived metadata."""

    columns: tuple
    data: np.ndarray = field(repr=False)
    metadata: tuple = ()

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(self.columns):
            raise ValueError("data must be 2-D with one column per name")


def _fmt(x):
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".17g")


def render(table: Table, cfg: RunConfig) -> str:
    """The full file content as a string."""
    buf = io.StringIO()
    buf.write(EXPORT_MARKER + "\n")
    buf.write(f"# meta.version = {__version__}\n")
    buf.write(f"# meta.airy_backend = {get_backend()}\n")
    for key, value in table.metadata:
        if isinstance(value, float):
            value = _fmt(value)
        buf.write(f"# meta.{key} = {value}\n")
    for line in emit_config(cfg):
        buf.write(f"# {line}\n")
    buf.write(",".join(table.columns) + "\n")
    data = np.asarray(table.data, dtype=float)
    for row in data:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def export_grid(table: Table, cfg: RunConfig, path=None):
    """Write ``table`` to ``path`` (``cfg.output`` if omitted; ``-`` is stdout).

    Raises
    ------
    OSError
        If the destination cannot be written.
    """
    path = cfg.output if path is None else path
    text = render(table, cfg)
    if path in (None, "-"):
        sys.stdout.write(text)
        return None
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def read_table(path):
    """Read an export back: ``(columns, data, metadata_lines)``."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    meta = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    columns = tuple(body[0].split(","))
    data = np.array([[float(v) for v in ln.split(",")] for ln in body[1:]], dtype=float)
    return columns, data.reshape(-1, len(columns)), meta
