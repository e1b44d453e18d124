"""CSV, SVG and manifest writers.

All files are written to a temporary sibling and moved into place with
:func:`os.replace`, so concurrent sweep members never expose partial files.
CSV files start with ``#`` comment lines holding the package version and
the resolved configuration; numbers use the shortest round-trip repr, so
identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import __version__
from .config import ScenarioConfig, format_config

__all__ = [
    "atomic_write_text",
    "csv_text",
    "csv_body",
    "write_csv",
    "write_svg",
    "write_manifest",
    "format_number",
]


def atomic_write_text(path, text: str) -> Path:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def format_number(v) -> str:
    """Deterministic text for a table cell."""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return "nan"
        return repr(f + 0.0)
    return str(v)


def csv_text(columns: Sequence[str], rows: Iterable[Sequence], header_lines: Sequence[str] = ()) -> str:
    """CSV text with ``#``-prefixed header lines and LF line endings."""
    buf = io.StringIO()
    for line in header_lines:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def csv_body(text: str) -> str:
    """The part of a CSV file after its ``#`` header lines."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def metadata_lines(cfg: ScenarioConfig, extra: Sequence[str] = ()) -> List[str]:
    return [f"agingmetric {__version__}", f"process: {cfg.process}", *extra, "resolved config:"] + [
        f"  {line}" for line in format_config(cfg)
    ]


def write_csv(path, columns, rows, cfg: ScenarioConfig, extra_header: Sequence[str] = ()) -> Path:
    """Write a table with the version and resolved config in its header."""
    return atomic_write_text(path, csv_text(columns, rows, metadata_lines(cfg, extra_header)))


def write_svg(
    path,
    series,
    xlabel: str,
    ylabel: str,
    title: str,
    xscale: str = "linear",
    yscale: str = "linear",
) -> Path:
    """One static line chart per file.

    ``series`` is a sequence of objects with ``label``, ``x`` and ``y``.
    The SVG carries no timestamp and uses a fixed id salt.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "agingmetric", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.2))
        for s in series:
            x = np.asarray(s.x, dtype=float)
            y = np.asarray(s.y, dtype=float)
            if xscale == "log":
                keep = x > 0
                x, y = x[keep], y[keep]
            ax.plot(x, y, label=s.label, marker="o" if x.size < 30 else None)
        ax.set_xscale(xscale)
        ax.set_yscale(yscale)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.grid(True, alpha=0.3)
        if len(series) > 1:
            ax.legend(fontsize="small")
        fig.tight_layout()
        buf = io.StringIO()
        fig.savefig(buf, format="svg", metadata={"Date": None})
        plt.close(fig)
    return atomic_write_text(path, buf.getvalue())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def write_manifest(path, payload: Dict) -> Path:
    """JSON manifest (sorted keys, non-finite floats as strings)."""
    return atomic_write_text(path, json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
