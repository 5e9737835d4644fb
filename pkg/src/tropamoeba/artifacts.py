"""Deterministic file outputs: CSV with a header row, sorted JSON, static SVG."""

from __future__ import annotations

import csv
import json
import math
import os
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

FLOAT_FMT = "%.12g"


def fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        out = FLOAT_FMT % f
        return "0" if out == "-0" else out
    return str(v)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)  # RFC-4180 style: CRLF, minimal quoting
        w.writerow(header)
        for r in rows:
            w.writerow([fmt_value(v) for v in r])
    return path


def write_points_csv(path, points: np.ndarray, names: Sequence[str] | None = None) -> Path:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    n = pts.shape[1] if pts.size else (len(names) if names else 0)
    names = list(names) if names else [f"u{i + 1}" for i in range(n)]
    rows = sorted(tuple(fmt_value(v) for v in p) for p in pts) if pts.size else []
    return write_csv(path, names, rows)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            return fmt_value(f)
        return float(FLOAT_FMT % f)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_json(path, data) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(data), fh, sort_keys=True, indent=2, ensure_ascii=False)
        fh.write("\n")
    return path


def default_out_dir() -> Path:
    return Path(os.environ.get("TROPAMOEBA_OUT", "tropamoeba_out"))


# --- SVG -------------------------------------------------------------------


def _clip_cell_2d(cell, box: np.ndarray):
    """Segment (or point) of a cell of dimension <= 1 in the plane, clipped to ``box``."""
    from .exact_lp import nullspace

    w = np.array([float(v) for v in cell.witness])
    eqs = [[float(v) for v in c] for c, _ in cell.equalities]
    if cell.dim() == 0:
        return [w, w] if ((w >= box[:, 0]) & (w <= box[:, 1])).all() else None
    if cell.dim() != 1:
        return None
    d = np.array([float(v) for v in nullspace([list(c) for c, _ in cell.equalities], 2)[0]]) if eqs else None
    if d is None:
        return None
    lo, hi = -math.inf, math.inf
    forms = [(np.array([float(v) for v in c]), float(k)) for c, k in cell.inequalities]
    for j in range(2):
        e = np.zeros(2)
        e[j] = 1.0
        forms.append((e, -box[j, 0]))
        forms.append((-e, box[j, 1]))
    for c, k in forms:
        cd = float(c @ d)
        val = float(c @ w + k)
        if abs(cd) < 1e-15:
            if val < -1e-12:
                return None
            continue
        t = -val / cd
        if cd > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    if lo > hi:
        return None
    return [w + lo * d, w + hi * d]


def plot_svg(path, points: np.ndarray, box, complex_=None, title: str = "", labels=("u1", "u2")) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "tropamoeba"
    matplotlib.rcParams["svg.fonttype"] = "none"
    B = np.asarray(box, dtype=float)
    fig, ax = plt.subplots(figsize=(5, 5))
    pts = np.atleast_2d(points)
    if pts.size:
        ax.scatter(pts[:, 0], pts[:, 1], s=0.5, c="tab:blue", linewidths=0, rasterized=False)
    if complex_ is not None:
        for cell in complex_.cells:
            seg = _clip_cell_2d(cell, B)
            if seg is not None:
                seg = np.array(seg)
                ax.plot(seg[:, 0], seg[:, 1], color="tab:red", lw=1.2)
    ax.set_xlim(*B[0])
    ax.set_ylim(*B[1])
    ax.set_xlabel(labels[0])
    ax.set_ylabel(labels[1])
    ax.set_aspect("equal")
    if title:
        ax.set_title(title)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
