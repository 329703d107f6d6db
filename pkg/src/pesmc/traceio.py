"""CSV serialization of traces with a JSON metadata sidecar.

For ``out.csv`` the writer produces

* ``out.csv``             t,s,omega,d,norm_u_l2,norm_v_l2,norm_u_h1
* ``out.remainder.csv``   t,r                  (closed-loop runs only)
* ``out.snap00000.csv``   x,u,v                (one per snapshot)
* ``out.meta.json``       resolved config, package version, companion file names
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from pesmc import __version__
from pesmc.core import Field, build_grid
from pesmc.trace import SimTrace

HEADER = ("t", "s", "omega", "d", "norm_u_l2", "norm_v_l2", "norm_u_h1")


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def companion(path, suffix: str) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.{suffix}")


def _write_rows(path: Path, header, columns):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_trace(trace: SimTrace, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _write_rows(path, HEADER, [trace.times, trace.s, trace.omega, trace.d, trace.norm_u_l2, trace.norm_v_l2, trace.norm_u_h1])
    meta = {"version": __version__, "trace": path.name, "remainder": None, "snapshots": []}
    if trace.remainder is not None:
        rpath = companion(path, "remainder.csv")
        _write_rows(rpath, ("t", "r"), [trace.times, trace.remainder])
        meta["remainder"] = rpath.name
    for i, (t, u, v) in enumerate(trace.snapshots):
        spath = companion(path, f"snap{i:05d}.csv")
        _write_rows(spath, ("x", "u", "v"), [u.grid.nodes, u.values, v.values])
        meta["snapshots"].append({"t": float(t), "file": spath.name})
    cfg = trace.config_echo
    meta["config"] = cfg.to_dict() if cfg is not None else None
    with open(companion(path, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _read_columns(path: Path, header) -> list[np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got = tuple(next(reader))
        if got != tuple(header):
            raise ValueError(f"{path}: unexpected header {','.join(got)}")
        rows = [[float(x) for x in row] for row in reader if row]
    if not rows:
        return [np.zeros(0) for _ in header]
    return list(np.array(rows).T)


def read_trace(path) -> SimTrace:
    """Inverse of write_trace; picks up the sidecar and companions when present."""
    from pesmc.config import config_from_dict

    path = Path(path)
    cols = _read_columns(path, HEADER)
    meta_path = companion(path, "meta.json")
    remainder = None
    snapshots = []
    cfg = None
    if meta_path.exists():
        meta = json.loads(meta_path.read_text())
        if meta.get("config") is not None:
            cfg = config_from_dict(meta["config"])
        if meta.get("remainder"):
            _, remainder = _read_columns(path.with_name(meta["remainder"]), ("t", "r"))
        for snap in meta.get("snapshots", []):
            x, u, v = _read_columns(path.with_name(snap["file"]), ("x", "u", "v"))
            grid = build_grid(len(x) - 1)
            snapshots.append((snap["t"], Field(grid, u), Field(grid, v)))
    return SimTrace(*cols, remainder=remainder, snapshots=snapshots, config_echo=cfg)
