"""Full (theta1, theta2) grid sweeps with CSV persistence.

A sweep file is a CSV with header
``theta1,theta2,fidelity,variance,coherence,entanglement,beta,r2,p0,...``
(one row per cell, theta1-major) plus a JSON sidecar ``<file>.meta.json``
holding the run parameters and the schema version.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CellError, ParameterError, QPageRankError, SchemaError
from .google import classical_pagerank, google_matrix
from .graph import DirectedGraph
from .metrics import beta_fit, fidelity, variance
from .walk import PhaseSchedule, Scheme, evolve_batch

SCHEMA_VERSION = 1
METRIC_COLUMNS = ("fidelity", "variance", "coherence", "entanglement", "beta", "r2")


@dataclass(frozen=True)
class GridSpec:
    """``resolution`` equally spaced phases per axis on ``[0, 2*pi)``."""

    resolution: int = 32

    def __post_init__(self):
        if int(self.resolution) < 2:
            raise ParameterError(f"grid resolution must be >= 2, got {self.resolution}")
        object.__setattr__(self, "resolution", int(self.resolution))

    def values(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.resolution) / self.resolution

    def mirror_index(self, g: int) -> int:
        """Grid index of ``2*pi - theta_g`` (mod ``2*pi``)."""
        return (self.resolution - g) % self.resolution

    def __len__(self) -> int:
        return self.resolution * self.resolution


@dataclass(frozen=True)
class CellRecord:
    theta1: float
    theta2: float
    rank: tuple[float, ...]
    fidelity_vs_classical: float
    variance: float
    coherence: float
    entanglement: float
    beta: float
    r2: float

    def metric(self, name: str) -> float:
        if name == "fidelity":
            return self.fidelity_vs_classical
        return getattr(self, name)


@dataclass(frozen=True)
class SweepResult:
    n: int
    edge_hash: str
    scheme: Scheme
    grid: GridSpec
    T: int
    dt: int
    alpha: float
    cells: tuple[CellRecord, ...]
    theta1p: float = 0.0
    theta2p: float = 0.0
    schema_version: int = field(default=SCHEMA_VERSION)

    def ranks(self) -> np.ndarray:
        """All rank vectors stacked, shape ``(G*G, n)``, row-major."""
        return np.array([c.rank for c in self.cells], dtype=float)

    def metric_grid(self, name: str) -> np.ndarray:
        """``(G, G)`` array indexed ``[theta1 index, theta2 index]``."""
        g = self.grid.resolution
        return np.array([c.metric(name) for c in self.cells]).reshape(g, g)

    def cell(self, i1: int, i2: int) -> CellRecord:
        return self.cells[i1 * self.grid.resolution + i2]


def _row_task(args):
    """Evaluate one theta1 row of the grid; top-level so it can be pickled."""
    G, classical, scheme, thetas, i1, T, dt, theta1p, theta2p = args
    t1 = thetas[i1]
    schedules = [PhaseSchedule(scheme, t1, t2, theta1p, theta2p) for t2 in thetas]
    try:
        runs = evolve_batch(G, schedules, T, dt)
    except QPageRankError as exc:
        raise CellError(float(t1), None, exc) from exc
    cells = []
    for t2, run in zip(thetas, runs):
        try:
            fit = beta_fit(run.rank)
        except QPageRankError as exc:
            raise CellError(float(t1), float(t2), exc) from exc
        cells.append(
            CellRecord(
                theta1=float(t1),
                theta2=float(t2),
                rank=tuple(float(x) for x in run.rank),
                fidelity_vs_classical=fidelity(run.rank, classical),
                variance=variance(run.rank),
                coherence=run.coherence,
                entanglement=run.entanglement,
                beta=fit.beta,
                r2=fit.r2,
            )
        )
    return cells


def run_sweep(
    g: DirectedGraph,
    scheme=Scheme.STANDARD,
    grid: GridSpec | int = 32,
    T: int = 5000,
    dt: int = 500,
    alpha: float = 0.85,
    theta1p: float = 0.0,
    theta2p: float = 0.0,
    workers: int | None = 1,
    progress=None,
) -> SweepResult:
    """Evaluate every grid cell for ``scheme`` on graph ``g``.

    Work is split into theta1 rows; each row is one batched evolution, so
    the result is the same for any ``workers`` value. ``workers=None``
    means one process per CPU. ``progress`` is called with the number of
    finished rows.
    """
    scheme = Scheme.parse(scheme)
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    if dt < 1 or T < dt:
        raise ParameterError(f"need T >= dt >= 1, got T={T}, dt={dt}")
    G = google_matrix(g, alpha)
    classical = classical_pagerank(G)
    thetas = grid.values()
    tasks = [
        (G, classical, scheme, thetas, i1, T, dt, theta1p, theta2p)
        for i1 in range(grid.resolution)
    ]
    if workers is None:
        workers = os.cpu_count() or 1
    rows = []
    if workers <= 1:
        for task in tasks:
            rows.append(_row_task(task))
            if progress:
                progress(len(rows))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for row in pool.map(_row_task, tasks):
                rows.append(row)
                if progress:
                    progress(len(rows))
    cells = tuple(c for row in rows for c in row)
    return SweepResult(
        n=g.n,
        edge_hash=g.fingerprint(),
        scheme=scheme,
        grid=grid,
        T=int(T),
        dt=int(dt),
        alpha=float(alpha),
        cells=cells,
        theta1p=float(theta1p),
        theta2p=float(theta2p),
    )


# --- persistence -------------------------------------------------------------

def _fmt(x: float) -> str:
    return format(x, ".17g")


def meta_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".meta.json")


def sweep_header(n: int) -> list[str]:
    return ["theta1", "theta2", *METRIC_COLUMNS] + [f"p{i}" for i in range(n)]


def cell_row(c: CellRecord) -> list[str]:
    vals = [c.theta1, c.theta2, c.fidelity_vs_classical, c.variance,
            c.coherence, c.entanglement, c.beta, c.r2, *c.rank]
    return [_fmt(v) for v in vals]


def format_sweep_csv(r: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(sweep_header(r.n))
    for c in r.cells:
        w.writerow(cell_row(c))
    return buf.getvalue()


def sweep_metadata(r: SweepResult) -> dict:
    return {
        "schema_version": r.schema_version,
        "n": r.n,
        "edge_hash": r.edge_hash,
        "scheme": r.scheme.value,
        "grid": r.grid.resolution,
        "T": r.T,
        "dt": r.dt,
        "alpha": r.alpha,
        "theta1p": r.theta1p,
        "theta2p": r.theta2p,
        "cells": len(r.cells),
    }


def write_sweep(r: SweepResult, path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(format_sweep_csv(r))
    with open(meta_path(path), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(sweep_metadata(r), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_sweep(path) -> SweepResult:
    """Load a sweep written by :func:`write_sweep`.

    Any mismatch between the CSV and its sidecar (version, node count, row
    count, column layout) raises ``SchemaError``.
    """
    path = Path(path)
    mpath = meta_path(path)
    try:
        with open(mpath, encoding="utf-8") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        raise SchemaError(f"missing metadata file {mpath}") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"unreadable metadata {mpath}: {exc}") from None
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise SchemaError(
            f"schema version {meta.get('schema_version')!r}, expected {SCHEMA_VERSION}"
        )
    try:
        n = int(meta["n"])
        grid = GridSpec(int(meta["grid"]))
        scheme = Scheme.parse(meta["scheme"])
    except (KeyError, ValueError, QPageRankError) as exc:
        raise SchemaError(f"bad metadata: {exc}") from None

    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    if not text.endswith("\n"):
        raise SchemaError(f"{path}: file does not end with a newline (truncated?)")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != sweep_header(n):
        raise SchemaError(f"{path}: header does not match n={n}")
    body = rows[1:]
    if len(body) != len(grid):
        raise SchemaError(f"{path}: expected {len(grid)} cells, found {len(body)}")
    width = len(rows[0])
    cells = []
    for lineno, row in enumerate(body, start=2):
        if len(row) != width:
            raise SchemaError(f"{path}:{lineno}: expected {width} fields, got {len(row)}")
        try:
            vals = [float(x) for x in row]
        except ValueError:
            raise SchemaError(f"{path}:{lineno}: non-numeric field") from None
        cells.append(
            CellRecord(
                theta1=vals[0],
                theta2=vals[1],
                fidelity_vs_classical=vals[2],
                variance=vals[3],
                coherence=vals[4],
                entanglement=vals[5],
                beta=vals[6],
                r2=vals[7],
                rank=tuple(vals[8:]),
            )
        )
    thetas = grid.values()
    for idx, c in enumerate(cells):
        i1, i2 = divmod(idx, grid.resolution)
        if c.theta1 != float(thetas[i1]) or c.theta2 != float(thetas[i2]):
            raise SchemaError(f"{path}: cell {idx} is out of row-major grid order")
    try:
        return SweepResult(
            n=n,
            edge_hash=str(meta["edge_hash"]),
            scheme=scheme,
            grid=grid,
            T=int(meta["T"]),
            dt=int(meta["dt"]),
            alpha=float(meta["alpha"]),
            cells=tuple(cells),
            theta1p=float(meta.get("theta1p", 0.0)),
            theta2p=float(meta.get("theta2p", 0.0)),
        )
    except (KeyError, ValueError) as exc:
        raise SchemaError(f"bad metadata: {exc}") from None
