"""Command-line front end: ``qpagerank generate|rank|sweep|cluster|report``."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .cluster import (
    ClusterLabeling,
    cluster_distributions,
    read_labels,
    representative_cells,
    write_centroids,
    write_labels,
)
from .errors import QPageRankError
from .google import classical_pagerank, google_matrix
from .graph import dump_edge_list, generate_scale_free, read_edge_list, reverse, write_edge_list
from .metrics import beta_fit, fidelity, variance
from .sweep import METRIC_COLUMNS, GridSpec, read_sweep, run_sweep, sweep_header, write_sweep
from .walk import PhaseSchedule, Scheme, evolve

SUBCOMMANDS = ("generate", "rank", "sweep", "cluster", "report")


@dataclass
class RunConfig:
    subcommand: str
    graph: str | None = None
    out: str | None = None
    sweep: str | None = None
    labels: str | None = None
    centroids: str | None = None
    n: int = 32
    m: int = 2
    seed: int = 7
    scheme: str = "standard"
    theta1: float = 0.0
    theta2: float = 0.0
    theta1p: float = 0.0
    theta2p: float = 0.0
    alpha: float = 0.85
    T: int = 5000
    dt: int = 500
    grid: int = 32
    k: int = 7
    trackback: bool = False
    classical: bool = False
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        valid = sorted(
            {opt for a in self._actions for opt in a.option_strings if opt.startswith("--")}
        )
        if "unrecognized arguments" in message and valid:
            message += "\nvalid flags: " + " ".join(valid)
        super().error(message)


def _angle_pair(sub, name, help_):
    grp = sub.add_mutually_exclusive_group()
    grp.add_argument(f"--{name}", type=float, help=f"{help_} in radians")
    grp.add_argument(f"--{name}-pi", type=float, dest=f"{name}_pi",
                     help=f"{help_} as a multiple of pi")


def _walk_flags(sub):
    sub.add_argument("--graph", required=True, help="edge-list file")
    sub.add_argument("--trackback", action="store_true", help="reverse every edge first")
    sub.add_argument("--scheme", default="standard",
                     choices=[s.value for s in Scheme], help="evolution scheme")
    sub.add_argument("--alpha", type=float, default=0.85, help="damping factor")
    sub.add_argument("--T", "-T", type=int, default=5000, dest="T", help="number of steps")
    sub.add_argument("--dt", type=int, default=500, help="averaging window")
    _angle_pair(sub, "theta1p", "primed phase 1 (general-four only)")
    _angle_pair(sub, "theta2p", "primed phase 2 (general-four only)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qpagerank", description="Quantum PageRank with arbitrary phase rotations.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    g = subs.add_parser("generate", help="write a seeded scale-free edge list")
    g.add_argument("--n", type=int, default=32)
    g.add_argument("--m", type=int, default=2)
    g.add_argument("--seed", type=int, default=7)
    g.add_argument("--out", help="output file (default: stdout)")

    r = subs.add_parser("rank", help="rank nodes at one phase point")
    _walk_flags(r)
    _angle_pair(r, "theta1", "phase 1")
    _angle_pair(r, "theta2", "phase 2")
    r.add_argument("--classical", action="store_true", help="classical PageRank only")

    s = subs.add_parser("sweep", help="evaluate the full phase grid")
    _walk_flags(s)
    s.add_argument("--grid", type=int, default=32, help="points per axis")
    s.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    s.add_argument("--out", required=True, help="sweep CSV to write")

    c = subs.add_parser("cluster", help="k-means labelling of a sweep")
    c.add_argument("--sweep", required=True)
    c.add_argument("--k", type=int, default=7)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", required=True, help="label-map CSV")
    c.add_argument("--centroids", help="centroid CSV (default: <out>.centroids.csv)")

    rep = subs.add_parser("report", help="plot-ready tables from a sweep file")
    rep.add_argument("--sweep", required=True)
    rep.add_argument("--labels", help="label map; restricts the log-log table to representatives")
    rep.add_argument("--out", required=True, help="output directory")
    return p


def _subparsers(parser):
    return next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))


def _resolve_angle(ns, name):
    val = getattr(ns, name, None)
    mult = getattr(ns, f"{name}_pi", None)
    if mult is not None:
        return mult * math.pi
    return 0.0 if val is None else val


def parse_args(argv=None) -> RunConfig:
    """Parse and validate ``argv``; usage errors exit with status 2."""
    parser = build_parser()
    ns, extra = parser.parse_known_args(argv)
    if extra:
        sub = _subparsers(parser).choices[ns.subcommand]
        sub.error("unrecognized arguments: " + " ".join(extra))
    cfg = RunConfig(subcommand=ns.subcommand)
    for key in ("graph", "out", "sweep", "labels", "centroids", "n", "m", "seed", "scheme",
                "alpha", "T", "dt", "grid", "k", "trackback", "classical", "threads"):
        if hasattr(ns, key) and getattr(ns, key) is not None:
            setattr(cfg, key, getattr(ns, key))
    for name in ("theta1", "theta2", "theta1p", "theta2p"):
        setattr(cfg, name, _resolve_angle(ns, name))

    if not (0.0 <= cfg.alpha <= 1.0):
        parser.error(f"--alpha must lie in [0, 1], got {cfg.alpha}")
    if cfg.subcommand in ("rank", "sweep") and not (1 <= cfg.dt <= cfg.T):
        parser.error(f"need 1 <= --dt <= --T, got dt={cfg.dt}, T={cfg.T}")
    if cfg.subcommand == "generate" and (cfg.m < 1 or cfg.n < cfg.m + 1):
        parser.error(f"need --m >= 1 and --n >= m + 1, got n={cfg.n}, m={cfg.m}")
    if cfg.subcommand == "sweep":
        if cfg.grid < 2:
            parser.error(f"--grid must be >= 2, got {cfg.grid}")
        if cfg.threads < 1:
            parser.error(f"--threads must be >= 1, got {cfg.threads}")
    if cfg.subcommand == "cluster" and cfg.k < 1:
        parser.error(f"--k must be >= 1, got {cfg.k}")
    return cfg


def _header(cfg: RunConfig, out) -> None:
    fields = asdict(cfg)
    keep = {
        "generate": ("n", "m", "seed", "out"),
        "rank": ("graph", "trackback", "classical", "scheme", "theta1", "theta2",
                 "theta1p", "theta2p", "alpha", "T", "dt"),
        "sweep": ("graph", "trackback", "scheme", "theta1p", "theta2p", "alpha", "T", "dt",
                  "grid", "threads", "out"),
        "cluster": ("sweep", "k", "seed", "out", "centroids"),
        "report": ("sweep", "labels", "out"),
    }[cfg.subcommand]
    parts = " ".join(f"{key}={fields[key]!r}" for key in keep)
    print(f"# qpagerank {__version__} {cfg.subcommand} {parts}", file=out)


def _load_graph(cfg: RunConfig):
    g = read_edge_list(cfg.graph)
    return reverse(g) if cfg.trackback else g


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _cmd_generate(cfg: RunConfig, out) -> int:
    g = generate_scale_free(cfg.n, cfg.m, cfg.seed)
    note = f"scale-free n={cfg.n} m={cfg.m} seed={cfg.seed}"
    _header(cfg, out)
    if cfg.out:
        write_edge_list(g, cfg.out, note)
        print(f"wrote {len(g.edges)} edges to {cfg.out}", file=out)
    else:
        out.write(dump_edge_list(g, note))
    return 0


def _cmd_rank(cfg: RunConfig, out) -> int:
    _header(cfg, out)
    g = _load_graph(cfg)
    G = google_matrix(g, cfg.alpha)
    classical = classical_pagerank(G)
    if cfg.classical:
        fit = beta_fit(classical)
        print("distribution: " + " ".join(_fmt(x) for x in classical), file=out)
        print(f"sum: {_fmt(classical.sum())}", file=out)
        print(f"variance: {_fmt(variance(classical))}", file=out)
        print(f"beta: {_fmt(fit.beta)}", file=out)
        print(f"r2: {_fmt(fit.r2)}", file=out)
        print(",".join(f"p{i}" for i in range(g.n)), file=out)
        print(",".join(_fmt(x) for x in classical), file=out)
        return 0
    sched = PhaseSchedule(cfg.scheme, cfg.theta1, cfg.theta2, cfg.theta1p, cfg.theta2p)
    run = evolve(G, sched, cfg.T, cfg.dt)
    fit = beta_fit(run.rank)
    fid = fidelity(run.rank, classical)
    var = variance(run.rank)
    print("distribution: " + " ".join(_fmt(x) for x in run.rank), file=out)
    print(f"fidelity: {_fmt(fid)}", file=out)
    print(f"variance: {_fmt(var)}", file=out)
    print(f"coherence: {_fmt(run.coherence)}", file=out)
    print(f"entanglement: {_fmt(run.entanglement)}", file=out)
    print(f"beta: {_fmt(fit.beta)}", file=out)
    print(f"r2: {_fmt(fit.r2)}", file=out)
    print(",".join(sweep_header(g.n)), file=out)
    row = [sched.theta1, sched.theta2, fid, var, run.coherence, run.entanglement,
           fit.beta, fit.r2, *run.rank]
    print(",".join(_fmt(x) for x in row), file=out)
    return 0


def _cmd_sweep(cfg: RunConfig, out) -> int:
    _header(cfg, out)
    g = _load_graph(cfg)
    total = cfg.grid

    def progress(done):
        print(f"\rrows {done}/{total}", end="", file=sys.stderr, flush=True)

    res = run_sweep(g, cfg.scheme, GridSpec(cfg.grid), cfg.T, cfg.dt, cfg.alpha,
                    cfg.theta1p, cfg.theta2p, workers=cfg.threads, progress=progress)
    print(file=sys.stderr)
    write_sweep(res, cfg.out)
    print(f"wrote {len(res.cells)} cells to {cfg.out}", file=out)
    return 0


def _cmd_cluster(cfg: RunConfig, out) -> int:
    _header(cfg, out)
    res = read_sweep(cfg.sweep)
    lab = cluster_distributions(res, cfg.k, cfg.seed)
    write_labels(res, lab, cfg.out)
    cpath = cfg.centroids or f"{cfg.out}.centroids.csv"
    write_centroids(lab, cpath)
    reps = representative_cells(res, lab)
    print(f"inertia: {_fmt(lab.inertia)}", file=out)
    print("sizes: " + " ".join(str(int(s)) for s in lab.sizes()), file=out)
    for j, idx in enumerate(reps):
        if idx < 0:
            print(f"cluster {j}: empty", file=out)
            continue
        c = res.cells[idx]
        print(f"cluster {j}: representative cell {idx} "
              f"theta1={_fmt(c.theta1)} theta2={_fmt(c.theta2)}", file=out)
    print(f"wrote {len(lab.labels)} labels to {cfg.out}, centroids to {cpath}", file=out)
    return 0


def _cmd_report(cfg: RunConfig, out) -> int:
    _header(cfg, out)
    res = read_sweep(cfg.sweep)
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for name in METRIC_COLUMNS:
        with open(outdir / f"{name}.csv", "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta1", "theta2", name])
            for c in res.cells:
                w.writerow([_fmt(c.theta1), _fmt(c.theta2), _fmt(c.metric(name))])

    X = res.ranks()
    if cfg.labels:
        labels = read_labels(cfg.labels)
        if labels.size != len(res.cells):
            raise QPageRankError(f"{cfg.labels}: {labels.size} labels for {len(res.cells)} cells")
        k = int(labels.max()) + 1
        cents = np.array([X[labels == j].mean(axis=0) if (labels == j).any()
                          else np.zeros(res.n) for j in range(k)])
        lab = ClusterLabeling(k=k, labels=labels, centroids=cents, inertia=float("nan"), seed=-1)
        chosen = [(j, i) for j, i in enumerate(representative_cells(X, lab)) if i >= 0]
    else:
        chosen = [(None, i) for i in range(len(res.cells))]
    with open(outdir / "loglog.csv", "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cell", "cluster", "theta1", "theta2", "index", "log_index",
                    "probability", "log_probability"])
        for j, idx in chosen:
            c = res.cells[idx]
            probs = np.sort(np.asarray(c.rank))[::-1]
            for i, p in enumerate(probs, start=1):
                logp = _fmt(math.log(p)) if p > 0 else "nan"
                w.writerow([idx, "" if j is None else j, _fmt(c.theta1), _fmt(c.theta2),
                            i, _fmt(math.log(i)), _fmt(p), logp])
    print(f"wrote {len(METRIC_COLUMNS)} metric tables and loglog.csv "
          f"({len(chosen)} cells) to {outdir}", file=out)
    return 0


def execute(cfg: RunConfig, out=None) -> int:
    """Run one subcommand; module errors print to stderr and return 1."""
    out = out or sys.stdout
    handler = {
        "generate": _cmd_generate,
        "rank": _cmd_rank,
        "sweep": _cmd_sweep,
        "cluster": _cmd_cluster,
        "report": _cmd_report,
    }[cfg.subcommand]
    try:
        return handler(cfg, out)
    except (QPageRankError, OSError) as exc:
        print(f"qpagerank {cfg.subcommand}: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    return execute(parse_args(argv))


if __name__ == "__main__":
    sys.exit(main())
