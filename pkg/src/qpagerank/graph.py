"""Directed graphs: construction, seeded scale-free generation, reversal and
the plain-text edge-list format.

Edge-list format
----------------
One directed edge ``u v`` per line, 0-based node indices. Blank lines and
lines starting with ``#`` are ignored. An optional header line ``n <count>``
fixes the node count; without it the count is ``1 + max index``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DuplicateEdgeError, GraphRangeError, ParameterError, ParseError


@dataclass(frozen=True)
class DirectedGraph:
    """Immutable directed graph on nodes ``0 .. n-1``.

    Edges are stored as a sorted tuple of ``(source, target)`` pairs.
    Self-loops are allowed; duplicate edges are not.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"node count must be positive, got {self.n}")
        canon = tuple(sorted((int(u), int(v)) for u, v in self.edges))
        for u, v in canon:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphRangeError(f"edge ({u}, {v}) outside [0, {self.n})")
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise DuplicateEdgeError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", canon)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        return cls(n, tuple(edges))

    @property
    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)

    def out_degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, _ in self.edges:
            deg[u] += 1
        return deg

    def in_degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for _, v in self.edges:
            deg[v] += 1
        return deg

    def fingerprint(self) -> str:
        """SHA-256 of the canonical edge-list text."""
        return hashlib.sha256(dump_edge_list(self).encode("ascii")).hexdigest()


def load_edge_list(text: str) -> DirectedGraph:
    """Parse edge-list text into a :class:`DirectedGraph`.

    Raises ``ParseError`` for malformed lines, ``GraphRangeError`` for an
    index at or beyond the declared node count and ``DuplicateEdgeError``
    for repeated edges. Errors carry the offending line number.
    """
    n = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or n is not None or edges:
                raise ParseError("header must be a single 'n <count>' before any edge", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad node count {parts[1]!r}", lineno) from None
            if n < 1:
                raise ParseError(f"node count must be positive, got {n}", lineno)
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"expected two integers, got {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphRangeError(f"negative node index in {line!r}", lineno)
        if n is not None and (u >= n or v >= n):
            raise GraphRangeError(f"index out of range for n={n} in {line!r}", lineno)
        if (u, v) in seen:
            raise DuplicateEdgeError(
                f"edge ({u}, {v}) already listed on line {seen[(u, v)]}", lineno
            )
        seen[(u, v)] = lineno
        edges.append((u, v))
    if n is None:
        if not edges:
            raise ParseError("empty edge list without an 'n <count>' header")
        n = 1 + max(max(u, v) for u, v in edges)
    return DirectedGraph(n, tuple(edges))


def read_edge_list(path) -> DirectedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read())


def dump_edge_list(g: DirectedGraph, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"n {g.n}")
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


def write_edge_list(g: DirectedGraph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dump_edge_list(g, comment))


def generate_scale_free(n: int, m: int, seed: int) -> DirectedGraph:
    """Seeded preferential-attachment digraph.

    Nodes ``0..m`` form a clique with edges pointing from higher to lower
    index. Every later node ``u`` then links to ``m`` distinct earlier nodes,
    each drawn with probability proportional to ``in_degree + 1``. The result
    depends only on ``(n, m, seed)``.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if n < m + 1:
        raise ParameterError(f"need n >= m + 1, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    indeg = np.zeros(n, dtype=np.int64)
    edges: list[tuple[int, int]] = []
    for u in range(1, m + 1):
        for t in range(u):
            edges.append((u, t))
            indeg[t] += 1
    for u in range(m + 1, n):
        weights = (indeg[:u] + 1).astype(float)
        targets = []
        for _ in range(m):
            t = int(rng.choice(u, p=weights / weights.sum()))
            targets.append(t)
            weights[t] = 0.0
        for t in targets:
            edges.append((u, t))
            indeg[t] += 1
    return DirectedGraph(n, tuple(edges))


def reverse(g: DirectedGraph) -> DirectedGraph:
    """Trackback graph: every edge ``u -> v`` becomes ``v -> u``."""
    return DirectedGraph(g.n, tuple((v, u) for u, v in g.edges))
