"""Degree, clustering, shortest-path, and component measures."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import EmptyGraph
from .graph import DirectedGraph, UndirectedGraph, undirected_projection

__all__ = [
    "DegreeReport",
    "PathStats",
    "ComponentReport",
    "degrees",
    "shortest_path_stats",
    "avg_clustering",
    "components",
    "giant_component_paths",
]


@dataclass(frozen=True)
class DegreeReport:
    in_degrees: np.ndarray
    out_degrees: np.ndarray
    total_degrees: np.ndarray
    avg_in: float
    avg_out: float
    avg_degree: float


@dataclass(frozen=True)
class PathStats:
    average: float
    diameter: int
    finite_pairs: int
    exact: bool
    sources_used: int


@dataclass(frozen=True)
class ComponentReport:
    labels: np.ndarray = field(repr=False)
    count: int
    sizes: tuple[int, ...]
    giant_label: int
    giant_size: int
    giant_fraction: float


def degrees(g: DirectedGraph) -> DegreeReport:
    if g.n == 0:
        raise EmptyGraph("degree statistics need at least one vertex")
    ind = g.in_degrees()
    outd = g.out_degrees()
    return DegreeReport(
        in_degrees=ind,
        out_degrees=outd,
        total_degrees=ind + outd,
        avg_in=g.m / g.n,
        avg_out=g.m / g.n,
        avg_degree=g.m / g.n,
    )


def _csr_for(g, mode: str):
    """(indptr, indices, n) in the requested orientation."""
    if isinstance(g, UndirectedGraph):
        indptr, indices = g.to_csr()
        return indptr, indices, g.n
    if mode == "directed":
        indptr, indices = g.to_csr()
        return indptr, indices, g.n
    if mode == "undirected":
        proj = undirected_projection(g)
        indptr, indices = proj.to_csr()
        return indptr, indices, proj.n
    raise ValueError(f"unknown mode {mode!r}; expected 'directed' or 'undirected'")


def _bfs_over_sources(indptr, indices, sources, threads):
    k = sources.shape[0]
    sums = np.zeros(k, np.int64)
    maxs = np.zeros(k, np.int64)
    cnts = np.zeros(k, np.int64)
    with _kernels.thread_limit(threads):
        _kernels.bfs_stats(indptr, indices, sources, sums, maxs, cnts)
    total = int(sums.sum())
    pairs = int(cnts.sum())
    diameter = int(maxs.max()) if k else 0
    average = total / pairs if pairs else 0.0
    return average, diameter, pairs


def _pick_sources(candidates: np.ndarray, sample_sources, seed):
    """Subset of candidate source vertices, plus an exactness flag."""
    if sample_sources is None or sample_sources >= candidates.shape[0]:
        return candidates, True
    rng = np.random.default_rng(seed)
    chosen = rng.choice(candidates, size=sample_sources, replace=False)
    return np.sort(chosen), False


def shortest_path_stats(
    g,
    mode: str = "directed",
    sample_sources: int | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> PathStats:
    """BFS path statistics over finite ordered pairs (u != v).

    With ``sample_sources`` fewer than n, averages come from a seeded
    source subset and ``exact`` is False.
    """
    if g.n == 0:
        raise EmptyGraph("path statistics need at least one vertex")
    indptr, indices, n = _csr_for(g, mode)
    sources, exact = _pick_sources(np.arange(n, dtype=np.int64), sample_sources, seed)
    average, diameter, pairs = _bfs_over_sources(indptr, indices, sources, threads)
    return PathStats(average, diameter, pairs, exact, int(sources.shape[0]))


def avg_clustering(g, threads: int | None = None) -> float:
    """Mean local clustering coefficient of the undirected projection.

    Vertices of degree < 2 contribute zero; self-loops are ignored.
    """
    if g.n == 0:
        raise EmptyGraph("clustering needs at least one vertex")
    proj = g if isinstance(g, UndirectedGraph) else undirected_projection(g)
    indptr, indices = proj.to_csr()
    with _kernels.thread_limit(threads):
        tri2 = _kernels.triangle_doubles(indptr, indices)
    deg = np.diff(indptr)
    total = 0.0
    for v in range(proj.n):
        d = int(deg[v])
        if d >= 2:
            total += int(tri2[v]) / (d * (d - 1))
    return total / proj.n


def components(g) -> ComponentReport:
    """Weakly connected components, labelled densely in first-seen order."""
    if g.n == 0:
        raise EmptyGraph("component analysis needs at least one vertex")
    proj = g if isinstance(g, UndirectedGraph) else undirected_projection(g)
    indptr, indices = proj.to_csr()
    n = proj.n
    labels = np.full(n, -1, np.int64)
    sizes: list[int] = []
    queue = np.empty(n, np.int64)
    for start in range(n):
        if labels[start] >= 0:
            continue
        comp = len(sizes)
        labels[start] = comp
        head, tail = 0, 1
        queue[0] = start
        size = 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if labels[v] < 0:
                    labels[v] = comp
                    queue[tail] = v
                    tail += 1
                    size += 1
        sizes.append(size)
    giant_label = int(np.argmax(sizes))
    giant_size = sizes[giant_label]
    return ComponentReport(
        labels=labels,
        count=len(sizes),
        sizes=tuple(sizes),
        giant_label=giant_label,
        giant_size=giant_size,
        giant_fraction=giant_size / n,
    )


def giant_component_paths(
    g,
    sample_sources: int | None = None,
    seed: int = 0,
    threads: int | None = None,
) -> PathStats:
    """Path statistics restricted to the largest component.

    Sources are drawn from the giant component only; since BFS cannot
    leave a component, every counted pair lies inside it.
    """
    if g.n == 0:
        raise EmptyGraph("path statistics need at least one vertex")
    proj = g if isinstance(g, UndirectedGraph) else undirected_projection(g)
    comp = components(proj)
    giant = np.flatnonzero(comp.labels == comp.giant_label).astype(np.int64)
    indptr, indices = proj.to_csr()
    sources, exact = _pick_sources(giant, sample_sources, seed)
    average, diameter, pairs = _bfs_over_sources(indptr, indices, sources, threads)
    return PathStats(average, diameter, pairs, exact, int(sources.shape[0]))
