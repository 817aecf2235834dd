"""Directed graph model and the relation-to-graph construction rules.

Vertices are labeled units: ``pkg.Class`` (kind "class") or
``pkg.Class::method`` (kind "method"). The graph is unweighted and simple
(duplicate edges collapse); self-loops are allowed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .names import QualifiedName, RelationTable, UnitKind

METHOD_SEP = "::"


@dataclass(frozen=True)
class Vertex:
    id: int
    label: str
    kind: str


class DirectedGraph:
    __slots__ = ("labels", "kinds", "_ids", "_succ", "_pred", "_m")

    def __init__(self):
        self.labels: list[str] = []
        self.kinds: list[str] = []
        self._ids: dict[str, int] = {}
        self._succ: list[set[int]] = []
        self._pred: list[set[int]] = []
        self._m = 0

    # -- construction --------------------------------------------------------
    def add_vertex(self, label: str) -> int:
        vid = self._ids.get(label)
        if vid is None:
            vid = len(self.labels)
            self._ids[label] = vid
            self.labels.append(label)
            self.kinds.append("method" if METHOD_SEP in label else "class")
            self._succ.append(set())
            self._pred.append(set())
        return vid

    def add_edge(self, src: int, dst: int) -> bool:
        if dst in self._succ[src]:
            return False
        self._succ[src].add(dst)
        self._pred[dst].add(src)
        self._m += 1
        return True

    def add_edge_labels(self, src_label: str, dst_label: str) -> bool:
        return self.add_edge(self.add_vertex(src_label), self.add_vertex(dst_label))

    # -- queries --------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return self._m

    def vertex_id(self, label: str) -> int | None:
        return self._ids.get(label)

    def vertex(self, vid: int) -> Vertex:
        return Vertex(vid, self.labels[vid], self.kinds[vid])

    def has_edge(self, src: int, dst: int) -> bool:
        return dst in self._succ[src]

    def successors(self, vid: int) -> list[int]:
        return sorted(self._succ[vid])

    def predecessors(self, vid: int) -> list[int]:
        return sorted(self._pred[vid])

    def edges(self):
        """Yield (src, dst) pairs sorted by source then target."""
        for src in range(self.n):
            for dst in sorted(self._succ[src]):
                yield src, dst

    def out_degrees(self) -> np.ndarray:
        return np.fromiter((len(s) for s in self._succ), dtype=np.int64, count=self.n)

    def in_degrees(self) -> np.ndarray:
        return np.fromiter((len(p) for p in self._pred), dtype=np.int64, count=self.n)

    def to_csr(self, reverse: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Adjacency as (indptr, indices) with sorted neighbor lists.

        With ``reverse`` the rows hold predecessors instead of successors.
        """
        rows = self._pred if reverse else self._succ
        degs = self.in_degrees() if reverse else self.out_degrees()
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(degs, out=indptr[1:])
        indices = np.empty(self._m, dtype=np.int64)
        at = 0
        for src in range(self.n):
            neighbors = sorted(rows[src])
            indices[at:at + len(neighbors)] = neighbors
            at += len(neighbors)
        return indptr, indices


class UndirectedGraph:
    """Symmetrized view: {u,v} iff u->v or v->u; self-loops dropped."""

    __slots__ = ("labels", "adj", "_m")

    def __init__(self, labels: list[str], adj: list[set[int]], m: int):
        self.labels = labels
        self.adj = adj
        self._m = m

    @property
    def n(self) -> int:
        return len(self.adj)

    @property
    def m(self) -> int:
        return self._m

    def degrees(self) -> np.ndarray:
        return np.fromiter((len(a) for a in self.adj), dtype=np.int64, count=self.n)

    def edges(self):
        for u in range(self.n):
            for v in sorted(self.adj[u]):
                if u <= v:
                    yield u, v

    def to_csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(self.degrees(), out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        at = 0
        for u in range(self.n):
            neighbors = sorted(self.adj[u])
            indices[at:at + len(neighbors)] = neighbors
            at += len(neighbors)
        return indptr, indices


def undirected_projection(g: DirectedGraph) -> UndirectedGraph:
    adj: list[set[int]] = [set() for _ in range(g.n)]
    m = 0
    for u in range(g.n):
        for v in g._succ[u]:
            if u == v:
                continue
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
    return UndirectedGraph(g.labels, adj, m)


def _package_matches(package: str, prefix: str) -> bool:
    return package == prefix or package.startswith(prefix + ".")


def _passes(qn: QualifiedName, prefix: str) -> bool:
    return not prefix or _package_matches(qn.package, prefix)


def build_graph(table: RelationTable, package_prefix: str = "",
                with_descriptors: bool = False) -> DirectedGraph:
    """Build the unipartite method/class graph from a relation table.

    Records where either side's class fails the package-prefix test are
    dropped. A call row yields (callerMethod -> calleeClass) plus
    (calleeClass -> calleeMethod) across classes, or
    (callerMethod -> calleeMethod) inside one class. A class-usage row
    yields a single (callerClass -> calleeClass) edge.
    """
    g = DirectedGraph()
    for record in table.records:
        if not (_passes(record.caller, package_prefix)
                and _passes(record.callee, package_prefix)):
            continue
        if record.caller_kind is UnitKind.CLASS:
            g.add_edge_labels(record.caller.render(with_descriptors),
                              record.callee.render(with_descriptors))
            continue
        caller_label = record.caller.render(with_descriptors)
        callee_class_label = record.callee.class_only().render(with_descriptors)
        callee_label = record.callee.render(with_descriptors)
        g.add_edge_labels(caller_label, callee_class_label)
        if record.caller.class_name == record.callee.class_name:
            g.add_edge_labels(caller_label, callee_label)
        else:
            g.add_edge_labels(callee_class_label, callee_label)
    return g
