"""Modularity and Louvain against hand values and exhaustive search."""
from __future__ import annotations

import random

import numpy as np
import pytest

from jarnet.community import (
    community_size_distribution,
    louvain,
    modularity,
)
from jarnet.errors import EmptyGraph, PartitionMismatch
from jarnet.graph import DirectedGraph

from test_metrics import digraph, random_digraph


def clique_pair(size=5) -> DirectedGraph:
    edges = []
    for base in (0, size):
        edges += [(base + i, base + j) for i in range(size)
                  for j in range(i + 1, size)]
    return digraph(edges, n_hint=2 * size)


def all_partitions(n):
    """Restricted-growth strings: every partition of {0..n-1}."""
    def rec(i, maxc, current):
        if i == n:
            yield tuple(current)
            return
        for c in range(maxc + 2):
            current.append(c)
            yield from rec(i + 1, max(maxc, c), current)
            current.pop()
    yield from rec(0, -1, [])


def best_partition_q(g) -> float:
    best = -1.0
    for assignment in all_partitions(g.n):
        q = modularity(g, np.array(assignment))
        if q > best:
            best = q
    return best


# -- modularity ----------------------------------------------------------------

def test_single_community_is_zero():
    g = clique_pair(5)
    q = modularity(g, np.zeros(g.n, dtype=np.int64))
    assert q == 0.0


def test_two_cliques_split_is_half():
    g = clique_pair(5)
    assignment = np.array([0] * 5 + [1] * 5)
    assert modularity(g, assignment) == pytest.approx(0.5, abs=1e-12)


def test_two_triangles_split_is_half():
    g = clique_pair(3)
    assignment = np.array([0, 0, 0, 1, 1, 1])
    assert modularity(g, assignment) == pytest.approx(0.5, abs=1e-12)


def test_path_graph_hand_value():
    # P4 split into end pairs: Q = 2*(1/3 - (3/6)^2) = 1/6
    g = digraph([(0, 1), (1, 2), (2, 3)])
    assignment = np.array([0, 0, 1, 1])
    assert modularity(g, assignment) == pytest.approx(1 / 6, abs=1e-12)


def test_modularity_invariant_under_relabeling():
    rng = random.Random(21)
    g = random_digraph(12, 0.25, rng)
    assignment = np.array([rng.randrange(3) for _ in range(g.n)])
    relabeled = np.array([{0: 7, 1: 2, 2: 9}[c] for c in assignment])
    assert modularity(g, assignment) == pytest.approx(
        modularity(g, relabeled), abs=1e-15)


def test_modularity_errors():
    with pytest.raises(EmptyGraph):
        modularity(DirectedGraph(), np.array([], dtype=np.int64))
    g = digraph([(0, 1)])
    with pytest.raises(PartitionMismatch):
        modularity(g, np.array([0]))


def test_edgeless_graph_modularity_zero():
    g = digraph([], n_hint=3)
    assert modularity(g, np.zeros(3, dtype=np.int64)) == 0.0


# -- louvain --------------------------------------------------------------------

def test_louvain_two_cliques():
    g = clique_pair(5)
    part = louvain(g, seed=0)
    assert part.n_communities == 2
    assert part.q == pytest.approx(0.5, abs=1e-9)
    left = {part.assignments[i] for i in range(5)}
    right = {part.assignments[i] for i in range(5, 10)}
    assert len(left) == len(right) == 1 and left != right


def test_louvain_assignments_contract():
    rng = random.Random(22)
    g = random_digraph(30, 0.12, rng)
    part = louvain(g, seed=5)
    labels = set(part.assignments.tolist())
    assert labels == set(range(part.n_communities))  # dense labels
    assert part.q == pytest.approx(modularity(g, part.assignments), abs=1e-15)


def test_louvain_seed_determinism():
    rng = random.Random(23)
    g = random_digraph(40, 0.08, rng)
    a = louvain(g, seed=9)
    b = louvain(g, seed=9)
    assert np.array_equal(a.assignments, b.assignments)
    assert a.q == b.q


def test_louvain_reaches_exhaustive_optimum_on_small_graphs():
    rng = random.Random(24)
    for _ in range(12):
        n = rng.randrange(3, 8)
        g = random_digraph(n, rng.uniform(0.2, 0.6), rng)
        part = louvain(g, seed=1)
        assert part.q >= best_partition_q(g) - 1e-9


def test_louvain_isolated_vertices_are_own_communities():
    g = digraph([(0, 1), (1, 0)], n_hint=4)
    part = louvain(g, seed=2)
    assert part.assignments[2] != part.assignments[3]
    assert part.n_communities == 3


def test_louvain_resolution_parameter_runs():
    g = clique_pair(4)
    coarse = louvain(g, resolution=0.5, seed=3)
    fine = louvain(g, resolution=2.0, seed=3)
    assert coarse.n_communities <= fine.n_communities


# -- size distribution ------------------------------------------------------------

def test_community_size_distribution():
    g = clique_pair(5)
    part = louvain(g, seed=0)
    report = community_size_distribution(part, top=1)
    assert report.sizes == [5, 5]
    assert report.mean == pytest.approx(5.0)
    assert report.top_share == pytest.approx(0.5)


def test_size_distribution_top_clamps():
    g = clique_pair(3)
    part = louvain(g, seed=0)
    report = community_size_distribution(part, top=10)
    assert report.top_share == pytest.approx(1.0)
    assert sum(report.sizes) == g.n
