"""Shared builders and independent brute-force oracles for the test suite.

The brute-force routines here deliberately avoid the package's own search
machinery (they enumerate permutations, vertex subsets, or raw colour
vectors) so they can serve as independent cross-checks.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

from circmix.circular import CircularParams, Colouring
from circmix.graphs import Graph, build_graph, canonical_key, is_connected


# ---------------------------------------------------------------------------
# Builders.


def cycle(n: int) -> Graph:
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def grid(rows: int, cols: int) -> Graph:
    vid = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return build_graph(rows * cols, edges)


def complete_bipartite(a: int, b: int) -> Graph:
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(leaves: int) -> Graph:
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# ---------------------------------------------------------------------------
# Exhaustive graph families.


def all_labelled_graphs(n: int):
    """Every graph on vertices 0..n-1 (2^(n choose 2) of them)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield build_graph(n, [pairs[k] for k in range(len(pairs)) if mask >> k & 1])


@lru_cache(maxsize=None)
def connected_bipartite_upto_iso(n: int) -> tuple:
    """All connected bipartite graphs on n vertices, one per isomorphism class."""
    if n == 1:
        return (build_graph(1, []),)
    seen = {}
    for a in range(1, n // 2 + 1):
        b = n - a
        pairs = [(i, a + j) for i in range(a) for j in range(b)]
        for mask in range(1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
            if len(edges) < n - 1:
                continue
            g = build_graph(n, edges)
            if not is_connected(g):
                continue
            key = canonical_key(g)
            if key not in seen:
                seen[key] = g
    return tuple(seen[k] for k in sorted(seen))


@lru_cache(maxsize=None)
def connected_graphs_upto_iso(n: int) -> tuple:
    """All connected graphs on n vertices up to isomorphism (small n only)."""
    seen = {}
    for g in all_labelled_graphs(n):
        if not is_connected(g):
            continue
        key = canonical_key(g)
        if key not in seen:
            seen[key] = g
    return tuple(seen[k] for k in sorted(seen))


def random_connected_bipartite(n: int, count: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        a = rng.randint(1, n - 1)
        edges = [(i, a + j) for i in range(a) for j in range(n - a)
                 if rng.random() < 0.45]
        g = build_graph(n, edges)
        if is_connected(g):
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# Independent oracles.


def brute_cycle_sets(g: Graph, max_len: int) -> set:
    """All simple cycles up to rotation/reflection, by brute force over
    vertex subsets and permutations.  Exponential; tiny graphs only."""
    found = set()
    for size in range(3, max_len + 1):
        for subset in itertools.combinations(range(g.n), size):
            s0 = subset[0]
            for perm in itertools.permutations(subset[1:]):
                seq = (s0,) + perm
                if seq[1] > seq[-1]:
                    continue  # reflection representative
                if all(g.has_edge(seq[i], seq[(i + 1) % size]) for i in range(size)):
                    found.add(seq)
    return found


def brute_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    for perm in itertools.permutations(range(g.n)):
        if all(h.has_edge(perm[u], perm[v]) for (u, v) in g.edges):
            return True
    return False


def brute_min_label_key(g: Graph) -> tuple:
    """Minimum adjacency bit-tuple over all vertex permutations."""
    best = None
    for perm in itertools.permutations(range(g.n)):
        bits = tuple(
            1 if g.has_edge(perm[i], perm[j]) else 0
            for i in range(g.n) for j in range(i + 1, g.n))
        if best is None or bits < best:
            best = bits
    return best


def brute_colouring_count(g: Graph, params: CircularParams) -> int:
    """Filter all p^n colour vectors by the edge rule."""
    count = 0
    for colours in itertools.product(range(params.p), repeat=g.n):
        if all(params.compatible(colours[u], colours[v]) for (u, v) in g.edges):
            count += 1
    return count


def python_mixing_components(g: Graph, params: CircularParams):
    """Connected components of the recolouring graph, in pure Python.

    Independent of the array kernels: uses the lazy enumerator and the
    single-step neighbour generator.  Returns (states list, label list).
    """
    from circmix.circular import enumerate_colourings
    from circmix.reconfig import col_neighbours

    states = list(enumerate_colourings(g, params))
    index = {f.colours: i for i, f in enumerate(states)}
    labels = [-1] * len(states)
    comp = 0
    for i in range(len(states)):
        if labels[i] != -1:
            continue
        labels[i] = comp
        stack = [i]
        while stack:
            j = stack.pop()
            for nb in col_neighbours(states[j]):
                k = index[nb.colours]
                if labels[k] == -1:
                    labels[k] = comp
                    stack.append(k)
        comp += 1
    return states, labels


def colouring(g: Graph, params: CircularParams, colours) -> Colouring:
    return Colouring(params=params, colours=tuple(colours), host=g)
