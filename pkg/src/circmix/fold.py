"""Elementary folds, fold-sequence search to cycle targets, retractions,
dominated-vertex reduction, and the fold-based odd-cycle mixing decision.

An elementary fold identifies two vertices at distance exactly 2.  Folding
can only lose colourings, and for 2 < p/q < 4 a fold image that fails to mix
drags the original down with it; for the odd-cycle targets C_{2k+1} the
converse holds too: a connected bipartite graph fails to mix exactly when it
folds onto the cycle C_{4k+2}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .circular import CircularParams, require_ratio_open
from .graphs import (Graph, SizeGuardError, bipartition, build_graph, canonical_key,
                     connected_components, distance, girth_cycle,
                     has_cycle_of_length_at_least, induced_subgraph, is_connected,
                     longest_cycle_length)
from .kernels import BudgetExceededError

DEFAULT_MEMO_BUDGET = 100_000


@dataclass(frozen=True)
class FoldStep:
    """One identification: ``merged`` collapsed into ``kept`` (= min of the
    pair), with the dense relabelling of the shrunken graph."""

    kept: int
    merged: int
    vertex_map: tuple  # old vertex -> new vertex


@dataclass(frozen=True)
class FoldTrace:
    source: Graph
    steps: tuple  # tuple of FoldStep
    final: Graph
    vertex_map: tuple  # source vertex -> final vertex

    def __len__(self) -> int:
        return len(self.steps)


def elementary_fold(g: Graph, x: int, y: int):
    """Identify x and y (must be at distance exactly 2) into min(x, y).

    Returns (folded graph, FoldStep).  The removed label max(x, y) is spliced
    out, so the result stays densely labelled.
    """
    if not (0 <= x < g.n and 0 <= y < g.n):
        raise ValueError(f"fold endpoints ({x},{y}) out of range")
    if distance(g, x, y) != 2:
        raise ValueError(f"vertices {x} and {y} are not at distance 2")
    kept, removed = min(x, y), max(x, y)
    vmap = []
    for v in range(g.n):
        if v == removed:
            vmap.append(kept)
        elif v > removed:
            vmap.append(v - 1)
        else:
            vmap.append(v)
    edges = {(min(vmap[u], vmap[v]), max(vmap[u], vmap[v])) for (u, v) in g.edges}
    folded = build_graph(g.n - 1, edges)
    return folded, FoldStep(kept=kept, merged=removed, vertex_map=tuple(vmap))


class _TraceBuilder:
    """Accumulates elementary folds and the composite relabelling."""

    def __init__(self, source: Graph):
        self.source = source
        self.current = source
        self.steps = []
        self.vertex_map = list(range(source.n))

    def fold(self, x: int, y: int) -> FoldStep:
        self.current, step = elementary_fold(self.current, x, y)
        self.steps.append(step)
        self.vertex_map = [step.vertex_map[v] for v in self.vertex_map]
        return step

    def trace(self) -> FoldTrace:
        return FoldTrace(source=self.source, steps=tuple(self.steps),
                         final=self.current, vertex_map=tuple(self.vertex_map))


def replay_trace(source: Graph, steps) -> FoldTrace:
    """Re-apply recorded (kept, merged) pairs; raises if any step is illegal."""
    builder = _TraceBuilder(source)
    for step in steps:
        kept, merged = (step.kept, step.merged) if isinstance(step, FoldStep) else step
        actual = builder.fold(kept, merged)
        if (actual.kept, actual.merged) != (min(kept, merged), max(kept, merged)):
            raise ValueError("fold step does not replay")
    return builder.trace()


def is_homomorphism_onto(source: Graph, target: Graph, vmap) -> bool:
    """vmap preserves edges and covers all of target's vertices and edges."""
    seen_v = set()
    seen_e = set()
    for (u, v) in source.edges:
        a, b = vmap[u], vmap[v]
        if a == b or not target.has_edge(a, b):
            return False
        seen_e.add((min(a, b), max(a, b)))
    for v in range(source.n):
        seen_v.add(vmap[v])
    return seen_v == set(range(target.n)) and seen_e == set(target.edges)


# ---------------------------------------------------------------------------
# Dominated-vertex reduction.


def reduce_dominated(g: Graph, params: CircularParams):
    """Fold away vertices whose neighbourhood sits inside another vertex's.

    For 2 < p/q < 4 such a fold preserves the mixing verdict in both
    directions, so the reduced graph mixes iff the input does.  Returns
    (reduced graph, FoldTrace); deterministic smallest-pair-first order.
    """
    require_ratio_open(params)
    builder = _TraceBuilder(g)
    while True:
        h = builder.current
        pair = None
        for u in range(h.n):
            nu = set(h.adjacency[u])
            if not nu:
                continue
            for v in range(h.n):
                if v != u and nu <= set(h.adjacency[v]):
                    pair = (u, v)
                    break
            if pair:
                break
        if pair is None:
            return builder.current, builder.trace()
        builder.fold(*pair)


# ---------------------------------------------------------------------------
# Retractions.


@dataclass(frozen=True)
class RetractionMap:
    """Homomorphism onto a subgraph that fixes the subgraph pointwise."""

    image: tuple  # vertex sequence of the image path or cycle
    assignment: tuple  # vertex -> image vertex


def _validate_retraction(g: Graph, image_edges, r: RetractionMap) -> None:
    for h in r.image:
        if r.assignment[h] != h:
            raise AssertionError("retraction must fix its image pointwise")
    for (u, v) in g.edges:
        a, b = r.assignment[u], r.assignment[v]
        if (min(a, b), max(a, b)) not in image_edges:
            raise AssertionError(f"retraction breaks edge ({u},{v})")


def retract_to_path(g: Graph, x: int, y: int) -> RetractionMap:
    """Retract a connected bipartite graph onto a shortest x-y path.

    BFS levels from x, reflected back and forth past the ends of the path;
    bipartiteness keeps adjacent vertices on adjacent levels so the zigzag
    is a homomorphism.
    """
    if not bipartition(g).valid:
        raise ValueError("path retraction requires a bipartite graph")
    if not is_connected(g):
        raise ValueError("path retraction requires a connected graph")
    path = _shortest_path(g, x, y)
    k = len(path) - 1
    if k == 0:
        if g.m > 0:
            raise ValueError("cannot retract a graph with edges onto one vertex")
        return RetractionMap(image=(x,), assignment=tuple(x for _ in range(g.n)))
    assignment = []
    for v in range(g.n):
        d = distance(g, x, v)
        r = d % (2 * k)
        assignment.append(path[r if r <= k else 2 * k - r])
    r = RetractionMap(image=tuple(path), assignment=tuple(assignment))
    image_edges = {(min(a, b), max(a, b)) for a, b in zip(path, path[1:])}
    _validate_retraction(g, image_edges, r)
    return r


def _shortest_path(g: Graph, x: int, y: int) -> list:
    from collections import deque

    parent = {x: -1}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if u == y:
            break
        for v in g.adjacency[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
    if y not in parent:
        raise ValueError(f"no path between {x} and {y}")
    path = [y]
    while path[-1] != x:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def retract_to_shortest_cycle(g: Graph):
    """Retract a connected bipartite graph onto a shortest cycle.

    Drops one cycle edge, retracts onto the remaining path (which is a
    shortest path between the edge's endpoints precisely because the cycle
    is shortest), then restores the edge.  Returns (cycle vertices tuple,
    RetractionMap).
    """
    cyc = girth_cycle(g)
    if cyc is None:
        raise ValueError("graph is acyclic")
    a, b = cyc.vertices[0], cyc.vertices[-1]
    reduced = build_graph(g.n, [e for e in g.edges if e != (min(a, b), max(a, b))])
    r = retract_to_path(reduced, a, b)
    # The BFS path closed by the dropped edge is itself a shortest cycle
    # (anything shorter would beat the girth), so retract onto that one.
    cycle_vertices = tuple(r.image)
    full = RetractionMap(image=cycle_vertices, assignment=r.assignment)
    image_edges = {(min(u, v), max(u, v))
                   for u, v in zip(cycle_vertices,
                                   cycle_vertices[1:] + cycle_vertices[:1])}
    _validate_retraction(g, image_edges, full)
    return cycle_vertices, full


# ---------------------------------------------------------------------------
# Fold search to cycle targets.


def _is_cycle_graph(g: Graph, length: int) -> bool:
    return (g.n == length and g.m == length
            and all(g.degree(v) == 2 for v in range(g.n))
            and is_connected(g))


def folds_to_cycle(g: Graph, length: int,
                   memo_budget: int = DEFAULT_MEMO_BUDGET,
                   prune_by_cycle_length: bool = True) -> Optional[FoldTrace]:
    """Search the fold closure of g for the cycle C_length.

    Two layers: a constructive fast path (when the graph is bipartite and
    its shortest cycle is at least as long as the even target, retract onto
    that cycle fold-by-fold and then pair-fold the cycle down), and a
    breadth-first closure search deduplicated by canonical key, expanding
    states in ascending vertex count and canonical-key order so traces are
    reproducible.

    States with fewer than ``length`` vertices are dead; with
    ``prune_by_cycle_length`` states whose cycles are all shorter than the
    target are dropped as well (for even targets 4k+2 on bipartite inputs a
    graph with only shorter cycles mixes at (2k+1,k) and therefore cannot
    fold to the target).
    """
    if length < 3:
        raise ValueError("cycle targets need length >= 3")
    if not is_connected(g):
        raise ValueError("fold search expects a connected graph")
    if _is_cycle_graph(g, length):
        return _TraceBuilder(g).trace()
    if g.n <= length:
        return None
    bip = bipartition(g)
    if bip.valid != (length % 2 == 0):
        # homomorphisms preserve closed-walk parity, so bipartite graphs
        # never reach odd cycles and non-bipartite graphs never reach even
        return None
    if bip.valid and length % 2 == 0 and length >= 4:
        shortest = girth_cycle(g)
        if shortest is not None and len(shortest) >= length:
            return _guided_cycle_trace(g, length)
    return _search_fold_closure(g, length, memo_budget, prune_by_cycle_length)


def _guided_cycle_trace(g: Graph, length: int) -> FoldTrace:
    """Retraction-driven fold sequence onto a shortest cycle, then pairwise
    cycle shrinking down to the target length."""
    cycle_vertices, r = retract_to_shortest_cycle(g)
    builder = _TraceBuilder(g)
    image = list(r.assignment)
    cycle = list(cycle_vertices)
    while builder.current.n > len(cycle):
        h = builder.current
        on_cycle = set(cycle)
        u = next(v for v in range(h.n)
                 if v not in on_cycle and any(w in on_cycle for w in h.adjacency[v]))
        step = builder.fold(u, image[u])
        image = _remap_assignment(image, step.vertex_map)
        cycle = [step.vertex_map[c] for c in cycle]
    while len(cycle) > length:
        step = builder.fold(cycle[0], cycle[2])
        cycle = [step.vertex_map[c] for c in cycle]
        step = builder.fold(cycle[1], cycle[3])
        cycle = [step.vertex_map[c] for c in cycle]
        # Positions 2 and 3 are now duplicates of 0 and 1.
        cycle = cycle[:2] + cycle[4:]
    trace = builder.trace()
    if not _is_cycle_graph(trace.final, length):
        raise AssertionError("guided fold did not end at the target cycle")
    return trace


def _remap_assignment(image: list, vmap: tuple) -> list:
    out = [0] * (max(vmap) + 1)
    for old, new in enumerate(vmap):
        out[new] = vmap[image[old]]
    return out


def _search_fold_closure(g: Graph, length: int, memo_budget: int,
                         prune_by_cycle_length: bool) -> Optional[FoldTrace]:
    if prune_by_cycle_length and not has_cycle_of_length_at_least(g, length):
        return None
    root_key = canonical_key(g)
    memo = {root_key: (g, None, None)}  # key -> (graph, parent key, (x, y))
    level = [root_key]
    while level:
        next_level = {}
        for key in sorted(level):
            h = memo[key][0]
            if h.n - 1 < length:
                continue
            for x in range(h.n):
                for y in range(x + 1, h.n):
                    if distance(h, x, y) != 2:
                        continue
                    child, _ = elementary_fold(h, x, y)
                    if _is_cycle_graph(child, length):
                        return _rebuild_trace(g, memo, key, (x, y))
                    if child.n <= length:
                        continue
                    if prune_by_cycle_length and \
                            not has_cycle_of_length_at_least(child, length):
                        continue
                    ck = canonical_key(child)
                    if ck in memo or ck in next_level:
                        continue
                    next_level[ck] = (child, key, (x, y))
                    if len(memo) + len(next_level) > memo_budget:
                        raise BudgetExceededError(
                            f"fold-closure memo exceeded {memo_budget} graphs")
        memo.update(next_level)
        level = list(next_level)
    return None


def _rebuild_trace(g: Graph, memo: dict, key, last_step) -> FoldTrace:
    chain = []
    while key is not None:
        _, parent, step = memo[key]
        if step is not None:
            chain.append(step)
        key = parent
    chain.reverse()
    chain.append(last_step)
    return replay_trace(g, chain)


# ---------------------------------------------------------------------------
# Odd-cycle mixing decision and thresholds.


def odd_mixing_by_fold(g: Graph, k: int,
                       memo_budget: int = DEFAULT_MEMO_BUDGET):
    """Is g C_{2k+1}-mixing?  Returns (mixing flag, trace or None).

    A connected bipartite graph mixes iff it does not fold to C_{4k+2};
    disconnected inputs fail as soon as one component folds.  The returned
    trace lives on the induced component (with its vertex list) so it can be
    replayed independently.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not bipartition(g).valid:
        raise ValueError("the odd-cycle fold criterion applies to bipartite graphs")
    target = 4 * k + 2
    for comp in connected_components(g):
        sub, _ = induced_subgraph(g, comp)
        trace = folds_to_cycle(sub, target, memo_budget=memo_budget)
        if trace is not None:
            return False, (tuple(comp), trace)
    return True, None


@dataclass(frozen=True)
class ThresholdResult:
    k: int
    longest_cycle: Optional[int]  # None if the exhaustive search was skipped
    tested: tuple  # k values that went through the fold criterion


def circular_mixing_threshold(g: Graph, longest_cycle_cap: int = 24,
                              memo_budget: int = DEFAULT_MEMO_BUDGET) -> ThresholdResult:
    """Smallest k such that g is C_{2k+1}-mixing (bipartite, connected).

    Once 4k+2 exceeds the longest cycle length the fold target is out of
    reach and g mixes, so the scan is bounded.  If the graph is too large
    for the exhaustive longest-cycle search, the vertex count bounds it
    instead and the result records that the cycle length is unknown.
    """
    if not bipartition(g).valid:
        raise ValueError("threshold defined here for bipartite graphs only")
    if not is_connected(g):
        raise ValueError("threshold expects a connected graph")
    try:
        longest = longest_cycle_length(g, vertex_cap=longest_cycle_cap)
        bound_known = True
    except SizeGuardError:
        longest = None
        bound_known = False
    k = 1
    tested = []
    while True:
        limit = longest if bound_known else g.n
        if 4 * k + 2 > limit:
            return ThresholdResult(k=k, longest_cycle=longest, tested=tuple(tested))
        tested.append(k)
        mixing, _ = odd_mixing_by_fold(g, k, memo_budget=memo_budget)
        if mixing:
            return ThresholdResult(k=k, longest_cycle=longest, tested=tuple(tested))
        k += 1
