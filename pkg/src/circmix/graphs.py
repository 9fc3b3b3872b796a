"""Graph representation and structural machinery shared by every other module.

Vertices are dense integers 0..n-1.  Graphs are immutable after construction
and all operations here are pure, so values can be shared freely between
threads.  Tie-breaking is always lowest-index-first so that downstream
certificates are reproducible.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional


class SizeGuardError(ValueError):
    """Raised when an operation meant for small graphs gets a big one."""


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph: vertex count plus adjacency."""

    n: int
    edges: frozenset  # frozenset of (u, v) tuples with u < v
    adjacency: tuple  # per-vertex sorted tuple of neighbours
    duplicates_collapsed: bool = field(default=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edges

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable) -> Graph:
    """Normalize an edge list into a Graph.

    Endpoints must lie in 0..n-1 and loops are rejected.  Duplicate edges are
    collapsed; the returned graph records that this happened.
    """
    if n < 0:
        raise ValueError(f"vertex count must be >= 0, got {n}")
    seen = set()
    duplicates = False
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u},{v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise ValueError(f"loop edge at vertex {u}")
        e = (u, v) if u < v else (v, u)
        if e in seen:
            duplicates = True
        seen.add(e)
    adj = [[] for _ in range(n)]
    for u, v in seen:
        adj[u].append(v)
        adj[v].append(u)
    adjacency = tuple(tuple(sorted(a)) for a in adj)
    return Graph(n=n, edges=frozenset(seen), adjacency=adjacency,
                 duplicates_collapsed=duplicates)


@dataclass(frozen=True)
class Bipartition:
    """Two-colouring of the vertex set, or an odd closed walk disproving one.

    ``side[v]`` is 0 or 1 when valid.  When invalid, ``odd_walk`` is a closed
    walk of odd length witnessing non-bipartiteness.
    """

    valid: bool
    side: tuple
    odd_walk: Optional[tuple] = None


def bipartition(g: Graph) -> Bipartition:
    """2-colour by BFS levels, or return an odd closed walk as evidence."""
    side = [-1] * g.n
    parent = [-1] * g.n
    for root in range(g.n):
        if side[root] != -1:
            continue
        side[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if side[v] == -1:
                    side[v] = 1 - side[u]
                    parent[v] = u
                    queue.append(v)
                elif side[v] == side[u]:
                    walk = _odd_walk(parent, u, v)
                    return Bipartition(valid=False, side=(), odd_walk=walk)
    return Bipartition(valid=True, side=tuple(side))


def _odd_walk(parent: list, u: int, v: int) -> tuple:
    # Closed odd walk root..u,v..root along BFS tree paths; the start is not
    # repeated, so the walk length equals the vertex count.
    def path_to_root(x):
        out = [x]
        while parent[out[-1]] != -1:
            out.append(parent[out[-1]])
        return out

    pu = path_to_root(u)  # u .. root
    pv = path_to_root(v)  # v .. root
    return tuple(reversed(pu)) + tuple(pv[:-1])


@dataclass(frozen=True)
class Cycle:
    """Simple cycle stored as an oriented vertex sequence.

    The representative starts at its minimum vertex with the smaller of that
    vertex's two cycle-neighbours second, so equality is up to rotation and
    reflection.
    """

    vertices: tuple

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("cycle needs at least 3 vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("cycle has a repeated vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def length(self) -> int:
        return len(self.vertices)

    def directed_edges(self) -> list:
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    @staticmethod
    def from_vertices(vertices) -> "Cycle":
        return Cycle(canonical_cycle_tuple(tuple(vertices)))


def canonical_cycle_tuple(vs: tuple) -> tuple:
    """Rotate/reflect so the minimum vertex leads with its smaller neighbour second."""
    k = len(vs)
    i = vs.index(min(vs))
    fwd = tuple(vs[(i + j) % k] for j in range(k))
    rev = tuple(vs[(i - j) % k] for j in range(k))
    return fwd if fwd[1] <= rev[1] else rev


def is_cycle_of(g: Graph, vs: tuple) -> bool:
    """Check that ``vs`` is a simple cycle of g (consecutive vertices adjacent)."""
    k = len(vs)
    if k < 3 or len(set(vs)) != k:
        return False
    return all(g.has_edge(vs[i], vs[(i + 1) % k]) for i in range(k))


@dataclass(frozen=True)
class CycleBasis:
    """Spanning-forest edges plus one fundamental cycle per non-tree edge."""

    tree_edges: frozenset
    fundamental: tuple  # tuple of Cycle


def fundamental_cycle_basis(g: Graph) -> CycleBasis:
    """BFS spanning forest (rooted at the lowest vertex of each component)
    and the fundamental cycle of every non-tree edge."""
    parent = [-1] * g.n
    depth = [0] * g.n
    visited = [False] * g.n
    tree = set()
    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not visited[v]:
                    visited[v] = True
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    tree.add((u, v) if u < v else (v, u))
                    queue.append(v)
    fundamental = []
    for (u, v) in sorted(g.edges):
        if (u, v) in tree:
            continue
        # Tree path u..lca followed by lca..v, closed by the non-tree edge.
        pu, pv = [u], [v]
        a, b = u, v
        while depth[a] > depth[b]:
            a = parent[a]
            pu.append(a)
        while depth[b] > depth[a]:
            b = parent[b]
            pv.append(b)
        while a != b:
            a = parent[a]
            b = parent[b]
            pu.append(a)
            pv.append(b)
        cycle_vertices = pu + list(reversed(pv[:-1]))
        fundamental.append(Cycle.from_vertices(cycle_vertices))
    return CycleBasis(tree_edges=frozenset(tree), fundamental=tuple(fundamental))


def enumerate_cycles(g: Graph, max_len: int) -> Iterator[Cycle]:
    """Stream every simple cycle of length <= max_len, once up to
    rotation/reflection.

    Each cycle is emitted with its minimum vertex first; the search only walks
    through vertices larger than that minimum and keeps second < last to kill
    the reflected copy.
    """
    if max_len < 3:
        return
    for s in range(g.n):
        path = [s]
        on_path = {s}

        def extend():
            u = path[-1]
            for v in g.adjacency[u]:
                if v == s and len(path) >= 3 and path[1] < path[-1]:
                    yield Cycle(tuple(path))
                elif v > s and v not in on_path and len(path) < max_len:
                    path.append(v)
                    on_path.add(v)
                    yield from extend()
                    on_path.discard(v)
                    path.pop()

        yield from extend()


def girth_cycle(g: Graph) -> Optional[Cycle]:
    """A shortest cycle of g, or None if acyclic.

    Deterministic: BFS from each vertex in ascending order, returning the
    first cycle of the minimum length found.
    """
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and dist[u] * 2 >= len(best):
                break
            for v in g.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    # Cross or level edge closes a cycle through s.
                    pu, pv = [u], [v]
                    while pu[-1] != -1:
                        pu.append(parent[pu[-1]])
                    while pv[-1] != -1:
                        pv.append(parent[pv[-1]])
                    pu, pv = pu[:-1], pv[:-1]
                    common = set(pu) & set(pv)
                    # Trim to the first common ancestor.
                    iu = next(i for i, x in enumerate(pu) if x in common)
                    iv = next(i for i, x in enumerate(pv) if x in common)
                    if pu[iu] != pv[iv]:
                        continue
                    vs = pu[: iu + 1] + list(reversed(pv[:iv]))
                    if len(vs) >= 3 and len(set(vs)) == len(vs):
                        if best is None or len(vs) < len(best):
                            best = vs
        if best is not None and len(best) == 3:
            break
    return Cycle.from_vertices(best) if best is not None else None


def longest_cycle_length(g: Graph, vertex_cap: int = 24) -> int:
    """Length of a longest simple cycle (0 if acyclic), by exhaustive DFS.

    Intended for desk-scale graphs; refuses graphs above ``vertex_cap``.
    """
    if g.n > vertex_cap:
        raise SizeGuardError(f"longest-cycle search capped at {vertex_cap} vertices")
    best = 0
    for s in range(g.n):
        best = max(best, _longest_cycle_from(g, s, best))
    return best


def _longest_cycle_from(g: Graph, s: int, best: int) -> int:
    path = [s]
    on_path = {s}

    def extend() -> int:
        nonlocal best
        u = path[-1]
        for v in g.adjacency[u]:
            if v == s and len(path) >= 3:
                best = max(best, len(path))
            elif v > s and v not in on_path:
                path.append(v)
                on_path.add(v)
                extend()
                on_path.discard(v)
                path.pop()
        return best

    return extend()


def has_cycle_of_length_at_least(g: Graph, length: int) -> bool:
    """Early-exit variant of the longest-cycle search."""
    if length <= 0:
        return True
    found = False
    for s in range(g.n):
        path = [s]
        on_path = {s}

        def extend() -> bool:
            u = path[-1]
            for v in g.adjacency[u]:
                if v == s and len(path) >= max(3, length):
                    return True
                if v > s and v not in on_path:
                    path.append(v)
                    on_path.add(v)
                    hit = extend()
                    on_path.discard(v)
                    path.pop()
                    if hit:
                        return True
            return False

        found = extend()
        if found:
            break
    return found


@dataclass(frozen=True)
class Block:
    vertices: frozenset
    edges: frozenset


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple  # tuple of Block
    cut_vertices: frozenset


def blocks(g: Graph) -> BlockDecomposition:
    """Biconnected components (blocks) and cut vertices, Hopcroft-Tarjan.

    Every edge lands in exactly one block; isolated vertices are in none.
    """
    disc = [-1] * g.n
    low = [0] * g.n
    result = []
    cuts = set()
    timer = 0
    edge_stack = []

    for root in range(g.n):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        # Iterative DFS; frames are mutable [vertex, parent, neighbour index].
        stack = [[root, -1, 0]]
        root_children = 0
        while stack:
            frame = stack[-1]
            u, pu = frame[0], frame[1]
            if frame[2] < len(g.adjacency[u]):
                v = g.adjacency[u][frame[2]]
                frame[2] += 1
                if v == pu:
                    continue
                if disc[v] == -1:
                    edge_stack.append((u, v))
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append([v, u, 0])
                elif disc[v] < disc[u]:
                    edge_stack.append((u, v))
                    low[u] = min(low[u], disc[v])
            else:
                stack.pop()
                if pu != -1:
                    low[pu] = min(low[pu], low[u])
                    if pu == root:
                        root_children += 1
                    if low[u] >= disc[pu]:
                        if pu != root:
                            cuts.add(pu)
                        result.append(_pop_block(edge_stack, (pu, u)))
        if root_children >= 2:
            cuts.add(root)
    blocks_sorted = tuple(sorted(result, key=lambda b: sorted(b.vertices)))
    return BlockDecomposition(blocks=blocks_sorted, cut_vertices=frozenset(cuts))


def _pop_block(edge_stack: list, top_edge: tuple) -> Block:
    es = set()
    while True:
        u, v = edge_stack.pop()
        es.add((u, v) if u < v else (v, u))
        if (u, v) == top_edge:
            break
    vs = set()
    for u, v in es:
        vs.add(u)
        vs.add(v)
    return Block(vertices=frozenset(vs), edges=frozenset(es))


def distance(g: Graph, u: int, v: int) -> Optional[int]:
    """BFS hop count from u to v; None when unreachable."""
    if u == v:
        return 0
    dist = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for y in g.adjacency[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == v:
                    return dist[y]
                queue.append(y)
    return None


def connected_components(g: Graph) -> list:
    """Vertex sets of the connected components, each sorted, ordered by minimum."""
    seen = [False] * g.n
    comps = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def induced_subgraph(g: Graph, vertices) -> tuple:
    """Induced subgraph with dense relabelling; returns (graph, old->new map)."""
    vs = sorted(vertices)
    remap = {v: i for i, v in enumerate(vs)}
    edges = [(remap[u], remap[v]) for (u, v) in g.edges if u in remap and v in remap]
    return build_graph(len(vs), edges), remap


# ---------------------------------------------------------------------------
# Canonical form for small graphs (memoization of fold searches).

_CANONICAL_VERTEX_GUARD = 16
_CANONICAL_LEAF_GUARD = 200_000


def canonical_key(g: Graph) -> bytes:
    """Isomorphism-invariant key: equal keys iff isomorphic graphs.

    Backtracking canonical labelling over the leaves of an equitable-
    refinement search tree; intended for graphs up to ~12 vertices and
    guarded accordingly.
    """
    if g.n > _CANONICAL_VERTEX_GUARD:
        raise SizeGuardError(
            f"canonical_key guarded at {_CANONICAL_VERTEX_GUARD} vertices, got {g.n}")
    if g.n == 0:
        return b"\x00"
    best = _canonical_search(g)
    return bytes([g.n]) + _pack_bits(best)


def _refine(g: Graph, partition: list) -> list:
    """Equitable refinement: split cells by multiset of neighbour-cell counts."""
    cells = [list(c) for c in partition]
    changed = True
    while changed:
        changed = False
        cell_id = {}
        for i, cell in enumerate(cells):
            for v in cell:
                cell_id[v] = i
        new_cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sig = {}
            for v in cell:
                counts = [0] * len(cells)
                for u in g.adjacency[v]:
                    counts[cell_id[u]] += 1
                sig.setdefault(tuple(counts), []).append(v)
            if len(sig) > 1:
                changed = True
            for key in sorted(sig):
                new_cells.append(sorted(sig[key]))
        cells = new_cells
    return cells


def _canonical_search(g: Graph) -> tuple:
    """Minimum adjacency bit-tuple over the leaves of the refinement tree."""
    degrees = {}
    for v in range(g.n):
        degrees.setdefault(g.degree(v), []).append(v)
    initial = [sorted(degrees[d]) for d in sorted(degrees)]
    best = [None]
    leaves = [0]

    def descend(cells):
        cells = _refine(g, cells)
        target = None
        for i, cell in enumerate(cells):
            if len(cell) > 1:
                if target is None or len(cells[target]) > len(cell):
                    target = i
        if target is None:
            leaves[0] += 1
            if leaves[0] > _CANONICAL_LEAF_GUARD:
                raise SizeGuardError("canonical_key leaf guard exceeded")
            order = [c[0] for c in cells]
            pos = {v: i for i, v in enumerate(order)}
            bits = tuple(
                1 if g.has_edge(order[i], order[j]) else 0
                for i in range(g.n) for j in range(i + 1, g.n))
            if best[0] is None or bits < best[0]:
                best[0] = bits
            return
        for v in cells[target]:
            rest = [u for u in cells[target] if u != v]
            branched = cells[:target] + [[v], rest] + cells[target + 1:]
            descend(branched)

    descend(initial)
    return best[0]


def _pack_bits(bits: tuple) -> bytes:
    out = bytearray()
    acc = 0
    k = 0
    for b in bits:
        acc = (acc << 1) | b
        k += 1
        if k == 8:
            out.append(acc)
            acc, k = 0, 0
    if k:
        out.append(acc << (8 - k))
    return bytes(out)
