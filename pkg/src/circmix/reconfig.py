"""The recolouring graph as an implicit object: exhaustive mixing and
reachability oracles, locked/fixed vertex analysis, and the cycle-wind
decision procedure with extractable NO-certificates.

Two colourings are adjacent when they differ at exactly one vertex.  A graph
"mixes" at (p,q) when that state graph is connected.  For 2 < p/q < 4 this
is equivalent to every cycle having weight (|E|/2)*p under every colouring,
which is what the wind decider checks on a fundamental cycle basis (the
per-edge labels 2W-p and W_f-W_g are antisymmetric, so their cycle sums are
linear over the cycle space and a basis check is exact).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .circular import (CircularParams, Colouring, cycle_wind, edge_weight,
                       enumerate_colourings, require_ratio_open, validate_colouring,
                       walk_weight)
from .graphs import (Cycle, Graph, bipartition, fundamental_cycle_basis,
                     is_cycle_of)
from .kernels import DEFAULT_STATE_BUDGET, BudgetExceededError

__all__ = [
    "MixingVerdict", "NonMixingWitness", "FixedSetReport",
    "col_neighbours", "is_mixing_oracle", "is_reachable_oracle",
    "locked_vertices", "fixed_vertices", "is_reachable_characterized",
    "reachability_signature", "is_mixing_wind", "verify_witness",
    "BudgetExceededError",
]


@dataclass(frozen=True)
class NonMixingWitness:
    """A colouring plus a wrapped cycle: the concise NO-certificate.

    ``required`` is the exact value (|E(cycle)|/2)*p, a Fraction so that odd
    cycles (half-integer multiples of p) need no special casing.
    """

    colouring: Colouring
    cycle: Cycle
    weight: int
    required: Fraction


@dataclass(frozen=True)
class MixingVerdict:
    status: str  # "mixing" | "not-mixing" | "vacuous"
    state_count: Optional[int] = None  # None when the scan short-circuited
    component_count: Optional[int] = None
    witness: Optional[NonMixingWitness] = None
    split_pair: Optional[tuple] = None  # two Colourings in distinct components

    @property
    def mixing(self) -> bool:
        return self.status == "mixing"


@dataclass(frozen=True)
class FixedSetReport:
    fixed: frozenset
    method: str  # "oracle" | "tight-digraph"
    evidence: dict  # vertex -> tight walk (tight-digraph) or {} (oracle)


# ---------------------------------------------------------------------------
# Single-step structure.


def col_neighbours(f: Colouring) -> Iterator[Colouring]:
    """All proper colourings differing from f at exactly one vertex,
    ascending by (vertex, colour)."""
    g = f.host
    p = f.params.p
    for v in range(g.n):
        for c in range(p):
            if c == f.colours[v]:
                continue
            if all(f.params.compatible(c, f.colours[u]) for u in g.adjacency[v]):
                colours = list(f.colours)
                colours[v] = c
                yield Colouring(params=f.params, colours=tuple(colours), host=g)


def locked_vertices(f: Colouring) -> frozenset:
    """Vertices that cannot change colour in a single step (2 < p/q < 4).

    v is locked exactly when its incoming edge weights include both q and
    p-q: that is the two-neighbour pattern with both weights q (or both p-q)
    along some u -> v -> w orientation.
    """
    require_ratio_open(f.params)
    p, q = f.params.p, f.params.q
    out = set()
    for v in range(f.host.n):
        win = {edge_weight(f, u, v) for u in f.host.adjacency[v]}
        if q in win and (p - q) in win:
            out.add(v)
    return frozenset(out)


# ---------------------------------------------------------------------------
# State-space plumbing shared by the oracle operations.


def _state_table(g: Graph, params: CircularParams, budget: int, backend=None):
    states = kernels.enumerate_states(g, params.p, params.q, budget=budget,
                                      backend=backend)
    codes = kernels.state_codes(states, params.p)
    return states, codes


def _state_index(codes: np.ndarray, g: Graph, f: Colouring) -> int:
    code = int(kernels.state_codes(
        np.array([f.colours], dtype=np.int16), f.params.p)[0])
    i = int(np.searchsorted(codes, code))
    if i >= codes.size or codes[i] != code:
        raise ValueError("colouring is not a proper state of this instance")
    return i


def _colouring_at(states: np.ndarray, i: int, g: Graph,
                  params: CircularParams) -> Colouring:
    return Colouring(params=params, colours=tuple(int(x) for x in states[i]), host=g)


def is_mixing_oracle(g: Graph, params: CircularParams,
                     budget: int = DEFAULT_STATE_BUDGET,
                     backend=None) -> MixingVerdict:
    """Exact mixing decision by exhausting the recolouring graph.

    A graph with no proper colourings is reported "vacuous", distinct from
    "mixing".  On not-mixing, ``split_pair`` holds the lexicographically
    least state and the least state outside its component.
    """
    states, codes = _state_table(g, params, budget, backend)
    if states.shape[0] == 0:
        return MixingVerdict(status="vacuous", state_count=0)
    labels = kernels.component_labels(states, codes, g, params.p, params.q,
                                      backend=backend)
    ncomp = int(labels.max()) + 1
    if ncomp == 1:
        return MixingVerdict(status="mixing", state_count=states.shape[0],
                             component_count=1)
    j = int(np.argmax(labels != labels[0]))
    pair = (_colouring_at(states, 0, g, params),
            _colouring_at(states, j, g, params))
    return MixingVerdict(status="not-mixing", state_count=states.shape[0],
                         component_count=ncomp, split_pair=pair)


def is_reachable_oracle(f: Colouring, g: Colouring,
                        budget: int = DEFAULT_STATE_BUDGET,
                        backend=None):
    """BFS reachability; returns (flag, path of colourings f..g or None)."""
    _check_same_instance(f, g)
    host = f.host
    states, codes = _state_table(host, f.params, budget, backend)
    i = _state_index(codes, host, f)
    j = _state_index(codes, host, g)
    if i == j:
        return True, [f]
    visited, parent = kernels.bfs_tree(states, codes, host, f.params.p,
                                       f.params.q, i, target=j, backend=backend)
    if not visited[j]:
        return False, None
    idx_path = [j]
    while idx_path[-1] != i:
        idx_path.append(int(parent[idx_path[-1]]))
    idx_path.reverse()
    return True, [_colouring_at(states, k, host, f.params) for k in idx_path]


def _check_same_instance(f: Colouring, g: Colouring) -> None:
    if f.params != g.params:
        raise ValueError("colourings use different (p,q) parameters")
    if f.host != g.host:
        raise ValueError("colourings live on different host graphs")
    for col, name in ((f, "first"), (g, "second")):
        proper, bad = validate_colouring(col.host, col)
        if not proper:
            raise ValueError(f"{name} colouring is improper on edge {bad}")


# ---------------------------------------------------------------------------
# Fixed vertices.


def _tight_arcs(f: Colouring) -> dict:
    """Directed arcs u -> v where W(uv, f) == q."""
    q = f.params.q
    arcs = {v: [] for v in range(f.host.n)}
    for (u, v) in f.host.edges:
        if edge_weight(f, u, v) == q:
            arcs[u].append(v)
        if edge_weight(f, v, u) == q:
            arcs[v].append(u)
    return {v: sorted(ws) for v, ws in arcs.items()}


def _tight_fixed_set(f: Colouring):
    """Fixed-set reconstruction from the tight digraph.

    Vertices on directed tight cycles can never move (the first one to move
    would have to move while its cycle neighbours still hold their colours,
    but it is locked); vertices on directed tight paths between such
    vertices inherit the same freeze.  Returns (fixed set, evidence walks).
    """
    arcs = _tight_arcs(f)
    n = f.host.n
    scc_id = _kosaraju(arcs, n)
    size = {}
    for v in range(n):
        size[scc_id[v]] = size.get(scc_id[v], 0) + 1
    core = {v for v in range(n) if size[scc_id[v]] >= 2}
    fwd = _reach(arcs, core)
    rev_arcs = {v: [] for v in range(n)}
    for u, ws in arcs.items():
        for w in ws:
            rev_arcs[w].append(u)
    bwd = _reach(rev_arcs, core)
    fixed = fwd & bwd
    evidence = {}
    for v in sorted(fixed):
        if v in core:
            evidence[v] = _tight_cycle_through(arcs, scc_id, v)
        else:
            evidence[v] = _tight_path_through(arcs, rev_arcs, core, v)
    return frozenset(fixed), evidence


def _kosaraju(arcs: dict, n: int) -> list:
    order = []
    seen = [False] * n
    for s in range(n):
        if seen[s]:
            continue
        stack = [(s, iter(arcs[s]))]
        seen[s] = True
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if not seen[w]:
                    seen[w] = True
                    stack.append((w, iter(arcs[w])))
                    advanced = True
                    break
            if not advanced:
                order.append(u)
                stack.pop()
    rev = {v: [] for v in range(n)}
    for u, ws in arcs.items():
        for w in ws:
            rev[w].append(u)
    comp = [-1] * n
    c = 0
    for s in reversed(order):
        if comp[s] != -1:
            continue
        stack = [s]
        comp[s] = c
        while stack:
            u = stack.pop()
            for w in rev[u]:
                if comp[w] == -1:
                    comp[w] = c
                    stack.append(w)
        c += 1
    return comp


def _reach(arcs: dict, sources: set) -> set:
    seen = set(sources)
    queue = deque(sources)
    while queue:
        u = queue.popleft()
        for w in arcs[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def _tight_cycle_through(arcs: dict, scc_id: list, v: int) -> tuple:
    # BFS within v's strong component back to v.
    parent = {v: None}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        for w in arcs[u]:
            if scc_id[w] != scc_id[v]:
                continue
            if w == v:
                chain = [u]
                while parent[chain[-1]] is not None:
                    chain.append(parent[chain[-1]])
                chain.reverse()
                return tuple(chain) + (v,)
            if w not in parent:
                parent[w] = u
                queue.append(w)
    raise AssertionError("strong component of size >= 2 must contain a cycle")


def _tight_path_through(arcs: dict, rev_arcs: dict, core: set, v: int) -> tuple:
    back = _walk_to_core(rev_arcs, core, v)  # v .. core, following reversed arcs
    fwd = _walk_to_core(arcs, core, v)  # v .. core, following arcs
    return tuple(reversed(back)) + tuple(fwd[1:])


def _walk_to_core(arcs: dict, core: set, v: int) -> list:
    """BFS path [v, ..., c] following arcs until the first core vertex c."""
    parent = {v: None}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if u in core:
            walk = [u]
            while parent[walk[-1]] is not None:
                walk.append(parent[walk[-1]])
            walk.reverse()
            return walk
        for w in arcs[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    raise AssertionError("closure vertex must reach the tight core")


def fixed_vertices(f: Colouring, method: str = "tight-digraph",
                   budget: int = DEFAULT_STATE_BUDGET,
                   backend=None) -> FixedSetReport:
    """Vertices whose colour is constant over everything reachable from f.

    "oracle" walks f's whole component (exact by construction).
    "tight-digraph" reconstructs the set from weight-q arcs (fast); it is
    cross-checked against the oracle in the test suite rather than trusted.
    """
    proper, bad = validate_colouring(f.host, f)
    if not proper:
        raise ValueError(f"colouring is improper on edge {bad}")
    if method == "oracle":
        states, codes = _state_table(f.host, f.params, budget, backend)
        i = _state_index(codes, f.host, f)
        visited, _ = kernels.bfs_tree(states, codes, f.host, f.params.p,
                                      f.params.q, i, backend=backend)
        comp = states[visited]
        constant = np.all(comp == comp[0], axis=0)
        fixed = frozenset(int(v) for v in np.nonzero(constant)[0])
        return FixedSetReport(fixed=fixed, method="oracle", evidence={})
    if method == "tight-digraph":
        require_ratio_open(f.params)
        fixed, evidence = _tight_fixed_set(f)
        return FixedSetReport(fixed=fixed, method="tight-digraph",
                              evidence=evidence)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Reachability by characterization.


def _bfs_forest(g: Graph):
    """Deterministic BFS forest: (parent, component root) per vertex."""
    parent = [-1] * g.n
    root = [-1] * g.n
    order = []
    for s in range(g.n):
        if root[s] != -1:
            continue
        root[s] = s
        queue = deque([s])
        order.append(s)
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if root[v] == -1:
                    root[v] = s
                    parent[v] = u
                    queue.append(v)
                    order.append(v)
    return parent, root, order


def reachability_signature(f: Colouring, basis=None):
    """Everything the step-by-step reachability relation can distinguish:

    * the fixed vertex set with its images,
    * the weight of every fundamental cycle,
    * per component, tree-path weights from the least fixed vertex to every
      other fixed vertex (as differences of root-based path weights).

    Two colourings of the same instance are inter-reachable iff their
    signatures are equal (for 2 <= p/q < 4).
    """
    g = f.host
    if basis is None:
        basis = fundamental_cycle_basis(g)
    fixed, _ = _tight_fixed_set(f)
    images = tuple((v, f.colours[v]) for v in sorted(fixed))
    cycle_weights = tuple(
        sum(edge_weight(f, a, b) for a, b in c.directed_edges())
        for c in basis.fundamental)
    parent, root, order = _bfs_forest(g)
    phi = [0] * g.n
    for v in order:
        if parent[v] != -1:
            phi[v] = phi[parent[v]] + edge_weight(f, parent[v], v)
    anchor = {}
    for v in sorted(fixed):
        anchor.setdefault(root[v], v)
    deltas = tuple((v, phi[v] - phi[anchor[root[v]]]) for v in sorted(fixed))
    return fixed, images, cycle_weights, deltas


def is_reachable_characterized(f: Colouring, g: Colouring) -> bool:
    """Reachability for 2 <= p/q < 4 without searching the state space."""
    _check_same_instance(f, g)
    r = f.params.ratio
    if not (2 <= r < 4):
        raise ValueError(f"characterization needs 2 <= p/q < 4, got {r}")
    basis = fundamental_cycle_basis(f.host)
    return reachability_signature(f, basis) == reachability_signature(g, basis)


# ---------------------------------------------------------------------------
# The wind decider and its certificates.


def _chordless_shrink(f: Colouring, vertices: tuple) -> tuple:
    """Shrink a wrapped cycle across chords until chordless, staying wrapped.

    Splitting a wrapped cycle at a chord leaves at least one wrapped part;
    we keep the shorter wrapped part each time.
    """
    g = f.host
    p = f.params.p
    current = tuple(vertices)
    while True:
        pos = {v: i for i, v in enumerate(current)}
        k = len(current)
        chord = None
        for (a, b) in sorted(g.edges):
            ia, ib = pos.get(a), pos.get(b)
            if ia is None or ib is None:
                continue
            if (ia - ib) % k in (1, k - 1):
                continue
            chord = (ia, ib)
            break
        if chord is None:
            return current
        s, t = chord
        part1 = tuple(current[(s + j) % k] for j in range(((t - s) % k) + 1))
        part2 = tuple(current[(t + j) % k] for j in range(((s - t) % k) + 1))
        candidates = []
        for part in (part1, part2):
            cyc = part  # closed by the chord edge
            w = walk_weight(f, cyc) + edge_weight(f, cyc[-1], cyc[0])
            if 2 * w != len(cyc) * p:
                candidates.append((len(cyc), cyc))
        if not candidates:
            raise AssertionError("wrapped cycle split left no wrapped part")
        candidates.sort(key=lambda x: x[0])
        current = candidates[0][1]


def _make_witness(f: Colouring, vertices: tuple) -> NonMixingWitness:
    shrunk = _chordless_shrink(f, vertices)
    cycle = Cycle.from_vertices(shrunk)
    report = cycle_wind(f, cycle)
    required = Fraction(len(cycle) * f.params.p, 2)
    if report.weight == required:
        raise AssertionError("witness cycle is not wrapped")
    return NonMixingWitness(colouring=f, cycle=cycle, weight=report.weight,
                            required=required)


def _shortest_odd_cycle(g: Graph) -> tuple:
    best = None
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] + 1 >= len(best):
                break
            for v in g.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v and dist[v] == dist[u]:
                    pu, pv = [u], [v]
                    while pu[-1] != -1:
                        pu.append(parent[pu[-1]])
                    while pv[-1] != -1:
                        pv.append(parent[pv[-1]])
                    pu, pv = pu[:-1], pv[:-1]
                    common = set(pu) & set(pv)
                    iu = next(i for i, x in enumerate(pu) if x in common)
                    iv = next(i for i, x in enumerate(pv) if x in common)
                    vs = pu[: iu + 1] + list(reversed(pv[:iv]))
                    if len(vs) % 2 == 1 and len(set(vs)) == len(vs):
                        if best is None or len(vs) < len(best):
                            best = vs
        if best is not None and len(best) == 3:
            break
    if best is None:
        raise AssertionError("graph claimed non-bipartite but no odd cycle found")
    return tuple(best)


def is_mixing_wind(g: Graph, params: CircularParams,
                   budget: int = DEFAULT_STATE_BUDGET,
                   backend=None) -> MixingVerdict:
    """Mixing via the cycle-wind characterization (2 < p/q < 4).

    Scans every proper colouring; any fundamental cycle whose weight misses
    (|E|/2)*p yields a wrapped cycle, shrunk across chords into a concise
    witness.  Non-bipartite colourable inputs short-circuit through an odd
    cycle, which is always wrapped.  The reported witness is deterministic:
    lexicographically least colouring, then shortest unbalanced basis cycle.
    """
    require_ratio_open(params)
    bip = bipartition(g)
    if not bip.valid:
        f0 = next(enumerate_colourings(g, params), None)
        if f0 is None:
            return MixingVerdict(status="vacuous", state_count=0)
        witness = _make_witness(f0, _shortest_odd_cycle(g))
        return MixingVerdict(status="not-mixing", witness=witness)
    states, codes = _state_table(g, params, budget, backend)
    if states.shape[0] == 0:
        return MixingVerdict(status="vacuous", state_count=0)
    basis = fundamental_cycle_basis(g)
    if not basis.fundamental:
        return MixingVerdict(status="mixing", state_count=states.shape[0])
    hit = kernels.first_unbalanced_state(states, params.p, basis.fundamental)
    if hit is None:
        return MixingVerdict(status="mixing", state_count=states.shape[0])
    idx, cyc_positions = hit
    f = _colouring_at(states, idx, g, params)
    unbalanced = [basis.fundamental[j] for j in cyc_positions]
    unbalanced.sort(key=lambda c: (len(c), c.vertices))
    witness = _make_witness(f, unbalanced[0].vertices)
    return MixingVerdict(status="not-mixing", state_count=states.shape[0],
                         witness=witness)


def verify_witness(w: NonMixingWitness):
    """Re-validate a witness from scratch; returns (ok, failed check names).

    Checks: colouring properness, cycle membership in the host, the weight
    arithmetic, the required value, and wrappedness.
    """
    failures = []
    g = w.colouring.host
    p = w.colouring.params.p
    proper, _ = validate_colouring(g, w.colouring)
    if not proper:
        failures.append("colouring-improper")
    if not is_cycle_of(g, w.cycle.vertices):
        failures.append("not-a-cycle")
    else:
        if proper:
            weight = sum(edge_weight(w.colouring, a, b)
                         for a, b in w.cycle.directed_edges())
            if weight != w.weight:
                failures.append("weight-mismatch")
        if w.required != Fraction(len(w.cycle) * p, 2):
            failures.append("required-mismatch")
        if not failures and Fraction(w.weight) == w.required:
            failures.append("not-wrapped")
    return not failures, failures
