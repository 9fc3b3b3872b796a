"""Hot kernels for colouring-state enumeration and recolouring-graph search.

States are colour vectors packed into int16 rows; a state's code is its
mixed-radix value with vertex 0 as the most significant digit, so ascending
codes equal lexicographic order.  Every kernel has two implementations:

* a numba @njit path (default when numba imports), and
* a pure-numpy fallback,

selected by the CIRCMIX_BACKEND environment variable ("numba" or "numpy") or
per call via the ``backend=`` argument.  Both paths produce identical arrays,
including identical BFS parent trees (first discoverer = lowest state index
within a level), and tests hold them to that.

``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(f):
            return f

        return wrap


DEFAULT_STATE_BUDGET = 10_000_000


class BudgetExceededError(RuntimeError):
    """State-count budget hit; never a silent approximation."""


def selected_backend(override=None) -> str:
    """Resolve the kernel backend: explicit arg, then env, then availability."""
    backend = override or os.environ.get("CIRCMIX_BACKEND", "").strip().lower()
    if backend == "":
        backend = "numba" if HAVE_NUMBA else "numpy"
    if backend not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    return backend


def compat_table(p: int, q: int) -> np.ndarray:
    """(p, p) boolean table: colours at circular distance >= q."""
    x = np.arange(p)
    d = np.abs(x[:, None] - x[None, :])
    d = np.minimum(d, p - d)
    return d >= q


def adjacency_csr(g) -> tuple:
    """Graph adjacency as CSR (indptr, indices), both int32."""
    indptr = np.zeros(g.n + 1, dtype=np.int32)
    for v in range(g.n):
        indptr[v + 1] = indptr[v] + len(g.adjacency[v])
    indices = np.empty(indptr[-1], dtype=np.int32)
    for v in range(g.n):
        indices[indptr[v]:indptr[v + 1]] = g.adjacency[v]
    return indptr, indices


def digit_weights(n: int, p: int) -> np.ndarray:
    """Mixed-radix digit weights; vertex 0 most significant."""
    if n * np.log2(max(p, 2)) > 62:
        raise BudgetExceededError(
            f"state codes for n={n}, p={p} exceed 63 bits; instance too large")
    w = np.empty(n, dtype=np.int64)
    acc = 1
    for v in range(n - 1, -1, -1):
        w[v] = acc
        acc *= p
    return w


def state_codes(states: np.ndarray, p: int) -> np.ndarray:
    n = states.shape[1]
    return states.astype(np.int64) @ digit_weights(n, p)


# ---------------------------------------------------------------------------
# Proper-state enumeration (lexicographic).


def enumerate_states(g, p: int, q: int, budget: int = DEFAULT_STATE_BUDGET,
                     backend=None) -> np.ndarray:
    """All proper colour vectors of g at (p,q), lexicographic, shape (S, n)."""
    if g.n == 0:
        return np.zeros((1, 0), dtype=np.int16)
    digit_weights(g.n, p)  # reject instances whose codes would overflow
    compat = compat_table(p, q)
    indptr, indices = adjacency_csr(g)
    if selected_backend(backend) == "numba":
        return _enumerate_numba(g.n, p, indptr, indices, compat, budget)
    return _enumerate_numpy(g.n, p, indptr, indices, compat, budget)


def _enumerate_numpy(n, p, indptr, indices, compat, budget):
    states = np.arange(p, dtype=np.int16).reshape(p, 1)
    for v in range(1, n):
        if states.shape[0] == 0:
            return np.zeros((0, n), dtype=np.int16)
        earlier = [u for u in indices[indptr[v]:indptr[v + 1]] if u < v]
        ok = np.ones((states.shape[0], p), dtype=bool)
        for u in earlier:
            ok &= compat[states[:, u], :]
        rows, cols = np.nonzero(ok)  # row-major: preserves lexicographic order
        if rows.shape[0] > budget:
            raise BudgetExceededError(
                f"more than {budget} partial states at vertex {v}")
        states = np.concatenate(
            [states[rows], cols.astype(np.int16).reshape(-1, 1)], axis=1)
    if states.shape[0] > budget:
        raise BudgetExceededError(f"more than {budget} proper states")
    return states


@njit(cache=True)
def _enumerate_numba(n, p, indptr, indices, compat, budget):
    cap = 1024
    out = np.empty((cap, n), dtype=np.int16)
    count = 0
    assignment = np.zeros(n, dtype=np.int16)
    colour = np.zeros(n, dtype=np.int16)  # next colour to try per level
    v = 0
    while v >= 0:
        placed = False
        c = colour[v]
        while c < p:
            good = True
            for k in range(indptr[v], indptr[v + 1]):
                u = indices[k]
                if u < v and not compat[assignment[u], c]:
                    good = False
                    break
            if good:
                assignment[v] = c
                colour[v] = c + 1
                placed = True
                break
            c += 1
        if not placed:
            colour[v] = 0
            v -= 1
            continue
        if v + 1 == n:
            if count == cap:
                cap *= 2
                grown = np.empty((cap, n), dtype=np.int16)
                grown[:count] = out[:count]
                out = grown
            out[count] = assignment
            count += 1
            if count > budget:
                raise BudgetExceededError("proper state budget exceeded")
        else:
            v += 1
    return out[:count].copy()


# ---------------------------------------------------------------------------
# BFS over the recolouring graph (states adjacent when they differ at one
# vertex).  Level-synchronous with sorted frontiers so both backends build
# the same shortest-path tree: a state's parent is its lowest-index
# discoverer in the previous level.


def bfs_tree(states, codes, g, p: int, q: int, start: int, target: int = -1,
             backend=None) -> tuple:
    """Return (visited bool[S], parent int64[S]) for BFS from ``start``.

    Stops early once ``target`` (if >= 0) has been assigned a parent and its
    level is complete.  parent[start] == -1.
    """
    compat = compat_table(p, q)
    indptr, indices = adjacency_csr(g)
    powv = digit_weights(g.n, p)
    if selected_backend(backend) == "numba":
        return _bfs_numba(states, codes, indptr, indices, compat, powv,
                          np.int64(p), np.int64(start), np.int64(target))
    return _bfs_numpy(states, codes, indptr, indices, compat, powv, p, start, target)


def _bfs_numpy(states, codes, indptr, indices, compat, powv, p, start, target):
    S, n = states.shape
    visited = np.zeros(S, dtype=bool)
    parent = np.full(S, -1, dtype=np.int64)
    visited[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        if target >= 0 and visited[target]:
            break
        ts, ss = [], []
        for v in range(n):
            nbrs = indices[indptr[v]:indptr[v + 1]]
            digits = states[frontier, v]
            for c in range(p):
                ok = digits != c
                for u in nbrs:
                    ok &= compat[states[frontier, u], c]
                if not ok.any():
                    continue
                src = frontier[ok]
                tcode = codes[src] + (np.int64(c) - digits[ok].astype(np.int64)) * powv[v]
                tidx = np.searchsorted(codes, tcode)
                if tidx.size and (tidx.max() >= codes.size
                                  or not np.array_equal(codes[tidx], tcode)):
                    raise AssertionError("recolouring produced an unknown state")
                keep = ~visited[tidx]
                ts.append(tidx[keep])
                ss.append(src[keep])
        if not ts:
            break
        t_all = np.concatenate(ts)
        if t_all.size == 0:
            break
        s_all = np.concatenate(ss)
        order = np.lexsort((s_all, t_all))
        t_all, s_all = t_all[order], s_all[order]
        first = np.ones(t_all.size, dtype=bool)
        first[1:] = t_all[1:] != t_all[:-1]
        t_new, s_new = t_all[first], s_all[first]
        visited[t_new] = True
        parent[t_new] = s_new
        frontier = t_new  # already sorted ascending by the lexsort
    return visited, parent


@njit(cache=True)
def _bfs_numba(states, codes, indptr, indices, compat, powv, p, start, target):
    S, n = states.shape
    visited = np.zeros(S, dtype=np.bool_)
    parent = np.full(S, -1, dtype=np.int64)
    visited[start] = True
    frontier = np.empty(S, dtype=np.int64)
    frontier[0] = start
    fsize = 1
    nxt = np.empty(S, dtype=np.int64)
    while fsize > 0:
        if target >= 0 and visited[target]:
            break
        nsize = 0
        for fi in range(fsize):
            s = frontier[fi]
            code = codes[s]
            for v in range(n):
                digit = states[s, v]
                for c in range(p):
                    if c == digit:
                        continue
                    good = True
                    for k in range(indptr[v], indptr[v + 1]):
                        if not compat[states[s, indices[k]], c]:
                            good = False
                            break
                    if not good:
                        continue
                    tcode = code + (c - digit) * powv[v]
                    lo, hi = 0, S
                    while lo < hi:
                        mid = (lo + hi) // 2
                        if codes[mid] < tcode:
                            lo = mid + 1
                        else:
                            hi = mid
                    if lo >= S or codes[lo] != tcode:
                        raise AssertionError("recolouring produced an unknown state")
                    if not visited[lo]:
                        visited[lo] = True
                        parent[lo] = s
                        nxt[nsize] = lo
                        nsize += 1
        frontier[:nsize] = np.sort(nxt[:nsize])
        fsize = nsize
    return visited, parent


def component_labels(states, codes, g, p: int, q: int, backend=None) -> np.ndarray:
    """Connected-component label per state; component ids are assigned in
    order of each component's lowest state index."""
    S = states.shape[0]
    labels = np.full(S, -1, dtype=np.int64)
    comp = 0
    for i in range(S):
        if labels[i] >= 0:
            continue
        visited, _ = bfs_tree(states, codes, g, p, q, i, backend=backend)
        labels[visited] = comp
        comp += 1
    return labels


# ---------------------------------------------------------------------------
# Vectorized per-colouring cycle-weight sums (shared by both backends; this
# is already plain array math).


def cycle_weight_sums(states: np.ndarray, p: int, cycle) -> np.ndarray:
    """W(C, f) for every state row, along the stored orientation of C."""
    vs = cycle.vertices
    tails = np.array(vs, dtype=np.int64)
    heads = np.array([vs[(i + 1) % len(vs)] for i in range(len(vs))], dtype=np.int64)
    w = (states[:, heads].astype(np.int64) - states[:, tails].astype(np.int64)) % p
    return w.sum(axis=1)


def first_unbalanced_state(states: np.ndarray, p: int, cycles,
                           chunk: int = 1 << 16):
    """First (state index, cycle position) whose cycle weight misses
    (|E|/2)*p, scanning states lexicographically; None if all balanced.

    Cycles must all be even; chunked to keep memory flat.
    """
    S = states.shape[0]
    cy = list(cycles)
    required = [(len(c) // 2) * p for c in cy]
    for c in cy:
        if len(c) % 2 != 0:
            raise ValueError("balance scan expects even cycles")
    for lo in range(0, S, chunk):
        block = states[lo:lo + chunk]
        any_bad = np.zeros(block.shape[0], dtype=bool)
        bad_per_cycle = []
        for j, c in enumerate(cy):
            bad = cycle_weight_sums(block, p, c) != required[j]
            bad_per_cycle.append(bad)
            any_bad |= bad
        if any_bad.any():
            i = int(np.argmax(any_bad))
            cyc = [j for j in range(len(cy)) if bad_per_cycle[j][i]]
            return lo + i, cyc
    return None
