"""Circular cliques, (p,q)-colourings, edge/walk/cycle weights and winds.

A (p,q)-colouring assigns each vertex a colour in 0..p-1 so that adjacent
colours are at circular distance at least q (equivalently the mod-p colour
difference lies in [q, p-q]).  Parameters are kept literally, never reduced
by gcd: the recolouring state space of (6,2) differs from (3,1) even though
the targets are homomorphically equivalent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .graphs import Cycle, Graph, build_graph


@dataclass(frozen=True)
class CircularParams:
    p: int
    q: int

    def __post_init__(self):
        if self.q <= 0 or self.p <= 0:
            raise ValueError("p and q must be positive integers")
        if self.p < 2 * self.q:
            raise ValueError(f"need p/q >= 2, got {self.p}/{self.q}")

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.p, self.q)

    def circular_distance(self, x: int, y: int) -> int:
        d = abs(x - y) % self.p
        return min(d, self.p - d)

    def compatible(self, x: int, y: int) -> bool:
        return self.circular_distance(x, y) >= self.q

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


def require_ratio_open(params: CircularParams) -> None:
    """Guard for results that hold only for 2 < p/q < 4."""
    r = params.ratio
    if not (2 < r < 4):
        raise ValueError(f"p/q must lie strictly between 2 and 4, got {r}")


@dataclass(frozen=True)
class Colouring:
    """Total colour assignment for a host graph under fixed (p,q)."""

    params: CircularParams
    colours: tuple
    host: Graph

    def __post_init__(self):
        if len(self.colours) != self.host.n:
            raise ValueError("colouring must assign every vertex exactly once")
        for v, c in enumerate(self.colours):
            if not (0 <= c < self.params.p):
                raise ValueError(f"colour {c} of vertex {v} outside 0..{self.params.p - 1}")

    def __getitem__(self, v: int) -> int:
        return self.colours[v]


def circular_clique(params: CircularParams) -> Graph:
    """The graph on 0..p-1 with edges between colours at circular distance
    in [q, p-q]."""
    p = params.p
    edges = [(u, v) for u in range(p) for v in range(u + 1, p)
             if params.compatible(u, v)]
    return build_graph(p, edges)


def validate_colouring(g: Graph, f: Colouring):
    """Return (proper, violating_edge); the first bad edge in sorted order."""
    if f.host is not g and f.host != g:
        raise ValueError("colouring was built for a different host graph")
    for (u, v) in sorted(g.edges):
        if not f.params.compatible(f.colours[u], f.colours[v]):
            return False, (u, v)
    return True, None


def edge_weight(f: Colouring, u: int, v: int) -> int:
    """Directed weight of the edge u->v: (f(v) - f(u)) mod p, in (0, p)."""
    if not f.host.has_edge(u, v):
        raise ValueError(f"({u},{v}) is not an edge of the host")
    return (f.colours[v] - f.colours[u]) % f.params.p


def walk_weight(f: Colouring, walk) -> int:
    """Sum of directed edge weights along a walk (consecutive vertices adjacent)."""
    walk = list(walk)
    if len(walk) < 2:
        return 0
    total = 0
    for a, b in zip(walk, walk[1:]):
        total += edge_weight(f, a, b)
    return total


@dataclass(frozen=True)
class WindReport:
    cycle: Cycle
    weight: int
    wind: int
    required: Optional[int]  # (|E|/2)*p when the cycle is even, else None
    wrapped: bool


def cycle_wind(f: Colouring, c: Cycle) -> WindReport:
    """Weight and wind of a cycle under f; a cycle is wrapped when its weight
    differs from half the edge count times p (odd cycles always are)."""
    p = f.params.p
    weight = 0
    for (a, b) in c.directed_edges():
        weight += edge_weight(f, a, b)
    if weight % p != 0:
        raise AssertionError("cycle weight not divisible by p; weights are corrupt")
    wind = weight // p
    length = len(c)
    if length % 2 == 0:
        required = (length // 2) * p
        wrapped = weight != required
    else:
        required = None
        wrapped = True
    return WindReport(cycle=c, weight=weight, wind=wind, required=required, wrapped=wrapped)


def enumerate_colourings(g: Graph, params: CircularParams) -> Iterator[Colouring]:
    """Stream every proper colouring in lexicographic colour-vector order.

    Backtracking with forward checking on the circular interval constraint;
    meant for desk-scale graphs (the empty stream means uncolourable).
    """
    n = g.n
    p = params.p
    if n == 0:
        yield Colouring(params=params, colours=(), host=g)
        return
    earlier = [tuple(u for u in g.adjacency[v] if u < v) for v in range(n)]
    assignment = [0] * n

    def assign(v: int) -> Iterator[Colouring]:
        for c in range(p):
            if all(params.compatible(assignment[u], c) for u in earlier[v]):
                assignment[v] = c
                if v + 1 == n:
                    yield Colouring(params=params, colours=tuple(assignment), host=g)
                else:
                    yield from assign(v + 1)

    yield from assign(0)


def shift(f: Colouring, c: int) -> Colouring:
    """Add c (mod p) to every colour; preserves every edge weight."""
    p = f.params.p
    return Colouring(params=f.params,
                     colours=tuple((x + c) % p for x in f.colours),
                     host=f.host)


def reflect(f: Colouring) -> Colouring:
    """Map every colour x to (p - x) mod p; sends each edge weight w to p-w."""
    p = f.params.p
    return Colouring(params=f.params,
                     colours=tuple((p - x) % p for x in f.colours),
                     host=f.host)


def transform(f: Colouring, kind: str, amount: int = 1) -> Colouring:
    """Colour-symmetry transforms: kind is 'shift' (with amount) or 'reflect'."""
    if kind == "shift":
        return shift(f, amount)
    if kind == "reflect":
        return reflect(f)
    raise ValueError(f"unknown transform {kind!r}")
