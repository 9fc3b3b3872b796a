"""Named graph generators, most with hand-laid planar rotation systems.

Rotation systems come from explicit coordinates (plus angle overrides for
curved edges), with neighbours sorted counterclockwise, and are validated by
the face traversal's Euler check in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .circular import CircularParams, circular_clique
from .graphs import Graph, build_graph
from .planar import RotationSystem, faces


@dataclass(frozen=True)
class GeneratedGraph:
    name: str
    graph: Graph
    rotation: Optional[RotationSystem] = None


def _rotation_from_positions(g: Graph, pos: dict, overrides=None) -> tuple:
    overrides = overrides or {}

    def angle(v, w):
        if (v, w) in overrides:
            return overrides[(v, w)] % 360
        dx = pos[w][0] - pos[v][0]
        dy = pos[w][1] - pos[v][1]
        return math.degrees(math.atan2(dy, dx)) % 360

    return tuple(
        tuple(sorted(g.adjacency[v], key=lambda w: (angle(v, w), w)))
        for v in range(g.n))


def cycle_graph(length: int) -> GeneratedGraph:
    if length < 3:
        raise ValueError("cycles need length >= 3")
    g = build_graph(length, [(i, (i + 1) % length) for i in range(length)])
    pos = {i: (math.cos(2 * math.pi * i / length),
               math.sin(2 * math.pi * i / length)) for i in range(length)}
    rot = RotationSystem(rotation=_rotation_from_positions(g, pos))
    return GeneratedGraph(name=f"cycle-{length}", graph=g, rotation=rot)


def clique_graph(params: CircularParams) -> GeneratedGraph:
    g = circular_clique(params)
    return GeneratedGraph(name=f"clique-{params.p}-{params.q}", graph=g)


def grid_graph(rows: int, cols: int) -> GeneratedGraph:
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    vid = lambda r, c: r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    g = build_graph(rows * cols, edges)
    pos = {vid(r, c): (c, -r) for r in range(rows) for c in range(cols)}
    rot = RotationSystem(rotation=_rotation_from_positions(g, pos))
    return GeneratedGraph(name=f"grid-{rows}x{cols}", graph=g, rotation=rot)


def cube_graph() -> GeneratedGraph:
    """The 3-cube: outer square 0..3, inner square 4..7, four spokes."""
    edges = [(i, (i + 1) % 4) for i in range(4)]
    edges += [(4 + i, 4 + (i + 1) % 4) for i in range(4)]
    edges += [(i, i + 4) for i in range(4)]
    g = build_graph(8, edges)
    pos = {}
    for i in range(4):
        a = math.pi / 2 * i
        pos[i] = (2 * math.cos(a), 2 * math.sin(a))
        pos[4 + i] = (math.cos(a), math.sin(a))
    rot = RotationSystem(rotation=_rotation_from_positions(g, pos))
    return GeneratedGraph(name="cube", graph=g, rotation=rot)


def theta_graph(l1: int, l2: int, l3: int) -> GeneratedGraph:
    """Two hub vertices joined by three internally disjoint paths of the
    given lengths (each >= 2 so the graph stays simple)."""
    lengths = (l1, l2, l3)
    if any(l < 2 for l in lengths):
        raise ValueError("theta path lengths must be >= 2")
    edges = []
    pos = {0: (0.0, 0.0), 1: (4.0, 0.0)}
    nxt = 2
    for i, l in enumerate(lengths):
        prev = 0
        y = 1.0 - i
        for j in range(1, l):
            pos[nxt] = (4.0 * j / l, y)
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    g = build_graph(nxt, edges)
    rot = RotationSystem(rotation=_rotation_from_positions(g, pos))
    return GeneratedGraph(name=f"theta-{l1}-{l2}-{l3}", graph=g, rotation=rot)


def c4_pinch_graph() -> GeneratedGraph:
    """A 4-cycle 0-1-2-3 with vertex 4 inside and vertex 5 outside, both
    adjacent to the opposite pair 0 and 2; the smallest graph with a
    separating 4-cycle."""
    g = build_graph(6, [(0, 1), (1, 2), (2, 3), (3, 0),
                        (0, 4), (2, 4), (0, 5), (2, 5)])
    pos = {0: (0, 1), 1: (1, 0), 2: (0, -1), 3: (-1, 0), 4: (0, 0), 5: (2.5, 0)}
    overrides = {(0, 5): 338, (2, 5): 22, (5, 0): 158, (5, 2): 202}
    rotation = _rotation_from_positions(g, pos, overrides)
    fs = faces(g, RotationSystem(rotation=rotation))
    # every face is a square; pin the outer one so 4 sits inside and 5 outside
    outer = next(i for i, w in enumerate(fs.faces) if set(w) == {0, 2, 3, 5})
    rot = RotationSystem(rotation=rotation, outer=outer)
    return GeneratedGraph(name="c4-pinch", graph=g, rotation=rot)


def pinched_octagon() -> GeneratedGraph:
    """An 8-cycle (vertices 0..7), a hub 8 outside adjacent to the even side,
    and a path 0-9-10-11-12-13-4 of length six drawn inside.

    The interior of the 8-cycle (cycle plus path) has two 10-faces, yet the
    full graph folds down to the 8-cycle through its dominated vertices; it
    is the standard example that splitting along longer separating cycles
    is unsound below ratio 3.
    """
    edges = [(i, (i + 1) % 8) for i in range(8)]
    edges += [(8, 0), (8, 2), (8, 4), (8, 6)]
    edges += [(0, 9), (9, 10), (10, 11), (11, 12), (12, 13), (13, 4)]
    g = build_graph(14, edges)
    pos = {}
    for i in range(8):
        a = math.radians(90 - 45 * i)
        pos[i] = (1.5 * math.cos(a), 1.5 * math.sin(a))
    pos[8] = (-3.0, 0.0)
    for j in range(5):
        pos[9 + j] = (0.0, 1.0 - 0.5 * j)
    overrides = {(8, 0): 45, (8, 6): 0, (8, 4): 315, (8, 2): 270,
                 (0, 8): 135, (4, 8): 225, (2, 8): 315}
    rotation = _rotation_from_positions(g, pos, overrides)
    fs = faces(g, RotationSystem(rotation=rotation))
    outer = next(i for i, w in enumerate(fs.faces) if set(w) == {0, 1, 2, 8})
    rot = RotationSystem(rotation=rotation, outer=outer)
    return GeneratedGraph(name="pinched-octagon", graph=g, rotation=rot)


def mirror_rotation(rot: RotationSystem) -> RotationSystem:
    """Reverse every cyclic order: the reflected embedding, always valid."""
    return RotationSystem(rotation=tuple(tuple(reversed(r)) for r in rot.rotation),
                          outer=None)
