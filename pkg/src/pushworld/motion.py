"""Movement graphs and the geometric queries backing the planner heuristic.

A movement graph holds every collision-free anchor position of one object,
considering only walls and the grid boundary (movable objects are ignored, so
the graph is state independent and built once per puzzle).  Shortest path
lengths are served from resumable backward breadth-first frontiers, one per
query target, so repeated queries against the same target reuse all prior
expansion work.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .core import ACTIONS, AGENT_INDEX, Action, Cell, Puzzle, Shape

INF = math.inf

_STEPS = tuple(a.value for a in ACTIONS)


@dataclass(frozen=True)
class MovementGraph:
    """Collision-free anchor positions of one object, with implicit unit edges."""

    object_index: int
    nodes: frozenset[Cell]
    _succ: dict[Cell, tuple[Cell, ...]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        nodes = self.nodes
        succ = self._succ
        for x, y in nodes:
            succ[(x, y)] = tuple(
                (x + dx, y + dy) for dx, dy in _STEPS if (x + dx, y + dy) in nodes
            )

    def successors(self, position: Cell) -> tuple[Cell, ...]:
        """Adjacent nodes in L, R, U, D order; empty for non-nodes."""
        return self._succ.get(position, ())

    def has_edge(self, a: Cell, b: Cell) -> bool:
        return a in self.nodes and b in self.nodes and (
            abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
        )


def build_movement_graph(puzzle: Puzzle, object_index: int) -> MovementGraph:
    """All anchors where the object overlaps no wall and stays in bounds.

    The agent's graph additionally avoids agent-only walls.  An empty node
    set is legal (a landlocked object simply has no moves).
    """
    shape = puzzle.shape(object_index)
    blocked = puzzle.walls
    if object_index == AGENT_INDEX:
        blocked = blocked | puzzle.agent_walls
    xs = [c[0] for c in shape.cells]
    ys = [c[1] for c in shape.cells]
    nodes = set()
    for px in range(-min(xs), puzzle.width - max(xs)):
        for py in range(-min(ys), puzzle.height - max(ys)):
            if all((px + cx, py + cy) not in blocked for cx, cy in shape.cells):
                nodes.add((px, py))
    return MovementGraph(object_index, frozenset(nodes))


class PathLengthCache:
    """Exact unweighted shortest path lengths with resumable BFS frontiers.

    One backward frontier per (object, target); a query expands the frontier
    only until the source gets a distance label, and later queries continue
    from there.  Labels never change once assigned.
    """

    def __init__(self, graphs: Mapping[int, MovementGraph]):
        self._graphs = graphs
        self._frontiers: dict[tuple[int, Cell], tuple[dict[Cell, float], deque]] = {}

    def shortest_path_length(self, object_index: int, source: Cell, target: Cell) -> float:
        graph = self._graphs[object_index]
        nodes = graph.nodes
        if source not in nodes or target not in nodes:
            return INF
        key = (object_index, target)
        frontier = self._frontiers.get(key)
        if frontier is None:
            frontier = ({target: 0}, deque([target]))
            self._frontiers[key] = frontier
        dist, queue = frontier
        found = dist.get(source)
        if found is not None:
            return found
        succ = graph.successors
        while queue:
            p = queue.popleft()
            d = dist[p] + 1
            for q in succ(p):
                if q not in dist:
                    dist[q] = d
                    queue.append(q)
            if source in dist:
                return dist[source]
        return INF


@lru_cache(maxsize=None)
def _pushing_offsets(
    pushee_cells: frozenset[Cell], pusher_cells: frozenset[Cell], step: Cell
) -> frozenset[Cell]:
    dx, dy = step
    candidates = {
        (ex - cx - dx, ey - cy - dy)
        for cx, cy in pusher_cells
        for ex, ey in pushee_cells
    }
    out = set()
    for ox, oy in candidates:
        placed = {(cx + ox, cy + oy) for cx, cy in pusher_cells}
        if placed.isdisjoint(pushee_cells):
            out.add((ox, oy))
    return frozenset(out)


def relative_pushing_positions(
    pushee: Shape, pusher: Shape, action: Action
) -> frozenset[Cell]:
    """Anchor offsets (pusher relative to pushee) from which one unit move
    in the given direction transmits motion to the pushee.

    An offset qualifies when the pusher placed there does not overlap the
    pushee but does overlap it after stepping.  Memoized on the shape pair
    and direction.
    """
    return _pushing_offsets(pushee.cells, pusher.cells, action.value)


def pushing_offsets(pushee: Shape, pusher: Shape, step: Cell) -> frozenset[Cell]:
    """Same as relative_pushing_positions with the direction as a raw step."""
    return _pushing_offsets(pushee.cells, pusher.cells, step)
