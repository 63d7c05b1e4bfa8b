"""Recursive graph distance heuristic.

The cost of a goal is estimated as the sum, over goal objects, of the cost
to bring each object to its goal anchor.  Moving an object one step costs
the graph distance of the remaining path plus the (recursively estimated)
cost of bringing some other object into a pushing position behind it; only
the first step of each pusher is charged recursively, so the estimate is
neither an upper nor a lower bound on the true plan length.

The recursion is branch-and-bound: ``pushing_cost`` receives an upper bound
and returns it unchanged when no candidate beats it, so callers may assign
its result without re-taking a minimum.  A recursion depth cap keeps the
worst case polynomial; the cap is raised one level at a time until the
estimate is finite or the cap reaches the object count.
"""
from __future__ import annotations

import math
from typing import Sequence

from .core import AGENT_INDEX, Cell, Puzzle, State
from .motion import (
    MovementGraph,
    PathLengthCache,
    build_movement_graph,
    pushing_offsets,
)

INF = math.inf


class HeuristicContext:
    """Per-search caches: movement graphs, path frontiers, pusher-distance memo.

    A context belongs to exactly one search; everything cached is state
    independent, so warm caches always return the same values as a fresh
    context.
    """

    def __init__(self, puzzle: Puzzle, max_recursion_depth: int | None = None):
        self.puzzle = puzzle
        self.graphs: dict[int, MovementGraph] = {
            i: build_movement_graph(puzzle, i) for i in range(len(puzzle.objects))
        }
        self.paths = PathLengthCache(self.graphs)
        # (pusher, pushee, pushee anchor, pusher next anchor, step) -> distance
        self.pair_cache: dict[tuple, float] = {}
        self.max_recursion_depth = (
            max_recursion_depth if max_recursion_depth is not None else len(puzzle.objects)
        )
        self.goal_items = puzzle.goal_items
        self.evals = 0


def rgd_cost(
    state: State,
    goal: Sequence[tuple[int, Cell]],
    ctx: HeuristicContext,
) -> float:
    """Estimated number of actions to satisfy every (object, anchor) goal pair.

    Returns 0 exactly on goal states and infinity when no pushing
    decomposition exists within the context's recursion depth cap.
    """
    ctx.evals += 1
    cap = max(1, ctx.max_recursion_depth)
    depth_limit = 1
    while True:
        cost = _goal_cost(state, goal, ctx, depth_limit)
        if cost < INF or depth_limit >= cap:
            return cost
        depth_limit += 1


def _goal_cost(state, goal, ctx, depth_limit) -> float:
    total = 0
    for object_index, target in goal:
        cost = cost_to_reach_position(object_index, target, state, ctx, depth_limit)
        if cost == INF:
            return INF
        total += cost
    return total


def cost_to_reach_position(
    object_index: int,
    target: Cell,
    state: State,
    ctx: HeuristicContext,
    depth_limit: int | None = None,
) -> float:
    """Estimated actions to move one object to a target anchor (0 if there)."""
    if depth_limit is None:
        depth_limit = ctx.max_recursion_depth
    position = state[object_index]
    if position == target:
        return 0
    graph = ctx.graphs[object_index]
    if target not in graph.nodes:
        return INF
    spl = ctx.paths.shortest_path_length
    c_min = INF
    used = frozenset((object_index,))
    for p_next in graph.successors(position):
        d = spl(object_index, p_next, target)
        if d < c_min:
            c_min = d + pushing_cost(
                object_index, p_next, used, state, ctx, c_min - d, 1, depth_limit
            )
    return c_min


def pushing_cost(
    object_index: int,
    p_next: Cell,
    used: frozenset[int],
    state: State,
    ctx: HeuristicContext,
    cost_upper_bound: float,
    depth: int = 1,
    depth_limit: int | None = None,
) -> float:
    """Estimated actions for some unused object to push `object_index` to p_next.

    Returns cost_upper_bound unchanged when no candidate improves on it,
    including when the recursion depth cap is exceeded (at the top level the
    bound is infinite, so an exhausted recursion reads as infinity).
    """
    if depth_limit is None:
        depth_limit = ctx.max_recursion_depth
    if depth > depth_limit:
        return cost_upper_bound
    c_min = cost_upper_bound
    position = state[object_index]
    step = (p_next[0] - position[0], p_next[1] - position[1])
    pushee_shape = ctx.puzzle.shape(object_index)
    for pusher in range(len(state)):
        if pusher in used:
            continue
        pusher_graph = ctx.graphs[pusher]
        pusher_pos = state[pusher]
        offsets = pushing_offsets(pushee_shape, ctx.puzzle.shape(pusher), step)
        for pusher_next in pusher_graph.successors(pusher_pos):
            d_min = _min_pusher_distance(
                ctx, object_index, pusher, position, pusher_pos, pusher_next, step, offsets
            )
            if pusher == AGENT_INDEX:
                # Moving the agent to its next position costs one action.
                if d_min + 1 < c_min:
                    c_min = d_min + 1
            elif d_min < c_min:
                c_min = d_min + pushing_cost(
                    pusher,
                    pusher_next,
                    used | {pusher},
                    state,
                    ctx,
                    c_min - d_min,
                    depth + 1,
                    depth_limit,
                )
    return c_min


def _min_pusher_distance(
    ctx: HeuristicContext,
    pushee: int,
    pusher: int,
    pushee_pos: Cell,
    pusher_pos: Cell,
    pusher_next: Cell,
    step: Cell,
    offsets: frozenset[Cell],
) -> float:
    """Fewest pusher moves from `pusher_next` to completing one push, plus the
    push itself; 0 when the pusher is already in position and its considered
    next step is the push (a simultaneous push costs nothing extra)."""
    if (
        pusher_next[0] - pusher_pos[0] == step[0]
        and pusher_next[1] - pusher_pos[1] == step[1]
        and (pusher_pos[0] - pushee_pos[0], pusher_pos[1] - pushee_pos[1]) in offsets
    ):
        return 0
    key = (pusher, pushee, pushee_pos, pusher_next, step)
    cached = ctx.pair_cache.get(key)
    if cached is not None:
        return cached
    graph = ctx.graphs[pusher]
    nodes = graph.nodes
    spl = ctx.paths.shortest_path_length
    best = INF
    for ox, oy in sorted(offsets):
        start = (pushee_pos[0] + ox, pushee_pos[1] + oy)
        if start not in nodes:
            continue
        end = (start[0] + step[0], start[1] + step[1])
        if end not in nodes:
            continue
        d = spl(pusher, pusher_next, start) + 1
        if d < best:
            best = d
    ctx.pair_cache[key] = best
    return best
