"""Greedy best-first search with pluggable priorities, plus a brute-force
breadth-first oracle used for ground truth and solvability certification.

Priorities are lexicographic (novelty, heuristic, FIFO).  States whose
heuristic is infinite are enqueued with a worst-possible key instead of
being pruned, so the search stays complete on finite state spaces even when
the depth-capped heuristic reports a spurious infinity.
"""
from __future__ import annotations

import math
import time
from collections import deque
from dataclasses import dataclass, field
from heapq import heappop, heappush

from .core import ACTIONS, Action, Puzzle, State, apply_action, is_goal
from .novelty import NoveltyArchive
from .rgd import HeuristicContext, rgd_cost

INF = math.inf

# Rough per-node bookkeeping estimate used to translate a memory limit into
# a node-count watermark (positions tuple + queue entry + parent link).
NODE_BYTES_ESTIMATE = 512

SOLVED = "solved"
EXHAUSTED = "exhausted"
TIME_LIMIT = "time_limit"
MEMORY_LIMIT = "memory_limit"

HEURISTICS = ("rgd", "novelty_rgd", "blind")


@dataclass
class SearchConfig:
    heuristic: str = "novelty_rgd"
    time_limit: float = 60.0
    memory_limit_mb: float = 4096.0
    max_recursion_depth: int | None = None
    log_expansions: bool = False

    def __post_init__(self) -> None:
        key = self.heuristic.replace("-", "_")
        if key not in HEURISTICS:
            raise ValueError(f"unknown heuristic {self.heuristic!r}")
        self.heuristic = key


@dataclass
class SearchStats:
    nodes_generated: int = 0
    nodes_expanded: int = 0
    peak_open: int = 0
    heuristic_evals: int = 0
    wall_time: float = 0.0


@dataclass
class PlanResult:
    status: str
    actions: tuple[Action, ...] = ()
    stats: SearchStats = field(default_factory=SearchStats)
    # (novelty, heuristic) keys in expansion order when logging is enabled.
    expansion_keys: list[tuple[float, float]] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def _extract_plan(came_from, state) -> tuple[Action, ...]:
    actions: list[Action] = []
    while True:
        prev = came_from[state]
        if prev is None:
            break
        state, action = prev
        actions.append(action)
    actions.reverse()
    return tuple(actions)


def gbf_search(puzzle: Puzzle, initial: State, config: SearchConfig | None = None) -> PlanResult:
    """Greedy best-first search; deterministic for fixed inputs and config."""
    if config is None:
        config = SearchConfig()
    start = time.monotonic()
    stats = SearchStats()
    result = PlanResult(status=EXHAUSTED, stats=stats)

    use_rgd = config.heuristic in ("rgd", "novelty_rgd")
    use_novelty = config.heuristic == "novelty_rgd"
    ctx = HeuristicContext(puzzle, config.max_recursion_depth) if use_rgd else None
    archive = NoveltyArchive() if use_novelty else None
    goal = puzzle.goal_items

    max_nodes = int(config.memory_limit_mb * 1024 * 1024 / NODE_BYTES_ESTIMATE)

    def priority(state: State) -> tuple[float, float]:
        w = archive.novelty(state) if archive is not None else 0
        if archive is not None:
            archive.record(state)
        h = rgd_cost(state, goal, ctx) if ctx is not None else 0
        if h == INF:
            return (INF, INF)
        return (w, h)

    seq = 0
    came_from: dict[State, tuple[State, Action] | None] = {initial: None}
    w0, h0 = priority(initial)
    open_heap: list[tuple[float, float, int, State]] = [(w0, h0, seq, initial)]
    closed: set[State] = set()
    stats.nodes_generated = 1
    stats.peak_open = 1

    while open_heap:
        if time.monotonic() - start > config.time_limit:
            result.status = TIME_LIMIT
            break
        if len(came_from) > max_nodes:
            result.status = MEMORY_LIMIT
            break
        w, h, _, state = heappop(open_heap)
        if state in closed:
            continue
        closed.add(state)
        stats.nodes_expanded += 1
        if config.log_expansions:
            result.expansion_keys.append((w, h))
        if is_goal(puzzle, state):
            result.status = SOLVED
            result.actions = _extract_plan(came_from, state)
            break
        for action in ACTIONS:
            successor = apply_action(puzzle, state, action)
            stats.nodes_generated += 1
            if successor in came_from:
                continue
            came_from[successor] = (state, action)
            seq += 1
            ws, hs = priority(successor)
            heappush(open_heap, (ws, hs, seq, successor))
        if len(open_heap) > stats.peak_open:
            stats.peak_open = len(open_heap)

    stats.heuristic_evals = ctx.evals if ctx is not None else 0
    stats.wall_time = time.monotonic() - start
    return result


def validate_plan(puzzle: Puzzle, initial: State, actions) -> bool:
    """Replay the actions and test the goal in the final state."""
    state = initial
    for action in actions:
        state = apply_action(puzzle, state, action)
    return is_goal(puzzle, state)


def optimal_plan_bfs(
    puzzle: Puzzle,
    initial: State,
    time_limit: float = 300.0,
    max_states: int | None = None,
) -> PlanResult:
    """Shortest plan by exhaustive breadth-first search over full states."""
    start = time.monotonic()
    stats = SearchStats()
    result = PlanResult(status=EXHAUSTED, stats=stats)
    came_from: dict[State, tuple[State, Action] | None] = {initial: None}
    queue: deque[State] = deque([initial])
    stats.nodes_generated = 1
    check_clock = 0

    while queue:
        check_clock += 1
        if check_clock % 512 == 0 and time.monotonic() - start > time_limit:
            result.status = TIME_LIMIT
            break
        if max_states is not None and len(came_from) > max_states:
            result.status = MEMORY_LIMIT
            break
        state = queue.popleft()
        stats.nodes_expanded += 1
        if is_goal(puzzle, state):
            result.status = SOLVED
            result.actions = _extract_plan(came_from, state)
            break
        for action in ACTIONS:
            successor = apply_action(puzzle, state, action)
            stats.nodes_generated += 1
            if successor in came_from:
                continue
            came_from[successor] = (state, action)
            queue.append(successor)
        if len(queue) > stats.peak_open:
            stats.peak_open = len(queue)

    stats.wall_time = time.monotonic() - start
    return result


def enumerate_reachable(
    puzzle: Puzzle, initial: State, max_states: int | None = None
) -> set[State]:
    """Every state reachable from `initial`; raises if max_states is exceeded."""
    seen = {initial}
    queue: deque[State] = deque([initial])
    while queue:
        state = queue.popleft()
        for action in ACTIONS:
            successor = apply_action(puzzle, state, action)
            if successor not in seen:
                seen.add(successor)
                if max_states is not None and len(seen) > max_states:
                    raise RuntimeError(f"reachable state space exceeds {max_states}")
                queue.append(successor)
    return seen
