"""Exact PushWorld mechanics: shapes, puzzles, states, and the push-chain transition.

A puzzle is a static world description (grid size, walls, object shapes, goal
anchors).  A state is the tuple of anchor positions of all movable objects,
index-aligned with ``Puzzle.objects``.  Coordinates are ``(x, y)`` with x
growing rightward and y growing downward; the grid boundary acts as a wall.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

Cell = tuple[int, int]
State = tuple[Cell, ...]

AGENT_ID = "A"
AGENT_INDEX = 0

# Member of a push set meaning "this push is blocked by a wall or the boundary".
WALL_SENTINEL = -1


class Action(Enum):
    """The four unit moves.  Values are (dx, dy) with +y pointing down."""

    LEFT = (-1, 0)
    RIGHT = (1, 0)
    UP = (0, -1)
    DOWN = (0, 1)

    @property
    def letter(self) -> str:
        return self.name[0]

    @classmethod
    def from_letter(cls, letter: str) -> "Action":
        for action in cls:
            if action.name[0] == letter.upper():
                return action
        raise ValueError(f"unknown action letter: {letter!r}")


# Canonical iteration order used everywhere tie-breaking matters.
ACTIONS = (Action.LEFT, Action.RIGHT, Action.UP, Action.DOWN)


def anchored_cells(cells: Iterable[Cell]) -> tuple[Cell, frozenset[Cell]]:
    """Split absolute cells into (anchor, relative offsets).

    The anchor is the row-major minimum occupied cell (smallest y, then
    smallest x), so offset (0, 0) is always occupied.
    """
    cell_list = list(cells)
    if not cell_list:
        raise ValueError("object must occupy at least one cell")
    ax, ay = min(cell_list, key=lambda c: (c[1], c[0]))
    return (ax, ay), frozenset((x - ax, y - ay) for x, y in cell_list)


@dataclass(frozen=True)
class Shape:
    """Occupied cells of an object, relative to its anchor."""

    cells: frozenset[Cell]

    @classmethod
    def from_cells(cls, cells: Iterable[Cell]) -> "Shape":
        """Build a shape from absolute or relative cells, renormalizing the anchor."""
        _, offsets = anchored_cells(cells)
        return cls(offsets)

    def translated(self, position: Cell) -> Iterator[Cell]:
        px, py = position
        for cx, cy in self.cells:
            yield (px + cx, py + cy)


def single_cell_shape() -> Shape:
    return Shape(frozenset({(0, 0)}))


@dataclass(frozen=True)
class Puzzle:
    """Immutable world description; safe to share across workers."""

    width: int
    height: int
    walls: frozenset[Cell]
    agent_walls: frozenset[Cell]
    objects: tuple[tuple[str, Shape], ...]
    goal: tuple[tuple[str, Cell], ...]
    name: str = ""

    def __post_init__(self) -> None:
        index_by_id = {oid: i for i, (oid, _) in enumerate(self.objects)}
        object.__setattr__(self, "_index_by_id", index_by_id)
        goal_items = tuple(
            sorted(
                ((index_by_id[oid], pos) for oid, pos in self.goal if oid in index_by_id),
            )
        )
        object.__setattr__(self, "_goal_items", goal_items)

    @property
    def goal_items(self) -> tuple[tuple[int, Cell], ...]:
        """Goal entries as (object index, goal anchor), index-ascending."""
        return self._goal_items  # type: ignore[attr-defined]

    def object_index(self, object_id: str) -> int:
        return self._index_by_id[object_id]  # type: ignore[attr-defined]

    def object_id(self, index: int) -> str:
        return self.objects[index][0]

    def shape(self, index: int) -> Shape:
        return self.objects[index][1]

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height


def cell_owners(puzzle: Puzzle, state: State) -> dict[Cell, int]:
    """Map every occupied cell to the index of the object occupying it."""
    owners: dict[Cell, int] = {}
    for i, (_, shape) in enumerate(puzzle.objects):
        px, py = state[i]
        for cx, cy in shape.cells:
            owners[(px + cx, py + cy)] = i
    return owners


def push_set(puzzle: Puzzle, state: State, action: Action) -> frozenset[int]:
    """Indices of all objects that move together for this action.

    Contains the agent plus every object reached by contact propagation in
    the movement direction, and WALL_SENTINEL if any member would overlap a
    wall or leave the grid (agent-only walls count only against the agent).
    """
    dx, dy = action.value
    owners = cell_owners(puzzle, state)
    walls = puzzle.walls
    agent_walls = puzzle.agent_walls
    width, height = puzzle.width, puzzle.height

    moved = {AGENT_INDEX}
    stack = [AGENT_INDEX]
    blocked = False
    while stack:
        i = stack.pop()
        px, py = state[i]
        for cx, cy in puzzle.objects[i][1].cells:
            nx, ny = px + cx + dx, py + cy + dy
            target = (nx, ny)
            j = owners.get(target)
            if j is not None and j not in moved:
                moved.add(j)
                stack.append(j)
            if target in walls or not (0 <= nx < width and 0 <= ny < height):
                blocked = True
            elif i == AGENT_INDEX and target in agent_walls:
                blocked = True
    if blocked:
        moved.add(WALL_SENTINEL)
    return frozenset(moved)


def apply_action(puzzle: Puzzle, state: State, action: Action) -> State:
    """Deterministic transition: translate the push set, or nothing if blocked.

    Equivalent to checking push_set for WALL_SENTINEL, but bails out as soon
    as a blocking wall is found (this is the hottest path in every search).
    """
    dx, dy = action.value
    owners: dict[Cell, int] = {}
    objects = puzzle.objects
    for i in range(len(objects)):
        px, py = state[i]
        for cx, cy in objects[i][1].cells:
            owners[(px + cx, py + cy)] = i
    walls = puzzle.walls
    agent_walls = puzzle.agent_walls
    width, height = puzzle.width, puzzle.height

    moved = {AGENT_INDEX}
    stack = [AGENT_INDEX]
    while stack:
        i = stack.pop()
        px, py = state[i]
        for cx, cy in objects[i][1].cells:
            nx, ny = px + cx + dx, py + cy + dy
            target = (nx, ny)
            if target in walls or not (0 <= nx < width and 0 <= ny < height):
                return state
            if i == AGENT_INDEX and target in agent_walls:
                return state
            j = owners.get(target)
            if j is not None and j not in moved:
                moved.add(j)
                stack.append(j)
    return tuple(
        (x + dx, y + dy) if i in moved else (x, y)
        for i, (x, y) in enumerate(state)
    )


def is_goal(puzzle: Puzzle, state: State) -> bool:
    """True iff every goal object sits exactly at its goal anchor."""
    return all(state[i] == pos for i, pos in puzzle.goal_items)


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _placement_cells(shape: Shape, position: Cell) -> set[Cell]:
    return set(shape.translated(position))


def state_violations(puzzle: Puzzle, state: State) -> list[Violation]:
    """Check the state invariants: bounds, wall overlap, pairwise overlap."""
    out: list[Violation] = []
    if len(state) != len(puzzle.objects):
        out.append(
            Violation(
                "state-size",
                f"state has {len(state)} positions for {len(puzzle.objects)} objects",
            )
        )
        return out
    seen: dict[Cell, int] = {}
    for i, (oid, shape) in enumerate(puzzle.objects):
        for cell in shape.translated(state[i]):
            if not puzzle.in_bounds(cell):
                out.append(Violation("out-of-bounds", f"object {oid} cell {cell}"))
            if cell in puzzle.walls:
                out.append(Violation("wall-overlap", f"object {oid} cell {cell}"))
            if i == AGENT_INDEX and cell in puzzle.agent_walls:
                out.append(Violation("agent-wall-overlap", f"agent cell {cell}"))
            other = seen.get(cell)
            if other is not None:
                out.append(
                    Violation(
                        "overlap",
                        f"objects {puzzle.object_id(other)} and {oid} share cell {cell}",
                    )
                )
            else:
                seen[cell] = i
    return out


def validate_puzzle(puzzle: Puzzle, initial: State) -> list[Violation]:
    """Check all puzzle and state invariants; an empty list means valid."""
    out: list[Violation] = []
    ids = [oid for oid, _ in puzzle.objects]
    if len(set(ids)) != len(ids):
        out.append(Violation("duplicate-id", f"object ids not unique: {ids}"))
    if not puzzle.objects or puzzle.objects[0][0] != AGENT_ID:
        out.append(Violation("agent-missing", "object index 0 must be the agent 'A'"))
    if puzzle.width < 1 or puzzle.height < 1:
        out.append(Violation("bad-size", f"{puzzle.width}x{puzzle.height}"))
    for oid, shape in puzzle.objects:
        if not shape.cells:
            out.append(Violation("empty-shape", f"object {oid} has no cells"))
        elif min(shape.cells, key=lambda c: (c[1], c[0])) != (0, 0):
            out.append(Violation("bad-anchor", f"object {oid} anchor offset is not (0,0)"))
    for cell in puzzle.walls | puzzle.agent_walls:
        if not puzzle.in_bounds(cell):
            out.append(Violation("out-of-bounds", f"wall cell {cell}"))
    if not puzzle.goal:
        out.append(Violation("empty-goal", "puzzle declares no goal"))
    goal_ids = [oid for oid, _ in puzzle.goal]
    if len(set(goal_ids)) != len(goal_ids):
        out.append(Violation("duplicate-goal", f"goal ids not unique: {goal_ids}"))
    for oid, pos in puzzle.goal:
        try:
            idx = puzzle.object_index(oid)
        except KeyError:
            out.append(Violation("unknown-goal-object", f"goal references {oid!r}"))
            continue
        cells = _placement_cells(puzzle.shape(idx), pos)
        if any(not puzzle.in_bounds(c) for c in cells):
            out.append(Violation("out-of-bounds", f"goal for {oid} at {pos}"))
        if any(c in puzzle.walls for c in cells):
            out.append(Violation("goal-in-wall", f"goal for {oid} at {pos}"))
    out.extend(state_violations(puzzle, initial))
    return out
