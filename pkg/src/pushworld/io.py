"""Reading and writing `.pwp` puzzle files.

Format (UTF-8, line based, `#` starts a comment):

    PUSHWORLD 1
    SIZE <width> <height>
    WALL x,y [x,y ...]
    AGENTWALL x,y [x,y ...]
    OBJECT <id> x,y [x,y ...]     # absolute occupied cells of the start placement
    GOAL <id> x,y                 # goal anchor of a declared object

Exactly one SIZE and exactly one OBJECT with id "A" (the agent) are required.
Anchors are recomputed from the listed cells, so cell order never matters.
"""
from __future__ import annotations

import os
from pathlib import Path

from .core import (
    AGENT_ID,
    Cell,
    Puzzle,
    Shape,
    State,
    anchored_cells,
    validate_puzzle,
)

HEADER = "PUSHWORLD 1"


class PuzzleError(ValueError):
    """Base error for puzzle file handling."""


class PuzzleFormatError(PuzzleError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PuzzleValidationError(PuzzleError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


def _parse_cell(token: str, line_no: int) -> Cell:
    parts = token.split(",")
    if len(parts) != 2:
        raise PuzzleFormatError(f"expected 'x,y', got {token!r}", line_no)
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise PuzzleFormatError(f"non-integer cell {token!r}", line_no) from None


def parse_puzzle(text: str, name: str = "") -> tuple[Puzzle, State]:
    """Parse a puzzle document and return the validated (puzzle, initial state)."""
    size: tuple[int, int] | None = None
    walls: set[Cell] = set()
    agent_walls: set[Cell] = set()
    object_cells: dict[str, list[Cell]] = {}
    object_order: list[str] = []
    goals: dict[str, Cell] = {}
    goal_order: list[str] = []
    saw_header = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not saw_header:
            if tokens != HEADER.split():
                raise PuzzleFormatError(f"expected header {HEADER!r}", line_no)
            saw_header = True
            continue
        directive, args = tokens[0], tokens[1:]
        if directive == "SIZE":
            if size is not None:
                raise PuzzleFormatError("duplicate SIZE", line_no)
            if len(args) != 2:
                raise PuzzleFormatError("SIZE needs width and height", line_no)
            try:
                size = (int(args[0]), int(args[1]))
            except ValueError:
                raise PuzzleFormatError("SIZE values must be integers", line_no) from None
        elif directive == "WALL":
            walls.update(_parse_cell(t, line_no) for t in args)
        elif directive == "AGENTWALL":
            agent_walls.update(_parse_cell(t, line_no) for t in args)
        elif directive == "OBJECT":
            if not args:
                raise PuzzleFormatError("OBJECT needs an id", line_no)
            oid = args[0]
            if oid in object_cells:
                raise PuzzleFormatError(f"duplicate OBJECT {oid!r}", line_no)
            if not args[1:]:
                raise PuzzleFormatError(f"OBJECT {oid!r} lists no cells", line_no)
            object_cells[oid] = [_parse_cell(t, line_no) for t in args[1:]]
            object_order.append(oid)
        elif directive == "GOAL":
            if len(args) != 2:
                raise PuzzleFormatError("GOAL needs an id and one anchor cell", line_no)
            oid = args[0]
            if oid not in object_cells:
                raise PuzzleFormatError(f"unknown object in GOAL: {oid!r}", line_no)
            if oid in goals:
                raise PuzzleFormatError(f"duplicate GOAL for {oid!r}", line_no)
            goals[oid] = _parse_cell(args[1], line_no)
            goal_order.append(oid)
        else:
            raise PuzzleFormatError(f"unknown directive {directive!r}", line_no)

    if not saw_header:
        raise PuzzleFormatError(f"missing header {HEADER!r}", None)
    if size is None:
        raise PuzzleFormatError("missing SIZE", None)
    if AGENT_ID not in object_cells:
        raise PuzzleFormatError(f"missing OBJECT {AGENT_ID!r}", None)

    ordered = [AGENT_ID] + [oid for oid in object_order if oid != AGENT_ID]
    objects: list[tuple[str, Shape]] = []
    positions: list[Cell] = []
    for oid in ordered:
        cells = object_cells[oid]
        if len(set(cells)) != len(cells):
            raise PuzzleFormatError(f"OBJECT {oid!r} repeats a cell", None)
        anchor, offsets = anchored_cells(cells)
        objects.append((oid, Shape(offsets)))
        positions.append(anchor)

    puzzle = Puzzle(
        width=size[0],
        height=size[1],
        walls=frozenset(walls),
        agent_walls=frozenset(agent_walls),
        objects=tuple(objects),
        goal=tuple((oid, goals[oid]) for oid in goal_order),
        name=name,
    )
    state = tuple(positions)
    violations = validate_puzzle(puzzle, state)
    if violations:
        raise PuzzleValidationError(violations)
    return puzzle, state


def _cells_sorted(cells) -> list[Cell]:
    return sorted(cells, key=lambda c: (c[1], c[0]))


def serialize_puzzle(puzzle: Puzzle, state: State) -> str:
    """Canonical text form; parsing it back reproduces (puzzle, state)."""
    lines = [HEADER, f"SIZE {puzzle.width} {puzzle.height}"]
    if puzzle.walls:
        lines.append("WALL " + " ".join(f"{x},{y}" for x, y in _cells_sorted(puzzle.walls)))
    if puzzle.agent_walls:
        lines.append(
            "AGENTWALL " + " ".join(f"{x},{y}" for x, y in _cells_sorted(puzzle.agent_walls))
        )
    for i, (oid, shape) in enumerate(puzzle.objects):
        cells = _cells_sorted(shape.translated(state[i]))
        lines.append(f"OBJECT {oid} " + " ".join(f"{x},{y}" for x, y in cells))
    for oid, (gx, gy) in puzzle.goal:
        lines.append(f"GOAL {oid} {gx},{gy}")
    return "\n".join(lines) + "\n"


def load_puzzle(path: str | os.PathLike) -> tuple[Puzzle, State]:
    """Read a `.pwp` file; the puzzle name is taken from the file stem."""
    p = Path(path)
    return parse_puzzle(p.read_text(encoding="utf-8"), name=p.stem)


def save_puzzle(path: str | os.PathLike, puzzle: Puzzle, state: State) -> None:
    Path(path).write_text(serialize_puzzle(puzzle, state), encoding="utf-8")
