"""Polyominoes and d-polycubes: construction, validation, IO, generation.

A board is a finite set of unit-cube cells on the integer lattice whose
face-adjacency graph is connected.  Boards are canonicalized on construction
by translating the bounding box minimum to the origin, so two boards that
differ only by translation compare equal.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    Disconnected,
    DimMismatch,
    EmptyBoard,
    NotTwoDimensional,
    ParseError,
)

Cell = tuple[int, ...]


@dataclass(frozen=True)
class ConvexityClass:
    """Row/column convexity flags of a polyomino (2D boards only)."""

    row_convex: bool
    column_convex: bool

    @property
    def convex(self) -> bool:
        return self.row_convex and self.column_convex


@dataclass(frozen=True)
class Board:
    """An immutable, canonicalized d-polycube.

    Attributes:
        dim: lattice dimension d >= 2.
        cells: cells in sorted (lexicographic) order, translated so the
            componentwise minimum is the origin.
        bounds: per-axis (min, max) envelope; min is always 0 after
            canonicalization.
    """

    dim: int
    cells: tuple[Cell, ...]
    bounds: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        maxs = [max(c[a] for c in self.cells) for a in range(self.dim)]
        mins = [min(c[a] for c in self.cells) for a in range(self.dim)]
        object.__setattr__(self, "bounds", tuple(zip(mins, maxs)))

    @property
    def cell_set(self) -> frozenset[Cell]:
        return frozenset(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: Cell) -> bool:
        return tuple(cell) in self.cell_set

    def to_json_obj(self) -> dict:
        return {"dim": self.dim, "cells": [list(c) for c in self.cells]}


def _neighbours(cell: Cell) -> Iterable[Cell]:
    for axis in range(len(cell)):
        for delta in (-1, 1):
            yield cell[:axis] + (cell[axis] + delta,) + cell[axis + 1 :]


def _check_connected(cells: frozenset[Cell]) -> bool:
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        cur = stack.pop()
        for nb in _neighbours(cur):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def make_board(dim: int, cells: Iterable[Sequence[int]]) -> Board:
    """Build a canonical board from raw coordinate tuples.

    Cells are deduplicated, face-connectivity is validated, and coordinates
    are translated so the bounding-box minimum sits at the origin.
    """
    if dim < 2:
        raise DimMismatch(f"dimension must be >= 2, got {dim}")
    cell_tuples = [tuple(int(x) for x in c) for c in cells]
    if not cell_tuples:
        raise EmptyBoard("a board needs at least one cell")
    for c in cell_tuples:
        if len(c) != dim:
            raise DimMismatch(f"cell {c} has {len(c)} coordinates, expected {dim}")
    unique = frozenset(cell_tuples)
    if not _check_connected(unique):
        raise Disconnected("cells are not face-connected")
    mins = [min(c[a] for c in unique) for a in range(dim)]
    canonical = sorted(tuple(x - m for x, m in zip(c, mins)) for c in unique)
    return Board(dim=dim, cells=tuple(canonical))


def hyperboard(dim: int, side: int) -> Board:
    """The full n^d hypercube board with n = side."""
    if dim < 2:
        raise DimMismatch(f"dimension must be >= 2, got {dim}")
    if side < 1:
        raise EmptyBoard("side must be >= 1")

    def rec(prefix: tuple[int, ...]) -> Iterable[Cell]:
        if len(prefix) == dim:
            yield prefix
        else:
            for x in range(side):
                yield from rec(prefix + (x,))

    return Board(dim=dim, cells=tuple(sorted(rec(()))))


def classify_convexity(board: Board) -> ConvexityClass:
    """Row/column convexity of a polyomino.

    A row (fixed y) is convex when its cells form one contiguous run of x
    values; columns analogously.  Only defined for 2D boards.
    """
    if board.dim != 2:
        raise NotTwoDimensional(f"convexity is defined for dim 2, got dim {board.dim}")
    rows: dict[int, list[int]] = {}
    cols: dict[int, list[int]] = {}
    for x, y in board.cells:
        rows.setdefault(y, []).append(x)
        cols.setdefault(x, []).append(y)

    def contiguous(vals: list[int]) -> bool:
        vals = sorted(vals)
        return vals[-1] - vals[0] + 1 == len(vals)

    return ConvexityClass(
        row_convex=all(contiguous(v) for v in rows.values()),
        column_convex=all(contiguous(v) for v in cols.values()),
    )


def _perimeter(cells: set[Cell]) -> int:
    return sum(1 for c in cells for nb in _neighbours(c) if nb not in cells)


def _is_cut_cell(cells: set[Cell], cell: Cell) -> bool:
    if len(cells) == 1:
        return True
    rest = frozenset(cells - {cell})
    return not _check_connected(rest)


def random_polyomino(tiles: int, seed: int, percolation: float = 0.4) -> Board:
    """Generate a random connected polyomino with exactly `tiles` cells.

    Starts from a straight bar and runs a leaf-remove / re-attach shuffle:
    each step removes a random non-cut cell and re-attaches it at a random
    boundary position.  Re-attachments that increase the perimeter (rougher
    shapes) are accepted with probability `percolation`; shrinking or neutral
    moves are always accepted.  Deterministic for fixed inputs.
    """
    if tiles < 1:
        raise EmptyBoard("tiles must be >= 1")
    rng = random.Random((seed, tiles, round(percolation, 9)).__repr__())
    cells: set[Cell] = {(x, 0) for x in range(tiles)}
    if tiles == 1:
        return make_board(2, cells)
    steps = 8 * tiles
    for _ in range(steps):
        removable = [c for c in cells if not _is_cut_cell(cells, c)]
        if not removable:
            continue
        victim = rng.choice(removable)
        cells.remove(victim)
        boundary = sorted(
            {nb for c in cells for nb in _neighbours(c) if nb not in cells}
        )
        before = _perimeter(cells | {victim})
        target = rng.choice(boundary)
        cells.add(target)
        after = _perimeter(cells)
        if after > before and rng.random() > percolation:
            # Reject the roughening move; put the cell back where it was.
            cells.remove(target)
            cells.add(victim)
    return make_board(2, cells)


def parse_ascii(text: str) -> Board:
    """Parse the 2D ASCII format: '#' = cell, '.' = empty, rows top-down."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise EmptyBoard("empty ASCII board")
    height = len(lines)
    cells = []
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch == "#":
                cells.append((c, height - 1 - r))
            elif ch != ".":
                raise ParseError(f"unexpected character {ch!r}", line=r + 1, offset=c + 1)
    return make_board(2, cells)


def format_ascii(board: Board) -> str:
    """Render a 2D board in the ASCII format (inverse of parse_ascii)."""
    if board.dim != 2:
        raise NotTwoDimensional("ASCII format is 2D only")
    width = board.bounds[0][1] + 1
    height = board.bounds[1][1] + 1
    grid = [["." for _ in range(width)] for _ in range(height)]
    for x, y in board.cells:
        grid[height - 1 - y][x] = "#"
    return "\n".join("".join(row) for row in grid) + "\n"


def board_from_json_obj(obj: dict) -> Board:
    if not isinstance(obj, dict):
        raise ParseError("board JSON must be an object")
    unknown = set(obj) - {"dim", "cells"}
    if unknown:
        raise ParseError(f"unknown board fields: {sorted(unknown)}")
    if "dim" not in obj or "cells" not in obj:
        raise ParseError("board JSON needs 'dim' and 'cells'")
    dim = obj["dim"]
    if not isinstance(dim, int):
        raise ParseError("'dim' must be an integer")
    cells = obj["cells"]
    if not isinstance(cells, list) or not all(
        isinstance(c, list) and all(isinstance(x, int) for x in c) for c in cells
    ):
        raise ParseError("'cells' must be an array of integer arrays")
    return make_board(dim, cells)


def read_board(path) -> Board:
    """Read a board file; JSON when it parses as JSON, ASCII otherwise."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno)
        return board_from_json_obj(obj)
    return parse_ascii(text)


def write_board(board: Board, path) -> None:
    """Write a board as JSON (any dim) or ASCII when the path ends '.txt'."""
    with open(path, "w", encoding="utf-8") as fh:
        if str(path).endswith(".txt"):
            fh.write(format_ascii(board))
        else:
            json.dump(board.to_json_obj(), fh)
            fh.write("\n")
