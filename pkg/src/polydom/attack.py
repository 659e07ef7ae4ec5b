"""Attack semantics for rooks and queens on polycube boards.

A piece placed on a cell attacks along straight lattice rays; a ray stops at
the first step that leaves the board (cells behind a hole are not attacked).
Rooks move along the d axes; queens along every nonzero direction vector in
{-1,0,1}^d, giving (3^d - 1)/2 undirected directions.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product

from .board import Board, Cell
from .errors import OffBoardPiece


class Piece(Enum):
    ROOK = "rook"
    QUEEN = "queen"


def direction_count(piece: Piece, dim: int) -> int:
    """Number of undirected attack directions in dimension `dim`."""
    if piece is Piece.ROOK:
        return dim
    return (3**dim - 1) // 2


def directions(piece: Piece, dim: int) -> list[tuple[int, ...]]:
    """Undirected direction representatives, first nonzero component positive,
    in lexicographic order."""
    result = []
    if piece is Piece.ROOK:
        for axis in range(dim):
            v = [0] * dim
            v[axis] = 1
            result.append(tuple(v))
    else:
        for v in product((-1, 0, 1), repeat=dim):
            nonzero = [x for x in v if x != 0]
            if nonzero and nonzero[0] > 0:
                result.append(v)
    return sorted(result)


@dataclass(frozen=True)
class Placement:
    """A set of identical pieces on board cells."""

    piece: Piece
    cells: frozenset[Cell]


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of checking a placement for domination and independence."""

    dominates: bool
    independent: bool
    unguarded: tuple[Cell, ...]
    conflicts: tuple[tuple[Cell, Cell], ...]


class AttackIndex:
    """Precomputed attack lines and attacker sets for one (board, piece) pair.

    Cells are indexed 1..m in lexicographic order of canonical coordinates.
    `lines` holds one maximal line per (direction, run): the cells of a
    contiguous board run along that direction, each a mutual-attack clique.
    `attackers[i]` is cell i together with every cell attacking i.
    """

    def __init__(self, board: Board, piece: Piece):
        self.board = board
        self.piece = piece
        self.cells: tuple[Cell, ...] = board.cells  # already sorted
        self.index_of: dict[Cell, int] = {c: i + 1 for i, c in enumerate(self.cells)}
        self.directions = directions(piece, board.dim)
        cell_set = board.cell_set

        # Maximal lines: for each direction, walk each run once from its start.
        lines: list[tuple[int, ...]] = []
        line_ids_of_cell: dict[int, list[int]] = {i + 1: [] for i in range(len(self.cells))}
        for v in self.directions:
            for c in self.cells:
                prev = tuple(a - b for a, b in zip(c, v))
                if prev in cell_set:
                    continue  # not the start of a run
                run = []
                cur = c
                while cur in cell_set:
                    run.append(self.index_of[cur])
                    cur = tuple(a + b for a, b in zip(cur, v))
                line_id = len(lines)
                lines.append(tuple(run))
                for idx in run:
                    line_ids_of_cell[idx].append(line_id)
        self.lines = lines
        self.line_ids_of_cell = line_ids_of_cell

        # Attacker sets: union of the runs through each cell.
        self.attackers: dict[int, frozenset[int]] = {}
        for idx in line_ids_of_cell:
            members: set[int] = {idx}
            for lid in line_ids_of_cell[idx]:
                members.update(lines[lid])
            self.attackers[idx] = frozenset(members)

    def line_cells(self, line_id: int) -> tuple[Cell, ...]:
        return tuple(self.cells[i - 1] for i in self.lines[line_id])

    def attacked_cells(self, cell: Cell) -> frozenset[Cell]:
        if cell not in self.index_of:
            raise OffBoardPiece(f"cell {cell} is not on the board")
        idx = self.index_of[cell]
        return frozenset(self.cells[j - 1] for j in self.attackers[idx] if j != idx)


def build_attack_index(board: Board, piece: Piece) -> AttackIndex:
    return AttackIndex(board, piece)


def attacked_set(board: Board, piece: Piece, cell: Cell) -> frozenset[Cell]:
    """All cells attacked from `cell`, with rays truncated at the first
    off-board step."""
    cell = tuple(cell)
    if cell not in board.cell_set:
        raise OffBoardPiece(f"cell {cell} is not on the board")
    cell_set = board.cell_set
    result: set[Cell] = set()
    for v in directions(piece, board.dim):
        for sign in (1, -1):
            cur = cell
            while True:
                cur = tuple(a + sign * b for a, b in zip(cur, v))
                if cur not in cell_set:
                    break
                result.add(cur)
    return frozenset(result)


def verify(board: Board, piece: Piece, placement: Placement) -> VerifyReport:
    """Check a placement for domination and independence on a board."""
    placed = {tuple(c) for c in placement.cells}
    for c in placed:
        if c not in board.cell_set:
            raise OffBoardPiece(f"placed cell {c} is not on the board")
    index = build_attack_index(board, piece)
    covered: set[Cell] = set(placed)
    conflicts: list[tuple[Cell, Cell]] = []
    for c in sorted(placed):
        hit = index.attacked_cells(c)
        covered.update(hit)
        for other in sorted(hit & placed):
            if c < other:
                conflicts.append((c, other))
    unguarded = tuple(c for c in board.cells if c not in covered)
    return VerifyReport(
        dominates=not unguarded,
        independent=not conflicts,
        unguarded=unguarded,
        conflicts=tuple(conflicts),
    )
