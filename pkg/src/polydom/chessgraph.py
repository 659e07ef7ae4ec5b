"""Chess graphs of boards: claw-freeness and the min/max domination bound.

The chess graph has one vertex per board cell and an edge between two cells
when the piece attacks one from the other.  Chess graphs of a piece with m
attack directions are (m+1)-claw-free, which bounds how far the minimum
independent dominating set can sit below the maximum: (m-1)·min >= max.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .attack import Piece, build_attack_index, direction_count
from .board import Board, Cell
from .errors import TooLarge
from .solver import Budget, Objective, Problem, Status, solve_problem

_CLAW_VERTEX_CAP = 400


@dataclass(frozen=True)
class ChessGraph:
    """Undirected attack graph of a (board, piece) pair."""

    board: Board
    piece: Piece
    vertices: tuple[Cell, ...]
    edges: frozenset[frozenset[Cell]]

    @property
    def m(self) -> int:
        return direction_count(self.piece, self.board.dim)

    def neighbours(self, v: Cell) -> set[Cell]:
        return {next(iter(e - {v})) for e in self.edges if v in e}


def build_chess_graph(board: Board, piece: Piece) -> ChessGraph:
    index = build_attack_index(board, piece)
    edges = set()
    for i, att in index.attackers.items():
        for j in att:
            if j != i:
                edges.add(frozenset({index.cells[i - 1], index.cells[j - 1]}))
    return ChessGraph(
        board=board, piece=piece, vertices=board.cells, edges=frozenset(edges)
    )


def find_claw(graph: ChessGraph, size: int) -> Optional[tuple[Cell, tuple[Cell, ...]]]:
    """Search for an induced K_{1,size}: a centre vertex with `size` pairwise
    nonadjacent neighbours.  Returns (centre, leaves) or None; exhaustive, so
    capped at 400 vertices."""
    if size < 3:
        raise ValueError("claw size must be >= 3")
    if len(graph.vertices) > _CLAW_VERTEX_CAP:
        raise TooLarge(f"claw search capped at {_CLAW_VERTEX_CAP} vertices")
    adj: dict[Cell, set[Cell]] = {v: set() for v in graph.vertices}
    for e in graph.edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    for centre in graph.vertices:
        nbs = sorted(adj[centre])
        if len(nbs) < size:
            continue
        for leaves in combinations(nbs, size):
            if all(b not in adj[a] for a, b in combinations(leaves, 2)):
                return centre, leaves
    return None


@dataclass(frozen=True)
class MinMaxReport:
    """(claw_m - 1) * min >= max, where claw_m is the claw-freeness order.

    A piece with k attack directions yields a (k+1)-claw-free graph, so
    claw_m = k + 1 and the bound reads k * min >= max.
    """

    min_independent_dominating: int
    max_independent: int
    claw_m: int

    @property
    def directions(self) -> int:
        return self.claw_m - 1

    @property
    def holds(self) -> bool:
        return (self.claw_m - 1) * self.min_independent_dominating >= self.max_independent


def check_min_max_inequality(
    board: Board, piece: Piece, budget: Budget | None = None
) -> MinMaxReport:
    """Exactly solve both extremes and check (m-1)·min >= max."""
    mn = solve_problem(
        Problem(board, piece, Objective.MINIMIZE, independence=True, domination=True),
        budget,
        backend="auto",
    )
    mx = solve_problem(
        Problem(board, piece, Objective.MAXIMIZE, independence=True), budget, backend="auto"
    )
    if mn.status is not Status.OPTIMAL or mx.status is not Status.OPTIMAL:
        raise TooLarge("budget exhausted before both exact solves finished")
    return MinMaxReport(
        min_independent_dominating=mn.value,
        max_independent=mx.value,
        claw_m=direction_count(piece, board.dim) + 1,
    )


def greedy_independent_set(graph: ChessGraph) -> frozenset[Cell]:
    """Greedy maximal independent set, lowest-degree-first.

    A simple baseline with no approximation guarantee; maximality makes the
    result a dominating set.
    """
    adj: dict[Cell, set[Cell]] = {v: set() for v in graph.vertices}
    for e in graph.edges:
        a, b = tuple(e)
        adj[a].add(b)
        adj[b].add(a)
    chosen: set[Cell] = set()
    blocked: set[Cell] = set()
    for v in sorted(graph.vertices, key=lambda v: (len(adj[v]), v)):
        if v not in blocked:
            chosen.add(v)
            blocked.add(v)
            blocked.update(adj[v])
    return frozenset(chosen)


def export_edge_list(graph: ChessGraph) -> str:
    """Edge-list text: one 'i j' pair of 1-based cell indices per line."""
    index_of = {c: i + 1 for i, c in enumerate(graph.vertices)}
    pairs = sorted(
        tuple(sorted((index_of[a], index_of[b]))) for a, b in (tuple(e) for e in graph.edges)
    )
    return "\n".join(f"{i} {j}" for i, j in pairs) + ("\n" if pairs else "")
