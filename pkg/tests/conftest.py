"""Shared test helpers: polyomino enumeration and corpus generation."""

from __future__ import annotations

import random

import pytest

from polydom.board import Board, make_board


def enumerate_polyominoes(max_cells: int) -> list[Board]:
    """All fixed (translation-canonical) polyominoes with 1..max_cells cells."""
    current = {((0, 0),)}
    out = [make_board(2, [(0, 0)])]
    for _ in range(max_cells - 1):
        grown = set()
        for shape in current:
            cells = set(shape)
            for x, y in cells:
                for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if nb in cells:
                        continue
                    new = cells | {nb}
                    mx = min(c[0] for c in new)
                    my = min(c[1] for c in new)
                    canon = tuple(sorted((c[0] - mx, c[1] - my) for c in new))
                    grown.add(canon)
        current = grown
        out.extend(make_board(2, list(shape)) for shape in sorted(current))
    return out


def random_board_corpus(count: int, min_cells: int = 5, max_cells: int = 20, seed: int = 2024):
    """Deterministic corpus of random connected polyominoes."""
    rng = random.Random(seed)
    boards = []
    for _ in range(count):
        tiles = rng.randint(min_cells, max_cells)
        cells = {(0, 0)}
        while len(cells) < tiles:
            x, y = rng.choice(sorted(cells))
            dx, dy = rng.choice([(1, 0), (-1, 0), (0, 1), (0, -1)])
            cells.add((x + dx, y + dy))
        boards.append(make_board(2, cells))
    return boards


@pytest.fixture(scope="session")
def small_polyominoes():
    return enumerate_polyominoes(5)
