"""Constraint compilation and exact-solver tests, cross-checked against the
exhaustive brute-force oracle."""

import json

import pytest

from polydom.attack import Piece, verify
from polydom.board import hyperboard, make_board
from polydom.errors import TooLarge
from polydom.solver import (
    Budget,
    Objective,
    Problem,
    Status,
    brute_force,
    compile,
    dump_lp,
    enumerate_optima,
    solve,
    solve_problem,
    _milp_available,
)

from conftest import enumerate_polyominoes, random_board_corpus

L_TROMINO = make_board(2, [(0, 0), (1, 0), (0, 1)])


def all_variants():
    yield Objective.MINIMIZE, False, True  # min attacking domination
    yield Objective.MINIMIZE, True, True  # min non-attacking domination
    yield Objective.MAXIMIZE, True, False  # max non-attacking
    yield Objective.MAXIMIZE, True, True  # max non-attacking + domination


class TestCompile:
    def test_bar_single_packing_constraint(self):
        b = make_board(2, [(0, 0), (1, 0), (2, 0)])
        sysm = compile(Problem(b, Piece.ROOK, Objective.MAXIMIZE, independence=True))
        assert sysm.packing == ((1, 2, 3),)
        assert sysm.covering == ()

    def test_single_cell_covering(self):
        b = make_board(2, [(0, 0)])
        sysm = compile(Problem(b, Piece.ROOK, Objective.MINIMIZE, domination=True))
        assert sysm.covering == ((1,),)
        assert sysm.packing == ()

    def test_8x8_queen_packing_count(self):
        # Independent count: 8 rows + 8 columns + 13 + 13 diagonals of
        # length >= 2 (each diagonal family has 15 diagonals, two of them
        # single-cell corners).
        sysm = compile(
            Problem(hyperboard(2, 8), Piece.QUEEN, Objective.MAXIMIZE, independence=True)
        )
        assert len(sysm.packing) == 42

    def test_covering_contains_own_cell(self):
        for board in random_board_corpus(10, seed=21):
            sysm = compile(Problem(board, Piece.QUEEN, Objective.MINIMIZE, domination=True))
            covered_cells = set()
            for row in sysm.covering:
                covered_cells.update(row)
            # every cell appears in at least one covering row
            assert covered_cells == set(range(1, sysm.var_count + 1))

    def test_needs_a_constraint_family(self):
        with pytest.raises(ValueError):
            Problem(L_TROMINO, Piece.ROOK, Objective.MINIMIZE)

    def test_deterministic(self):
        p = Problem(hyperboard(2, 5), Piece.QUEEN, Objective.MINIMIZE, True, True)
        assert compile(p) == compile(p)


class TestSolve:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_min_attacking_rooks_square(self, n):
        s = solve_problem(Problem(hyperboard(2, n), Piece.ROOK, Objective.MINIMIZE, domination=True))
        assert s.status is Status.OPTIMAL and s.value == n

    def test_max_queens_4x4(self):
        s = solve_problem(Problem(hyperboard(2, 4), Piece.QUEEN, Objective.MAXIMIZE, independence=True))
        assert s.value == 4

    def test_max_queens_3cube(self):
        s = solve_problem(Problem(hyperboard(3, 3), Piece.QUEEN, Objective.MAXIMIZE, independence=True))
        assert s.value == 4

    def test_witness_verifies(self):
        for board in random_board_corpus(20, seed=31):
            for objective, indep, dom in all_variants():
                s = solve_problem(Problem(board, Piece.QUEEN, objective, indep, dom))
                rep = verify(board, Piece.QUEEN, s.witness)
                if indep:
                    assert rep.independent
                if dom:
                    assert rep.dominates

    def test_max_witness_dominates(self):
        # A maximum non-attacking placement is maximal, hence dominating.
        for board in random_board_corpus(20, seed=32):
            for piece in (Piece.ROOK, Piece.QUEEN):
                s = solve_problem(Problem(board, piece, Objective.MAXIMIZE, independence=True))
                assert verify(board, piece, s.witness).dominates

    def test_determinism(self):
        p = Problem(hyperboard(2, 6), Piece.QUEEN, Objective.MINIMIZE, True, True)
        a = solve_problem(p)
        b = solve_problem(p)
        assert a.value == b.value and a.witness == b.witness

    def test_budget_exceeded_status(self):
        p = Problem(hyperboard(2, 8), Piece.QUEEN, Objective.MINIMIZE, domination=True)
        s = solve(compile(p), Budget(max_nodes=10))
        assert s.status is Status.BUDGET_EXCEEDED

    def test_infeasible_under_forcing(self):
        # Two forced mutually attacking rooks cannot be independent.
        b = make_board(2, [(0, 0), (1, 0), (2, 0)])
        sysm = compile(Problem(b, Piece.ROOK, Objective.MAXIMIZE, independence=True))
        s = solve(sysm, forced_true=[1, 2])
        assert s.status is Status.INFEASIBLE

    def test_monotone_extension(self):
        # Adding one cell never decreases max-independent and never
        # increases min-domination by more than 1.
        import random

        rng = random.Random(7)
        for board in random_board_corpus(15, seed=33):
            cells = set(board.cells)
            frontier = sorted(
                {
                    (x + dx, y + dy)
                    for x, y in cells
                    for dx, dy in [(1, 0), (-1, 0), (0, 1), (0, -1)]
                }
                - cells
            )
            bigger = make_board(2, list(cells) + [rng.choice(frontier)])
            for piece in (Piece.ROOK, Piece.QUEEN):
                mx0 = solve_problem(Problem(board, piece, Objective.MAXIMIZE, independence=True)).value
                mx1 = solve_problem(Problem(bigger, piece, Objective.MAXIMIZE, independence=True)).value
                assert mx1 >= mx0
                mn0 = solve_problem(Problem(board, piece, Objective.MINIMIZE, domination=True)).value
                mn1 = solve_problem(Problem(bigger, piece, Objective.MINIMIZE, domination=True)).value
                assert mn1 <= mn0 + 1


class TestEnumerate:
    def test_single_cell(self):
        b = make_board(2, [(0, 0)])
        sysm = compile(Problem(b, Piece.QUEEN, Objective.MAXIMIZE, independence=True))
        s = enumerate_optima(sysm)
        assert s.value == 1 and len(s.all_optima) == 1

    def test_matches_brute_force_optima(self):
        for board in random_board_corpus(25, max_cells=12, seed=41):
            for piece in (Piece.ROOK, Piece.QUEEN):
                for objective, indep, dom in all_variants():
                    problem = Problem(board, piece, objective, indep, dom)
                    fast = enumerate_optima(compile(problem))
                    slow = brute_force(problem)
                    assert fast.value == slow.value
                    assert {p.cells for p in fast.all_optima} == {
                        p.cells for p in slow.all_optima
                    }

    def test_deterministic_order(self):
        sysm = compile(Problem(hyperboard(2, 4), Piece.ROOK, Objective.MAXIMIZE, independence=True))
        a = enumerate_optima(sysm)
        b = enumerate_optima(sysm)
        assert [p.cells for p in a.all_optima] == [p.cells for p in b.all_optima]
        assert a.value == 4 and len(a.all_optima) == 24  # permutation matrices


class TestBruteForce:
    def test_min_independent_queens_3x3(self):
        s = brute_force(Problem(hyperboard(2, 3), Piece.QUEEN, Objective.MINIMIZE, True, True))
        assert s.value == 1
        assert s.all_optima[0].cells == frozenset({(1, 1)})

    def test_max_independent_rooks_l_tromino(self):
        s = brute_force(Problem(L_TROMINO, Piece.ROOK, Objective.MAXIMIZE, independence=True))
        assert s.value == 2

    def test_too_large(self):
        with pytest.raises(TooLarge):
            brute_force(Problem(hyperboard(2, 6), Piece.ROOK, Objective.MINIMIZE, domination=True))

    def test_small_polyomino_agreement(self, small_polyominoes):
        for board in small_polyominoes:
            for piece in (Piece.ROOK, Piece.QUEEN):
                for objective, indep, dom in all_variants():
                    problem = Problem(board, piece, objective, indep, dom)
                    assert solve_problem(problem).value == brute_force(problem).value


class TestOutputs:
    def test_lp_dump(self):
        b = make_board(2, [(0, 0), (1, 0)])
        sysm = compile(Problem(b, Piece.ROOK, Objective.MINIMIZE, True, True))
        text = dump_lp(sysm)
        assert "min: x1 + x2;" in text
        assert "x1 + x2 <= 1" in text
        assert "x1 + x2 >= 1" in text

    def test_solution_json(self):
        s = solve_problem(Problem(hyperboard(2, 3), Piece.ROOK, Objective.MINIMIZE, domination=True))
        obj = s.to_json_obj()
        assert set(obj) == {"status", "value", "witness", "optima_count", "nodes", "millis"}
        json.dumps(obj)  # serializable


@pytest.mark.skipif(not _milp_available(), reason="scipy MILP backend not installed")
class TestMilpBackend:
    def test_agrees_with_dfs(self):
        for board in random_board_corpus(10, max_cells=15, seed=51):
            for objective, indep, dom in all_variants():
                p = Problem(board, Piece.QUEEN, objective, indep, dom)
                sysm = compile(p)
                assert solve(sysm, backend="milp").value == solve(sysm, backend="dfs").value

    def test_enumerate_agrees(self):
        sysm = compile(Problem(hyperboard(2, 4), Piece.QUEEN, Objective.MAXIMIZE, independence=True))
        a = enumerate_optima(sysm, backend="milp")
        b = enumerate_optima(sysm, backend="dfs")
        assert a.value == b.value
        assert {p.cells for p in a.all_optima} == {p.cells for p in b.all_optima}

    def test_forced_vars(self):
        b = make_board(2, [(x, 0) for x in range(4)])
        sysm = compile(Problem(b, Piece.ROOK, Objective.MINIMIZE, domination=True))
        s = solve(sysm, backend="milp", forced_true=[1, 4])
        assert s.value == 2
