"""Chess graph structure, claw-freeness, and min/max inequality tests."""

import pytest

from polydom.attack import Piece, attacked_set
from polydom.board import hyperboard, make_board
from polydom.chessgraph import (
    ChessGraph,
    build_chess_graph,
    check_min_max_inequality,
    export_edge_list,
    find_claw,
    greedy_independent_set,
)
from polydom.errors import TooLarge

from conftest import enumerate_polyominoes, random_board_corpus


def _as_chessgraph(nx_graph):
    """Wrap an abstract networkx graph so find_claw can run on it."""
    vertices = tuple((v, 0) for v in sorted(nx_graph.nodes))
    edges = frozenset(frozenset({(a, 0), (b, 0)}) for a, b in nx_graph.edges)
    return ChessGraph(
        board=make_board(2, [(0, 0)]), piece=Piece.ROOK, vertices=vertices, edges=edges
    )


class TestBuild:
    def test_rook_2x2_is_c4(self):
        g = build_chess_graph(hyperboard(2, 2), Piece.ROOK)
        assert len(g.vertices) == 4 and len(g.edges) == 4
        assert all(len(g.neighbours(v)) == 2 for v in g.vertices)

    def test_queen_2x2_is_k4(self):
        g = build_chess_graph(hyperboard(2, 2), Piece.QUEEN)
        assert len(g.edges) == 6

    def test_single_vertex(self):
        g = build_chess_graph(make_board(2, [(0, 0)]), Piece.QUEEN)
        assert len(g.vertices) == 1 and not g.edges

    def test_edges_match_attack_relation(self):
        for board in random_board_corpus(10, seed=61):
            for piece in (Piece.ROOK, Piece.QUEEN):
                g = build_chess_graph(board, piece)
                expect = set()
                for c in board.cells:
                    for d in attacked_set(board, piece, c):
                        expect.add(frozenset({c, d}))
                assert g.edges == frozenset(expect)


class TestFindClaw:
    def test_rook_bar_has_no_claw(self):
        g = build_chess_graph(make_board(2, [(x, 0) for x in range(5)]), Piece.ROOK)
        assert find_claw(g, 3) is None  # a clique has no induced claws

    def test_plus_shape_rook_3claw_free(self):
        plus = make_board(2, [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
        g = build_chess_graph(plus, Piece.ROOK)
        assert find_claw(g, 3) is None

    def test_finds_claw_when_present(self):
        # queen graph of a plus-shaped pentomino: the centre attacks the four
        # arms, pairwise non-adjacent only if the arms cannot see each other.
        # Rooks with m=2 are 3-claw-free, so build a synthetic graph instead.
        star = ChessGraph(
            board=make_board(2, [(0, 0)]),
            piece=Piece.ROOK,
            vertices=((0, 0), (1, 0), (2, 0), (3, 0)),
            edges=frozenset(
                frozenset(p)
                for p in [((0, 0), (1, 0)), ((0, 0), (2, 0)), ((0, 0), (3, 0))]
            ),
        )
        found = find_claw(star, 3)
        assert found is not None
        centre, leaves = found
        assert centre == (0, 0) and len(leaves) == 3

    def test_claw_freeness_on_small_polyominoes(self):
        for board in enumerate_polyominoes(6):
            assert find_claw(build_chess_graph(board, Piece.QUEEN), 5) is None
            assert find_claw(build_chess_graph(board, Piece.ROOK), 3) is None

    def test_rook_3d_claw_freeness(self):
        cells = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 1, 1)]
        g = build_chess_graph(make_board(3, cells), Piece.ROOK)
        assert find_claw(g, 4) is None  # m = 3 directions in 3D

    def test_claw_free_examples_are_not_chess_graphs(self):
        # C4 is 4-claw-free but is no tetromino's queen graph; C4 plus a
        # chord is claw-free but is no tetromino's rook graph.  So
        # claw-freeness does not characterize chess graphs.
        import networkx as nx

        c4 = nx.cycle_graph(4)
        assert find_claw(_as_chessgraph(c4), 4) is None
        c4_chord = nx.cycle_graph(4)
        c4_chord.add_edge(0, 2)
        assert find_claw(_as_chessgraph(c4_chord), 3) is None
        for board in enumerate_polyominoes(4):
            if len(board) != 4:
                continue
            for piece, target in ((Piece.QUEEN, c4), (Piece.ROOK, c4_chord)):
                g = build_chess_graph(board, piece)
                got = nx.Graph()
                got.add_nodes_from(g.vertices)
                got.add_edges_from(tuple(e) for e in g.edges)
                assert not nx.is_isomorphic(got, target)

    def test_vertex_cap(self):
        g = build_chess_graph(hyperboard(2, 21), Piece.ROOK)
        with pytest.raises(TooLarge):
            find_claw(g, 3)

    def test_size_validation(self):
        g = build_chess_graph(hyperboard(2, 2), Piece.ROOK)
        with pytest.raises(ValueError):
            find_claw(g, 2)


class TestMinMaxInequality:
    def test_8x8_queens(self):
        rep = check_min_max_inequality(hyperboard(2, 8), Piece.QUEEN)
        assert rep.min_independent_dominating == 5
        assert rep.max_independent == 8
        assert rep.directions == 4 and rep.claw_m == 5 and rep.holds

    def test_single_cell(self):
        rep = check_min_max_inequality(make_board(2, [(0, 0)]), Piece.QUEEN)
        assert rep.min_independent_dominating == rep.max_independent == 1
        assert rep.holds

    def test_random_boards(self):
        for board in random_board_corpus(30, max_cells=12, seed=71):
            for piece in (Piece.ROOK, Piece.QUEEN):
                assert check_min_max_inequality(board, piece).holds


class TestGreedyBaseline:
    def test_is_independent_and_dominating(self):
        from polydom.attack import Placement, verify

        for board in random_board_corpus(15, seed=81):
            for piece in (Piece.ROOK, Piece.QUEEN):
                g = build_chess_graph(board, piece)
                chosen = greedy_independent_set(g)
                rep = verify(board, piece, Placement(piece, chosen))
                assert rep.independent and rep.dominates


class TestExport:
    def test_edge_list_format(self):
        g = build_chess_graph(make_board(2, [(0, 0), (1, 0)]), Piece.ROOK)
        assert export_edge_list(g) == "1 2\n"

    def test_empty_edge_list(self):
        g = build_chess_graph(make_board(2, [(0, 0)]), Piece.ROOK)
        assert export_edge_list(g) == ""
