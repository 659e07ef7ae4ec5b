"""CLI tests: verb plumbing, JSON contract, exit codes, and the
solve-then-verify round-trip."""

import json

import pytest

from polydom.board import make_board, read_board, write_board
from polydom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def board_file(tmp_path):
    path = tmp_path / "board.json"
    write_board(make_board(2, [(x, y) for x in range(4) for y in range(4)]), path)
    return str(path)


class TestSolveVerify:
    def test_solve_json(self, capsys, board_file):
        code, out, _ = run(
            capsys, "solve", "--board", board_file, "--piece", "queen",
            "--objective", "min", "--dominating", "--format", "json",
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["status"] == "Optimal"
        assert rec["value"] == 2  # 4x4 queens attacking domination
        assert len(rec["witness"]) == 2

    def test_solve_verify_round_trip(self, capsys, board_file, tmp_path):
        code, out, _ = run(
            capsys, "solve", "--board", board_file, "--piece", "rook",
            "--objective", "min", "--independent", "--dominating",
            "--format", "json",
        )
        assert code == 0
        witness = json.loads(out)["witness"]
        placement = tmp_path / "placement.json"
        placement.write_text(json.dumps({"piece": "rook", "cells": witness}))
        code, out, _ = run(
            capsys, "verify", "--board", board_file,
            "--placement", str(placement), "--format", "json",
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["dominates"] and rec["independent"]
        assert rec["count"] == len(witness)

    def test_verify_off_board_is_domain_error(self, capsys, board_file, tmp_path):
        placement = tmp_path / "placement.json"
        placement.write_text(json.dumps({"piece": "rook", "cells": [[99, 99]]}))
        code, _, err = run(
            capsys, "verify", "--board", board_file, "--placement", str(placement)
        )
        assert code == 1
        assert "error" in err

    def test_enumerate(self, capsys, tmp_path):
        path = tmp_path / "bar.json"
        write_board(make_board(2, [(0, 0), (1, 0), (2, 0)]), path)
        code, out, _ = run(
            capsys, "enumerate", "--board", str(path), "--piece", "rook",
            "--objective", "max", "--format", "json",
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["value"] == 1 and rec["optima_count"] == 3


class TestReduce:
    def test_reduce_writes_bundle(self, capsys, tmp_path):
        sat = tmp_path / "toy.cnf"
        sat.write_text("p cnf 2 3\n-1 -2 0\n-1 2 0\n1 -2 0\n")
        out_dir = tmp_path / "bundle"
        code, out, _ = run(
            capsys, "reduce", "--piece", "rook", "--sat", str(sat),
            "--out", str(out_dir), "--format", "json",
        )
        assert code == 0
        rec = json.loads(out)
        assert rec["target"] == 40 and rec["style"] == "two-side"
        board = read_board(out_dir / "board.json")
        assert len(board) == rec["cells"]
        layout = json.loads((out_dir / "layout.json").read_text())
        assert layout["target"] == 40
        assert len(layout["variables"]) == 2 and len(layout["clauses"]) == 3

    def test_unroutable_is_domain_error(self, capsys, tmp_path):
        sat = tmp_path / "bad.cnf"
        sat.write_text("p cnf 2 3\n1 2 0\n1 2 0\n1 2 0\n")
        code, _, err = run(capsys, "reduce", "--piece", "rook", "--sat", str(sat))
        assert code == 1
        assert "error" in err

    def test_parse_error_reports_line(self, capsys, tmp_path):
        sat = tmp_path / "garbled.cnf"
        sat.write_text("p cnf 2 3\n1 x 0\n")
        code, _, err = run(capsys, "reduce", "--piece", "rook", "--sat", str(sat))
        assert code == 1
        assert "line 2" in err


class TestOtherVerbs:
    def test_gadget_check(self, capsys):
        code, out, _ = run(capsys, "gadget-check", "--name", "rook-variable",
                           "--format", "json")
        assert code == 0
        rec = json.loads(out)
        assert rec["rook-variable"]["optimum"] == 6

    def test_seq_with_cache(self, capsys, tmp_path):
        args = ("seq", "--family", "min-rooks-square", "--sizes", "2,3",
                "--cache", str(tmp_path / "cache"), "--format", "json")
        code, out, _ = run(capsys, *args)
        assert code == 0
        values = [p["value"] for p in json.loads(out)["points"]]
        assert values == [2, 3]
        code, out2, _ = run(capsys, *args)  # cached second run
        assert code == 0 and json.loads(out2)["points"] == json.loads(out)["points"]

    def test_graph_check(self, capsys, board_file):
        code, out, _ = run(capsys, "graph-check", "--board", board_file,
                           "--piece", "queen", "--format", "json")
        assert code == 0
        rec = json.loads(out)
        assert rec["holds"] and rec["oversized_claw"] is None

    def test_random_board_seeded(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            code, _, _ = run(capsys, "random-board", "--tiles", "30",
                             "--seed", "11", "--out", str(path))
            assert code == 0
        assert read_board(a).cells == read_board(b).cells

    def test_usage_error_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--board", "x.json", "--piece", "bishop",
                  "--objective", "min"])
        assert exc.value.code == 2
