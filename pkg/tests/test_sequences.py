"""Sequence harness tests: caching, correctness on small points, conjecture
report plumbing."""

import json

from polydom.attack import Piece, Placement, verify
from polydom.board import hyperboard
from polydom.sequences import (
    ConjectureReport,
    Family,
    SequenceSpec,
    check_conjecture_2d,
    format_table,
    run_sequence,
)
from polydom.solver import Budget


class TestRunSequence:
    def test_max_indep_queens_2d_small(self):
        spec = SequenceSpec(Family.MAX_INDEP_QUEENS, d=2, n_range=tuple(range(1, 9)))
        values = [p.value for p in run_sequence(spec)]
        assert values == [1, 1, 2, 4, 5, 6, 7, 8]

    def test_min_rooks_square(self):
        spec = SequenceSpec(Family.MIN_ROOKS_SQUARE, d=2, n_range=(1, 2, 3, 4))
        assert [p.value for p in run_sequence(spec)] == [1, 2, 3, 4]

    def test_min_indep_at_least_min_attack(self):
        for n in range(1, 7):
            indep = run_sequence(
                SequenceSpec(Family.MIN_INDEP_QUEENS_SQUARE, d=2, n_range=(n,))
            )[0].value
            attack = run_sequence(
                SequenceSpec(Family.MIN_ATTACK_QUEENS_SQUARE, d=2, n_range=(n,))
            )[0].value
            assert indep >= attack

    def test_cache_roundtrip(self, tmp_path):
        spec = SequenceSpec(Family.MAX_INDEP_QUEENS, d=2, n_range=(1, 2, 3))
        first = run_sequence(spec, cache_dir=tmp_path)
        files = sorted(tmp_path.glob("*.json"))
        assert len(files) == 3
        second = run_sequence(spec, cache_dir=tmp_path)
        assert [p.value for p in first] == [p.value for p in second]
        rec = json.loads(files[0].read_text())
        assert set(rec) == {"family", "d", "n", "value", "status", "nodes", "millis"}

    def test_budget_exceeded_recorded_and_run_continues(self, tmp_path):
        spec = SequenceSpec(
            Family.MIN_ATTACK_QUEENS_SQUARE,
            d=2,
            n_range=(8, 1),
            budget=Budget(max_nodes=5),
        )
        points = run_sequence(spec, cache_dir=tmp_path, backend="dfs")
        assert points[0].status == "Budget-Exceeded"
        assert points[1].value == 1  # later point still ran

    def test_table_format(self):
        spec = SequenceSpec(Family.MAX_INDEP_QUEENS, d=2, n_range=(1, 2))
        text = format_table(spec.family, run_sequence(spec))
        assert "max-indep-queens" in text and "Optimal" in text


class TestConjecture:
    def test_d3_mismatch(self):
        (rep,) = check_conjecture_2d([3])
        assert rep.value == 7 and rep.expected == 8 and rep.matches is False

    def test_budget_exceeded_reports_none(self, tmp_path):
        (rep,) = check_conjecture_2d([4], budget=Budget(max_nodes=3))
        if rep.status == "Budget-Exceeded":
            assert rep.matches is None or rep.matches is True
