"""Hypercube domination sequences with a resumable JSON cache.

Each sequence family fixes a problem variant and sweeps board size; every
(family, d, n) point is solved independently and cached as one JSON record,
so interrupted runs resume where they stopped.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional

from .attack import Piece
from .board import hyperboard
from .solver import Budget, Objective, Problem, Solution, Status, compile, solve


class Family(Enum):
    MAX_INDEP_QUEENS = "max-indep-queens"
    MIN_INDEP_QUEENS_SQUARE = "min-indep-queens-square"
    MIN_ATTACK_QUEENS_SQUARE = "min-attack-queens-square"
    MIN_ROOKS_SQUARE = "min-rooks-square"


def _problem_for(family: Family, d: int, n: int) -> Problem:
    board = hyperboard(d, n)
    if family is Family.MAX_INDEP_QUEENS:
        return Problem(board, Piece.QUEEN, Objective.MAXIMIZE, independence=True)
    if family is Family.MIN_INDEP_QUEENS_SQUARE:
        return Problem(board, Piece.QUEEN, Objective.MINIMIZE, independence=True, domination=True)
    if family is Family.MIN_ATTACK_QUEENS_SQUARE:
        return Problem(board, Piece.QUEEN, Objective.MINIMIZE, domination=True)
    return Problem(board, Piece.ROOK, Objective.MINIMIZE, domination=True)


@dataclass(frozen=True)
class SequenceSpec:
    family: Family
    d: int
    n_range: tuple[int, ...]
    budget: Budget | None = None

    def points(self) -> Iterable[tuple[int, int]]:
        for n in self.n_range:
            yield self.d, n


@dataclass
class SequencePoint:
    d: int
    n: int
    value: Optional[int]
    status: str
    nodes: int
    millis: int

    def to_json_obj(self, family: Family) -> dict:
        return {
            "family": family.value,
            "d": self.d,
            "n": self.n,
            "value": self.value,
            "status": self.status,
            "nodes": self.nodes,
            "millis": self.millis,
        }


def _cache_path(cache_dir: Path, family: Family, d: int, n: int) -> Path:
    return cache_dir / f"{family.value}-d{d}-n{n}.json"


def _write_atomic(path: Path, obj: dict) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="utf-8") as fh:
        json.dump(obj, fh)
    os.replace(tmp, path)


def run_sequence(
    spec: SequenceSpec, cache_dir: str | Path | None = None, backend: str = "auto"
) -> list[SequencePoint]:
    """Solve every point of the spec, reusing and extending the cache.

    Per-point budget exhaustion is recorded and the run continues.
    """
    cache = Path(cache_dir) if cache_dir is not None else None
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
    results = []
    for d, n in spec.points():
        if cache is not None:
            path = _cache_path(cache, spec.family, d, n)
            if path.exists():
                rec = json.loads(path.read_text())
                results.append(
                    SequencePoint(
                        d=d, n=n, value=rec["value"], status=rec["status"],
                        nodes=rec["nodes"], millis=rec["millis"],
                    )
                )
                continue
        solution = solve(compile(_problem_for(spec.family, d, n)), spec.budget, backend=backend)
        point = SequencePoint(
            d=d, n=n, value=solution.value, status=solution.status.value,
            nodes=solution.nodes, millis=solution.millis,
        )
        results.append(point)
        if cache is not None:
            _write_atomic(_cache_path(cache, spec.family, d, n), point.to_json_obj(spec.family))
    return results


def format_table(family: Family, points: list[SequencePoint]) -> str:
    lines = [f"family: {family.value}"]
    lines.append(f"{'d':>3} {'n':>3} {'value':>6} {'status':>16} {'millis':>8}")
    for p in points:
        value = "-" if p.value is None else str(p.value)
        lines.append(f"{p.d:>3} {p.n:>3} {value:>6} {p.status:>16} {p.millis:>8}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ConjectureReport:
    d: int
    value: Optional[int]
    expected: int
    status: str

    @property
    def matches(self) -> Optional[bool]:
        return None if self.value is None else self.value == self.expected


def check_conjecture_2d(
    d_range: Iterable[int], budget: Budget | None = None, cache_dir=None
) -> list[ConjectureReport]:
    """Compare max non-attacking queens on the 4^d board against 2^d."""
    reports = []
    for d in d_range:
        spec = SequenceSpec(Family.MAX_INDEP_QUEENS, d=d, n_range=(4,), budget=budget)
        (point,) = run_sequence(spec, cache_dir=cache_dir)
        reports.append(
            ConjectureReport(d=d, value=point.value, expected=2**d, status=point.status)
        )
    return reports
